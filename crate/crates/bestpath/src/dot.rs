//! Graphviz rendering of a forest.

use bestpath_core::{Forest, KindTag};

pub const DISCRETE_FILL: &str = "yellow";
pub const CONTINUOUS_FILL: &str = "green";
pub const TARGET_FILL: &str = "red";

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected `graph` with one node statement per variable and one `--`
/// line per edge, labelled with the penalized weight.
pub fn export_dot(forest: &Forest, names: &[String], target: Option<usize>) -> String {
    assert_eq!(names.len(), forest.n_nodes(), "one name per node");
    let mut out = String::from("graph {\n  node [style=filled];\n");
    for (i, name) in names.iter().enumerate() {
        let fill = if Some(i) == target {
            TARGET_FILL
        } else if forest.kinds()[i] == KindTag::Discrete {
            DISCRETE_FILL
        } else {
            CONTINUOUS_FILL
        };
        out.push_str(&format!("  {} [fillcolor={fill}];\n", quote(name)));
    }
    for e in forest.edges() {
        out.push_str(&format!(
            "  {} -- {} [label=\"{:.2}\"];\n",
            quote(&names[e.u]),
            quote(&names[e.v]),
            e.weight
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bestpath_core::forest::Edge;

    #[test]
    fn single_node() {
        let f = Forest::from_edges(vec![KindTag::Continuous], vec![]).unwrap();
        assert_eq!(
            export_dot(&f, &["X".into()], None),
            "graph {\n  node [style=filled];\n  \"X\" [fillcolor=green];\n}\n"
        );
    }

    #[test]
    fn one_edge_and_colours() {
        let f = Forest::from_edges(
            vec![KindTag::Discrete, KindTag::Continuous, KindTag::Continuous],
            vec![Edge::new(0, 1, 2.5, 4.0)],
        )
        .unwrap();
        let dot = export_dot(&f, &["a".into(), "b\"q".into(), "c".into()], Some(2));
        assert_eq!(dot.matches(" -- ").count(), 1);
        assert!(dot.contains("\"a\" [fillcolor=yellow]"));
        assert!(dot.contains("\"b\\\"q\" [fillcolor=green]"));
        assert!(dot.contains("\"c\" [fillcolor=red]"));
        assert!(dot.contains("\"a\" -- \"b\\\"q\" [label=\"2.50\"]"));
    }
}
