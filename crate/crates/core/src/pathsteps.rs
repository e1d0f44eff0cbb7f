//! Distance shells around a target node.
//!
//! The distance between the target and another node of its tree is the
//! number of edges on the unique path between them, so direct neighbours are
//! at distance 1. Path step `k` holds every node at distance at most `k`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::forest::Forest;
use crate::mi::MiTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSteps {
    pub target: usize,
    /// `None` for nodes outside the target's tree; `Some(0)` for the target.
    pub distances: Vec<Option<usize>>,
    /// `steps[k - 1]` lists the nodes at distance `1..=k`, sorted by index.
    pub steps: Vec<Vec<usize>>,
}

impl PathSteps {
    pub fn max_distance(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn distance(&self, node: usize) -> Option<usize> {
        self.distances[node]
    }

    /// Nodes first reached at exactly distance `k`.
    pub fn shell(&self, k: usize) -> Vec<usize> {
        (0..self.distances.len())
            .filter(|&j| self.distances[j] == Some(k))
            .collect()
    }
}

pub fn path_steps(forest: &Forest, target: usize) -> PathSteps {
    assert!(target < forest.n_nodes(), "target {target} out of range");
    let mut distances = vec![None; forest.n_nodes()];
    distances[target] = Some(0);
    let mut queue = VecDeque::from([target]);
    let mut max = 0;
    while let Some(x) = queue.pop_front() {
        let d = distances[x].unwrap_or(0);
        for &y in forest.neighbors(x) {
            if distances[y].is_none() {
                distances[y] = Some(d + 1);
                max = max.max(d + 1);
                queue.push_back(y);
            }
        }
    }
    let steps = (1..=max)
        .map(|k| {
            (0..distances.len())
                .filter(|&j| matches!(distances[j], Some(d) if d >= 1 && d <= k))
                .collect()
        })
        .collect();
    PathSteps {
        target,
        distances,
        steps,
    }
}

/// Cumulative raw mutual information between the target and each path step.
pub fn mi_sum_profile(ps: &PathSteps, table: &MiTable) -> Vec<f64> {
    ps.steps
        .iter()
        .map(|step| {
            step.iter()
                .map(|&j| table.get(ps.target, j).i_value)
                .sum::<f64>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::KindTag;
    use crate::forest::Edge;
    use crate::mi::{MiEstimate, PenaltyStyle};

    fn forest(n: usize, edges: &[(usize, usize)]) -> Forest {
        Forest::from_edges(
            vec![KindTag::Continuous; n],
            edges.iter().map(|&(u, v)| Edge::new(u, v, 1.0, 1.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn example_tree() {
        // Y = 0; X1..X11 = 1..11; X12..X14 form a separate tree.
        let f = forest(
            15,
            &[
                (0, 1),
                (0, 2),
                (1, 9),
                (1, 4),
                (1, 11),
                (2, 5),
                (2, 3),
                (9, 7),
                (4, 6),
                (5, 10),
                (3, 8),
                (12, 13),
                (13, 14),
            ],
        );
        let ps = path_steps(&f, 0);
        assert_eq!(ps.max_distance(), 3);
        assert_eq!(ps.steps[0], vec![1, 2]);
        assert_eq!(ps.steps[1], vec![1, 2, 3, 4, 5, 9, 11]);
        assert_eq!(ps.steps[2], (1..=11).collect::<Vec<_>>());
        assert_eq!(ps.distance(12), None);
        assert_eq!(ps.shell(3), vec![6, 7, 8, 10]);
    }

    #[test]
    fn star_has_one_step() {
        let f = forest(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let ps = path_steps(&f, 0);
        assert_eq!(ps.steps, vec![vec![1, 2, 3, 4, 5]]);
    }

    #[test]
    fn isolated_target_has_no_steps() {
        let f = forest(3, &[(1, 2)]);
        assert!(path_steps(&f, 0).is_empty());
    }

    #[test]
    fn profile_is_cumulative() {
        // chain 0 - 1 - 2 - 3
        let f = forest(4, &[(0, 1), (1, 2), (2, 3)]);
        let ps = path_steps(&f, 0);
        let mis = [0.0, 1.5, 0.25, 2.0];
        let table = MiTable::from_fn(vec![KindTag::Continuous; 4], 10, |u, v| {
            let j = if u == 0 { v } else { 0 };
            MiEstimate::new(if u == 0 { mis[j] } else { 0.0 }, 1, 10, PenaltyStyle::Paper)
        });
        assert_eq!(mi_sum_profile(&ps, &table), vec![1.5, 1.75, 3.75]);
    }
}
