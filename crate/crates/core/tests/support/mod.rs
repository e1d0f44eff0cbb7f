//! Independent reference implementations shared by the integration tests
//! and the acceptance suite.

#![allow(dead_code)]

use std::f64::consts::PI;

use bestpath_core::dataset::{Column, Dataset, KindTag};
use bestpath_core::forest::Edge;
use bestpath_core::linalg::Matrix;
use bestpath_core::mi::VarianceModel;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Box-Muller standard normal.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

pub fn codes(rng: &mut ChaCha8Rng, n: usize, levels: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..levels)).collect()
}

// ---------------------------------------------------------------------------
// Likelihood-ratio oracles. Each computes G = 2 (l1 - l0) from explicit
// maximized log-likelihoods.

fn counts(z: &[usize]) -> std::collections::BTreeMap<usize, f64> {
    let mut m = std::collections::BTreeMap::new();
    for &c in z {
        *m.entry(c).or_insert(0.0) += 1.0;
    }
    m
}

/// Multinomial log-likelihood of observed counts at their MLE.
fn multinomial_ll<I: IntoIterator<Item = f64>>(cells: I, n: f64) -> f64 {
    cells.into_iter().filter(|&c| c > 0.0).map(|c| c * (c / n).ln()).sum()
}

pub fn contingency_deviance(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let mut joint = std::collections::BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0.0) += 1.0;
    }
    let l1 = multinomial_ll(joint.values().copied(), n);
    let l0 = multinomial_ll(counts(a).values().copied(), n) + multinomial_ll(counts(b).values().copied(), n);
    2.0 * (l1 - l0)
}

/// Gaussian log-likelihood of residuals at the variance MLE.
fn gaussian_ll(resid: &[f64]) -> f64 {
    let n = resid.len() as f64;
    let var = resid.iter().map(|r| r * r).sum::<f64>() / n;
    if var == 0.0 {
        return f64::INFINITY;
    }
    resid
        .iter()
        .map(|r| -0.5 * (2.0 * PI * var).ln() - r * r / (2.0 * var))
        .sum()
}

fn centered(y: &[f64]) -> Vec<f64> {
    let m = y.iter().sum::<f64>() / y.len() as f64;
    y.iter().map(|v| v - m).collect()
}

/// Regression of `v` on `u` against the intercept-only model; the joint
/// bivariate normal deviance reduces to this conditional one.
pub fn gaussian_deviance(u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { u[i] });
    let y = DVector::from_column_slice(v);
    let beta = x.clone().svd(true, true).solve(&y, 1e-14).unwrap();
    let resid: Vec<f64> = (y - x * beta).iter().copied().collect();
    2.0 * (gaussian_ll(&resid) - gaussian_ll(&centered(v)))
}

/// One-way ANOVA deviance of `y` against the grouping `z`.
pub fn anova_deviance(z: &[usize], y: &[f64], model: VarianceModel) -> f64 {
    let groups: Vec<usize> = counts(z).keys().copied().collect();
    let mut by_group: Vec<Vec<f64>> = vec![Vec::new(); groups.len()];
    for (&g, &v) in z.iter().zip(y) {
        by_group[groups.iter().position(|&x| x == g).unwrap()].push(v);
    }
    let l0 = gaussian_ll(&centered(y));
    let l1 = match model {
        VarianceModel::Homogeneous => {
            let resid: Vec<f64> = by_group.iter().flat_map(|g| centered(g)).collect();
            gaussian_ll(&resid)
        }
        VarianceModel::Heterogeneous => by_group.iter().map(|g| gaussian_ll(&centered(g))).sum(),
    };
    2.0 * (l1 - l0)
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// Forest brute force.

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
}

pub fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut d = Dsu((0..n).collect());
    edges.iter().all(|&(u, v)| {
        let (a, b) = (d.find(u), d.find(v));
        d.0[a] = b;
        a != b
    })
}

pub fn path_between(n: usize, edges: &[(usize, usize)], a: usize, b: usize) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut prev = vec![usize::MAX; n];
    let mut stack = vec![a];
    prev[a] = a;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                stack.push(y);
            }
        }
    }
    if prev[b] == usize::MAX {
        return None;
    }
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(prev[*path.last().unwrap()]);
    }
    Some(path)
}

/// An acyclic edge set is forbidden-path free when every path between two
/// discrete vertices runs through discrete vertices only.
pub fn forbidden_path_free(kinds: &[KindTag], edges: &[(usize, usize)]) -> bool {
    let n = kinds.len();
    let discrete: Vec<usize> = (0..n).filter(|&i| kinds[i] == KindTag::Discrete).collect();
    for (i, &a) in discrete.iter().enumerate() {
        for &b in &discrete[i + 1..] {
            if let Some(p) = path_between(n, edges, a, b) {
                if p.iter().any(|&x| kinds[x] != KindTag::Discrete) {
                    return false;
                }
            }
        }
    }
    true
}

/// Within one tree, the discrete vertices avoid forbidden paths exactly when
/// they induce a connected subtree: `#dd-edges == #discrete - 1`.
fn components_ok(kinds: &[KindTag], edges: &[(usize, usize)]) -> bool {
    let n = kinds.len();
    let mut d = Dsu((0..n).collect());
    for &(u, v) in edges {
        let (a, b) = (d.find(u), d.find(v));
        d.0[a] = b;
    }
    let mut discrete = vec![0usize; n];
    let mut dd_edges = vec![0usize; n];
    for v in 0..n {
        if kinds[v] == KindTag::Discrete {
            discrete[d.find(v)] += 1;
        }
    }
    for &(u, v) in edges {
        if kinds[u] == KindTag::Discrete && kinds[v] == KindTag::Discrete {
            dd_edges[d.find(u)] += 1;
        }
    }
    (0..n).all(|r| discrete[r] == 0 || dd_edges[r] + 1 == discrete[r])
}

/// Maximum total weight over every acyclic, forbidden-path-free subset of
/// the candidates. Enumerates include/exclude choices edge by edge and
/// abandons a branch as soon as it closes a cycle.
pub fn brute_force_forest_weight(kinds: &[KindTag], candidates: &[Edge]) -> f64 {
    fn go(i: usize, kinds: &[KindTag], cand: &[Edge], chosen: &mut Vec<(usize, usize)>, w: f64, best: &mut f64) {
        if i == cand.len() {
            if w > *best && components_ok(kinds, chosen) {
                debug_assert!(forbidden_path_free(kinds, chosen));
                *best = w;
            }
            return;
        }
        go(i + 1, kinds, cand, chosen, w, best);
        chosen.push((cand[i].u, cand[i].v));
        if is_acyclic(kinds.len(), chosen) {
            go(i + 1, kinds, cand, chosen, w + cand[i].weight, best);
        }
        chosen.pop();
    }
    let mut best = 0.0;
    go(0, kinds, candidates, &mut Vec::new(), 0.0, &mut best);
    best
}

// ---------------------------------------------------------------------------
// Least squares through the SVD pseudo-inverse.

pub fn to_nalgebra(x: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)])
}

pub fn pinv_solve(x: &Matrix, y: &[f64]) -> Vec<f64> {
    let xm = to_nalgebra(x);
    let pinv = xm.pseudo_inverse(1e-12).unwrap();
    (pinv * DVector::from_column_slice(y)).iter().copied().collect()
}

// ---------------------------------------------------------------------------
// Random data.

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Matrix {
    Matrix::from_columns(&(0..p).map(|_| normals(rng, n)).collect::<Vec<_>>())
}

/// Random labelled tree on `n` nodes: node `i > 0` attaches to a uniformly
/// chosen earlier node, then labels are shuffled.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let mut labels: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    (1..n)
        .map(|i| (labels[rng.gen_range(0..i)], labels[i]))
        .collect()
}

/// Tree-structured Gaussian chain: `x1 -> x2 -> ... -> xp`, the target
/// depends on `x1` and `x2`, and a discrete noise variable hangs off the
/// end.
pub fn synthetic_tree_dataset(rng: &mut ChaCha8Rng, n: usize, p: usize, noise: f64) -> Dataset {
    let mut names = vec!["y".to_string()];
    let mut cols = Vec::new();
    let mut xs: Vec<Vec<f64>> = Vec::new();
    for j in 0..p {
        let x: Vec<f64> = match j {
            0 => normals(rng, n),
            _ => xs[j - 1].iter().map(|v| 0.6 * v + 0.8 * normal(rng)).collect(),
        };
        xs.push(x);
    }
    let y: Vec<f64> = (0..n)
        .map(|i| 3.0 * xs[0][i] - 2.0 * xs[1][i] + noise * normal(rng))
        .collect();
    cols.push(Column::Continuous(y));
    for (j, x) in xs.into_iter().enumerate() {
        names.push(format!("x{}", j + 1));
        cols.push(Column::Continuous(x));
    }
    names.push("g".into());
    let labels: Vec<String> = codes(rng, n, 3).iter().map(|c| format!("l{c}")).collect();
    cols.push(Column::discrete_from_labels(&labels));
    Dataset::new(names, cols).unwrap()
}

/// Random kinds plus a table of random estimates; about half of the BIC
/// weights come out positive.
pub fn random_mi_table(rng: &mut ChaCha8Rng, p: usize) -> bestpath_core::MiTable {
    use bestpath_core::mi::{MiEstimate, PenaltyStyle};
    let kinds: Vec<KindTag> = (0..p)
        .map(|_| if rng.gen_bool(0.5) { KindTag::Discrete } else { KindTag::Continuous })
        .collect();
    let mut draw = |_, _| MiEstimate::new(rng.gen_range(0.0..8.0), rng.gen_range(1..=3), 50, PenaltyStyle::Paper);
    bestpath_core::MiTable::from_fn(kinds, 50, &mut draw)
}

/// Largest violation of the LASSO optimality conditions on the
/// standardized scale: `z_j' r / n = lambda * sign(b_j)` for active `j`,
/// `|z_j' r / n| <= lambda` otherwise.
pub fn kkt_violation(prob: &bestpath_core::lasso::Standardized, beta: &[f64], lambda: f64) -> f64 {
    let n = prob.yc.len() as f64;
    let mut resid = prob.yc.clone();
    for (z, b) in prob.z.iter().zip(beta) {
        for (r, v) in resid.iter_mut().zip(z) {
            *r -= v * b;
        }
    }
    prob.z
        .iter()
        .zip(beta)
        .map(|(z, &b)| {
            let g: f64 = z.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() / n;
            if b != 0.0 {
                (g - lambda * b.signum()).abs()
            } else {
                (g.abs() - lambda).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

/// Random regression problem with a sparse truth and mildly correlated
/// columns.
pub fn random_lasso_problem(rng: &mut ChaCha8Rng) -> (Matrix, Vec<f64>) {
    let n = rng.gen_range(20..80);
    let p = rng.gen_range(2..15);
    let shared = normals(rng, n);
    let cols: Vec<Vec<f64>> = (0..p)
        .map(|_| {
            let scale = rng.gen_range(0.1..10.0);
            let rho = rng.gen_range(0.0..0.6);
            shared.iter().map(|s| scale * (rho * s + normal(rng))).collect()
        })
        .collect();
    let beta: Vec<f64> = (0..p)
        .map(|_| if rng.gen_bool(0.4) { rng.gen_range(-3.0..3.0) } else { 0.0 })
        .collect();
    let y = (0..n)
        .map(|i| 1.5 + cols.iter().zip(&beta).map(|(c, b)| c[i] * b).sum::<f64>() + normal(rng))
        .collect();
    (Matrix::from_columns(&cols), y)
}
