//! L1-penalized least squares by cyclic coordinate descent.
//!
//! Columns are standardized to mean 0 and unit population variance and the
//! response is centred, so the problem solved is
//!
//! ```text
//! minimize  (1 / 2n) |yc - Z b|^2 + lambda |b|_1
//! ```
//!
//! whose coordinate update is the soft-threshold `b_j = S(z_j^T r_j / n, lambda)`
//! with `r_j` the partial residual, evaluated through the Gram matrix. Coefficients are mapped back to the
//! original scale and the intercept recovered afterwards. A whole grid of
//! `lambda` values is solved in decreasing order, each fit warm-started from
//! the previous one.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::{exp, fabs, log, sqrt};

use crate::crossval::{complement, kfold_partition};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::linmodel::design_matrix;

pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_GRID_SIZE: usize = 100;
pub const DEFAULT_MIN_RATIO: f64 = 1e-4;

/// Standardized copy of a regression problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    /// Standardized columns; a zero-variance column is left all zero.
    pub z: Vec<Vec<f64>>,
    pub yc: Vec<f64>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub y_mean: f64,
}

impl Standardized {
    pub fn new(x: &Matrix, y: &[f64]) -> Standardized {
        let n = x.rows() as f64;
        let mut z = Vec::with_capacity(x.cols());
        let mut means = Vec::with_capacity(x.cols());
        let mut sds = Vec::with_capacity(x.cols());
        for j in 0..x.cols() {
            let col = x.column(j);
            let m = col.iter().sum::<f64>() / n;
            let sd = sqrt(col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n);
            z.push(if sd > 0.0 {
                col.iter().map(|v| (v - m) / sd).collect()
            } else {
                vec![0.0; col.len()]
            });
            means.push(m);
            sds.push(sd);
        }
        let y_mean = y.iter().sum::<f64>() / n;
        Standardized {
            z,
            yc: y.iter().map(|v| v - y_mean).collect(),
            means,
            sds,
            y_mean,
        }
    }

    pub fn n_obs(&self) -> usize {
        self.yc.len()
    }

    /// Smallest `lambda` at which every coefficient is zero.
    pub fn lambda_max(&self) -> f64 {
        let n = self.n_obs() as f64;
        self.z
            .iter()
            .map(|c| fabs(dot(c, &self.yc)) / n)
            .fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// Sweeps with an unchanged sign pattern before trying an exact solve on it.
const FACE_SOLVE_EVERY: usize = 5;

fn sign_pattern(beta: &[f64]) -> Vec<i8> {
    beta.iter()
        .map(|&b| if b > 0.0 { 1 } else if b < 0.0 { -1 } else { 0 })
        .collect()
}

/// Minimizer of the objective restricted to the orthant face given by
/// `signs`, i.e. `G_AA b = c_A - lambda s_A`. Returned with its gradient only
/// when it satisfies the optimality conditions for the full problem.
fn face_solve(gram: &[Vec<f64>], c: &[f64], signs: &[i8], lambda: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let active: Vec<usize> = (0..signs.len()).filter(|&j| signs[j] != 0).collect();
    let m = active.len();
    if m == 0 {
        return None;
    }
    // Cholesky factor, lower triangle, row-major.
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..=i {
            let mut v = gram[active[i]][active[k]];
            for t in 0..k {
                v -= l[i * m + t] * l[k * m + t];
            }
            if i == k {
                if v <= 1e-12 * gram[active[i]][active[i]] {
                    return None;
                }
                l[i * m + i] = sqrt(v);
            } else {
                l[i * m + k] = v / l[k * m + k];
            }
        }
    }
    let mut x: Vec<f64> = active
        .iter()
        .map(|&j| c[j] - lambda * f64::from(signs[j]))
        .collect();
    for i in 0..m {
        for t in 0..i {
            x[i] -= l[i * m + t] * x[t];
        }
        x[i] /= l[i * m + i];
    }
    for i in (0..m).rev() {
        for t in i + 1..m {
            x[i] -= l[t * m + i] * x[t];
        }
        x[i] /= l[i * m + i];
    }
    let mut beta = vec![0.0; signs.len()];
    for (&j, &v) in active.iter().zip(&x) {
        if v * f64::from(signs[j]) <= 0.0 {
            return None;
        }
        beta[j] = v;
    }
    let g: Vec<f64> = (0..signs.len()).map(|j| c[j] - dot(&gram[j], &beta)).collect();
    let slack = lambda * (1.0 + 1e-9);
    if (0..signs.len()).any(|j| signs[j] == 0 && gram[j][j] > 0.0 && fabs(g[j]) > slack) {
        return None;
    }
    Some((beta, g))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    pub lambda: f64,
    /// Original-scale slopes, one per column of `X`.
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    /// Indices of nonzero coefficients.
    pub active_set: Vec<usize>,
    /// Coefficients on the standardized scale.
    pub standardized: Vec<f64>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
    /// Objective value after each sweep.
    pub objective_trace: Vec<f64>,
}

impl LassoFit {
    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        x.mul_vec(&self.coefficients)
            .into_iter()
            .map(|v| v + self.intercept)
            .collect()
    }
}

/// Log-spaced decreasing grid from `lambda_max` down to
/// `lambda_max * min_ratio`.
pub fn lambda_grid(lambda_max: f64, size: usize, min_ratio: f64) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![lambda_max],
        _ => {
            let (hi, lo) = (log(lambda_max), log(lambda_max * min_ratio));
            (0..size)
                .map(|i| exp(hi + (lo - hi) * i as f64 / (size - 1) as f64))
                .collect()
        }
    }
}

/// Solves the grid in order, warm-starting each fit from the previous one.
///
/// Updates run on the Gram matrix `G = Z^T Z / n`: the gradient
/// `g = Z^T r / n` is kept current in O(p) per coordinate move and recomputed
/// from scratch at the start of every `lambda`.
pub fn lasso_path_standardized(
    prob: &Standardized,
    grid: &[f64],
    tol: f64,
    max_iter: usize,
) -> Vec<LassoFit> {
    let p = prob.z.len();
    let n = prob.n_obs() as f64;
    let mut gram = vec![vec![0.0; p]; p];
    for j in 0..p {
        for k in j..p {
            let v = dot(&prob.z[j], &prob.z[k]) / n;
            gram[j][k] = v;
            gram[k][j] = v;
        }
    }
    let c: Vec<f64> = prob.z.iter().map(|z| dot(z, &prob.yc) / n).collect();
    let yy = dot(&prob.yc, &prob.yc) / n;
    let mut beta = vec![0.0; p];
    let mut g = vec![0.0; p];
    let mut out = Vec::with_capacity(grid.len());
    for &lambda in grid {
        // rss / n = yy - c'b - g'b, because G b = c - g.
        let objective = |b: &[f64], g: &[f64]| {
            (yy - dot(&c, b) - dot(g, b)) / 2.0 + lambda * b.iter().map(|v| fabs(*v)).sum::<f64>()
        };
        for j in 0..p {
            g[j] = c[j] - dot(&gram[j], &beta);
        }
        let mut trace = Vec::new();
        let mut converged = false;
        let mut sweeps = 0;
        let mut last_pattern: Vec<i8> = Vec::new();
        let mut stable = 0usize;
        while sweeps < max_iter {
            sweeps += 1;
            let mut max_change: f64 = 0.0;
            for j in 0..p {
                let gjj = gram[j][j];
                if gjj == 0.0 {
                    continue;
                }
                let old = beta[j];
                let new = soft_threshold(g[j] + gjj * old, lambda) / gjj;
                if new != old {
                    let delta = new - old;
                    for (gk, row) in g.iter_mut().zip(&gram) {
                        *gk -= row[j] * delta;
                    }
                    beta[j] = new;
                    max_change = max_change.max(fabs(delta));
                }
            }
            trace.push(objective(&beta, &g));
            if max_change < tol {
                converged = true;
                break;
            }
            let pattern = sign_pattern(&beta);
            if pattern == last_pattern {
                stable += 1;
            } else {
                stable = 0;
                last_pattern = pattern;
            }
            if stable > 0 && stable.is_multiple_of(FACE_SOLVE_EVERY) {
                if let Some((b, gb)) = face_solve(&gram, &c, &last_pattern, lambda) {
                    if objective(&b, &gb) <= objective(&beta, &g) {
                        beta = b;
                        g = gb;
                    }
                }
            }
        }
        let coefficients: Vec<f64> = beta
            .iter()
            .zip(&prob.sds)
            .map(|(b, sd)| if *sd > 0.0 { b / sd } else { 0.0 })
            .collect();
        let intercept = prob.y_mean - dot(&coefficients, &prob.means);
        out.push(LassoFit {
            lambda,
            active_set: (0..p).filter(|&j| beta[j] != 0.0).collect(),
            coefficients,
            intercept,
            standardized: beta.clone(),
            means: prob.means.clone(),
            sds: prob.sds.clone(),
            converged,
            sweeps,
            objective_trace: trace,
        });
    }
    out
}

/// `x` holds the regressors only, without an intercept column.
pub fn lasso_path(x: &Matrix, y: &[f64], grid: &[f64], tol: f64, max_iter: usize) -> Vec<LassoFit> {
    lasso_path_standardized(&Standardized::new(x, y), grid, tol, max_iter)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LassoCvFit {
    /// Fit on all rows at the selected `lambda`.
    pub fit: LassoFit,
    /// Design column names (dummy-coded), aligned with `fit.coefficients`.
    pub column_names: Vec<String>,
    pub grid: Vec<f64>,
    /// Pooled out-of-fold mean squared error per grid point.
    pub cv_errors: Vec<f64>,
    pub selected: usize,
}

impl LassoCvFit {
    pub fn active_names(&self) -> Vec<String> {
        self.fit
            .active_set
            .iter()
            .map(|&j| self.column_names[j].clone())
            .collect()
    }
}

/// Regressor matrix (intercept dropped) and response for a dataset.
pub fn regressor_matrix<S: AsRef<str>>(ds: &Dataset, response: &str, regressors: &[S]) -> Result<(Matrix, Vec<f64>, Vec<String>)> {
    let d = design_matrix(ds, response, regressors)?;
    let cols: Vec<usize> = (1..d.x.cols()).collect();
    Ok((d.x.select_cols(&cols), d.y, d.column_names[1..].to_vec()))
}

/// Chooses `lambda` on a log grid by k-fold cross-validation and refits on
/// all rows.
pub fn lasso_cv_matrix(
    x: &Matrix,
    y: &[f64],
    folds: usize,
    seed: u64,
    grid_size: usize,
) -> Result<(LassoFit, Vec<f64>, Vec<f64>, usize)> {
    if grid_size == 0 {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    let n = x.rows();
    let full = Standardized::new(x, y);
    let lmax = full.lambda_max();
    let grid = if lmax > 0.0 {
        lambda_grid(lmax, grid_size, DEFAULT_MIN_RATIO)
    } else {
        vec![0.0]
    };
    let partition = kfold_partition(n, folds, seed)?;
    let mut sse = vec![0.0; grid.len()];
    for fold in &partition {
        let train = complement(n, fold);
        let xt = x.select_rows(&train);
        let yt: Vec<f64> = train.iter().map(|&r| y[r]).collect();
        let xv = x.select_rows(fold);
        let path = lasso_path(&xt, &yt, &grid, DEFAULT_TOL, DEFAULT_MAX_ITER);
        for (acc, fit) in sse.iter_mut().zip(&path) {
            *acc += fit
                .predict(&xv)
                .iter()
                .zip(fold)
                .map(|(p, &r)| (y[r] - p) * (y[r] - p))
                .sum::<f64>();
        }
    }
    let cv_errors: Vec<f64> = sse.iter().map(|s| s / n as f64).collect();
    let mut selected = 0;
    for (i, e) in cv_errors.iter().enumerate() {
        if *e < cv_errors[selected] {
            selected = i;
        }
    }
    let fit = lasso_path_standardized(&full, &grid[..=selected], DEFAULT_TOL, DEFAULT_MAX_ITER)
        .pop()
        .expect("grid is not empty");
    Ok((fit, grid, cv_errors, selected))
}

pub fn lasso_cv<S: AsRef<str>>(
    ds: &Dataset,
    response: &str,
    regressors: &[S],
    folds: usize,
    seed: u64,
    grid_size: usize,
) -> Result<LassoCvFit> {
    let (x, y, column_names) = regressor_matrix(ds, response, regressors)?;
    let (fit, grid, cv_errors, selected) = lasso_cv_matrix(&x, &y, folds, seed, grid_size)?;
    Ok(LassoCvFit {
        fit,
        column_names,
        grid,
        cv_errors,
        selected,
    })
}
