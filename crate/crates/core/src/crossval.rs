//! k-fold cross-validation of OLS fits and repeated train/test splitting.
//!
//! Out-of-fold squared errors from all folds are pooled and scaled like the
//! in-sample mean squared error, `cv_mse = SSE_oof / (n - o - 1)`, which
//! makes `cv_r2_adjusted = 1 - cv_mse * (n - 1) / TSS` directly comparable
//! with the full-sample adjusted R². Two per-fold summaries are reported as
//! well: the mean fold RMSE and the mean squared correlation between
//! out-of-fold predictions and observations.

use alloc::format;
use alloc::vec::Vec;

use libm::sqrt;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::linmodel::{design_matrix, total_sum_of_squares, Design};
use crate::rng::{permutation, FOLD_STREAM};

pub const DEFAULT_FOLDS: usize = 10;

/// Random partition of `0..n` into `folds` groups whose sizes differ by at
/// most one. Each group is sorted.
pub fn kfold_partition(n: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 || folds > n {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n} rows into {folds} folds"
        )));
    }
    let perm = permutation(n, seed, FOLD_STREAM);
    let (base, extra) = (n / folds, n % folds);
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let len = base + usize::from(f < extra);
        let mut fold = perm[start..start + len].to_vec();
        fold.sort_unstable();
        out.push(fold);
        start += len;
    }
    Ok(out)
}

/// Sorted complement of `rows` in `0..n`.
pub fn complement(n: usize, rows: &[usize]) -> Vec<usize> {
    let mut mask = alloc::vec![true; n];
    for &r in rows {
        mask[r] = false;
    }
    (0..n).filter(|&i| mask[i]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub folds: usize,
    pub seed: u64,
    pub n_obs: usize,
    /// Regressor columns, intercept excluded.
    pub o: usize,
    pub cv_mse: f64,
    pub cv_r2_adjusted: f64,
    pub fold_rmse_mean: f64,
    /// Mean over folds of the squared correlation between out-of-fold
    /// predictions and observations; folds where it is undefined are skipped.
    pub fold_r2_mean: f64,
}

fn squared_correlation(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    if a.len() < 2 {
        return None;
    }
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
        sab += (x - ma) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab * sab / (saa * sbb))
}

pub fn kfold_cv<S: AsRef<str>>(
    ds: &Dataset,
    response: &str,
    regressors: &[S],
    folds: usize,
    seed: u64,
) -> Result<CvResult> {
    let design = design_matrix(ds, response, regressors)?;
    kfold_cv_design(&design, folds, seed)
}

pub fn kfold_cv_design(design: &Design, folds: usize, seed: u64) -> Result<CvResult> {
    let n = design.n_obs();
    let o = design.n_regressors();
    if n <= o + 1 {
        return Err(Error::TooFewRows {
            needed: o + 2,
            found: n,
        });
    }
    let partition = kfold_partition(n, folds, seed)?;
    let mut sse = 0.0;
    let mut rmse_sum = 0.0;
    let mut r2_sum = 0.0;
    let mut r2_count = 0usize;
    for fold in &partition {
        let train = complement(n, fold);
        let train_design = design.select_rows(&train);
        let ls = least_squares(&train_design.x, &train_design.y).map_err(|s| {
            Error::SingularDesign {
                columns: s.0.iter().map(|&j| design.column_names[j].clone()).collect(),
            }
        })?;
        let valid = design.select_rows(fold);
        let pred = valid.x.mul_vec(&ls.coefficients);
        let fold_sse: f64 = pred
            .iter()
            .zip(&valid.y)
            .map(|(p, y)| (y - p) * (y - p))
            .sum();
        sse += fold_sse;
        rmse_sum += sqrt(fold_sse / fold.len() as f64);
        if let Some(r2) = squared_correlation(&pred, &valid.y) {
            r2_sum += r2;
            r2_count += 1;
        }
    }
    let cv_mse = sse / (n - o - 1) as f64;
    let c = (n as f64 - 1.0) / total_sum_of_squares(&design.y);
    Ok(CvResult {
        folds,
        seed,
        n_obs: n,
        o,
        cv_mse,
        cv_r2_adjusted: 1.0 - cv_mse * c,
        fold_rmse_mean: rmse_sum / folds as f64,
        fold_r2_mean: if r2_count == 0 {
            f64::NAN
        } else {
            r2_sum / r2_count as f64
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub index: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// `repeats` random train/test partitions; split `r` depends only on
/// `(seed, r)`. The training part has `round(train_frac * n)` rows, kept
/// within `1..n`.
pub fn train_test_splits(n: usize, train_frac: f64, repeats: usize, seed: u64) -> Result<Vec<Split>> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_frac} is not in (0, 1)"
        )));
    }
    if n < 2 {
        return Err(Error::TooFewRows { needed: 1, found: n });
    }
    let n_train = libm::round(train_frac * n as f64).clamp(1.0, (n - 1) as f64) as usize;
    Ok((0..repeats)
        .map(|r| {
            let perm = permutation(n, seed, r as u64 + 1);
            let mut train = perm[..n_train].to_vec();
            let mut test = perm[n_train..].to_vec();
            train.sort_unstable();
            test.sort_unstable();
            Split {
                index: r,
                train,
                test,
            }
        })
        .collect())
}
