//! Prediction benchmark: the selected OLS model against cross-validated
//! LASSO on repeated random train/test splits.
//!
//! In the default leakage-free mode the whole selection pipeline is re-run
//! on each training part. In paper mode the variables are selected once on
//! all rows and only the OLS coefficients are refitted per split. The LASSO
//! arm always tunes `lambda` by cross-validation inside the training part.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::crossval::{train_test_splits, Split};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::lasso::{lasso_cv_matrix, regressor_matrix, DEFAULT_GRID_SIZE};
use crate::linalg::least_squares;
use crate::linmodel::design_matrix;
use crate::selector::{select, SelectConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompareMode {
    #[default]
    LeakageFree,
    /// Select once on the full data, then refit per split.
    Paper,
}

/// Which regressors the LASSO arm may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LassoCandidates {
    #[default]
    AllOthers,
    /// The same variables as the best-path arm; a symmetry check.
    SameAsBestPath,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareConfig {
    pub select: SelectConfig,
    pub train_frac: f64,
    pub repeats: usize,
    pub seed: u64,
    pub lasso_folds: usize,
    pub grid_size: usize,
    pub mode: CompareMode,
    pub lasso_candidates: LassoCandidates,
}

impl Default for CompareConfig {
    fn default() -> Self {
        let select = SelectConfig::default();
        CompareConfig {
            select,
            train_frac: 0.7,
            repeats: 100,
            seed: select.seed,
            lasso_folds: select.folds,
            grid_size: DEFAULT_GRID_SIZE,
            mode: CompareMode::LeakageFree,
            lasso_candidates: LassoCandidates::AllOthers,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    BestPath,
    Lasso,
    Tie,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::BestPath => "bestpath",
            Winner::Lasso => "lasso",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub split: usize,
    pub mse_bestpath: f64,
    pub mse_lasso: f64,
    pub winner: Winner,
    pub bestpath_variables: Vec<String>,
    pub lasso_active: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitFailure {
    pub split: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Comparison {
    pub outcomes: Vec<SplitOutcome>,
    pub failures: Vec<SplitFailure>,
}

impl Comparison {
    fn count(&self, w: Winner) -> usize {
        self.outcomes.iter().filter(|o| o.winner == w).count()
    }

    pub fn bestpath_wins(&self) -> usize {
        self.count(Winner::BestPath)
    }

    pub fn lasso_wins(&self) -> usize {
        self.count(Winner::Lasso)
    }

    pub fn ties(&self) -> usize {
        self.count(Winner::Tie)
    }
}

/// Splits plus, in paper mode, the variables selected on all rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparePlan {
    pub splits: Vec<Split>,
    pub fixed_variables: Option<Vec<String>>,
}

pub fn plan(ds: &Dataset, target: &str, cfg: &CompareConfig) -> Result<ComparePlan> {
    let splits = train_test_splits(ds.n_rows(), cfg.train_frac, cfg.repeats, cfg.seed)?;
    let fixed_variables = match cfg.mode {
        CompareMode::LeakageFree => None,
        CompareMode::Paper => Some(select(ds, target, &cfg.select)?.selected_variables()),
    };
    Ok(ComparePlan {
        splits,
        fixed_variables,
    })
}

fn test_mse(pred: &[f64], y: &[f64], rows: &[usize]) -> f64 {
    pred.iter()
        .zip(rows)
        .map(|(p, &r)| (y[r] - p) * (y[r] - p))
        .sum::<f64>()
        / rows.len() as f64
}

pub fn run_split(
    ds: &Dataset,
    target: &str,
    cfg: &CompareConfig,
    fixed_variables: Option<&[String]>,
    split: &Split,
) -> Result<SplitOutcome> {
    let variables = match fixed_variables {
        Some(v) => v.to_vec(),
        None => select(&ds.subset_rows(&split.train), target, &cfg.select)?.selected_variables(),
    };

    let design = design_matrix(ds, target, &variables)?;
    let train = design.select_rows(&split.train);
    let ls = least_squares(&train.x, &train.y).map_err(|s| Error::SingularDesign {
        columns: s.0.iter().map(|&j| design.column_names[j].clone()).collect(),
    })?;
    let pred = design.x.select_rows(&split.test).mul_vec(&ls.coefficients);
    let mse_bestpath = test_mse(&pred, &design.y, &split.test);

    let candidates: Vec<String> = match cfg.lasso_candidates {
        LassoCandidates::AllOthers => ds
            .names()
            .iter()
            .filter(|n| n.as_str() != target)
            .cloned()
            .collect(),
        LassoCandidates::SameAsBestPath => variables.clone(),
    };
    let (x, y, names) = regressor_matrix(ds, target, &candidates)?;
    let ytrain: Vec<f64> = split.train.iter().map(|&r| y[r]).collect();
    let (fit, ..) = lasso_cv_matrix(
        &x.select_rows(&split.train),
        &ytrain,
        cfg.lasso_folds,
        cfg.select.seed,
        cfg.grid_size,
    )?;
    let mse_lasso = test_mse(&fit.predict(&x.select_rows(&split.test)), &y, &split.test);

    let winner = if mse_bestpath < mse_lasso {
        Winner::BestPath
    } else if mse_lasso < mse_bestpath {
        Winner::Lasso
    } else {
        Winner::Tie
    };
    Ok(SplitOutcome {
        split: split.index,
        mse_bestpath,
        mse_lasso,
        winner,
        bestpath_variables: variables,
        lasso_active: fit.active_set.iter().map(|&j| names[j].clone()).collect(),
    })
}

/// Collects per-split results in split order; failed splits are kept aside.
pub fn summarize<I>(results: I) -> Comparison
where
    I: IntoIterator<Item = (usize, Result<SplitOutcome>)>,
{
    let mut out = Comparison::default();
    for (split, r) in results {
        match r {
            Ok(o) => out.outcomes.push(o),
            Err(e) => out.failures.push(SplitFailure {
                split,
                message: format!("{e}"),
            }),
        }
    }
    out.outcomes.sort_by_key(|o| o.split);
    out.failures.sort_by_key(|f| f.split);
    out
}

pub fn compare_predictions(ds: &Dataset, target: &str, cfg: &CompareConfig) -> Result<Comparison> {
    let plan = plan(ds, target, cfg)?;
    let fixed = plan.fixed_variables.as_deref();
    Ok(summarize(
        plan.splits
            .iter()
            .map(|s| (s.index, run_split(ds, target, cfg, fixed, s))),
    ))
}
