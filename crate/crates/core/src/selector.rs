//! The full selection pipeline for one continuous target.
//!
//! 0. Build the minimal AIC/BIC forest over every variable.
//! 1. Compute the path steps of the target inside its tree.
//! 2. Fit OLS on each path step and cross-validate it.
//! 3. Keep the step with the largest cross-validated adjusted R² (ties go
//!    to the smaller step).
//! 4. Refit that step on all rows and drop, one at a time, the regressor
//!    with the largest p-value above `alpha` until none is left. A discrete
//!    regressor is judged by the smallest p-value among its indicator columns
//!    and is removed as a whole.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::crossval::{kfold_cv_design, CvResult, DEFAULT_FOLDS};
use crate::dataset::{Dataset, KindTag};
use crate::error::{Error, Result};
use crate::forest::{build_forest, Forest};
use crate::linmodel::{design_matrix, ols_fit, ModelFit};
use crate::mi::{mi_matrix, MiOptions, MiTable, Penalty, PenaltyStyle, VarianceModel};
use crate::pathsteps::{mi_sum_profile, path_steps, PathSteps};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_PLATEAU_TOL: f64 = 0.05;
/// Allowed drop in full-sample adjusted R² from the step before the chosen
/// one before a diagnostic is recorded.
pub const R2_SLACK: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectConfig {
    pub penalty: Penalty,
    pub penalty_style: PenaltyStyle,
    pub variance_model: VarianceModel,
    pub folds: usize,
    pub seed: u64,
    pub alpha: f64,
    pub plateau_tol: f64,
}

impl Default for SelectConfig {
    fn default() -> Self {
        SelectConfig {
            penalty: Penalty::Bic,
            penalty_style: PenaltyStyle::Paper,
            variance_model: VarianceModel::Homogeneous,
            folds: DEFAULT_FOLDS,
            seed: DEFAULT_SEED,
            alpha: DEFAULT_ALPHA,
            plateau_tol: DEFAULT_PLATEAU_TOL,
        }
    }
}

impl SelectConfig {
    pub fn mi_options(&self) -> MiOptions {
        MiOptions {
            variance_model: self.variance_model,
            penalty_style: self.penalty_style,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepScore {
    pub k: usize,
    pub variables: Vec<String>,
    pub mi_sum: f64,
    /// `None` when the step could not be fitted; see `failure`.
    pub cv: Option<CvResult>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStatus {
    Selected,
    /// The target is isolated in the forest.
    NoCandidates,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrunedVariable {
    pub variable: String,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub target: String,
    pub target_index: usize,
    pub config: SelectConfig,
    pub status: SelectionStatus,
    pub mi_table: MiTable,
    pub forest: Forest,
    pub path_steps: PathSteps,
    pub step_scores: Vec<StepScore>,
    pub best_step: Option<usize>,
    /// Full-sample fit of the best path step.
    pub mw: Option<ModelFit>,
    /// Fit after pruning.
    pub mf: Option<ModelFit>,
    /// Removed regressors in order of removal.
    pub pruned: Vec<PrunedVariable>,
    pub plateau_step: Option<usize>,
    pub diagnostics: Vec<String>,
}

impl SelectionReport {
    pub fn selected_variables(&self) -> Vec<String> {
        self.mf.as_ref().map(|m| m.variables.clone()).unwrap_or_default()
    }

    /// `vars(mf) ⊆ vars(mw) ⊆ tree(target)`, and no kept regressor has a
    /// p-value above `alpha`.
    pub fn check_containment(&self, ds: &Dataset) -> bool {
        let (Some(mw), Some(mf)) = (&self.mw, &self.mf) else {
            return self.mw.is_none() && self.mf.is_none();
        };
        let tree = self.forest.component_of(self.target_index);
        let in_tree = mw.variables.iter().all(|v| {
            ds.index_of(v)
                .map(|i| i != self.target_index && tree.contains(&i))
                .unwrap_or(false)
        });
        let nested = mf.variables.iter().all(|v| mw.variables.contains(v));
        let significant = mf
            .groups
            .iter()
            .all(|g| mf.group_p_value(g) <= self.config.alpha);
        in_tree && nested && significant
    }
}

/// Smallest `k` whose remaining MI gain to the last step is at most `tol`
/// of the last step's total.
pub fn mi_plateau_diagnostic(profile: &[f64], tol: f64) -> Option<usize> {
    let last = *profile.last()?;
    profile
        .iter()
        .position(|&s| last - s <= tol * last)
        .map(|i| i + 1)
}

/// Backward elimination at level `alpha`; returns the final fit and the
/// removed variables.
pub fn prune(ds: &Dataset, target: &str, start: &ModelFit, alpha: f64) -> Result<(ModelFit, Vec<PrunedVariable>)> {
    let mut fit = start.clone();
    let mut removed = Vec::new();
    loop {
        let worst = fit
            .groups
            .iter()
            .map(|g| (g, fit.group_p_value(g)))
            .filter(|(_, p)| p.is_nan() || *p > alpha)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((group, p)) = worst else {
            return Ok((fit, removed));
        };
        let variable = group.variable.clone();
        let keep: Vec<&str> = fit
            .variables
            .iter()
            .filter(|v| **v != variable)
            .map(String::as_str)
            .collect();
        removed.push(PrunedVariable { variable, p_value: p });
        fit = ols_fit(&design_matrix(ds, target, &keep)?)?;
    }
}

pub fn select(ds: &Dataset, target: &str, cfg: &SelectConfig) -> Result<SelectionReport> {
    let ti = ds.index_of(target)?;
    if ds.column(ti).tag() != KindTag::Continuous {
        return Err(Error::DiscreteResponse(target.into()));
    }
    let mi_table = mi_matrix(ds, cfg.mi_options());
    let forest = build_forest(&mi_table, cfg.penalty);
    let ps = path_steps(&forest, ti);
    let profile = mi_sum_profile(&ps, &mi_table);
    let mut diagnostics = Vec::new();
    if profile.windows(2).any(|w| w[1] < w[0]) {
        diagnostics.push(format!("MI profile is not monotone: {profile:?}"));
    }

    let mut report = SelectionReport {
        target: target.into(),
        target_index: ti,
        config: *cfg,
        status: SelectionStatus::NoCandidates,
        mi_table,
        forest,
        path_steps: ps,
        step_scores: Vec::new(),
        best_step: None,
        mw: None,
        mf: None,
        pruned: Vec::new(),
        plateau_step: mi_plateau_diagnostic(&profile, cfg.plateau_tol),
        diagnostics,
    };
    if report.path_steps.is_empty() {
        report
            .diagnostics
            .push(format!("no candidates in the tree of `{target}`"));
        return Ok(report);
    }

    let mut best: Option<(usize, f64)> = None;
    let mut full_r2 = Vec::new();
    for (i, step) in report.path_steps.steps.iter().enumerate() {
        let k = i + 1;
        let variables: Vec<String> = step.iter().map(|&j| ds.name(j).into()).collect();
        let scored = design_matrix(ds, target, &variables)
            .and_then(|d| Ok((kfold_cv_design(&d, cfg.folds, cfg.seed)?, ols_fit(&d)?)));
        let (cv, failure) = match scored {
            Ok((cv, fit)) => {
                full_r2.push(Some(fit.r2_adjusted));
                if best.is_none_or(|(_, s)| cv.cv_r2_adjusted > s) {
                    best = Some((k, cv.cv_r2_adjusted));
                }
                (Some(cv), None)
            }
            Err(e) => {
                full_r2.push(None);
                report.diagnostics.push(format!("path step {k} failed: {e}"));
                (None, Some(format!("{e}")))
            }
        };
        report.step_scores.push(StepScore {
            k,
            variables,
            mi_sum: profile[i],
            cv,
            failure,
        });
    }
    let (best_k, _) = best.ok_or_else(|| Error::AllStepsFailed(target.into()))?;

    if best_k >= 2 {
        if let (Some(prev), Some(cur)) = (full_r2[best_k - 2], full_r2[best_k - 1]) {
            if cur < prev - R2_SLACK {
                report.diagnostics.push(format!(
                    "adjusted R² of path step {best_k} ({cur:.4}) is below step {} ({prev:.4})",
                    best_k - 1
                ));
            }
        }
    }

    let mw = ols_fit(&design_matrix(
        ds,
        target,
        &report.step_scores[best_k - 1].variables,
    )?)?;
    let (mf, pruned) = prune(ds, target, &mw, cfg.alpha)?;
    report.status = SelectionStatus::Selected;
    report.best_step = Some(best_k);
    report.mw = Some(mw);
    report.mf = Some(mf);
    report.pruned = pruned;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_examples() {
        assert_eq!(mi_plateau_diagnostic(&[1.0, 1.0, 1.0], 0.05), Some(1));
        assert_eq!(mi_plateau_diagnostic(&[1.0, 5.0, 5.1, 5.15], 0.05), Some(2));
        assert_eq!(mi_plateau_diagnostic(&[1.0, 2.0, 3.0, 4.0], 0.05), Some(4));
        assert_eq!(mi_plateau_diagnostic(&[0.0, 0.0], 0.05), Some(1));
        assert_eq!(mi_plateau_diagnostic(&[], 0.05), None);
    }
}
