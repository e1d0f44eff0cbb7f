//! JSON and CSV renderings of the pipeline outputs.
//!
//! Object keys come out in struct-field order and floats use [`num::g17`],
//! so the same inputs always give the same bytes.

use bestpath_core::compare::{CompareConfig, CompareMode, Comparison};
use bestpath_core::linmodel::{signif_code, ModelFit};
use bestpath_core::mi::{MiTable, Penalty};
use bestpath_core::selector::{SelectionReport, SelectionStatus};
use bestpath_core::{Dataset, Forest};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::num::{self, cell};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

type Num = Box<RawValue>;

#[derive(Serialize)]
pub struct NodeJson {
    pub name: String,
    pub kind: &'static str,
}

#[derive(Serialize)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    pub i: Num,
    pub penalized: Num,
}

#[derive(Serialize)]
pub struct ForestJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

impl ForestJson {
    pub fn new(forest: &Forest, names: &[String]) -> ForestJson {
        ForestJson {
            nodes: names
                .iter()
                .zip(forest.kinds())
                .map(|(n, k)| NodeJson {
                    name: n.clone(),
                    kind: k.as_str(),
                })
                .collect(),
            edges: forest
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    u: names[e.u].clone(),
                    v: names[e.v].clone(),
                    i: num::json(e.raw_i),
                    penalized: num::json(e.weight),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct ConfigJson {
    penalty: &'static str,
    penalty_style: &'static str,
    variance_model: &'static str,
    folds: usize,
    seed: u64,
    alpha: Num,
    plateau_tol: Num,
}

#[derive(Serialize)]
struct PathStepJson {
    k: usize,
    vars: Vec<String>,
    mi_sum: Num,
}

#[derive(Serialize)]
struct StepScoreJson {
    k: usize,
    vars: Vec<String>,
    n_regressors: Option<usize>,
    mi_sum: Num,
    cv_mse: Num,
    cv_r2_adjusted: Num,
    fold_rmse_mean: Num,
    fold_r2_mean: Num,
    failure: Option<String>,
}

#[derive(Serialize)]
struct CoefficientJson {
    name: String,
    estimate: Num,
    std_error: Num,
    t_value: Num,
    p_value: Num,
    signif: &'static str,
}

#[derive(Serialize)]
struct ModelJson {
    variables: Vec<String>,
    coefficients: Vec<CoefficientJson>,
    n_obs: usize,
    o: usize,
    rss: Num,
    mse: Num,
    r2: Num,
    r2_adjusted: Num,
}

impl ModelJson {
    fn new(m: &ModelFit) -> ModelJson {
        ModelJson {
            variables: m.variables.clone(),
            coefficients: m
                .coefficients
                .iter()
                .map(|c| CoefficientJson {
                    name: c.name.clone(),
                    estimate: num::json(c.estimate),
                    std_error: num::json(c.std_error),
                    t_value: num::json(c.t_value),
                    p_value: num::json(c.p_value),
                    signif: signif_code(c.p_value),
                })
                .collect(),
            n_obs: m.n_obs,
            o: m.o,
            rss: num::json(m.rss),
            mse: num::json(m.mse),
            r2: num::json(m.r2),
            r2_adjusted: num::json(m.r2_adjusted),
        }
    }
}

#[derive(Serialize)]
struct PrunedJson {
    variable: String,
    p_value: Num,
}

#[derive(Serialize)]
struct DatasetJson {
    n_rows: usize,
    n_vars: usize,
    warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct SelectJson {
    schema_version: u32,
    tool: &'static str,
    version: &'static str,
    target: String,
    status: &'static str,
    config: ConfigJson,
    dataset: DatasetJson,
    forest: ForestJson,
    path_steps: Vec<PathStepJson>,
    step_scores: Vec<StepScoreJson>,
    best_step: Option<usize>,
    plateau_step: Option<usize>,
    mw: Option<ModelJson>,
    mf: Option<ModelJson>,
    pruned: Vec<PrunedJson>,
    containment: bool,
    diagnostics: Vec<String>,
}

pub fn status_str(s: SelectionStatus) -> &'static str {
    match s {
        SelectionStatus::Selected => "selected",
        SelectionStatus::NoCandidates => "no_candidates",
    }
}

impl SelectJson {
    pub fn new(ds: &Dataset, r: &SelectionReport) -> SelectJson {
        let names = ds.names();
        let cv = |f: fn(&bestpath_core::crossval::CvResult) -> f64| {
            move |s: &bestpath_core::selector::StepScore| num::json_opt(s.cv.as_ref().map(f))
        };
        SelectJson {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            target: r.target.clone(),
            status: status_str(r.status),
            config: ConfigJson {
                penalty: r.config.penalty.as_str(),
                penalty_style: r.config.penalty_style.as_str(),
                variance_model: r.config.variance_model.as_str(),
                folds: r.config.folds,
                seed: r.config.seed,
                alpha: num::json(r.config.alpha),
                plateau_tol: num::json(r.config.plateau_tol),
            },
            dataset: DatasetJson {
                n_rows: ds.n_rows(),
                n_vars: ds.n_vars(),
                warnings: ds.warnings().to_vec(),
            },
            forest: ForestJson::new(&r.forest, names),
            path_steps: r
                .step_scores
                .iter()
                .map(|s| PathStepJson {
                    k: s.k,
                    vars: s.variables.clone(),
                    mi_sum: num::json(s.mi_sum),
                })
                .collect(),
            step_scores: r
                .step_scores
                .iter()
                .map(|s| StepScoreJson {
                    k: s.k,
                    vars: s.variables.clone(),
                    n_regressors: s.cv.as_ref().map(|c| c.o),
                    mi_sum: num::json(s.mi_sum),
                    cv_mse: cv(|c| c.cv_mse)(s),
                    cv_r2_adjusted: cv(|c| c.cv_r2_adjusted)(s),
                    fold_rmse_mean: cv(|c| c.fold_rmse_mean)(s),
                    fold_r2_mean: cv(|c| c.fold_r2_mean)(s),
                    failure: s.failure.clone(),
                })
                .collect(),
            best_step: r.best_step,
            plateau_step: r.plateau_step,
            mw: r.mw.as_ref().map(ModelJson::new),
            mf: r.mf.as_ref().map(ModelJson::new),
            pruned: r
                .pruned
                .iter()
                .map(|p| PrunedJson {
                    variable: p.variable.clone(),
                    p_value: num::json(p.p_value),
                })
                .collect(),
            containment: r.check_containment(ds),
            diagnostics: r.diagnostics.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub const MI_CSV_HEADER: [&str; 6] = ["u", "v", "kind_pair", "i", "dof", "penalized"];

/// One row per variable pair; `penalized` uses the chosen criterion.
pub fn mi_table_csv(table: &MiTable, names: &[String], penalty: Penalty) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(MI_CSV_HEADER).expect("writing to memory");
    for (u, v, e) in table.pairs() {
        w.write_record([
            names[u].clone(),
            names[v].clone(),
            table.kind_pair(u, v),
            cell(e.i_value),
            e.dof.to_string(),
            cell(e.penalized(penalty)),
        ])
        .expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub const COMPARE_CSV_HEADER: [&str; 4] = ["split", "mse_bestpath", "mse_lasso", "winner"];

/// Successful splits only, in split order.
pub fn compare_csv(c: &Comparison) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COMPARE_CSV_HEADER).expect("writing to memory");
    for o in &c.outcomes {
        w.write_record([
            o.split.to_string(),
            cell(o.mse_bestpath),
            cell(o.mse_lasso),
            o.winner.as_str().to_string(),
        ])
        .expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

#[derive(Serialize)]
pub struct ManifestJson {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: String,
    pub input_sha256: String,
    pub schema: Option<String>,
    pub schema_sha256: Option<String>,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
}

pub fn compare_mode_str(cfg: &CompareConfig) -> &'static str {
    match cfg.mode {
        CompareMode::LeakageFree => "leakage_free",
        CompareMode::Paper => "paper",
    }
}
