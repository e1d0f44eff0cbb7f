//! `bestpath` subcommands: mi, forest, select, compare.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bestpath_core::compare::{CompareConfig, CompareMode};
use bestpath_core::forest::build_forest;
use bestpath_core::mi::{mi_matrix, MiOptions, Penalty, PenaltyStyle, VarianceModel};
use bestpath_core::selector::{select, SelectConfig, SelectionReport};
use bestpath_core::Dataset;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::report::{self, ForestJson, ManifestJson, SelectJson};
use crate::{dot, io, runner};

#[derive(Debug, Parser)]
#[command(name = "bestpath", version, about = "Minimal AIC/BIC forests and best-path variable selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise mutual information table as CSV.
    Mi(MiArgs),
    /// Minimal AIC/BIC forest as DOT and/or JSON.
    Forest(ForestArgs),
    /// Best-path selection for one continuous target.
    Select(SelectArgs),
    /// Best path against cross-validated LASSO on repeated train/test splits.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Optional `name,kind` file overriding type inference.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Columns with a larger fraction of missing cells are dropped.
    #[arg(long, default_value_t = 0.5)]
    pub missing_col_frac: f64,
    /// Where to write the run manifest. Defaults to `manifest.json` next to
    /// the first output file; nothing is written when all output goes to
    /// stdout.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, default_value = "bic", value_parser = parse_penalty)]
    pub penalty: Penalty,
    #[arg(long, default_value = "paper", value_parser = parse_style)]
    pub penalty_style: PenaltyStyle,
    #[arg(long, default_value = "homogeneous", value_parser = parse_variance)]
    pub variance_model: VarianceModel,
}

#[derive(Debug, Args)]
pub struct SelectionArgs {
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Significance level for pruning.
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct MiArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ForestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Highlighted in the DOT output.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    #[arg(long, default_value_t = 100)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0.7)]
    pub train_frac: f64,
    /// Select variables once on all rows and only refit per split.
    #[arg(long)]
    pub paper_mode: bool,
    /// Per-split CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_penalty(s: &str) -> std::result::Result<Penalty, String> {
    s.parse().map_err(|e: bestpath_core::Error| e.to_string())
}

fn parse_style(s: &str) -> std::result::Result<PenaltyStyle, String> {
    s.parse().map_err(|e: bestpath_core::Error| e.to_string())
}

fn parse_variance(s: &str) -> std::result::Result<VarianceModel, String> {
    s.parse().map_err(|e: bestpath_core::Error| e.to_string())
}

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn check_data_args(d: &DataArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&d.missing_col_frac) {
        return Err(usage(format!("--missing-col-frac must be in [0, 1], got {}", d.missing_col_frac)));
    }
    if d.threads == Some(0) {
        return Err(usage("--threads must be at least 1".into()));
    }
    Ok(())
}

fn check_selection_args(s: &SelectionArgs) -> Result<()> {
    if s.folds < 2 {
        return Err(usage(format!("--folds must be at least 2, got {}", s.folds)));
    }
    if !(s.alpha > 0.0 && s.alpha < 1.0) {
        return Err(usage(format!("--alpha must be in (0, 1), got {}", s.alpha)));
    }
    Ok(())
}

fn select_config(model: &ModelArgs, s: &SelectionArgs) -> SelectConfig {
    SelectConfig {
        penalty: model.penalty,
        penalty_style: model.penalty_style,
        variance_model: model.variance_model,
        folds: s.folds,
        seed: s.seed,
        alpha: s.alpha,
        ..SelectConfig::default()
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Messages go to stdout/stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(summary) => {
            print!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command and returns the human-readable summary.
pub fn execute(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Mi(a) => run_mi(a),
        Command::Forest(a) => run_forest(a),
        Command::Select(a) => run_select(a),
        Command::Compare(a) => run_compare(a),
    }
}

fn load(d: &DataArgs) -> Result<Dataset> {
    check_data_args(d)?;
    let ds = io::load_dataset(&d.input, d.schema.as_deref(), d.missing_col_frac)?;
    for w in ds.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(ds)
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn write_manifest(
    command: &str,
    d: &DataArgs,
    config: serde_json::Value,
    outputs: &[&Path],
) -> Result<Option<PathBuf>> {
    let path = match (&d.manifest, outputs.first()) {
        (Some(p), _) => p.clone(),
        (None, Some(first)) => first
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .join("manifest.json"),
        (None, None) => return Ok(None),
    };
    let manifest = ManifestJson {
        schema_version: report::SCHEMA_VERSION,
        tool: report::TOOL_NAME,
        version: report::TOOL_VERSION,
        command: command.into(),
        input: d.input.display().to_string(),
        input_sha256: sha256_file(&d.input)?,
        schema: d.schema.as_ref().map(|p| p.display().to_string()),
        schema_sha256: d.schema.as_deref().map(sha256_file).transpose()?,
        config,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    io::write_atomic(&path, report::to_json(&manifest).as_bytes())?;
    Ok(Some(path))
}

fn model_config(m: &ModelArgs, d: &DataArgs) -> serde_json::Value {
    json!({
        "penalty": m.penalty.as_str(),
        "penalty_style": m.penalty_style.as_str(),
        "variance_model": m.variance_model.as_str(),
        "missing_col_frac": d.missing_col_frac,
        "threads": d.threads,
    })
}

fn selection_config(m: &ModelArgs, d: &DataArgs, s: &SelectionArgs) -> serde_json::Value {
    let mut v = model_config(m, d);
    let o = v.as_object_mut().expect("object");
    o.insert("target".into(), json!(s.target));
    o.insert("folds".into(), json!(s.folds));
    o.insert("seed".into(), json!(s.seed));
    o.insert("alpha".into(), json!(s.alpha));
    v
}

fn note_manifest(out: &mut String, m: Option<PathBuf>) {
    if let Some(p) = m {
        let _ = writeln!(out, "manifest: {}", p.display());
    }
}

fn run_mi(a: &MiArgs) -> Result<String> {
    let ds = load(&a.data)?;
    let opts = MiOptions {
        variance_model: a.model.variance_model,
        penalty_style: a.model.penalty_style,
    };
    let table = runner::with_threads(a.data.threads, || mi_matrix(&ds, opts));
    let csv = report::mi_table_csv(&table, ds.names(), a.model.penalty);
    let mut out = String::new();
    match &a.out {
        Some(p) => {
            io::write_atomic(p, &csv)?;
            let _ = writeln!(out, "{} pairs over {} variables, {} rows -> {}", table.len(), ds.n_vars(), ds.n_rows(), p.display());
            let m = write_manifest("mi", &a.data, model_config(&a.model, &a.data), &[p])?;
            note_manifest(&mut out, m);
        }
        None => out.push_str(&String::from_utf8(csv).expect("CSV is UTF-8")),
    }
    Ok(out)
}

fn forest_summary(ds: &Dataset, forest: &bestpath_core::Forest) -> String {
    let mut out = String::new();
    let comps = forest.components();
    let _ = writeln!(
        out,
        "{} variables, {} rows: {} edges, {} components, total weight {:.4}",
        ds.n_vars(),
        ds.n_rows(),
        forest.edges().len(),
        comps.len(),
        forest.total_weight()
    );
    let _ = writeln!(out, "{:<16} {:<16} {:>12} {:>12}", "u", "v", "I", "penalized");
    for e in forest.edges() {
        let _ = writeln!(out, "{:<16} {:<16} {:>12.4} {:>12.4}", ds.name(e.u), ds.name(e.v), e.raw_i, e.weight);
    }
    let isolated: Vec<&str> = comps.iter().filter(|c| c.len() == 1).map(|c| ds.name(c[0])).collect();
    if !isolated.is_empty() {
        let _ = writeln!(out, "isolated: {}", isolated.join(", "));
    }
    out
}

fn run_forest(a: &ForestArgs) -> Result<String> {
    let ds = load(&a.data)?;
    let target = a.target.as_deref().map(|t| ds.index_of(t)).transpose()?;
    let opts = MiOptions {
        variance_model: a.model.variance_model,
        penalty_style: a.model.penalty_style,
    };
    let table = runner::with_threads(a.data.threads, || mi_matrix(&ds, opts));
    let forest = build_forest(&table, a.model.penalty);
    let mut outputs: Vec<&Path> = Vec::new();
    if let Some(p) = &a.dot {
        io::write_atomic(p, dot::export_dot(&forest, ds.names(), target).as_bytes())?;
        outputs.push(p);
    }
    if let Some(p) = &a.json {
        io::write_atomic(p, report::to_json(&ForestJson::new(&forest, ds.names())).as_bytes())?;
        outputs.push(p);
    }
    let mut out = forest_summary(&ds, &forest);
    let m = write_manifest("forest", &a.data, model_config(&a.model, &a.data), &outputs)?;
    note_manifest(&mut out, m);
    Ok(out)
}

/// Text rendering of the step table and the final coefficient table.
pub fn select_summary(ds: &Dataset, r: &SelectionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "target {} ({} rows, {} variables)", r.target, ds.n_rows(), ds.n_vars());
    let _ = writeln!(
        out,
        "{:>4} {:>4} {:>12} {:>12} {:>10} {:>10} {:>10}",
        "step", "vars", "mi_sum", "cv_mse", "cv_r2adj", "fold_rmse", "fold_r2"
    );
    for s in &r.step_scores {
        match &s.cv {
            Some(cv) => {
                let _ = writeln!(
                    out,
                    "{:>4} {:>4} {:>12.4} {:>12.2} {:>10.4} {:>10.2} {:>10.4}{}",
                    s.k,
                    s.variables.len(),
                    s.mi_sum,
                    cv.cv_mse,
                    cv.cv_r2_adjusted,
                    cv.fold_rmse_mean,
                    cv.fold_r2_mean,
                    if Some(s.k) == r.best_step { "  *" } else { "" }
                );
            }
            None => {
                let _ = writeln!(out, "{:>4} {:>4} {:>12.4}  failed: {}", s.k, s.variables.len(), s.mi_sum, s.failure.as_deref().unwrap_or(""));
            }
        }
    }
    if let Some(k) = r.plateau_step {
        let _ = writeln!(out, "MI plateau at step {k}");
    }
    match &r.mf {
        Some(mf) => {
            let _ = writeln!(out, "final model: {}", mf.variables.join(", "));
            let _ = writeln!(out, "{:<20} {:>12} {:>12} {:>8} {:>10}", "", "estimate", "std.error", "t", "p");
            for c in &mf.coefficients {
                let _ = writeln!(
                    out,
                    "{:<20} {:>12.4} {:>12.4} {:>8.3} {:>10.3e} {}",
                    c.name,
                    c.estimate,
                    c.std_error,
                    c.t_value,
                    c.p_value,
                    bestpath_core::linmodel::signif_code(c.p_value)
                );
            }
            let _ = writeln!(out, "R2 {:.4}, adjusted R2 {:.4}, MSE {:.2}", mf.r2, mf.r2_adjusted, mf.mse);
        }
        None => {
            let _ = writeln!(out, "no candidates in the tree of `{}`", r.target);
        }
    }
    for d in &r.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

fn run_select(a: &SelectArgs) -> Result<String> {
    check_selection_args(&a.selection)?;
    let ds = load(&a.data)?;
    let cfg = select_config(&a.model, &a.selection);
    let r = runner::with_threads(a.data.threads, || select(&ds, &a.selection.target, &cfg))?;
    let mut outputs: Vec<&Path> = Vec::new();
    if let Some(p) = &a.json {
        io::write_atomic(p, report::to_json(&SelectJson::new(&ds, &r)).as_bytes())?;
        outputs.push(p);
    }
    if let Some(p) = &a.dot {
        io::write_atomic(p, dot::export_dot(&r.forest, ds.names(), Some(r.target_index)).as_bytes())?;
        outputs.push(p);
    }
    let mut out = select_summary(&ds, &r);
    let m = write_manifest("select", &a.data, selection_config(&a.model, &a.data, &a.selection), &outputs)?;
    note_manifest(&mut out, m);
    Ok(out)
}

fn run_compare(a: &CompareArgs) -> Result<String> {
    check_selection_args(&a.selection)?;
    if a.repeats == 0 {
        return Err(usage("--repeats must be at least 1".into()));
    }
    if !(a.train_frac > 0.0 && a.train_frac < 1.0) {
        return Err(usage(format!("--train-frac must be in (0, 1), got {}", a.train_frac)));
    }
    let ds = load(&a.data)?;
    let select = select_config(&a.model, &a.selection);
    let cfg = CompareConfig {
        select,
        train_frac: a.train_frac,
        repeats: a.repeats,
        seed: a.selection.seed,
        lasso_folds: a.selection.folds,
        mode: if a.paper_mode { CompareMode::Paper } else { CompareMode::LeakageFree },
        ..CompareConfig::default()
    };
    let c = runner::with_threads(a.data.threads, || runner::compare_parallel(&ds, &a.selection.target, &cfg))?;
    let csv = report::compare_csv(&c);
    let mut out = String::new();
    match &a.out {
        Some(p) => io::write_atomic(p, &csv)?,
        None => out.push_str(&String::from_utf8(csv).expect("CSV is UTF-8")),
    }
    for f in &c.failures {
        eprintln!("warning: split {} failed: {}", f.split, f.message);
    }
    let _ = writeln!(
        out,
        "{} splits ({} mode): best path {}, lasso {}, ties {}, failed {}",
        a.repeats,
        report::compare_mode_str(&cfg),
        c.bestpath_wins(),
        c.lasso_wins(),
        c.ties(),
        c.failures.len()
    );
    let mut config = selection_config(&a.model, &a.data, &a.selection);
    let o = config.as_object_mut().expect("object");
    o.insert("repeats".into(), json!(a.repeats));
    o.insert("train_frac".into(), json!(a.train_frac));
    o.insert("mode".into(), json!(report::compare_mode_str(&cfg)));
    let outputs: Vec<&Path> = a.out.iter().map(PathBuf::as_path).collect();
    let m = write_manifest("compare", &a.data, config, &outputs)?;
    note_manifest(&mut out, m);
    Ok(out)
}
