//! Typed, cleaned tables of mixed discrete/continuous variables.
//!
//! Cleaning happens on a [`RawTable`] of string cells: columns whose missing
//! fraction exceeds the threshold are dropped first, then every row that
//! still has a missing cell, then constant columns. Each surviving column is
//! typed by the schema override when present, otherwise by [`infer_kind`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default upper bound on distinct values for an integral numeric column to
/// be treated as discrete.
pub const DEFAULT_MAX_LEVELS: usize = 10;

/// Default fraction of missing cells above which a column is dropped.
pub const DEFAULT_MISSING_COL_FRAC: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KindTag {
    Discrete,
    Continuous,
}

impl KindTag {
    pub fn as_str(self) -> &'static str {
        match self {
            KindTag::Discrete => "discrete",
            KindTag::Continuous => "continuous",
        }
    }
}

impl core::str::FromStr for KindTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "discrete" => Ok(KindTag::Discrete),
            "continuous" => Ok(KindTag::Continuous),
            other => Err(Error::InvalidArgument(format!(
                "unknown variable kind `{other}` (expected discrete or continuous)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VariableKind {
    /// Levels are distinct and kept in order of first appearance.
    Discrete { levels: Vec<String> },
    Continuous,
}

impl VariableKind {
    pub fn tag(&self) -> KindTag {
        match self {
            VariableKind::Discrete { .. } => KindTag::Discrete,
            VariableKind::Continuous => KindTag::Continuous,
        }
    }
}

/// Column storage. Discrete codes index into `levels`.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Discrete { levels: Vec<String>, codes: Vec<usize> },
    Continuous(Vec<f64>),
}

impl Column {
    /// Encodes labels by first appearance.
    pub fn discrete_from_labels<S: AsRef<str>>(labels: &[S]) -> Column {
        let mut levels: Vec<String> = Vec::new();
        let codes = labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                match levels.iter().position(|x| x == l) {
                    Some(i) => i,
                    None => {
                        levels.push(l.to_string());
                        levels.len() - 1
                    }
                }
            })
            .collect();
        Column::Discrete { levels, codes }
    }

    pub fn tag(&self) -> KindTag {
        match self {
            Column::Discrete { .. } => KindTag::Discrete,
            Column::Continuous(_) => KindTag::Continuous,
        }
    }

    pub fn kind(&self) -> VariableKind {
        match self {
            Column::Discrete { levels, .. } => VariableKind::Discrete {
                levels: levels.clone(),
            },
            Column::Continuous(_) => VariableKind::Continuous,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Discrete { codes, .. } => codes.len(),
            Column::Continuous(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn codes(&self) -> Option<&[usize]> {
        match self {
            Column::Discrete { codes, .. } => Some(codes),
            Column::Continuous(_) => None,
        }
    }

    pub fn values(&self) -> Option<&[f64]> {
        match self {
            Column::Continuous(v) => Some(v),
            Column::Discrete { .. } => None,
        }
    }

    pub fn levels(&self) -> &[String] {
        match self {
            Column::Discrete { levels, .. } => levels,
            Column::Continuous(_) => &[],
        }
    }

    pub fn encode(&self, label: &str) -> Option<usize> {
        self.levels().iter().position(|l| l == label)
    }

    pub fn decode(&self, code: usize) -> Option<&str> {
        self.levels().get(code).map(String::as_str)
    }

    /// Cell rendered back to text; continuous values use the shortest
    /// representation that parses back to the same `f64`.
    pub fn render(&self, row: usize) -> String {
        match self {
            Column::Discrete { levels, codes } => levels[codes[row]].clone(),
            Column::Continuous(v) => format!("{}", v[row]),
        }
    }

    /// Rows in the given order. Discrete level lists are kept whole so codes
    /// stay comparable with the parent column.
    pub fn select(&self, rows: &[usize]) -> Column {
        match self {
            Column::Discrete { levels, codes } => Column::Discrete {
                levels: levels.clone(),
                codes: rows.iter().map(|&r| codes[r]).collect(),
            },
            Column::Continuous(v) => Column::Continuous(rows.iter().map(|&r| v[r]).collect()),
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            Column::Discrete { codes, .. } => codes.windows(2).all(|w| w[0] == w[1]),
            Column::Continuous(v) => v.windows(2).all(|w| w[0] == w[1]),
        }
    }
}

/// Header plus string cells, as read from a delimited file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    pub missing_col_frac: f64,
    pub max_levels: usize,
    /// Per-column kind overrides; always win over inference.
    pub schema: Vec<(String, KindTag)>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            missing_col_frac: DEFAULT_MISSING_COL_FRAC,
            max_levels: DEFAULT_MAX_LEVELS,
            schema: Vec::new(),
        }
    }
}

/// Empty string, `NA` and `?` mark a missing cell.
pub fn is_missing(cell: &str) -> bool {
    matches!(cell.trim(), "" | "NA" | "?")
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Non-numeric columns are discrete. Numeric columns are discrete when every
/// value is integral and there are at most `max_levels` distinct values.
pub fn infer_kind<S: AsRef<str>>(values: &[S], max_levels: usize) -> VariableKind {
    let mut levels: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut numeric = true;
    let mut integral = true;
    for v in values {
        let v = v.as_ref().trim();
        match parse_number(v) {
            Some(x) => integral &= libm::trunc(x) == x,
            None => numeric = false,
        }
        if seen.insert(v) {
            levels.push(v.to_string());
        }
    }
    if !numeric || (integral && levels.len() <= max_levels) {
        VariableKind::Discrete { levels }
    } else {
        VariableKind::Continuous
    }
}

/// Immutable, cleaned table. Column names are unique and every column has
/// exactly `n_rows` entries.
#[derive(Debug, Clone)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Column>,
    n_rows: usize,
    warnings: Vec<String>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.n_rows == other.n_rows && self.names == other.names && self.columns == other.columns
    }
}

impl Dataset {
    pub fn new(names: Vec<String>, columns: Vec<Column>) -> Result<Dataset> {
        if names.len() != columns.len() {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        check_unique(&names)?;
        let n_rows = columns.first().map_or(0, Column::len);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(Error::InvalidArgument(format!(
                    "column `{name}` has {} rows, expected {n_rows}",
                    col.len()
                )));
            }
            if let Column::Discrete { levels, codes } = col {
                if codes.iter().any(|&c| c >= levels.len()) {
                    return Err(Error::InvalidArgument(format!(
                        "column `{name}` has a code outside its level list"
                    )));
                }
            }
        }
        if n_rows < 3 || names.len() < 2 {
            return Err(Error::EmptyDataset {
                rows: n_rows,
                cols: names.len(),
            });
        }
        Ok(Dataset {
            names,
            columns,
            n_rows,
            warnings: Vec::new(),
        })
    }

    /// Cleans and types a raw string table.
    pub fn from_raw(table: &RawTable, opts: &LoadOptions) -> Result<Dataset> {
        check_unique(&table.headers)?;
        let width = table.headers.len();
        for (i, row) in table.rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
        }
        for (name, _) in &opts.schema {
            if !table.headers.contains(name) {
                return Err(Error::UnknownColumn(name.clone()));
            }
        }

        let mut warnings = Vec::new();
        let n_raw = table.rows.len();

        // Columns first, then rows.
        let kept_cols: Vec<usize> = (0..width)
            .filter(|&j| {
                let missing = table.rows.iter().filter(|r| is_missing(&r[j])).count();
                let frac = if n_raw == 0 { 0.0 } else { missing as f64 / n_raw as f64 };
                let keep = frac <= opts.missing_col_frac;
                if !keep {
                    warnings.push(format!(
                        "dropped column `{}`: {missing} of {n_raw} cells missing",
                        table.headers[j]
                    ));
                }
                keep
            })
            .collect();
        let kept_rows: Vec<&Vec<String>> = table
            .rows
            .iter()
            .filter(|r| kept_cols.iter().all(|&j| !is_missing(&r[j])))
            .collect();
        if kept_rows.len() < n_raw {
            warnings.push(format!(
                "dropped {} of {n_raw} rows with missing values",
                n_raw - kept_rows.len()
            ));
        }

        let mut names = Vec::new();
        let mut columns = Vec::new();
        for &j in &kept_cols {
            let name = &table.headers[j];
            let cells: Vec<&str> = kept_rows.iter().map(|r| r[j].trim()).collect();
            let kind = match opts.schema.iter().find(|(n, _)| n == name) {
                Some((_, KindTag::Continuous)) => VariableKind::Continuous,
                Some((_, KindTag::Discrete)) => VariableKind::Discrete { levels: Vec::new() },
                None => infer_kind(&cells, opts.max_levels),
            };
            let column = match kind {
                VariableKind::Discrete { .. } => Column::discrete_from_labels(&cells),
                VariableKind::Continuous => {
                    let values = cells
                        .iter()
                        .map(|c| {
                            parse_number(c).ok_or_else(|| {
                                Error::InvalidArgument(format!(
                                    "column `{name}` is continuous but has non-numeric value `{c}`"
                                ))
                            })
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    Column::Continuous(values)
                }
            };
            if !cells.is_empty() && column.is_constant() {
                warnings.push(format!("dropped constant column `{name}`"));
                continue;
            }
            names.push(name.clone());
            columns.push(column);
        }

        let n_rows = kept_rows.len();
        if n_rows < 3 || names.len() < 2 {
            return Err(Error::EmptyDataset {
                rows: n_rows,
                cols: names.len(),
            });
        }
        Ok(Dataset {
            names,
            columns,
            n_rows,
            warnings,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn column(&self, idx: usize) -> &Column {
        &self.columns[idx]
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn tags(&self) -> Vec<KindTag> {
        self.columns.iter().map(Column::tag).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Notes produced while cleaning (dropped columns/rows).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Row subset, e.g. a training split. Level lists are inherited from the
    /// parent, so a level may be unobserved in the subset.
    pub fn subset_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
            n_rows: rows.len(),
            warnings: Vec::new(),
        }
    }

    /// Header and rendered cells, suitable for writing back out.
    pub fn to_raw(&self) -> RawTable {
        RawTable {
            headers: self.names.clone(),
            rows: (0..self.n_rows)
                .map(|r| self.columns.iter().map(|c| c.render(r)).collect())
                .collect(),
        }
    }

    /// Schema pinning every column to its current kind.
    pub fn schema(&self) -> Vec<(String, KindTag)> {
        self.names
            .iter()
            .cloned()
            .zip(self.columns.iter().map(Column::tag))
            .collect()
    }
}

fn check_unique(names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateColumn(n.clone()));
        }
    }
    Ok(())
}
