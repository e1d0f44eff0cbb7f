//! Ordinary least squares with dummy-coded factors and coefficient inference.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use libm::sqrt;

use crate::dataset::{Column, Dataset};
use crate::dist::t_two_sided_p;
use crate::error::{Error, Result};
use crate::linalg::{least_squares, Matrix, Singular};

pub const INTERCEPT: &str = "(Intercept)";

/// Design columns contributed by one source variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegressorGroup {
    pub variable: String,
    /// Column range in the design matrix (the intercept is column 0).
    pub columns: Range<usize>,
}

/// Intercept column followed by the encoded regressors, plus the response.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub response: String,
    pub x: Matrix,
    pub y: Vec<f64>,
    pub column_names: Vec<String>,
    pub groups: Vec<RegressorGroup>,
}

impl Design {
    pub fn n_obs(&self) -> usize {
        self.x.rows()
    }

    /// Number of regressor columns, intercept excluded.
    pub fn n_regressors(&self) -> usize {
        self.x.cols() - 1
    }

    pub fn variables(&self) -> Vec<String> {
        self.groups.iter().map(|g| g.variable.clone()).collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> Design {
        Design {
            response: self.response.clone(),
            x: self.x.select_rows(rows),
            y: rows.iter().map(|&r| self.y[r]).collect(),
            column_names: self.column_names.clone(),
            groups: self.groups.clone(),
        }
    }
}

/// Continuous regressors enter as-is; a discrete regressor with `L` levels
/// contributes `L - 1` indicator columns named `var=level`, with the first
/// level as reference.
pub fn design_matrix<S: AsRef<str>>(ds: &Dataset, response: &str, regressors: &[S]) -> Result<Design> {
    let ri = ds.index_of(response)?;
    let y = match ds.column(ri) {
        Column::Continuous(v) => v.clone(),
        Column::Discrete { .. } => return Err(Error::DiscreteResponse(response.to_string())),
    };
    let n = ds.n_rows();
    let mut columns = vec![vec![1.0; n]];
    let mut column_names = vec![INTERCEPT.to_string()];
    let mut groups = Vec::new();
    for name in regressors {
        let name = name.as_ref();
        let idx = ds.index_of(name)?;
        if idx == ri {
            return Err(Error::InvalidArgument(format!(
                "response `{response}` cannot also be a regressor"
            )));
        }
        let start = columns.len();
        match ds.column(idx) {
            Column::Continuous(v) => {
                columns.push(v.clone());
                column_names.push(name.to_string());
            }
            Column::Discrete { levels, codes } => {
                for (li, level) in levels.iter().enumerate().skip(1) {
                    columns.push(codes.iter().map(|&c| if c == li { 1.0 } else { 0.0 }).collect());
                    column_names.push(format!("{name}={level}"));
                }
            }
        }
        groups.push(RegressorGroup {
            variable: name.to_string(),
            columns: start..columns.len(),
        });
    }
    Ok(Design {
        response: response.to_string(),
        x: Matrix::from_columns(&columns),
        y,
        column_names,
        groups,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFit {
    pub response: String,
    /// Source variables of the regressors, in design order.
    pub variables: Vec<String>,
    pub groups: Vec<RegressorGroup>,
    /// Intercept first, then one entry per design column.
    pub coefficients: Vec<Coefficient>,
    pub rss: f64,
    pub tss: f64,
    pub r2: f64,
    pub r2_adjusted: f64,
    /// `rss / (n - o - 1)`.
    pub mse: f64,
    pub n_obs: usize,
    /// Regressor columns, intercept excluded.
    pub o: usize,
}

impl ModelFit {
    pub fn estimates(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.estimate).collect()
    }

    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    pub fn predict(&self, x: &Matrix) -> Vec<f64> {
        x.mul_vec(&self.estimates())
    }

    /// Smallest p-value among a variable's design columns.
    pub fn group_p_value(&self, group: &RegressorGroup) -> f64 {
        self.coefficients[group.columns.clone()]
            .iter()
            .map(|c| c.p_value)
            .fold(f64::INFINITY, f64::min)
    }

    /// `(n - 1) / TSS`, so that `r2_adjusted = 1 - mse * c`.
    pub fn c(&self) -> f64 {
        (self.n_obs as f64 - 1.0) / self.tss
    }
}

fn singular_error(design: &Design, s: Singular) -> Error {
    Error::SingularDesign {
        columns: s.0.iter().map(|&j| design.column_names[j].clone()).collect(),
    }
}

pub fn total_sum_of_squares(y: &[f64]) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    y.iter().map(|v| (v - mean) * (v - mean)).sum()
}

pub fn ols_fit(design: &Design) -> Result<ModelFit> {
    let n = design.n_obs();
    let o = design.n_regressors();
    if n <= o + 1 {
        return Err(Error::TooFewRows {
            needed: o + 2,
            found: n,
        });
    }
    let ls = least_squares(&design.x, &design.y).map_err(|s| singular_error(design, s))?;
    let dof = (n - o - 1) as f64;
    let mse = ls.rss / dof;
    let tss = total_sum_of_squares(&design.y);
    let c = (n as f64 - 1.0) / tss;
    let coefficients = ls
        .coefficients
        .iter()
        .zip(ls.unscaled_variances())
        .zip(&design.column_names)
        .map(|((&b, v), name)| {
            let se = sqrt(mse * v);
            let t = b / se;
            Coefficient {
                name: name.clone(),
                estimate: b,
                std_error: se,
                t_value: t,
                p_value: t_two_sided_p(t, dof),
            }
        })
        .collect();
    Ok(ModelFit {
        response: design.response.clone(),
        variables: design.variables(),
        groups: design.groups.clone(),
        coefficients,
        rss: ls.rss,
        tss,
        r2: 1.0 - ls.rss / tss,
        r2_adjusted: 1.0 - mse * c,
        mse,
        n_obs: n,
        o,
    })
}

/// R-style significance code for a p-value.
pub fn signif_code(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else if p < 0.1 {
        "."
    } else {
        ""
    }
}
