//! Pairwise sample mutual information for discrete, continuous and mixed
//! variable pairs.
//!
//! Every estimator is scaled so that twice its value is the likelihood-ratio
//! (deviance) statistic for marginal independence of the pair, and each
//! estimate carries the degrees of freedom of that test. Penalized weights
//! subtract an AIC- or BIC-style multiple of the degrees of freedom.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use libm::{log, log1p, sqrt};

use crate::dataset::{Column, Dataset, KindTag};
use crate::error::Error;

/// Below this value of `1 - rho^2` a continuous pair is treated as exactly
/// collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Relative size of the pooled within-level variance under which a mixed
/// pair counts as perfectly separated.
const SEPARATION_TOL: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Penalty {
    Aic,
    Bic,
}

/// `Paper` subtracts `2k` / `ln(N) k`; `Edwards` subtracts `k` / `ln(N) k / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PenaltyStyle {
    #[default]
    Paper,
    Edwards,
}

/// Whether the variance of the continuous member of a mixed pair is shared
/// by all levels of the discrete member or differs between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VarianceModel {
    #[default]
    Homogeneous,
    Heterogeneous,
}

macro_rules! str_enum {
    ($ty:ident { $($var:ident => $s:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$var => $s),+ }
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($s => Ok($ty::$var),)+
                    other => Err(Error::InvalidArgument(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

str_enum!(Penalty { Aic => "aic", Bic => "bic" });
str_enum!(PenaltyStyle { Paper => "paper", Edwards => "edwards" });
str_enum!(VarianceModel { Homogeneous => "homogeneous", Heterogeneous => "heterogeneous" });

/// Why an estimate is not an ordinary finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiFlag {
    /// A discrete member has a single observed level; `I = 0`, `dof = 0`.
    SingleLevel,
    /// A continuous member is constant; `I = 0`.
    ConstantColumn,
    /// Perfect dependence; `I = +inf`.
    PerfectDependence,
    /// Heterogeneous model was not estimable (a level with fewer than two
    /// observations or zero variance); the homogeneous estimate is reported.
    HeterogeneousFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Sample mutual information in nats, clamped at zero.
    pub i_value: f64,
    pub dof: usize,
    /// Likelihood-ratio statistic, always `2 * i_value`.
    pub deviance: f64,
    pub penalized_aic: f64,
    pub penalized_bic: f64,
    pub n_obs: usize,
    pub flag: Option<MiFlag>,
}

impl MiEstimate {
    pub fn new(i_value: f64, dof: usize, n_obs: usize, style: PenaltyStyle) -> MiEstimate {
        let i_value = if i_value > 0.0 { i_value } else { 0.0 };
        let k = dof as f64;
        let ln_n = log(n_obs as f64);
        let (aic, bic) = match style {
            PenaltyStyle::Paper => (2.0 * k, ln_n * k),
            PenaltyStyle::Edwards => (k, ln_n * k / 2.0),
        };
        MiEstimate {
            i_value,
            dof,
            deviance: 2.0 * i_value,
            penalized_aic: i_value - aic,
            penalized_bic: i_value - bic,
            n_obs,
            flag: None,
        }
    }

    fn flagged(mut self, flag: MiFlag) -> MiEstimate {
        self.flag = Some(flag);
        self
    }

    pub fn penalized(&self, penalty: Penalty) -> f64 {
        match penalty {
            Penalty::Aic => self.penalized_aic,
            Penalty::Bic => self.penalized_bic,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.i_value.is_infinite()
    }
}

/// Dense re-coding of the levels actually observed in `codes`.
fn observed_levels(codes: &[usize]) -> (Vec<usize>, usize) {
    let width = codes.iter().copied().max().map_or(0, |m| m + 1);
    let mut dense = vec![usize::MAX; width];
    let mut next = 0;
    let recoded = codes
        .iter()
        .map(|&c| {
            if dense[c] == usize::MAX {
                dense[c] = next;
                next += 1;
            }
            dense[c]
        })
        .collect();
    (recoded, next)
}

/// Sum of terms in a canonical order, so the result does not depend on
/// which member of the pair came first.
fn canonical_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn check_lengths(a: usize, b: usize) {
    assert_eq!(a, b, "mutual information needs columns of equal length");
}

pub fn mi_discrete_discrete(zu: &[usize], zv: &[usize], style: PenaltyStyle) -> MiEstimate {
    check_lengths(zu.len(), zv.len());
    let n = zu.len();
    let (u, ru) = observed_levels(zu);
    let (v, rv) = observed_levels(zv);
    if ru <= 1 || rv <= 1 {
        return MiEstimate::new(0.0, 0, n, style).flagged(MiFlag::SingleLevel);
    }
    let mut cells = vec![0usize; ru * rv];
    let mut nu = vec![0usize; ru];
    let mut nv = vec![0usize; rv];
    for (&a, &b) in u.iter().zip(&v) {
        cells[a * rv + b] += 1;
        nu[a] += 1;
        nv[b] += 1;
    }
    let nf = n as f64;
    let mut terms = Vec::new();
    for a in 0..ru {
        for b in 0..rv {
            let c = cells[a * rv + b];
            if c > 0 {
                let c = c as f64;
                terms.push(c * log(nf * c / (nu[a] as f64 * nv[b] as f64)));
            }
        }
    }
    MiEstimate::new(canonical_sum(terms), (ru - 1) * (rv - 1), n, style)
}

pub fn mi_continuous_continuous(yu: &[f64], yv: &[f64], style: PenaltyStyle) -> MiEstimate {
    check_lengths(yu.len(), yv.len());
    let n = yu.len();
    let nf = n as f64;
    let mu = yu.iter().sum::<f64>() / nf;
    let mv = yv.iter().sum::<f64>() / nf;
    let (mut suu, mut svv, mut suv) = (0.0, 0.0, 0.0);
    for (&a, &b) in yu.iter().zip(yv) {
        let (da, db) = (a - mu, b - mv);
        suu += da * da;
        svv += db * db;
        suv += da * db;
    }
    if suu == 0.0 || svv == 0.0 {
        return MiEstimate::new(0.0, 1, n, style).flagged(MiFlag::ConstantColumn);
    }
    let rho = suv / sqrt(suu * svv);
    let rho2 = rho * rho;
    if 1.0 - rho2 <= COLLINEAR_TOL {
        return MiEstimate::new(f64::INFINITY, 1, n, style).flagged(MiFlag::PerfectDependence);
    }
    MiEstimate::new(-nf / 2.0 * log1p(-rho2), 1, n, style)
}

pub fn mi_mixed(
    zu: &[usize],
    yv: &[f64],
    model: VarianceModel,
    style: PenaltyStyle,
) -> MiEstimate {
    check_lengths(zu.len(), yv.len());
    let n = zu.len();
    let nf = n as f64;
    let (z, levels) = observed_levels(zu);
    if levels <= 1 {
        return MiEstimate::new(0.0, 0, n, style).flagged(MiFlag::SingleLevel);
    }

    let mut counts = vec![0usize; levels];
    let mut sums = vec![0.0; levels];
    for (&g, &y) in z.iter().zip(yv) {
        counts[g] += 1;
        sums[g] += y;
    }
    let mean = yv.iter().sum::<f64>() / nf;
    let means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let mut within = vec![0.0; levels];
    let mut total = 0.0;
    for (&g, &y) in z.iter().zip(yv) {
        let d = y - means[g];
        within[g] += d * d;
        let d0 = y - mean;
        total += d0 * d0;
    }
    let s0 = total / nf;
    let s = within.iter().sum::<f64>() / nf;

    let homogeneous_dof = levels - 1;
    if s0 == 0.0 {
        return MiEstimate::new(0.0, homogeneous_dof, n, style).flagged(MiFlag::ConstantColumn);
    }
    let homogeneous = || {
        if s <= s0 * SEPARATION_TOL {
            MiEstimate::new(f64::INFINITY, homogeneous_dof, n, style)
                .flagged(MiFlag::PerfectDependence)
        } else {
            MiEstimate::new(nf / 2.0 * log(s0 / s), homogeneous_dof, n, style)
        }
    };

    match model {
        VarianceModel::Homogeneous => homogeneous(),
        VarianceModel::Heterogeneous => {
            let estimable = counts
                .iter()
                .zip(&within)
                .all(|(&c, &w)| c >= 2 && w > s0 * SEPARATION_TOL);
            if !estimable {
                let est = homogeneous();
                return match est.flag {
                    Some(_) => est,
                    None => est.flagged(MiFlag::HeterogeneousFallback),
                };
            }
            let terms = counts
                .iter()
                .zip(&within)
                .map(|(&c, &w)| c as f64 * log(w / c as f64))
                .collect();
            let i = nf / 2.0 * log(s0) - canonical_sum(terms) / 2.0;
            MiEstimate::new(i, 2 * (levels - 1), n, style)
        }
    }
}

/// Dispatches on the kinds of the two columns.
pub fn mi_columns(
    a: &Column,
    b: &Column,
    model: VarianceModel,
    style: PenaltyStyle,
) -> MiEstimate {
    match (a, b) {
        (Column::Discrete { codes: x, .. }, Column::Discrete { codes: y, .. }) => {
            mi_discrete_discrete(x, y, style)
        }
        (Column::Continuous(x), Column::Continuous(y)) => mi_continuous_continuous(x, y, style),
        (Column::Discrete { codes, .. }, Column::Continuous(y))
        | (Column::Continuous(y), Column::Discrete { codes, .. }) => {
            mi_mixed(codes, y, model, style)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MiOptions {
    pub variance_model: VarianceModel,
    pub penalty_style: PenaltyStyle,
}

/// Symmetric table of pairwise estimates; the diagonal is not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MiTable {
    kinds: Vec<KindTag>,
    n_obs: usize,
    /// Row-major upper triangle, `u < v`.
    entries: Vec<MiEstimate>,
}

impl MiTable {
    pub fn from_fn<F>(kinds: Vec<KindTag>, n_obs: usize, mut f: F) -> MiTable
    where
        F: FnMut(usize, usize) -> MiEstimate,
    {
        let p = kinds.len();
        let mut entries = Vec::with_capacity(p * p.saturating_sub(1) / 2);
        for u in 0..p {
            for v in u + 1..p {
                entries.push(f(u, v));
            }
        }
        MiTable {
            kinds,
            n_obs,
            entries,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn kinds(&self) -> &[KindTag] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn offset(&self, u: usize, v: usize) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        assert!(a != b && b < self.n_vars(), "no estimate for pair ({u}, {v})");
        let p = self.n_vars();
        a * (2 * p - a - 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, u: usize, v: usize) -> &MiEstimate {
        &self.entries[self.offset(u, v)]
    }

    /// `(u, v, estimate)` for every pair with `u < v`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &MiEstimate)> + '_ {
        let p = self.n_vars();
        (0..p)
            .flat_map(move |u| (u + 1..p).map(move |v| (u, v)))
            .zip(&self.entries)
            .map(|((u, v), e)| (u, v, e))
    }

    pub fn kind_pair(&self, u: usize, v: usize) -> String {
        let c = |k: KindTag| match k {
            KindTag::Discrete => 'd',
            KindTag::Continuous => 'c',
        };
        format!("{}{}", c(self.kinds[u]), c(self.kinds[v]))
    }
}

pub fn mi_matrix(ds: &Dataset, opts: MiOptions) -> MiTable {
    MiTable::from_fn(ds.tags(), ds.n_rows(), |u, v| {
        mi_columns(
            ds.column(u),
            ds.column(v),
            opts.variance_model,
            opts.penalty_style,
        )
    })
}
