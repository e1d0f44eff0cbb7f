//! Minimal AIC/BIC spanning forests over mixed discrete/continuous data and
//! path-step variable selection for linear models.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`mi`] scores every variable pair by penalized mutual information.
//! 2. [`forest`] keeps the maximum-weight strongly decomposable spanning forest.
//! 3. [`pathsteps`] groups the target's tree into nested distance shells.
//! 4. [`selector`] scores each shell with cross-validated OLS ([`linmodel`],
//!    [`crossval`]) and prunes insignificant regressors from the winner.
//! 5. [`compare`] benchmarks the selected model against a [`lasso`] baseline
//!    on repeated train/test splits.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `bestpath` crate.

#![no_std]

extern crate alloc;

pub mod compare;
pub mod crossval;
pub mod dataset;
pub mod dist;
pub mod error;
pub mod forest;
pub mod lasso;
pub mod linalg;
pub mod linmodel;
pub mod mi;
pub mod pathsteps;
pub mod rng;
pub mod selector;

pub use dataset::{Column, Dataset, KindTag, RawTable, VariableKind};
pub use error::{Error, Result};
pub use forest::Forest;
pub use mi::{MiEstimate, MiTable, Penalty, PenaltyStyle, VarianceModel};
pub use pathsteps::PathSteps;
pub use selector::{SelectConfig, SelectionReport};
