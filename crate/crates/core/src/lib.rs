//! Tridiagonal beta-ensemble samplers and the machinery for checking
//! stochastic domination of their largest eigenvalues.
//!
//! The crate is organised bottom-up:
//!
//! - [`rng`]: seeded, splittable streams plus the normal / gamma / chi /
//!   exponential samplers and the chi quantile coupling.
//! - [`tridiag`]: Sturm-count bisection for extremal eigenvalues of
//!   symmetric tridiagonal matrices and inverse iteration for the top
//!   eigenvector.
//! - [`ensembles`]: Hermite and Laguerre tridiagonal models, their
//!   entrywise couplings across `beta`, and the edge scalings.
//! - [`operator`]: finite-difference discretisation of the stochastic
//!   operators whose ground states give the higher-order Tracy-Widom laws,
//!   with the rescaling and Loewner-gap construction used to order them.
//! - [`lpp`]: exponential last-passage percolation simulators.
//! - [`stats`] and [`mc`]: empirical distributions, Kolmogorov-Smirnov
//!   statistics, pathwise reports and the replica driver.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensembles;
pub mod error;
pub mod lpp;
pub mod mc;
pub mod operator;
pub mod rng;
pub mod special;
pub mod stats;
pub mod tridiag;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use stats::{DominanceReport, EmpiricalDistribution};
pub use tridiag::SymTridiagonal;
