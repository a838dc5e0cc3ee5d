//! Bayes factors for one-factor ANOVA and t-tests computed from reported
//! summary statistics.
//!
//! The central quantity is the Pearson Bayes factor ([`pbf::pbf`]), an exact
//! closed form that needs only `F(x, y)` or `t(ν)`. Around it sit the usual
//! comparison methods ([`classic`]), an independent quadrature of the
//! underlying integral ([`oracle`]), and a Monte Carlo accuracy study
//! ([`sim`]).
//!
//! ```
//! use pbf_core::{pbf::pbf_anova, SummaryStat};
//!
//! let stat = SummaryStat::f(7.16, 2.0, 15.0).unwrap();
//! let bf = pbf_anova(&stat, 0.0).unwrap().bf10();
//! assert!((bf - 10.397).abs() < 1e-3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classic;
pub mod cli;
pub mod domain;
pub mod error;
pub mod oracle;
pub mod pbf;
pub mod sim;
pub mod specfun;

pub use domain::{AnovaTable, Evidence, Method, Model, PearsonPrior, StatKind, SummaryStat};
pub use error::{Error, Result};
pub use specfun::Probability;
