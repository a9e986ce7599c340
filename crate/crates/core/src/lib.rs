//! Ridge regression with data-driven shrinkage parameters.
//!
//! * [`stochastics`]: seedable standard-normal substreams
//! * [`linalg`]: Jacobi eigensolver, standardization, condition number
//! * [`regression`]: canonical form, ridge fits, theoretical MSE
//! * [`estimators`]: the sixteen ridge-parameter rules
//! * [`simulation`]: the Monte Carlo experiment
//! * [`application`]: real-data MSE tables
//! * [`report`]: CSV and markdown emitters

pub mod application;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod regression;
pub mod report;
pub mod simulation;
pub mod stochastics;

pub use error::{Error, Result};
pub use estimators::{estimate, estimate_all, EstimatorId, KEstimate};
pub use regression::{canonicalize, CanonicalModel, Dataset};
