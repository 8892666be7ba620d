//! Covariance estimation in the singular case `n < p` by regularizing the
//! partial Cholesky factor of the sample scatter matrix, together with the
//! Monte-Carlo machinery used to measure Stein risk.

pub mod error;
pub mod estimators;
pub mod evaluation;
pub mod experiments;
pub mod linalg;
pub mod synthetic;

pub use error::{Error, Result};
