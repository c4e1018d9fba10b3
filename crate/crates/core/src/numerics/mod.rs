//! Dense linear algebra and descriptive statistics shared by the weighting
//! methods, the scenario generators and the simulation harness.
//!
//! Everything here is a pure function of its inputs. Results are
//! bit-deterministic for a given input on a given platform.

mod decomp;
mod matrix;
mod stats;

pub use decomp::{cholesky, symmetric_eigendecomposition, EigenResult};
pub use matrix::Matrix;
pub use stats::{
    column_stats, covariance_matrix, pearson_correlation_matrix, quantiles, ColumnStats,
};
