//! Composite-index construction: objective indicator weighting (inverse
//! variance, entropy, PCA, DEA, CRITIC), weighted-sum aggregation and a
//! seeded Monte Carlo harness for comparing the methods.
//!
//! The usual pipeline is
//!
//! ```
//! use indexforge_core::dataset::IndicatorMatrix;
//! use indexforge_core::weighting::{composite_index, critic_weights};
//!
//! let csv = "id,a,b\ns1,1,4\ns2,2,1\ns3,3,3\ns4,0,2\n";
//! let data = IndicatorMatrix::load_csv(csv.as_bytes())?.min_max_scale()?;
//! let (weights, _) = critic_weights(&data)?;
//! let index = composite_index(&data, &weights)?;
//! assert_eq!(index.len(), 4);
//! # Ok::<(), indexforge_core::Error>(())
//! ```

pub mod dataset;
mod error;
pub mod lp;
pub mod numerics;
pub mod scenarios;
pub mod simulation;
pub mod weighting;

pub use error::{Error, Result};
