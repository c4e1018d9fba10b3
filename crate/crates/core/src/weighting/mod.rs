//! Objective indicator-weighting methods and composite-index aggregation.
//!
//! All methods take a min-max scaled [`IndicatorMatrix`] and return a
//! [`WeightVector`] on the probability simplex, plus method-specific
//! diagnostics.

mod critic;
mod dea;
mod entropy;
mod index;
mod pca;
mod variance;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};

pub use critic::{critic_weights, CriticStats};
pub use dea::{dea_efficiency, dea_weights, DeaResult};
pub use entropy::{entropy_weights, EntropyStats};
pub use index::{composite_index, rank_systems, weighted_sum_index, RankEntry};
pub use pca::{first_pc_index, pca_decompose, pca_weights, PcaDecomposition};
pub use variance::inverse_variance_weights;

pub const DEFAULT_ENTROPY_EPSILON: f64 = 1e-12;
pub const DEFAULT_DEA_EPSILON: f64 = 1e-6;

/// Tolerance on `sum(w) = 1`.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Var,
    Ent,
    Pca,
    Critic,
    Dea,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Var,
        Method::Ent,
        Method::Pca,
        Method::Critic,
        Method::Dea,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Var => "VAR",
            Method::Ent => "ENT",
            Method::Pca => "PCA",
            Method::Critic => "CRITIC",
            Method::Dea => "DEA",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "VAR" => Ok(Method::Var),
            "ENT" => Ok(Method::Ent),
            "PCA" => Ok(Method::Pca),
            "CRITIC" => Ok(Method::Critic),
            "DEA" => Ok(Method::Dea),
            other => Err(Error::usage(format!(
                "unknown method '{other}' (expected var, ent, pca, critic or dea)"
            ))),
        }
    }
}

/// Non-negative indicator weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    method: Method,
    indicator_names: Vec<String>,
    weights: Vec<f64>,
}

impl WeightVector {
    /// Checks non-negativity and `sum = 1` within [`SIMPLEX_TOL`].
    pub fn new(method: Method, indicator_names: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if indicator_names.len() != weights.len() {
            return Err(Error::usage(format!(
                "{} indicator names for {} weights",
                indicator_names.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::usage(format!("invalid weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::usage(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self {
            method,
            indicator_names,
            weights,
        })
    }

    /// Normalizes non-negative scores to sum to one.
    pub(crate) fn from_scores(
        method: Method,
        indicator_names: &[String],
        scores: &[f64],
    ) -> Result<Self> {
        let total: f64 = scores.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::degenerate(format!(
                "{method}: weight scores sum to {total}"
            )));
        }
        let weights = scores.iter().map(|s| s / total).collect();
        Self::new(method, indicator_names.to_vec(), weights)
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn indicator_names(&self) -> &[String] {
        &self.indicator_names
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Parameters shared by the weighting front ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightingOptions {
    pub entropy_epsilon: f64,
    pub dea_epsilon: f64,
    /// Retained principal components for PCA weights.
    pub pca_components: usize,
}

impl Default for WeightingOptions {
    fn default() -> Self {
        Self {
            entropy_epsilon: DEFAULT_ENTROPY_EPSILON,
            dea_epsilon: DEFAULT_DEA_EPSILON,
            pca_components: 1,
        }
    }
}

/// Method-specific intermediate results.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Variance {
        variances: Vec<f64>,
    },
    Entropy(EntropyStats),
    Pca {
        components: usize,
        decomposition: PcaDecomposition,
    },
    Critic(CriticStats),
    Dea {
        efficiencies: Vec<f64>,
        per_dmu_weights: Vec<Vec<f64>>,
        epsilon: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightOutcome {
    pub weights: WeightVector,
    pub diagnostics: Diagnostics,
}

/// Conventions that the output of a method depends on and that a reader of a
/// report needs to know about.
pub fn method_metadata(method: Method, options: &WeightingOptions) -> Vec<(&'static str, String)> {
    match method {
        Method::Var => vec![("variance_denominator", "n-1".into())],
        Method::Ent => vec![
            ("entropy_epsilon", format!("{:e}", options.entropy_epsilon)),
            ("all_zero_column_entropy", "1".into()),
        ],
        Method::Pca => vec![
            ("pca_loading_convention", "absolute".into()),
            ("pca_matrix", "covariance of min-max scaled data".into()),
            ("pca_components", options.pca_components.to_string()),
            ("eigenvector_sign", "largest-magnitude entry non-negative".into()),
        ],
        Method::Critic => vec![("zero_variance_correlation", "0".into())],
        Method::Dea => vec![
            ("dea_epsilon", format!("{:e}", options.dea_epsilon)),
            ("dea_model", "CCR output-oriented, dummy unit input".into()),
            (
                "dea_alternative_optima",
                "lexicographic: own efficiency, then total weighted output of all units, then total weight; averaged weights depend on this choice".into(),
            ),
        ],
    }
}

/// Runs one method on a scaled matrix.
pub fn compute_weights(
    method: Method,
    m: &IndicatorMatrix,
    options: &WeightingOptions,
) -> Result<WeightOutcome> {
    let (weights, diagnostics) = match method {
        Method::Var => {
            let w = inverse_variance_weights(m)?;
            let variances = (0..m.num_indicators())
                .map(|j| crate::numerics::column_stats(m.values(), j).map(|s| s.variance))
                .collect::<Result<Vec<_>>>()?;
            (w, Diagnostics::Variance { variances })
        }
        Method::Ent => {
            let (w, stats) = entropy_weights(m, options.entropy_epsilon)?;
            (w, Diagnostics::Entropy(stats))
        }
        Method::Pca => {
            let d = pca_decompose(m)?;
            let w = pca_weights(&d, options.pca_components)?;
            (
                w,
                Diagnostics::Pca {
                    components: options.pca_components,
                    decomposition: d,
                },
            )
        }
        Method::Critic => {
            let (w, stats) = critic_weights(m)?;
            (w, Diagnostics::Critic(stats))
        }
        Method::Dea => {
            let r = dea_weights(m, options.dea_epsilon)?;
            let per_dmu_weights = (0..r.per_dmu_weights.rows())
                .map(|k| r.per_dmu_weights.row(k).to_vec())
                .collect();
            (
                r.averaged_weights,
                Diagnostics::Dea {
                    efficiencies: r.efficiencies,
                    per_dmu_weights,
                    epsilon: r.epsilon,
                },
            )
        }
    };
    Ok(WeightOutcome {
        weights,
        diagnostics,
    })
}
