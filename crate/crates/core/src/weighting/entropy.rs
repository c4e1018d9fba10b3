use serde::Serialize;

use super::{Method, WeightVector};
use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};
use crate::numerics::Matrix;

const MIN_DIVERSITY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyStats {
    /// `p(x_ik)`, same shape as the input.
    pub proportions: Matrix,
    /// Normalized entropy per indicator.
    pub entropies: Vec<f64>,
    pub epsilon: f64,
    /// Indicators that were all zero and received entropy 1.
    pub zero_columns: Vec<String>,
}

/// Entropy weights.
///
/// Each column is turned into proportions `p_k = x_k / sum x`, its entropy is
/// `H = -(1 / ln m) sum p ln(p + epsilon)` and the weights are proportional
/// to `1 - H`. An all-zero column has no proportions and is given `H = 1`.
pub fn entropy_weights(m: &IndicatorMatrix, epsilon: f64) -> Result<(WeightVector, EntropyStats)> {
    m.require_scaled("entropy weighting")?;
    if m.num_systems() < 2 {
        return Err(Error::usage("entropy weighting needs at least two systems"));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::usage(format!(
            "entropy epsilon must be positive, got {epsilon}"
        )));
    }
    let rows = m.num_systems();
    let log_m = (rows as f64).ln();
    let mut proportions = Matrix::zeros(rows, m.num_indicators());
    let mut entropies = Vec::with_capacity(m.num_indicators());
    let mut zero_columns = Vec::new();

    for (j, name) in m.indicator_names().iter().enumerate() {
        let col = m.values().column(j);
        let total: f64 = col.iter().sum();
        if total <= 0.0 {
            log::warn!("ENT: indicator '{name}' is all zeros; entropy set to 1");
            zero_columns.push(name.clone());
            entropies.push(1.0);
            continue;
        }
        let mut h = 0.0;
        for (k, &x) in col.iter().enumerate() {
            let p = x / total;
            proportions[(k, j)] = p;
            h -= p * (p + epsilon).ln();
        }
        // ln(1 + epsilon) can push a point mass a hair below zero.
        entropies.push((h / log_m).max(0.0));
    }

    let diversity: Vec<f64> = entropies.iter().map(|h| (1.0 - h).max(0.0)).collect();
    // A uniform column still has 1 - H = ln(1 + m eps) / ln m because of the
    // epsilon inside the logarithm; anything at or below that is uniform.
    let uniform_floor = (rows as f64 * epsilon).ln_1p() / log_m;
    let floor = MIN_DIVERSITY + uniform_floor * m.num_indicators() as f64;
    if diversity.iter().sum::<f64>() <= floor {
        return Err(Error::degenerate(
            "ENT: every indicator has maximal entropy; no indicator carries information",
        ));
    }
    let w = WeightVector::from_scores(Method::Ent, m.indicator_names(), &diversity)?;
    Ok((
        w,
        EntropyStats {
            proportions,
            entropies,
            epsilon,
            zero_columns,
        },
    ))
}
