use serde::Serialize;

use super::{Method, WeightVector};
use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};
use crate::numerics::{column_stats, pearson_correlation_matrix, Matrix};

const MIN_INFORMATION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticStats {
    pub stddevs: Vec<f64>,
    pub correlation: Matrix,
    /// `C_i = sum_j (1 - |r_ij|)`.
    pub conflict: Vec<f64>,
    /// `I_i = sigma_i * C_i`.
    pub information: Vec<f64>,
}

/// CRITIC weights: contrast (standard deviation) times conflict with the
/// other indicators, normalized.
pub fn critic_weights(m: &IndicatorMatrix) -> Result<(WeightVector, CriticStats)> {
    m.require_scaled("CRITIC")?;
    if m.num_systems() < 2 {
        return Err(Error::usage("CRITIC needs at least two systems"));
    }
    let n = m.num_indicators();
    let stddevs = (0..n)
        .map(|j| column_stats(m.values(), j).map(|s| s.stddev))
        .collect::<Result<Vec<_>>>()?;
    let correlation = pearson_correlation_matrix(m.values())?;
    let conflict: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| 1.0 - correlation[(i, j)].abs()).sum())
        .collect();
    let information: Vec<f64> = stddevs.iter().zip(&conflict).map(|(s, c)| s * c).collect();
    if information.iter().sum::<f64>() <= MIN_INFORMATION {
        return Err(Error::degenerate(
            "CRITIC: indicators are constant or perfectly correlated",
        ));
    }
    let w = WeightVector::from_scores(Method::Critic, m.indicator_names(), &information)?;
    Ok((
        w,
        CriticStats {
            stddevs,
            correlation,
            conflict,
            information,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled(cols: &[&[f64]]) -> IndicatorMatrix {
        IndicatorMatrix::scaled_with_default_labels(Matrix::from_columns(cols).unwrap()).unwrap()
    }

    const A: [f64; 4] = [0.0, 0.0, 1.0, 1.0];
    const B: [f64; 4] = [0.0, 1.0, 0.0, 1.0];

    #[test]
    fn uncorrelated_equal_sigma() {
        let (w, stats) = critic_weights(&scaled(&[&A, &B])).unwrap();
        assert_eq!(stats.conflict, vec![1.0, 1.0]);
        assert!((w.weights()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uncorrelated_sigma_ratio_two() {
        let half: Vec<f64> = B.iter().map(|b| 0.25 + 0.5 * b).collect();
        let (w, stats) = critic_weights(&scaled(&[&A, &half])).unwrap();
        assert!((stats.stddevs[0] / stats.stddevs[1] - 2.0).abs() < 1e-12);
        assert!((w.weights()[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((w.weights()[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_pair() {
        let (w, stats) = critic_weights(&scaled(&[&A, &A, &B])).unwrap();
        assert_eq!(stats.conflict, vec![1.0, 1.0, 2.0]);
        for (got, want) in w.weights().iter().zip([0.25, 0.25, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            critic_weights(&scaled(&[&[0.0; 4], &[0.0; 4]])),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            critic_weights(&scaled(&[&A, &A])),
            Err(Error::Degenerate(_))
        ));
    }
}
