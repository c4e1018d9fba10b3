use super::{Method, WeightVector};
use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};
use crate::numerics::column_stats;

const MIN_VARIANCE: f64 = 1e-12;

/// Inverse-variance weights `w_i = sigma_i^-2 / sum_j sigma_j^-2`, using
/// sample variances of the scaled columns.
pub fn inverse_variance_weights(m: &IndicatorMatrix) -> Result<WeightVector> {
    m.require_scaled("inverse-variance weighting")?;
    let mut precision = Vec::with_capacity(m.num_indicators());
    for (j, name) in m.indicator_names().iter().enumerate() {
        let var = column_stats(m.values(), j)?.variance;
        if var <= MIN_VARIANCE {
            return Err(Error::degenerate(format!(
                "VAR: indicator '{name}' has zero variance"
            )));
        }
        precision.push(1.0 / var);
    }
    WeightVector::from_scores(Method::Var, m.indicator_names(), &precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Matrix;

    fn scaled(cols: &[&[f64]]) -> IndicatorMatrix {
        IndicatorMatrix::scaled_with_default_labels(Matrix::from_columns(cols).unwrap()).unwrap()
    }

    #[test]
    fn equal_variances_split_evenly() {
        let w = inverse_variance_weights(&scaled(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(w.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn variance_ratio_one_to_four() {
        // Variances 0.125 and 0.5.
        let w = inverse_variance_weights(&scaled(&[&[0.25, 0.75], &[0.0, 1.0]])).unwrap();
        assert!((w.weights()[0] - 0.8).abs() < 1e-12);
        assert!((w.weights()[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn variance_ratio_one_one_two() {
        let h = 0.5f64.sqrt();
        let w = inverse_variance_weights(&scaled(&[&[0.0, h], &[h, 0.0], &[0.0, 1.0]])).unwrap();
        for (got, want) in w.weights().iter().zip([0.4, 0.4, 0.2]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn zero_variance_is_degenerate() {
        let err = inverse_variance_weights(&scaled(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref s) if s.contains("X2")));
    }

    #[test]
    fn refuses_unscaled() {
        let m = IndicatorMatrix::with_default_labels(Matrix::from_columns(&[[0.0, 1.0]]).unwrap())
            .unwrap();
        assert!(matches!(inverse_variance_weights(&m), Err(Error::Usage(_))));
    }
}
