use serde::Serialize;

use super::{Method, WeightVector};
use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};
use crate::numerics::{covariance_matrix, symmetric_eigendecomposition, Matrix};

const MIN_EIGENVALUE: f64 = 1e-12;

/// Principal components of the sample covariance of scaled indicators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaDecomposition {
    /// Variance explained by each component, non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Row `j` holds the loadings of component `j` on each indicator.
    pub loadings: Matrix,
    pub column_means: Vec<f64>,
    pub indicator_names: Vec<String>,
}

impl PcaDecomposition {
    pub fn num_indicators(&self) -> usize {
        self.indicator_names.len()
    }

    pub fn loading(&self, component: usize, indicator: usize) -> f64 {
        self.loadings[(component, indicator)]
    }

    /// Sum of eigenvalues; equals the total variance of the input.
    pub fn total_variance(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

pub fn pca_decompose(m: &IndicatorMatrix) -> Result<PcaDecomposition> {
    m.require_scaled("PCA")?;
    if m.num_systems() < 2 {
        return Err(Error::usage("PCA needs at least two systems"));
    }
    let cov = covariance_matrix(m.values())?;
    let eig = symmetric_eigendecomposition(&cov)?;
    let column_means = (0..m.num_indicators())
        .map(|j| m.values().column(j).iter().sum::<f64>() / m.num_systems() as f64)
        .collect();
    Ok(PcaDecomposition {
        eigenvalues: eig.eigenvalues,
        loadings: eig.eigenvectors.transpose(),
        column_means,
        indicator_names: m.indicator_names().to_vec(),
    })
}

/// Loading-based weights over the first `components` components:
/// `w_i ∝ sum_j |a_ji| lambda_j`.
///
/// Absolute loadings keep every weight non-negative. Eigenvalues that round
/// below zero are treated as zero.
pub fn pca_weights(d: &PcaDecomposition, components: usize) -> Result<WeightVector> {
    let n = d.num_indicators();
    if components == 0 || components > n {
        return Err(Error::usage(format!(
            "PCA components must be between 1 and {n}, got {components}"
        )));
    }
    let retained: Vec<f64> = d.eigenvalues[..components]
        .iter()
        .map(|l| l.max(0.0))
        .collect();
    if retained.iter().all(|&l| l <= MIN_EIGENVALUE) {
        return Err(Error::degenerate(format!(
            "PCA: the first {components} eigenvalue(s) are zero"
        )));
    }
    let scores: Vec<f64> = (0..n)
        .map(|i| {
            retained
                .iter()
                .enumerate()
                .map(|(j, l)| d.loading(j, i).abs() * l)
                .sum()
        })
        .collect();
    WeightVector::from_scores(Method::Pca, &d.indicator_names, &scores)
}

/// First-principal-component index: projections of the centered rows on the
/// first loading vector, min-max scaled to [0, 1].
pub fn first_pc_index(d: &PcaDecomposition, m: &IndicatorMatrix) -> Result<Vec<f64>> {
    m.require_scaled("first-PC index")?;
    if m.num_indicators() != d.num_indicators() {
        return Err(Error::usage(format!(
            "decomposition has {} indicators, matrix has {}",
            d.num_indicators(),
            m.num_indicators()
        )));
    }
    if d.eigenvalues[0] <= MIN_EIGENVALUE {
        return Err(Error::degenerate("PCA: first eigenvalue is zero"));
    }
    let projections: Vec<f64> = (0..m.num_systems())
        .map(|k| {
            m.values()
                .row(k)
                .iter()
                .enumerate()
                .map(|(i, x)| d.loading(0, i) * (x - d.column_means[i]))
                .sum()
        })
        .collect();
    let lo = projections.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = projections
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 0.0 {
        return Err(Error::degenerate(
            "PCA: all systems project to the same point",
        ));
    }
    Ok(projections.iter().map(|p| (p - lo) / (hi - lo)).collect())
}

/// Pre-scaling projections, exposed for tests.
#[cfg(test)]
fn raw_projections(d: &PcaDecomposition, m: &IndicatorMatrix) -> Vec<f64> {
    (0..m.num_systems())
        .map(|k| {
            (0..m.num_indicators())
                .map(|i| d.loading(0, i) * (m.values()[(k, i)] - d.column_means[i]))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled(cols: &[&[f64]]) -> IndicatorMatrix {
        IndicatorMatrix::scaled_with_default_labels(Matrix::from_columns(cols).unwrap()).unwrap()
    }

    #[test]
    fn identical_columns() {
        let c = [0.0, 0.5, 1.0, 0.25];
        let m = scaled(&[&c, &c]);
        let v = crate::numerics::column_stats(m.values(), 0)
            .unwrap()
            .variance;
        let d = pca_decompose(&m).unwrap();
        assert!((d.eigenvalues[0] - 2.0 * v).abs() < 1e-12);
        assert!(d.eigenvalues[1].abs() < 1e-12);
        let h = 0.5f64.sqrt();
        assert!((d.loading(0, 0) - h).abs() < 1e-12 && (d.loading(0, 1) - h).abs() < 1e-12);

        let w = pca_weights(&d, 1).unwrap();
        assert!((w.weights()[0] - 0.5).abs() < 1e-9 && (w.weights()[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn uncorrelated_columns_with_variance_ratio_four() {
        let m = scaled(&[&[0.0, 0.0, 1.0, 1.0], &[0.25, 0.75, 0.25, 0.75]]);
        let d = pca_decompose(&m).unwrap();
        assert!((d.eigenvalues[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 1.0 / 12.0).abs() < 1e-12);
        assert_eq!(d.loadings, Matrix::identity(2));
        let w = pca_weights(&d, 2).unwrap();
        assert!((w.weights()[0] - 0.8).abs() < 1e-9);
        assert!((w.weights()[1] - 0.2).abs() < 1e-9);
    }

    #[test]
    fn single_column() {
        let m = scaled(&[&[0.0, 1.0, 0.5]]);
        let d = pca_decompose(&m).unwrap();
        assert!((d.eigenvalues[0] - 0.25).abs() < 1e-15);
        assert_eq!(d.loadings.as_slice(), &[1.0]);
        assert_eq!(pca_weights(&d, 1).unwrap().weights(), &[1.0]);
        assert_eq!(first_pc_index(&d, &m).unwrap(), vec![0.0, 1.0, 0.5]);
    }

    #[test]
    fn eigenvalues_sum_to_total_variance() {
        let m = scaled(&[
            &[0.0, 0.4, 1.0, 0.7],
            &[1.0, 0.2, 0.0, 0.9],
            &[0.3, 0.3, 1.0, 0.0],
        ]);
        let d = pca_decompose(&m).unwrap();
        let total: f64 = (0..3)
            .map(|j| {
                crate::numerics::column_stats(m.values(), j)
                    .unwrap()
                    .variance
            })
            .sum();
        assert!((d.total_variance() - total).abs() < 1e-9);
    }

    #[test]
    fn first_pc_of_identical_columns_is_the_scaled_column() {
        let c = [0.0, 0.5, 1.0, 0.25];
        let m = scaled(&[&c, &c]);
        let d = pca_decompose(&m).unwrap();
        let idx = first_pc_index(&d, &m).unwrap();
        for (a, b) in idx.iter().zip(c) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn system_at_the_mean_projects_to_zero() {
        // Row 3 equals the column means (0.5, 0.5).
        let m = scaled(&[&[0.0, 1.0, 0.5], &[0.2, 0.8, 0.5]]);
        let d = pca_decompose(&m).unwrap();
        assert!(raw_projections(&d, &m)[2].abs() < 1e-12);
    }

    #[test]
    fn component_bounds_and_degenerate() {
        let m = scaled(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let d = pca_decompose(&m).unwrap();
        assert!(pca_weights(&d, 0).is_err());
        assert!(pca_weights(&d, 3).is_err());

        let flat = scaled(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let d = pca_decompose(&flat).unwrap();
        assert!(matches!(pca_weights(&d, 2), Err(Error::Degenerate(_))));
        assert!(matches!(
            first_pc_index(&d, &flat),
            Err(Error::Degenerate(_))
        ));
    }
}
