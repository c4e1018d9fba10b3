use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};

/// Variances at or below this are treated as zero.
pub(crate) const ZERO_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub variance: f64,
    pub stddev: f64,
}

/// Mean and sample variance (denominator `rows - 1`) of one column.
/// A single-row matrix has variance 0.
pub fn column_stats(m: &Matrix, col: usize) -> Result<ColumnStats> {
    if col >= m.cols() {
        return Err(Error::usage(format!(
            "column {col} out of range for {} columns",
            m.cols()
        )));
    }
    if m.rows() == 0 {
        return Err(Error::usage("column statistics need at least one row"));
    }
    Ok(slice_stats(&m.column(col)))
}

pub(crate) fn slice_stats(values: &[f64]) -> ColumnStats {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let variance = if n >= 2 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    ColumnStats {
        mean,
        variance,
        stddev: variance.sqrt(),
    }
}

/// Sample covariance matrix of the columns.
pub fn covariance_matrix(m: &Matrix) -> Result<Matrix> {
    if m.rows() < 2 {
        return Err(Error::usage("covariance needs at least two rows"));
    }
    let n = m.cols();
    let means: Vec<f64> = (0..n).map(|j| slice_stats(&m.column(j)).mean).collect();
    let denom = (m.rows() - 1) as f64;
    let mut cov = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let s: f64 = (0..m.rows())
                .map(|k| (m[(k, a)] - means[a]) * (m[(k, b)] - means[b]))
                .sum();
            cov[(a, b)] = s / denom;
            cov[(b, a)] = s / denom;
        }
    }
    Ok(cov)
}

/// Pearson correlation matrix of the columns.
///
/// A column whose variance is zero has correlation 0 with every column,
/// itself included.
pub fn pearson_correlation_matrix(m: &Matrix) -> Result<Matrix> {
    if m.rows() < 2 {
        return Err(Error::usage("correlation needs at least two rows"));
    }
    let cov = covariance_matrix(m)?;
    let n = m.cols();
    let sd: Vec<Option<f64>> = (0..n)
        .map(|j| {
            let v = cov[(j, j)];
            (v > ZERO_VARIANCE).then(|| v.sqrt())
        })
        .collect();
    for (j, s) in sd.iter().enumerate() {
        if s.is_none() {
            log::warn!("column {j} has zero variance; its correlations are set to 0");
        }
    }
    let mut r = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = match (sd[a], sd[b]) {
                (Some(_), Some(_)) if a == b => 1.0,
                (Some(sa), Some(sb)) => (cov[(a, b)] / (sa * sb)).clamp(-1.0, 1.0),
                _ => 0.0,
            };
            r[(a, b)] = v;
            r[(b, a)] = v;
        }
    }
    Ok(r)
}

/// Quantiles by linear interpolation between order statistics, with the
/// position of probability `p` at `p * (n - 1)`.
pub fn quantiles(sample: &[f64], probs: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::usage("quantiles of an empty sample"));
    }
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::usage(format!("probability {p} outside [0, 1]")));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let last = sorted.len() - 1;
    Ok(probs
        .iter()
        .map(|&p| {
            let pos = p * last as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - lo as f64;
            if lo == hi {
                sorted[lo]
            } else {
                sorted[lo] + frac * (sorted[hi] - sorted[lo])
            }
        })
        .collect())
}
