use serde::Serialize;

use super::{WeightVector, SIMPLEX_TOL};
use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};

/// Values closer than this are ranked as ties.
const TIE_TOL: f64 = 1e-12;

/// Weighted-sum index `I_k = sum_i w_i x_ik` for every system.
pub fn composite_index(m: &IndicatorMatrix, w: &WeightVector) -> Result<Vec<f64>> {
    weighted_sum_index(m, w.weights())
}

/// Same as [`composite_index`] for a bare weight slice, which must be
/// non-negative and sum to one.
pub fn weighted_sum_index(m: &IndicatorMatrix, weights: &[f64]) -> Result<Vec<f64>> {
    m.require_scaled("composite index")?;
    if weights.len() != m.num_indicators() {
        return Err(Error::usage(format!(
            "{} weights for {} indicators",
            weights.len(),
            m.num_indicators()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::usage(format!("invalid weight {w}")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::usage(format!("weights sum to {sum}, expected 1")));
    }
    Ok((0..m.num_systems())
        .map(|k| {
            let v: f64 = m
                .values()
                .row(k)
                .iter()
                .zip(weights)
                .map(|(x, w)| x * w)
                .sum();
            v.clamp(0.0, 1.0)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    /// 1-based competition rank; tied systems share the best rank.
    pub rank: usize,
    pub system_id: String,
    pub value: f64,
    pub tied: bool,
}

/// Orders systems by descending index value. Ties (within 1e-12) are listed
/// in ascending id order and flagged.
pub fn rank_systems<S: AsRef<str>>(index: &[f64], ids: &[S]) -> Result<Vec<RankEntry>> {
    if index.len() != ids.len() {
        return Err(Error::usage(format!(
            "{} index values for {} systems",
            index.len(),
            ids.len()
        )));
    }
    let mut order: Vec<usize> = (0..index.len()).collect();
    order.sort_by(|&a, &b| {
        index[b]
            .total_cmp(&index[a])
            .then_with(|| ids[a].as_ref().cmp(ids[b].as_ref()))
    });

    let mut out = Vec::with_capacity(order.len());
    let mut start = 0;
    while start < order.len() {
        let head = index[order[start]];
        let mut end = start + 1;
        while end < order.len() && head - index[order[end]] <= TIE_TOL {
            end += 1;
        }
        let group = &mut order[start..end];
        group.sort_by(|&a, &b| ids[a].as_ref().cmp(ids[b].as_ref()));
        let tied = group.len() > 1;
        for &k in group.iter() {
            out.push(RankEntry {
                rank: start + 1,
                system_id: ids[k].as_ref().to_string(),
                value: index[k],
                tied,
            });
        }
        start = end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Matrix;
    use crate::weighting::Method;

    fn scaled_rows(rows: &[&[f64]]) -> IndicatorMatrix {
        IndicatorMatrix::scaled_with_default_labels(Matrix::from_rows(rows).unwrap()).unwrap()
    }

    fn weights(w: &[f64]) -> WeightVector {
        let names = (1..=w.len()).map(|i| format!("X{i}")).collect();
        WeightVector::new(Method::Var, names, w.to_vec()).unwrap()
    }

    #[test]
    fn unit_weight_selects_column() {
        let m = scaled_rows(&[&[0.1, 0.9, 0.5], &[0.7, 0.2, 0.0]]);
        assert_eq!(
            composite_index(&m, &weights(&[1.0, 0.0, 0.0])).unwrap(),
            vec![0.1, 0.7]
        );
    }

    #[test]
    fn uniform_weights_on_antisymmetric_rows() {
        let m = scaled_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(
            composite_index(&m, &weights(&[0.5, 0.5])).unwrap(),
            vec![0.5, 0.5]
        );
    }

    #[test]
    fn direct_weighted_sum() {
        let m = scaled_rows(&[&[0.5, 1.0]]);
        let idx = composite_index(&m, &weights(&[0.8, 0.2])).unwrap();
        assert!((idx[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let m = scaled_rows(&[&[0.5, 1.0]]);
        assert!(composite_index(&m, &weights(&[1.0])).is_err());
    }

    #[test]
    fn ranking() {
        let r = rank_systems(&[0.2, 0.9, 0.5], &["a", "b", "c"]).unwrap();
        let ids: Vec<_> = r.iter().map(|e| e.system_id.as_str()).collect();
        assert_eq!(ids, ["b", "c", "a"]);
        assert_eq!(r.iter().map(|e| e.rank).collect::<Vec<_>>(), [1, 2, 3]);
        assert!(r.iter().all(|e| !e.tied));
    }

    #[test]
    fn ties_in_id_order() {
        let r = rank_systems(&[0.5, 0.5, 0.7], &["z", "m", "q"]).unwrap();
        let ids: Vec<_> = r.iter().map(|e| e.system_id.as_str()).collect();
        assert_eq!(ids, ["q", "m", "z"]);
        assert_eq!(r.iter().map(|e| e.rank).collect::<Vec<_>>(), [1, 2, 2]);
        assert_eq!(
            r.iter().map(|e| e.tied).collect::<Vec<_>>(),
            [false, true, true]
        );
    }

    #[test]
    fn singleton_and_mismatch() {
        let r = rank_systems(&[0.3], &["only"]).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].rank, 1);
        assert!(!r[0].tied);
        assert!(rank_systems(&[0.3, 0.1], &["only"]).is_err());
    }
}
