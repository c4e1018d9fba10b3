//! DEA-based weighting.
//!
//! Each system is a decision-making unit with a dummy unit input and the
//! indicators as outputs. For unit `k` the LP
//!
//! ```text
//! maximize   sum_i w_i x_ik
//! subject to sum_i w_i x_ij <= 1   for every unit j
//!            w_i >= epsilon
//! ```
//!
//! gives its most favorable weights and its efficiency. The per-unit optima
//! are averaged and renormalized into one global weight vector. When a unit
//! has several optimal weight vectors, symmetric secondary goals (see
//! `solve_unit`) choose among them, which keeps the averaged weights
//! independent of indicator order.

use rayon::prelude::*;
use serde::Serialize;

use super::{Method, WeightVector};
use crate::dataset::IndicatorMatrix;
use crate::error::{Error, Result};
use crate::lp::{solve, LpProblem, LpStatus};
use crate::numerics::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeaResult {
    /// Row `k` holds the optimal weights of unit `k`.
    pub per_dmu_weights: Matrix,
    pub efficiencies: Vec<f64>,
    pub averaged_weights: WeightVector,
    pub epsilon: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "DEA epsilon must be positive, got {epsilon}"
        )))
    }
}

fn epsilon_too_large(epsilon: f64) -> Error {
    Error::Config(format!(
        "DEA epsilon too large: lower bound {epsilon:e} makes the weight LP infeasible; use a smaller epsilon"
    ))
}

/// Relative slack allowed on an already-optimized goal in later stages.
const FACE_TOL: f64 = 1e-12;

/// Solves the per-unit LP for unit `k` of `x` (systems in rows).
///
/// Efficient units usually have a whole face of optimal weights, so the
/// returned weights are picked lexicographically: first the unit's own
/// efficiency, then the total weighted output of all units (the benevolent
/// secondary goal), then the plain sum of weights. Each later goal is
/// optimized with the earlier ones held at their optimum. All three goals
/// treat indicators symmetrically, so the choice does not depend on column
/// order.
fn solve_unit(x: &Matrix, k: usize, epsilon: f64) -> Result<(Vec<f64>, f64)> {
    let n = x.cols();
    let units = x.rows();
    let own = x.row(k).to_vec();
    let benevolent: Vec<f64> = (0..n).map(|i| x.column(i).iter().sum()).collect();
    // Indicators that are zero everywhere stay at epsilon.
    let total: Vec<f64> = benevolent
        .iter()
        .map(|&s| if s > 0.0 { 1.0 } else { 0.0 })
        .collect();

    let mut rows: Vec<Vec<f64>> = (0..units).map(|j| x.row(j).to_vec()).collect();
    let mut rhs = vec![1.0; units];
    let mut theta = 0.0;
    let mut weights = Vec::new();
    for (stage, goal) in [own, benevolent, total].into_iter().enumerate() {
        let problem = LpProblem::new(
            goal.clone(),
            Matrix::from_rows(&rows)?,
            rhs.clone(),
            vec![epsilon; n],
        )?;
        let (w, value) = match_status(k, solve(&problem)?)?;
        if stage == 0 {
            theta = value;
        }
        weights = w;
        rows.push(goal.iter().map(|v| -v).collect());
        rhs.push(-(value - FACE_TOL * value.abs().max(1.0)));
    }
    Ok((weights, theta))
}

fn match_status(k: usize, sol: crate::lp::LpSolution) -> Result<(Vec<f64>, f64)> {
    match sol.status {
        LpStatus::Optimal => Ok((sol.variables, sol.objective_value)),
        LpStatus::Infeasible => Err(Error::Config(format!(
            "DEA epsilon too large: the weight LP for unit {k} is infeasible; use a smaller epsilon"
        ))),
        LpStatus::Unbounded => Err(Error::Numeric {
            message: format!("DEA LP for unit {k} reported unbounded"),
            residual: f64::INFINITY,
        }),
    }
}

pub fn dea_weights(m: &IndicatorMatrix, epsilon: f64) -> Result<DeaResult> {
    m.require_scaled("DEA weighting")?;
    check_epsilon(epsilon)?;
    let x = m.values();
    if x.as_slice().iter().all(|&v| v == 0.0) {
        return Err(Error::degenerate("DEA: every indicator value is zero"));
    }
    for k in 0..x.rows() {
        let row_sum: f64 = x.row(k).iter().sum();
        if epsilon * row_sum > 1.0 {
            return Err(epsilon_too_large(epsilon));
        }
    }

    let solved: Vec<(Vec<f64>, f64)> = (0..x.rows())
        .into_par_iter()
        .map(|k| solve_unit(x, k, epsilon))
        .collect::<Result<_>>()?;

    let n = x.cols();
    let mut per_dmu = Matrix::zeros(x.rows(), n);
    let mut efficiencies = Vec::with_capacity(x.rows());
    for (k, (w, theta)) in solved.into_iter().enumerate() {
        for (i, wi) in w.into_iter().enumerate() {
            per_dmu[(k, i)] = wi;
        }
        efficiencies.push(theta);
    }
    let mean: Vec<f64> = (0..n)
        .map(|i| per_dmu.column(i).iter().sum::<f64>() / x.rows() as f64)
        .collect();
    let averaged_weights = WeightVector::from_scores(Method::Dea, m.indicator_names(), &mean)?;
    Ok(DeaResult {
        per_dmu_weights: per_dmu,
        efficiencies,
        averaged_weights,
        epsilon,
    })
}

/// CCR efficiency scores for general inputs (units in rows, one column per
/// input) and outputs (one column per output), via the Charnes-Cooper
/// linearization with input and output weights bounded below by `epsilon`.
pub fn dea_efficiency(inputs: &Matrix, outputs: &Matrix, epsilon: f64) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    let units = inputs.rows();
    if outputs.rows() != units {
        return Err(Error::usage(format!(
            "{units} units of inputs but {} units of outputs",
            outputs.rows()
        )));
    }
    if inputs
        .as_slice()
        .iter()
        .chain(outputs.as_slice())
        .any(|&v| v < 0.0)
    {
        return Err(Error::Domain("DEA data must be non-negative".into()));
    }
    if let Some(k) = (0..units).find(|&k| inputs.row(k).iter().all(|&v| v == 0.0)) {
        return Err(Error::Domain(format!("unit {k} has all-zero inputs")));
    }
    let s = outputs.cols();
    let q = inputs.cols();
    let vars = s + q;

    (0..units)
        .into_par_iter()
        .map(|k| {
            // Variables: output weights u (s), then input weights v (q).
            let mut objective = vec![0.0; vars];
            objective[..s].copy_from_slice(outputs.row(k));
            let mut rows: Vec<Vec<f64>> = Vec::with_capacity(units + 2);
            let mut rhs = Vec::with_capacity(units + 2);
            let mut normalization = vec![0.0; vars];
            normalization[s..].copy_from_slice(inputs.row(k));
            rows.push(normalization.clone());
            rhs.push(1.0);
            rows.push(normalization.iter().map(|v| -v).collect());
            rhs.push(-1.0);
            for j in 0..units {
                let mut row = vec![0.0; vars];
                row[..s].copy_from_slice(outputs.row(j));
                for (r, z) in row[s..].iter_mut().zip(inputs.row(j)) {
                    *r = -z;
                }
                rows.push(row);
                rhs.push(0.0);
            }
            let problem = LpProblem::new(
                objective,
                Matrix::from_rows(&rows)?,
                rhs,
                vec![epsilon; vars],
            )?;
            let sol = solve(&problem)?;
            match sol.status {
                LpStatus::Optimal => Ok(sol.objective_value),
                LpStatus::Infeasible => Err(epsilon_too_large(epsilon)),
                LpStatus::Unbounded => Err(Error::Numeric {
                    message: format!("DEA efficiency LP for unit {k} reported unbounded"),
                    residual: f64::INFINITY,
                }),
            }
        })
        .collect()
}
