//! Dense two-phase simplex for small linear programs of the form
//!
//! ```text
//! maximize c.w  subject to  A w <= b,  w >= lb
//! ```
//!
//! Lower bounds are removed by the shift `w = lb + w'`. Rows whose shifted
//! right-hand side is negative are flipped and get an artificial variable,
//! which phase one drives to zero. Both phases pivot with Bland's rule, so the
//! returned vertex is a deterministic function of the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

const PIVOT_TOL: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-9;
/// Smallest entry accepted when pivoting a zero-level artificial out of the
/// basis; rows with nothing larger are treated as redundant.
const DRIVE_OUT_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Matrix,
    pub rhs: Vec<f64>,
    pub lower_bounds: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point when `status` is `Optimal`, otherwise empty.
    pub variables: Vec<f64>,
    /// `c.w` at the optimum; NaN unless `Optimal`.
    pub objective_value: f64,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            variables: Vec::new(),
            objective_value: f64::NAN,
        }
    }
}

impl LpProblem {
    pub fn new(
        objective: Vec<f64>,
        constraints: Matrix,
        rhs: Vec<f64>,
        lower_bounds: Vec<f64>,
    ) -> Result<Self> {
        let p = Self {
            objective,
            constraints,
            rhs,
            lower_bounds,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let n = self.objective.len();
        if self.constraints.cols() != n || self.lower_bounds.len() != n {
            return Err(Error::usage(format!(
                "LP has {n} objective coefficients, {} constraint columns and {} lower bounds",
                self.constraints.cols(),
                self.lower_bounds.len()
            )));
        }
        if self.constraints.rows() != self.rhs.len() {
            return Err(Error::usage(format!(
                "LP has {} constraint rows but {} right-hand sides",
                self.constraints.rows(),
                self.rhs.len()
            )));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&self.objective) || !finite(&self.rhs) || !finite(&self.lower_bounds) {
            return Err(Error::usage("LP data must be finite"));
        }
        Ok(())
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }
}

/// Dense tableau. Column layout: structural variables, one slack per row,
/// then artificials. The last entry of every row is the right-hand side.
struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
    pivot_limit: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.pivot_limit {
            return Err(Error::Numeric {
                message: format!("simplex exceeded {} pivots", self.pivot_limit),
                residual: f64::NAN,
            });
        }
        let inv = 1.0 / self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor == 0.0 {
                continue;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            row[c] = 0.0;
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Maximizes `cost . x` over columns `allowed` with Bland's rule.
    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> Result<PhaseOutcome> {
        loop {
            // Entering column: lowest index with positive reduced cost.
            let entering = (0..self.width).filter(|&j| allowed(j)).find(|&j| {
                let z: f64 = self
                    .rows
                    .iter()
                    .zip(&self.basis)
                    .map(|(row, &b)| cost[b] * row[j])
                    .sum();
                cost[j] - z > FEAS_TOL
            });
            let Some(c) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };

            // Leaving row: minimum ratio, ties to the lowest basic index.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - PIVOT_TOL
                            || (ratio <= br + PIVOT_TOL && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(PhaseOutcome::Unbounded);
            };
            self.pivot(r, c)?;
        }
    }
}

/// Solves `max c.w s.t. A w <= b, w >= lb`.
pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    p.check()?;
    let n = p.num_variables();
    let m = p.num_constraints();
    let a = &p.constraints;

    // Shifted right-hand side b - A lb.
    let shifted: Vec<f64> = (0..m)
        .map(|i| p.rhs[i] - (0..n).map(|j| a[(i, j)] * p.lower_bounds[j]).sum::<f64>())
        .collect();

    let flipped: Vec<usize> = (0..m).filter(|&i| shifted[i] < 0.0).collect();
    let n_art = flipped.len();
    let width = n + m + n_art;
    let art_start = n + m;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for i in 0..m {
        let sign = if shifted[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for j in 0..n {
            row[j] = sign * a[(i, j)];
        }
        row[n + i] = sign;
        row[width] = sign * shifted[i];
        if sign < 0.0 {
            row[art_start + art] = 1.0;
            basis.push(art_start + art);
            art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }

    let total = n + m;
    let mut t = Tableau {
        rows,
        basis,
        width,
        pivots: 0,
        pivot_limit: 10 * total * total + 10,
    };

    if n_art > 0 {
        let mut phase1 = vec![0.0; width];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -1.0;
        }
        t.optimize(&phase1, &|_| true)?;
        let infeasibility: f64 = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art_start)
            .map(|(i, _)| t.rhs(i))
            .sum();
        if infeasibility > FEAS_TOL {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                let replacement = (0..art_start)
                    .filter(|&j| t.rows[i][j].abs() > DRIVE_OUT_TOL)
                    .max_by(|&x, &y| t.rows[i][x].abs().total_cmp(&t.rows[i][y].abs()));
                match replacement {
                    Some(c) => {
                        t.pivot(i, c)?;
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut phase2 = vec![0.0; width];
    phase2[..n].copy_from_slice(&p.objective);
    match t.optimize(&phase2, &|j| j < art_start)? {
        PhaseOutcome::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded)),
        PhaseOutcome::Optimal => {}
    }

    let mut shift = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            shift[b] = t.rhs(i).max(0.0);
        }
    }
    let variables: Vec<f64> = shift
        .iter()
        .zip(&p.lower_bounds)
        .map(|(s, lb)| lb + s)
        .collect();
    let residual = (0..m)
        .map(|i| (0..n).map(|j| a[(i, j)] * variables[j]).sum::<f64>() - p.rhs[i])
        .fold(0.0, f64::max);
    if residual > RESIDUAL_TOL * (1.0 + p.rhs.iter().fold(0.0, |acc: f64, b| acc.max(b.abs()))) {
        return Err(Error::Numeric {
            message: "simplex returned a point that violates the constraints".into(),
            residual,
        });
    }
    let objective_value = variables.iter().zip(&p.objective).map(|(w, c)| w * c).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        variables,
        objective_value,
    })
}
