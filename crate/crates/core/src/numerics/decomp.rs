use serde::Serialize;

use super::Matrix;
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const CHOLESKY_MIN_PIVOT: f64 = 1e-12;
const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix.
///
/// Eigenvalues are sorted non-increasing and `eigenvectors` holds the
/// matching unit eigenvectors as columns. Each eigenvector is oriented so
/// that its largest-magnitude entry is non-negative (the first such entry
/// when several tie within 1e-12).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl EigenResult {
    /// The `j`-th eigenvector.
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }

    /// `V diag(lambda) V^T`.
    pub fn reconstruct(&self) -> Matrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mut out = Matrix::zeros(n, n);
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    out[(a, b)] += lambda * v[(a, j)] * v[(b, j)];
                }
            }
        }
        out
    }
}

fn require_symmetric(m: &Matrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::usage(format!(
            "{what} needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::usage(format!("{what} needs a symmetric matrix")));
    }
    Ok(())
}

/// Lower-triangular `L` with `L L^T = m`.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    require_symmetric(m, "cholesky")?;
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let diag = m[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if diag <= CHOLESKY_MIN_PIVOT {
            return Err(Error::Decomposition(format!(
                "matrix is not positive definite (pivot {diag:e} at index {j})"
            )));
        }
        let pivot = diag.sqrt();
        l[(j, j)] = pivot;
        for i in (j + 1)..n {
            let s = m[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = s / pivot;
        }
    }
    Ok(l)
}

fn max_off_diagonal(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut max = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            max = max.max(a[(p, q)].abs());
        }
    }
    max
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps over the upper triangle in row order until every off-diagonal
/// magnitude falls below 1e-12, giving up after 100 sweeps.
pub fn symmetric_eigendecomposition(m: &Matrix) -> Result<EigenResult> {
    require_symmetric(m, "eigendecomposition")?;
    let n = m.rows();
    let mut a = m.clone();
    // Work on an exactly symmetric copy.
    for p in 0..n {
        for q in (p + 1)..n {
            let avg = 0.5 * (a[(p, q)] + a[(q, p)]);
            a[(p, q)] = avg;
            a[(q, p)] = avg;
        }
    }
    let mut v = Matrix::identity(n);

    let mut converged = false;
    for sweep in 0..JACOBI_MAX_SWEEPS {
        if max_off_diagonal(&a) < JACOBI_OFF_DIAGONAL_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Once the element is below rounding of both diagonal entries
                // a rotation cannot change anything; drop it.
                if sweep > 3
                    && app.abs() + 100.0 * apq.abs() == app.abs()
                    && aqq.abs() + 100.0 * apq.abs() == aqq.abs()
                {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        let residual = max_off_diagonal(&a);
        if residual >= JACOBI_OFF_DIAGONAL_TOL {
            return Err(Error::Numeric {
                message: format!("Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"),
                residual,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = v.select_columns(&order)?;
    for j in 0..n {
        let largest = (0..n)
            .map(|i| eigenvectors[(i, j)].abs())
            .fold(0.0, f64::max);
        let lead = (0..n)
            .find(|&i| eigenvectors[(i, j)].abs() >= largest - 1e-12)
            .unwrap_or(0);
        if eigenvectors[(lead, j)] < 0.0 {
            for i in 0..n {
                eigenvectors[(i, j)] = -eigenvectors[(i, j)];
            }
        }
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn cholesky_examples() {
        assert_eq!(cholesky(&Matrix::identity(3)).unwrap(), Matrix::identity(3));

        let l = cholesky(&m(&[&[4.0, 2.0], &[2.0, 3.0]])).unwrap();
        let want = m(&[&[2.0, 0.0], &[1.0, 2f64.sqrt()]]);
        assert!(l.max_abs_diff(&want) < 1e-15);

        let l = cholesky(&m(&[&[1.0, 0.99], &[0.99, 1.0]])).unwrap();
        let want = m(&[&[1.0, 0.0], &[0.99, (1.0 - 0.99f64 * 0.99).sqrt()]]);
        assert!(l.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite_and_asymmetric() {
        assert!(matches!(
            cholesky(&m(&[&[1.0, 2.0], &[2.0, 1.0]])),
            Err(Error::Decomposition(_))
        ));
        assert!(matches!(
            cholesky(&m(&[&[1.0, 0.5], &[0.0, 1.0]])),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn eigen_diagonal() {
        let e = symmetric_eigendecomposition(&Matrix::diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(e.eigenvectors, Matrix::identity(2));

        let e = symmetric_eigendecomposition(&Matrix::diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(e.vector(0), vec![0.0, 1.0]);
    }

    #[test]
    fn eigen_two_by_two() {
        let e = symmetric_eigendecomposition(&m(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-12);
        let h = 0.5f64.sqrt();
        let v0 = e.vector(0);
        let v1 = e.vector(1);
        assert!((v0[0] - h).abs() < 1e-12 && (v0[1] - h).abs() < 1e-12);
        assert!((v1[0] - h).abs() < 1e-12 && (v1[1] + h).abs() < 1e-12);
    }

    #[test]
    fn eigen_rank_one() {
        let e = symmetric_eigendecomposition(&m(&[&[1.0, 1.0], &[1.0, 1.0]])).unwrap();
        assert!((e.eigenvalues[0] - 2.0).abs() < 1e-12);
        assert!(e.eigenvalues[1].abs() < 1e-12);
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        assert!(symmetric_eigendecomposition(&m(&[&[1.0, 2.0], &[0.0, 1.0]])).is_err());
    }
}
