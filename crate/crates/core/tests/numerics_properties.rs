use indexforge_core::numerics::{
    cholesky, pearson_correlation_matrix, symmetric_eigendecomposition, Matrix,
};
use proptest::prelude::*;

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(-3.0..3.0f64, n * n).prop_map(move |d| Matrix::new(n, n, d).unwrap())
    })
}

fn symmetric(max: usize) -> impl Strategy<Value = Matrix> {
    square(max).prop_map(|a| {
        let t = a.transpose();
        let mut s = Matrix::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                s[(i, j)] = 0.5 * (a[(i, j)] + t[(i, j)]);
            }
        }
        s
    })
}

fn determinant(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in (c + 1)..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cholesky_round_trip(a in square(10)) {
        let mut spd = a.transpose().matmul(&a).unwrap();
        for i in 0..spd.rows() {
            spd[(i, i)] += 1.0;
        }
        let l = cholesky(&spd).unwrap();
        let back = l.matmul(&l.transpose()).unwrap();
        prop_assert!(back.max_abs_diff(&spd) < 1e-9);
        for i in 0..l.rows() {
            for j in (i + 1)..l.cols() {
                prop_assert_eq!(l[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn eigen_reconstruction_and_conventions(s in symmetric(10)) {
        let e = symmetric_eigendecomposition(&s).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&s) < 1e-8);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let n = s.rows();
        for j in 0..n {
            let v = e.vector(j);
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-9);
            let big = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            prop_assert!(big >= -1e-12);
            let sv = s.mul_vec(&v).unwrap();
            for (a, b) in sv.iter().zip(&v) {
                prop_assert!((a - e.eigenvalues[j] * b).abs() < 1e-8);
            }
            for k in (j + 1)..n {
                let dot: f64 = v.iter().zip(e.vector(k)).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eigen_trace_and_determinant(s in symmetric(4)) {
        let e = symmetric_eigendecomposition(&s).unwrap();
        let trace: f64 = (0..s.rows()).map(|i| s[(i, i)]).sum();
        prop_assert!((e.eigenvalues.iter().sum::<f64>() - trace).abs() < 1e-9);
        let det = determinant(&s);
        let prod: f64 = e.eigenvalues.iter().product();
        prop_assert!((prod - det).abs() <= 1e-6 * det.abs().max(1e-3));
    }

    #[test]
    fn correlation_symmetric_unit_diagonal(
        data in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 4), 3..12)
    ) {
        let m = Matrix::from_rows(&data).unwrap();
        let r = pearson_correlation_matrix(&m).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                prop_assert_eq!(r[(a, b)].to_bits(), r[(b, a)].to_bits());
                prop_assert!(r[(a, b)].abs() <= 1.0);
            }
            prop_assert!(r[(a, a)] == 1.0 || r[(a, a)] == 0.0);
        }
    }
}
