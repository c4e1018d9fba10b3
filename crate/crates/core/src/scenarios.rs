//! Seeded generators for the four simulation scenarios.
//!
//! Randomness comes from ChaCha20 ([`RngState`]). Normal variates use the
//! Box-Muller transform, consuming two uniforms per pair of variates. Monte
//! Carlo iteration `i` is seeded with the `(i + 1)`-th output of SplitMix64
//! started at the base seed, so each iteration's stream is independent of how
//! iterations are scheduled across threads.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::dataset::{default_labels, IndicatorMatrix};
use crate::error::{Error, Result};
use crate::numerics::{cholesky, Matrix};

pub const RNG_ALGORITHM: &str =
    "chacha20; iteration seed = splitmix64 stream; normals by box-muller";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for Monte Carlo iteration `iteration`: output `iteration + 1` of a
/// SplitMix64 generator whose state starts at `base_seed`.
pub fn iteration_seed(base_seed: u64, iteration: u64) -> u64 {
    splitmix64_mix(base_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(iteration.wrapping_add(1))))
}

/// Deterministic random stream.
#[derive(Clone)]
pub struct RngState {
    seed: u64,
    rng: ChaCha20Rng,
    spare_normal: Option<f64>,
}

impl fmt::Debug for RngState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RngState")
            .field("seed", &self.seed)
            .field("algorithm", &RNG_ALGORITHM)
            .finish()
    }
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn for_iteration(base_seed: u64, iteration: u64) -> Self {
        Self::new(iteration_seed(base_seed, iteration))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Standard normal variate (Box-Muller).
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - U lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare_normal = Some(r * s);
        r * c
    }
}

pub fn sample_standard_normal(rng: &mut RngState) -> f64 {
    rng.standard_normal()
}

/// `mean + L z` with `L` the Cholesky factor of `covariance`.
pub fn sample_mvn(mean: &[f64], covariance: &Matrix, rng: &mut RngState) -> Result<Vec<f64>> {
    let l = cholesky(covariance)?;
    sample_mvn_with_factor(mean, &l, rng)
}

fn sample_mvn_with_factor(mean: &[f64], l: &Matrix, rng: &mut RngState) -> Result<Vec<f64>> {
    if mean.len() != l.rows() {
        return Err(Error::usage(format!(
            "mean of length {} for a {}x{} covariance",
            mean.len(),
            l.rows(),
            l.cols()
        )));
    }
    let z: Vec<f64> = (0..mean.len()).map(|_| rng.standard_normal()).collect();
    let lz = l.mul_vec(&z)?;
    Ok(mean.iter().zip(lz).map(|(m, v)| m + v).collect())
}

/// Inverse CDF of the triangular distribution with lower `a`, mode `c` and
/// upper `b`.
pub fn triangular_inverse_cdf(u: f64, a: f64, c: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::usage(format!("probability {u} outside [0, 1]")));
    }
    if !(a <= c && c <= b && a < b) {
        return Err(Error::usage(format!(
            "triangular parameters need a <= c <= b and a < b, got ({a}, {c}, {b})"
        )));
    }
    let split = (c - a) / (b - a);
    Ok(if u <= split {
        a + (u * (b - a) * (c - a)).sqrt()
    } else {
        b - ((1.0 - u) * (b - a) * (b - c)).sqrt()
    })
}

/// Standard normal CDF.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Normal,
    NormalMixed,
    NormalCorrelated,
    SystemicCorrelated,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::Normal,
        ScenarioKind::NormalMixed,
        ScenarioKind::NormalCorrelated,
        ScenarioKind::SystemicCorrelated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Normal => "normal",
            ScenarioKind::NormalMixed => "normal-mixed",
            ScenarioKind::NormalCorrelated => "normal-correlated",
            ScenarioKind::SystemicCorrelated => "systemic-correlated",
        }
    }

    pub fn is_correlated(self) -> bool {
        matches!(
            self,
            ScenarioKind::NormalCorrelated | ScenarioKind::SystemicCorrelated
        )
    }

    /// Retained PCA components by default: one when a dominant correlated
    /// block exists, three otherwise.
    pub fn default_pca_components(self) -> usize {
        if self.is_correlated() {
            1
        } else {
            3
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::usage(format!("unknown scenario '{s}'")))
    }
}

/// Data-generating process for one simulated indicator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub systems: usize,
    pub indicators: usize,
    /// Mean of every normal indicator.
    pub mean: f64,
    /// Standard deviation of the normal indicators outside the block.
    pub sigma: f64,
    /// Standard deviation of the leading block in `NormalMixed`.
    pub sigma_high: f64,
    /// Size of the leading block of indicators (high-variance in
    /// `NormalMixed`, mutually correlated in the correlated kinds).
    pub correlated_block: usize,
    /// Pairwise covariance inside the block, with unit variances.
    pub covariance: f64,
    pub triangular_lower: f64,
    pub triangular_upper: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self::new(ScenarioKind::Normal)
    }
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind) -> Self {
        Self {
            kind,
            systems: 20,
            indicators: 5,
            mean: 1.0,
            sigma: 1.0,
            sigma_high: 2.0,
            correlated_block: 3,
            covariance: 0.99,
            triangular_lower: 0.0,
            triangular_upper: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.systems < 2 {
            return Err(Error::usage("a scenario needs at least two systems"));
        }
        if self.indicators < 1 {
            return Err(Error::usage("a scenario needs at least one indicator"));
        }
        if self.correlated_block > self.indicators {
            return Err(Error::usage(format!(
                "block of {} exceeds {} indicators",
                self.correlated_block, self.indicators
            )));
        }
        if !(self.covariance > -1.0 && self.covariance < 1.0) {
            return Err(Error::usage(format!(
                "covariance {} must lie in (-1, 1)",
                self.covariance
            )));
        }
        if !(self.sigma > 0.0 && self.sigma_high > 0.0) {
            return Err(Error::usage("standard deviations must be positive"));
        }
        if self.triangular_lower.partial_cmp(&self.triangular_upper)
            != Some(std::cmp::Ordering::Less)
        {
            return Err(Error::usage(
                "triangular lower bound must be below the upper bound",
            ));
        }
        let finite = [
            self.mean,
            self.sigma,
            self.sigma_high,
            self.covariance,
            self.triangular_lower,
            self.triangular_upper,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::usage("scenario parameters must be finite"));
        }
        Ok(())
    }

    /// Size of the leading block actually used.
    pub fn block(&self) -> usize {
        self.correlated_block.min(self.indicators)
    }

    /// Unit-variance correlation matrix with `covariance` between every
    /// pair inside the leading block.
    pub fn block_correlation(&self) -> Matrix {
        let n = self.indicators;
        let mut c = Matrix::identity(n);
        for a in 0..self.block() {
            for b in 0..self.block() {
                if a != b {
                    c[(a, b)] = self.covariance;
                }
            }
        }
        c
    }
}

/// Draws one unscaled indicator matrix with labels `s1..sm`, `X1..Xn`.
pub fn generate(spec: &ScenarioSpec, rng: &mut RngState) -> Result<IndicatorMatrix> {
    spec.validate()?;
    let m = spec.systems;
    let n = spec.indicators;
    let mut values = Matrix::zeros(m, n);
    match spec.kind {
        ScenarioKind::Normal | ScenarioKind::NormalMixed => {
            let sigmas: Vec<f64> = (0..n)
                .map(|i| {
                    if spec.kind == ScenarioKind::NormalMixed && i < spec.block() {
                        spec.sigma_high
                    } else {
                        spec.sigma
                    }
                })
                .collect();
            for k in 0..m {
                for (i, s) in sigmas.iter().enumerate() {
                    values[(k, i)] = spec.mean + s * rng.standard_normal();
                }
            }
        }
        ScenarioKind::NormalCorrelated => {
            let l = cholesky(&spec.block_correlation())?;
            let mean = vec![spec.mean; n];
            for k in 0..m {
                let row = sample_mvn_with_factor(&mean, &l, rng)?;
                for (i, v) in row.into_iter().enumerate() {
                    values[(k, i)] = v;
                }
            }
        }
        ScenarioKind::SystemicCorrelated => {
            let (a, b) = (spec.triangular_lower, spec.triangular_upper);
            let mid = 0.5 * (a + b);
            let mut modes = (0..n)
                .map(|_| triangular_inverse_cdf(rng.uniform(), a, mid, b))
                .collect::<Result<Vec<f64>>>()?;
            modes.sort_by(f64::total_cmp);
            let l = cholesky(&spec.block_correlation())?;
            let zero = vec![0.0; n];
            for k in 0..m {
                let z = sample_mvn_with_factor(&zero, &l, rng)?;
                for (i, zi) in z.into_iter().enumerate() {
                    let u = standard_normal_cdf(zi).clamp(0.0, 1.0);
                    values[(k, i)] = triangular_inverse_cdf(u, a, modes[i], b)?;
                }
            }
        }
    }
    let (ids, names) = default_labels(m, n);
    IndicatorMatrix::new(ids, names, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_examples() {
        assert_eq!(triangular_inverse_cdf(0.5, 0.0, 0.5, 1.0).unwrap(), 0.5);
        assert!((triangular_inverse_cdf(0.125, 0.0, 0.5, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(triangular_inverse_cdf(0.0, 0.0, 0.3, 1.0).unwrap(), 0.0);
        assert_eq!(triangular_inverse_cdf(1.0, 0.0, 0.3, 1.0).unwrap(), 1.0);
        assert_eq!(triangular_inverse_cdf(1.0, 0.0, 1.0, 1.0).unwrap(), 1.0);
        assert!(triangular_inverse_cdf(1.2, 0.0, 0.5, 1.0).is_err());
        assert!(triangular_inverse_cdf(0.5, 0.0, 2.0, 1.0).is_err());
        assert!(triangular_inverse_cdf(0.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(standard_normal_cdf(0.0), 0.5);
        assert!((standard_normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngState::new(7);
        let mut b = RngState::new(7);
        for _ in 0..10 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        }
        assert_ne!(iteration_seed(7, 0), iteration_seed(7, 1));
        assert_ne!(iteration_seed(7, 0), iteration_seed(8, 0));
    }

    #[test]
    fn standard_normal_moments() {
        let mut rng = RngState::new(12345);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_standard_normal(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!(var > 0.97 && var < 1.03, "variance {var}");
    }

    fn empirical_corr(xs: &[f64], ys: &[f64]) -> f64 {
        let m = Matrix::from_columns(&[xs, ys]).unwrap();
        crate::numerics::pearson_correlation_matrix(&m).unwrap()[(0, 1)]
    }

    #[test]
    fn mvn_identity_is_independent() {
        let mut rng = RngState::new(3);
        let cov = Matrix::identity(2);
        let draws: Vec<Vec<f64>> = (0..100_000)
            .map(|_| sample_mvn(&[0.0, 0.0], &cov, &mut rng).unwrap())
            .collect();
        let x: Vec<f64> = draws.iter().map(|d| d[0]).collect();
        let y: Vec<f64> = draws.iter().map(|d| d[1]).collect();
        assert!(empirical_corr(&x, &y).abs() < 0.02);
    }

    #[test]
    fn mvn_block_correlation() {
        let spec = ScenarioSpec::new(ScenarioKind::NormalCorrelated);
        let cov = spec.block_correlation();
        let mut rng = RngState::new(4);
        let draws: Vec<Vec<f64>> = (0..100_000)
            .map(|_| sample_mvn(&[0.0; 5], &cov, &mut rng).unwrap())
            .collect();
        let col = |i: usize| draws.iter().map(|d| d[i]).collect::<Vec<f64>>();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let r = empirical_corr(&col(a), &col(b));
            assert!(r > 0.985 && r < 0.995, "r({a},{b}) = {r}");
        }
    }

    #[test]
    fn mvn_variance_four() {
        let mut rng = RngState::new(5);
        let cov = Matrix::diagonal(&[4.0]);
        let x: Vec<f64> = (0..100_000)
            .map(|_| sample_mvn(&[0.0], &cov, &mut rng).unwrap()[0])
            .collect();
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (x.len() - 1) as f64;
        assert!((var - 4.0).abs() < 0.1, "variance {var}");
    }

    fn big(kind: ScenarioKind, systems: usize, seed: u64) -> IndicatorMatrix {
        let spec = ScenarioSpec {
            systems,
            ..ScenarioSpec::new(kind)
        };
        generate(&spec, &mut RngState::new(seed)).unwrap()
    }

    #[test]
    fn normal_column_means() {
        let m = big(ScenarioKind::Normal, 1000, 11);
        for j in 0..5 {
            let mean = m.values().column(j).iter().sum::<f64>() / 1000.0;
            assert!(mean > 0.9 && mean < 1.1, "mean of X{} = {mean}", j + 1);
        }
        assert_eq!(m.system_ids()[0], "s1");
        assert_eq!(m.indicator_names()[4], "X5");
        assert!(!m.is_scaled());
    }

    #[test]
    fn normal_mixed_block_variance() {
        let m = big(ScenarioKind::NormalMixed, 2000, 12);
        let sd = |j| crate::numerics::column_stats(m.values(), j).unwrap().stddev;
        for j in 0..3 {
            assert!((sd(j) - 2.0).abs() < 0.15, "sd X{} = {}", j + 1, sd(j));
        }
        for j in 3..5 {
            assert!((sd(j) - 1.0).abs() < 0.1);
        }
    }

    #[test]
    fn normal_correlated_structure() {
        let m = big(ScenarioKind::NormalCorrelated, 1000, 13);
        let v = m.values();
        assert!(empirical_corr(&v.column(0), &v.column(1)) > 0.97);
        assert!(empirical_corr(&v.column(0), &v.column(3)).abs() < 0.1);
    }

    #[test]
    fn systemic_support_and_ordered_means() {
        let m = big(ScenarioKind::SystemicCorrelated, 10_000, 14);
        assert!(m
            .values()
            .as_slice()
            .iter()
            .all(|v| (0.0..=1.0).contains(v)));
        let means: Vec<f64> = (0..5)
            .map(|j| m.values().column(j).iter().sum::<f64>() / 10_000.0)
            .collect();
        assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
    }

    #[test]
    fn generation_is_reproducible() {
        for kind in ScenarioKind::ALL {
            let a = big(kind, 20, 99);
            let b = big(kind, 20, 99);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn spec_validation() {
        let mut s = ScenarioSpec::new(ScenarioKind::NormalCorrelated);
        s.correlated_block = 6;
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::new(ScenarioKind::Normal);
        s.systems = 1;
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::new(ScenarioKind::Normal);
        s.covariance = 1.0;
        assert!(s.validate().is_err());
        assert_eq!(
            "normal-correlated".parse::<ScenarioKind>().unwrap(),
            ScenarioKind::NormalCorrelated
        );
        assert!("weird".parse::<ScenarioKind>().is_err());
    }
}
