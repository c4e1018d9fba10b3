//! Monte Carlo harness: generate a scenario, min-max scale it, weigh it with
//! every requested method, and summarize the weight distributions.
//!
//! Iterations run in parallel but each one draws from its own seeded stream
//! and results are merged by iteration index, so output does not depend on
//! the thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quantiles;
use crate::scenarios::{generate, RngState, ScenarioKind, ScenarioSpec};
use crate::weighting::{
    compute_weights, Method, WeightingOptions, DEFAULT_DEA_EPSILON, DEFAULT_ENTROPY_EPSILON,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub scenario: ScenarioSpec,
    pub iterations: usize,
    pub methods: Vec<Method>,
    /// Retained PCA components; `None` picks 1 for correlated scenarios and
    /// 3 otherwise (capped at the indicator count).
    pub pca_components: Option<usize>,
    pub entropy_epsilon: f64,
    pub dea_epsilon: f64,
    pub base_seed: u64,
}

impl SimulationConfig {
    pub fn new(kind: ScenarioKind, base_seed: u64) -> Self {
        Self {
            scenario: ScenarioSpec::new(kind),
            iterations: 100,
            methods: Method::ALL.to_vec(),
            pca_components: None,
            entropy_epsilon: DEFAULT_ENTROPY_EPSILON,
            dea_epsilon: DEFAULT_DEA_EPSILON,
            base_seed,
        }
    }

    pub fn effective_pca_components(&self) -> usize {
        self.pca_components.unwrap_or_else(|| {
            self.scenario
                .kind
                .default_pca_components()
                .min(self.scenario.indicators)
        })
    }

    pub fn weighting_options(&self) -> WeightingOptions {
        WeightingOptions {
            entropy_epsilon: self.entropy_epsilon,
            dea_epsilon: self.dea_epsilon,
            pca_components: self.effective_pca_components(),
        }
    }

    /// Correlated block used for contrasts, when the scenario has one.
    pub fn correlated_block(&self) -> Option<usize> {
        self.scenario
            .kind
            .is_correlated()
            .then(|| self.scenario.block())
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.iterations == 0 {
            return Err(Error::usage("iterations must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(Error::usage("at least one method is required"));
        }
        let k = self.effective_pca_components();
        if self.methods.contains(&Method::Pca) && (k == 0 || k > self.scenario.indicators) {
            return Err(Error::usage(format!(
                "PCA components must be between 1 and {}, got {k}",
                self.scenario.indicators
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSample {
    pub iteration: usize,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub iteration: usize,
    pub method: Method,
    pub kind: String,
    pub message: String,
}

/// Per-method weight draws over the Monte Carlo iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSamples {
    pub methods: Vec<Method>,
    pub indicator_names: Vec<String>,
    pub iterations: usize,
    /// Successful iterations only, in iteration order.
    pub samples: BTreeMap<Method, Vec<WeightSample>>,
    pub failures: Vec<FailureRecord>,
    pub correlated_block: Option<usize>,
}

impl WeightSamples {
    pub fn failures_for(&self, method: Method) -> usize {
        self.failures.iter().filter(|f| f.method == method).count()
    }

    /// Weight of `indicator` under `method`, one entry per successful iteration.
    pub fn column(&self, method: Method, indicator: usize) -> Vec<f64> {
        self.samples
            .get(&method)
            .map(|rows| rows.iter().map(|s| s.weights[indicator]).collect())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub method: Method,
    pub indicator: String,
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Five-number summary and mean of every method x indicator weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub iterations: usize,
    pub cells: Vec<SummaryCell>,
}

impl BoxplotSummary {
    pub fn from_samples(samples: &WeightSamples) -> Result<Self> {
        let mut cells = Vec::new();
        for &method in &samples.methods {
            for (i, name) in samples.indicator_names.iter().enumerate() {
                let col = samples.column(method, i);
                if col.is_empty() {
                    continue;
                }
                let q = quantiles(&col, &[0.0, 0.25, 0.5, 0.75, 1.0])?;
                let mean = (col.iter().sum::<f64>() / col.len() as f64).clamp(q[0], q[4]);
                cells.push(SummaryCell {
                    method,
                    indicator: name.clone(),
                    count: col.len(),
                    min: q[0],
                    q1: q[1],
                    median: q[2],
                    q3: q[3],
                    max: q[4],
                    mean,
                });
            }
        }
        Ok(Self {
            iterations: samples.iterations,
            cells,
        })
    }

    pub fn methods(&self) -> Vec<Method> {
        let mut out: Vec<Method> = Vec::new();
        for c in &self.cells {
            if !out.contains(&c.method) {
                out.push(c.method);
            }
        }
        out
    }

    pub fn cells_for(&self, method: Method) -> Vec<&SummaryCell> {
        self.cells.iter().filter(|c| c.method == method).collect()
    }

    pub fn cell(&self, method: Method, indicator: &str) -> Option<&SummaryCell> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.indicator == indicator)
    }

    /// Per-indicator mean weights of one method, in indicator order.
    pub fn means(&self, method: Method) -> Vec<f64> {
        self.cells_for(method).iter().map(|c| c.mean).collect()
    }
}

type IterationResult = Vec<(Method, std::result::Result<Vec<f64>, Error>)>;

fn run_iteration(cfg: &SimulationConfig, iteration: usize) -> Result<IterationResult> {
    let mut rng = RngState::for_iteration(cfg.base_seed, iteration as u64);
    let raw = generate(&cfg.scenario, &mut rng)?;
    let scaled = raw.min_max_scale()?;
    let options = cfg.weighting_options();
    Ok(cfg
        .methods
        .iter()
        .map(|&m| {
            let r = compute_weights(m, &scaled, &options).map(|o| o.weights.weights().to_vec());
            (m, r)
        })
        .collect())
}

/// Runs the study on the current rayon pool.
pub fn run_simulation(cfg: &SimulationConfig) -> Result<(WeightSamples, BoxplotSummary)> {
    cfg.validate()?;
    let per_iteration: Vec<IterationResult> = (0..cfg.iterations)
        .into_par_iter()
        .map(|i| run_iteration(cfg, i))
        .collect::<Result<_>>()?;

    let mut methods = Vec::new();
    for m in &cfg.methods {
        if !methods.contains(m) {
            methods.push(*m);
        }
    }
    let mut samples: BTreeMap<Method, Vec<WeightSample>> =
        methods.iter().map(|&m| (m, Vec::new())).collect();
    let mut failures = Vec::new();
    for (iteration, results) in per_iteration.into_iter().enumerate() {
        for (method, r) in results {
            match r {
                Ok(weights) => samples
                    .get_mut(&method)
                    .unwrap()
                    .push(WeightSample { iteration, weights }),
                Err(e) => {
                    log::warn!("iteration {iteration}: {method} failed: {e}");
                    failures.push(FailureRecord {
                        iteration,
                        method,
                        kind: e.kind().to_string(),
                        message: e.to_string(),
                    });
                }
            }
        }
    }
    for &m in &methods {
        if samples[&m].is_empty() {
            let first = failures
                .iter()
                .find(|f| f.method == m)
                .map(|f| f.message.clone())
                .unwrap_or_default();
            return Err(Error::degenerate(format!(
                "{m} failed in all {} iterations (first failure: {first})",
                cfg.iterations
            )));
        }
    }
    let samples = WeightSamples {
        methods,
        indicator_names: (1..=cfg.scenario.indicators)
            .map(|i| format!("X{i}"))
            .collect(),
        iterations: cfg.iterations,
        samples,
        failures,
        correlated_block: cfg.correlated_block(),
    };
    let summary = BoxplotSummary::from_samples(&samples)?;
    Ok((samples, summary))
}

/// Runs the study on a dedicated pool of `threads` workers.
pub fn run_simulation_with_threads(
    cfg: &SimulationConfig,
    threads: usize,
) -> Result<(WeightSamples, BoxplotSummary)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_simulation(cfg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodDivergence {
    pub method: Method,
    /// Largest minus smallest per-indicator mean weight.
    pub spread: f64,
    pub mean_weights: Vec<f64>,
    pub interquartile_ranges: Vec<f64>,
    /// Mean weight over the correlated block minus mean weight over the rest;
    /// 0 when the scenario has no correlated block.
    pub block_contrast: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub indicator_names: Vec<String>,
    pub correlated_block: Option<usize>,
    pub methods: Vec<MethodDivergence>,
}

impl DivergenceReport {
    pub fn get(&self, method: Method) -> Option<&MethodDivergence> {
        self.methods.iter().find(|m| m.method == method)
    }
}

/// Descriptive comparison of the weight distributions of several methods.
pub fn compare_methods(s: &WeightSamples) -> Result<DivergenceReport> {
    let present: Vec<Method> = s
        .methods
        .iter()
        .copied()
        .filter(|m| s.samples.get(m).is_some_and(|v| !v.is_empty()))
        .collect();
    if present.len() < 2 {
        return Err(Error::usage(
            "comparing methods needs at least two methods with samples",
        ));
    }
    let n = s.indicator_names.len();
    let mut methods = Vec::new();
    for method in present {
        let mut means = Vec::with_capacity(n);
        let mut iqrs = Vec::with_capacity(n);
        for i in 0..n {
            let col = s.column(method, i);
            means.push(col.iter().sum::<f64>() / col.len() as f64);
            let q = quantiles(&col, &[0.25, 0.75])?;
            iqrs.push(q[1] - q[0]);
        }
        let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
        let block_contrast = match s.correlated_block {
            Some(b) if b > 0 && b < n => {
                let inside = means[..b].iter().sum::<f64>() / b as f64;
                let outside = means[b..].iter().sum::<f64>() / (n - b) as f64;
                inside - outside
            }
            _ => 0.0,
        };
        methods.push(MethodDivergence {
            method,
            spread: hi - lo,
            mean_weights: means,
            interquartile_ranges: iqrs,
            block_contrast,
        });
    }
    Ok(DivergenceReport {
        indicator_names: s.indicator_names.clone(),
        correlated_block: s.correlated_block,
        methods,
    })
}
