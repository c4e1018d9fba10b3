use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use indexforge_core::scenarios::{ScenarioKind, ScenarioSpec, RNG_ALGORITHM};
use indexforge_core::simulation::{
    compare_methods, run_simulation, run_simulation_with_threads, BoxplotSummary, FailureRecord,
    SimulationConfig,
};
use indexforge_core::weighting::{method_metadata, Method};

use super::resolve_seed;
use crate::args::{Cli, Format, SimulateArgs};
use crate::error::{CliError, CliResult, Context};
use crate::manifest::RunManifest;
use crate::output::{emit, read_to_string, to_compact_json, to_json, write_file};
use crate::svg;
use crate::tables::{samples_csv, summary_csv};

pub const DEFAULT_OUTPUT_DIR: &str = "indexforge-output";

/// Flat TOML configuration; every key is optional and command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    scenario: Option<String>,
    systems: Option<usize>,
    indicators: Option<usize>,
    iterations: Option<usize>,
    methods: Option<Vec<String>>,
    pca_components: Option<usize>,
    entropy_epsilon: Option<f64>,
    dea_epsilon: Option<f64>,
    seed: Option<u64>,
    threads: Option<usize>,
    svg: Option<bool>,
    mean: Option<f64>,
    sigma: Option<f64>,
    sigma_high: Option<f64>,
    correlated_block: Option<usize>,
    covariance: Option<f64>,
    triangular_lower: Option<f64>,
    triangular_upper: Option<f64>,
}

#[derive(Serialize)]
struct Settings<'a> {
    simulation: &'a SimulationConfig,
    effective_pca_components: usize,
    threads: Option<usize>,
    svg: bool,
    output_dir: String,
}

#[derive(Serialize)]
struct SummaryReport<'a> {
    iterations: usize,
    cells: &'a [indexforge_core::simulation::SummaryCell],
    failures: &'a [FailureRecord],
}

fn load_file_config(path: &Path) -> CliResult<FileConfig> {
    toml::from_str(&read_to_string(path)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn build_config(cli: &Cli, args: &SimulateArgs, file: &FileConfig) -> CliResult<SimulationConfig> {
    let kind: ScenarioKind = match args.scenario.as_ref().or(file.scenario.as_ref()) {
        Some(s) => s.parse().context("--scenario")?,
        None => ScenarioKind::Normal,
    };
    let base = ScenarioSpec::new(kind);
    let scenario = ScenarioSpec {
        kind,
        systems: args.systems.or(file.systems).unwrap_or(base.systems),
        indicators: args
            .indicators
            .or(file.indicators)
            .unwrap_or(base.indicators),
        mean: file.mean.unwrap_or(base.mean),
        sigma: file.sigma.unwrap_or(base.sigma),
        sigma_high: file.sigma_high.unwrap_or(base.sigma_high),
        correlated_block: file.correlated_block.unwrap_or(base.correlated_block),
        covariance: file.covariance.unwrap_or(base.covariance),
        triangular_lower: file.triangular_lower.unwrap_or(base.triangular_lower),
        triangular_upper: file.triangular_upper.unwrap_or(base.triangular_upper),
    };
    // The default block of three shrinks with fewer indicators.
    let scenario = if file.correlated_block.is_none() {
        ScenarioSpec {
            correlated_block: scenario.block(),
            ..scenario
        }
    } else {
        scenario
    };
    let defaults = SimulationConfig::new(kind, 0);
    let methods = match args.methods.as_ref().or(file.methods.as_ref()) {
        Some(list) => {
            let mut out = Vec::new();
            for tag in list.iter().filter(|t| !t.trim().is_empty()) {
                let m: Method = tag.parse().context("--methods")?;
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            out
        }
        None => defaults.methods.clone(),
    };
    let cfg = SimulationConfig {
        scenario,
        iterations: args
            .iterations
            .or(file.iterations)
            .unwrap_or(defaults.iterations),
        methods,
        pca_components: args.pca_components.or(file.pca_components),
        entropy_epsilon: args
            .entropy_epsilon
            .or(file.entropy_epsilon)
            .unwrap_or(defaults.entropy_epsilon),
        dea_epsilon: args
            .dea_epsilon
            .or(file.dea_epsilon)
            .unwrap_or(defaults.dea_epsilon),
        base_seed: resolve_seed(cli.seed, file.seed)?,
    };
    cfg.validate().context("simulation settings")?;
    Ok(cfg)
}

fn metadata(cfg: &SimulationConfig) -> Vec<(String, String)> {
    let mut out = vec![
        ("rng_algorithm".to_string(), RNG_ALGORITHM.to_string()),
        ("scaling".to_string(), "min-max per iteration".to_string()),
        (
            "quantile_definition".to_string(),
            "linear interpolation at p(n-1)".to_string(),
        ),
    ];
    if cfg.scenario.kind == ScenarioKind::SystemicCorrelated {
        out.push((
            "triangular_modes".to_string(),
            "sorted draws from a symmetric triangular law on the bounds, redrawn every iteration"
                .to_string(),
        ));
    }
    let options = cfg.weighting_options();
    for &m in &cfg.methods {
        for (k, v) in method_metadata(m, &options) {
            out.push((k.to_string(), v));
        }
    }
    out
}

fn means_table(summary: &BoxplotSummary) -> String {
    let mut s = String::new();
    for method in summary.methods() {
        let cells = summary.cells_for(method);
        let parts: Vec<String> = cells
            .iter()
            .map(|c| format!("{}={:.4}", c.indicator, c.mean))
            .collect();
        s.push_str(&format!(
            "{:<7}mean weights: {}\n",
            method.tag(),
            parts.join("  ")
        ));
    }
    s
}

pub fn run(cli: &Cli, args: &SimulateArgs) -> CliResult<()> {
    let file = match &args.config {
        Some(p) => load_file_config(p)?,
        None => FileConfig::default(),
    };
    let cfg = build_config(cli, args, &file)?;
    let threads = args.threads.or(file.threads);
    if threads == Some(0) {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    let svg = args.svg || file.svg.unwrap_or(false);
    let dir: PathBuf = cli
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));

    let mut manifest =
        RunManifest::start("simulate", Some(cfg.base_seed)).with_config(&Settings {
            simulation: &cfg,
            effective_pca_components: cfg.effective_pca_components(),
            threads,
            svg,
            output_dir: dir.display().to_string(),
        })?;
    manifest.add_metadata(metadata(&cfg));

    let (samples, summary) = match threads {
        Some(t) => run_simulation_with_threads(&cfg, t),
        None => run_simulation(&cfg),
    }
    .context("simulation")?;
    for f in &samples.failures {
        log::warn!("iteration {} {}: {}", f.iteration, f.method, f.message);
    }

    write_file(&dir.join("samples.csv"), &samples_csv(&samples)?)?;
    let summary_text = summary_csv(&summary)?;
    write_file(&dir.join("summary.csv"), &summary_text)?;
    let summary_report = SummaryReport {
        iterations: summary.iterations,
        cells: &summary.cells,
        failures: &samples.failures,
    };
    write_file(&dir.join("summary.json"), &to_json(&summary_report)?)?;

    let with_samples = samples
        .methods
        .iter()
        .filter(|m| !samples.samples[m].is_empty())
        .count();
    if with_samples >= 2 {
        let report = compare_methods(&samples).context("method comparison")?;
        write_file(&dir.join("comparison.json"), &to_json(&report)?)?;
    }

    manifest.finish();
    let manifest_text = to_json(&manifest)?;
    if svg {
        let embedded = to_compact_json(&manifest)?;
        for method in summary.methods() {
            let doc = svg::render_boxplot(&summary, method, Some(&embedded));
            write_file(&dir.join(svg::file_name(method)), &doc)?;
        }
    }
    write_file(&dir.join("manifest.json"), &manifest_text)?;

    match cli.format {
        Some(Format::Csv) => emit(None, &summary_text)?,
        Some(Format::Json) => emit(None, &to_json(&summary_report)?)?,
        None => emit(None, &means_table(&summary))?,
    }
    if !samples.failures.is_empty() {
        log::warn!(
            "{} method-iteration failures were excluded",
            samples.failures.len()
        );
    }
    log::info!("wrote results to {}", dir.display());
    Ok(())
}
