use serde::Serialize;

use indexforge_core::weighting::{
    compute_weights, method_metadata, Diagnostics, Method, WeightingOptions,
};

use super::{format_f64, load_data, recorded_seed};
use crate::args::{Cli, Format, WeighArgs};
use crate::error::{CliResult, Context};
use crate::manifest::RunManifest;
use crate::output::{csv_string, emit, sidecar_manifest_path, to_json};

#[derive(Serialize)]
struct WeighConfig<'a> {
    input: String,
    method: Method,
    negate: &'a [String],
    prescaled: bool,
    options: WeightingOptions,
}

#[derive(Serialize)]
struct WeighReport<'a> {
    manifest: &'a RunManifest,
    method: Method,
    indicators: &'a [String],
    weights: &'a [f64],
    diagnostics: &'a Diagnostics,
    warnings: &'a [String],
}

pub fn run(cli: &Cli, args: &WeighArgs) -> CliResult<()> {
    let method: Method = args.method.parse().context("--method")?;
    let options = WeightingOptions {
        entropy_epsilon: args.entropy_epsilon,
        dea_epsilon: args.dea_epsilon,
        pca_components: args.components,
    };
    let mut manifest =
        RunManifest::start("weigh", recorded_seed(cli)?).with_config(&WeighConfig {
            input: args.data.csv.display().to_string(),
            method,
            negate: &args.data.negate,
            prescaled: args.data.prescaled,
            options,
        })?;
    manifest.add_metadata(method_metadata(method, &options));

    let (data, warnings) = load_data(&args.data)?;
    let outcome =
        compute_weights(method, &data, &options).context(format!("{method} weighting"))?;
    manifest.finish();

    let output = cli.output.as_deref();
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => emit(
            output,
            &to_json(&WeighReport {
                manifest: &manifest,
                method,
                indicators: outcome.weights.indicator_names(),
                weights: outcome.weights.weights(),
                diagnostics: &outcome.diagnostics,
                warnings: &warnings,
            })?,
        ),
        Format::Csv => {
            let rows = outcome
                .weights
                .indicator_names()
                .iter()
                .zip(outcome.weights.weights())
                .map(|(name, w)| [name.clone(), format_f64(*w)]);
            emit(output, &csv_string(&["indicator", "weight"], rows)?)?;
            if let Some(path) = output {
                manifest.write(&sidecar_manifest_path(path))?;
            }
            Ok(())
        }
    }
}
