use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use indexforge_core::dataset::IndicatorMatrix;
use indexforge_core::weighting::{rank_systems, weighted_sum_index, RankEntry};

use super::{format_f64, load_data, recorded_seed};
use crate::args::{Cli, Format, IndexArgs};
use crate::error::{CliError, CliResult, Context};
use crate::manifest::RunManifest;
use crate::output::{csv_string, emit, read_to_string, sidecar_manifest_path, to_json};

#[derive(Serialize)]
struct IndexConfig<'a> {
    input: String,
    weights_source: String,
    weights: &'a [f64],
    negate: &'a [String],
    prescaled: bool,
}

#[derive(Serialize)]
struct IndexValue<'a> {
    system_id: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct IndexReport<'a> {
    manifest: &'a RunManifest,
    indicators: &'a [String],
    weights: &'a [f64],
    index: Vec<IndexValue<'a>>,
    ranking: &'a [RankEntry],
    warnings: &'a [String],
}

/// Named weights read from a file, reordered to the data's indicator order.
fn align(names: &[String], weights: &[f64], data: &IndicatorMatrix) -> CliResult<Vec<f64>> {
    if names.len() != data.num_indicators() {
        return Err(CliError::usage(format!(
            "weights cover {} indicators but the data has {}",
            names.len(),
            data.num_indicators()
        )));
    }
    data.indicator_names()
        .iter()
        .map(|target| {
            names
                .iter()
                .position(|n| n == target)
                .map(|i| weights[i])
                .ok_or_else(|| CliError::usage(format!("no weight for indicator '{target}'")))
        })
        .collect()
}

fn weights_from_file(path: &Path, data: &IndicatorMatrix) -> CliResult<Vec<f64>> {
    let text = read_to_string(path)?;
    let bad = |msg: String| CliError::usage(format!("{}: {msg}", path.display()));
    if text.trim_start().starts_with('{') {
        let report: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let names: Vec<String> = serde_json::from_value(report["indicators"].clone())
            .map_err(|e| bad(format!("missing indicator list: {e}")))?;
        let weights: Vec<f64> = serde_json::from_value(report["weights"].clone())
            .map_err(|e| bad(format!("missing weight list: {e}")))?;
        if names.len() != weights.len() {
            return Err(bad("indicator and weight lists differ in length".into()));
        }
        return align(&names, &weights, data);
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut names = Vec::new();
    let mut weights = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(format!("row {} must be indicator,weight", i + 2)));
        }
        names.push(record[0].to_string());
        weights.push(
            record[1]
                .parse()
                .map_err(|_| bad(format!("row {}: '{}' is not a number", i + 2, &record[1])))?,
        );
    }
    align(&names, &weights, data)
}

pub fn run(cli: &Cli, args: &IndexArgs) -> CliResult<()> {
    let (data, warnings) = load_data(&args.data)?;
    let (source, weights) = match (&args.weights_file, &args.weights) {
        (Some(path), _) => (path.display().to_string(), weights_from_file(path, &data)?),
        (None, Some(w)) => ("inline".to_string(), w.clone()),
        (None, None) => return Err(CliError::usage("pass --weights-file or --weights")),
    };
    let mut manifest =
        RunManifest::start("index", recorded_seed(cli)?).with_config(&IndexConfig {
            input: args.data.csv.display().to_string(),
            weights_source: source,
            weights: &weights,
            negate: &args.data.negate,
            prescaled: args.data.prescaled,
        })?;

    let index = weighted_sum_index(&data, &weights).context("composite index")?;
    let ranking = rank_systems(&index, data.system_ids()).context("ranking")?;
    manifest.finish();

    let output = cli.output.as_deref();
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let values = data
                .system_ids()
                .iter()
                .zip(&index)
                .map(|(id, &value)| IndexValue {
                    system_id: id,
                    value,
                })
                .collect();
            emit(
                output,
                &to_json(&IndexReport {
                    manifest: &manifest,
                    indicators: data.indicator_names(),
                    weights: &weights,
                    index: values,
                    ranking: &ranking,
                    warnings: &warnings,
                })?,
            )
        }
        Format::Csv => {
            let rows = ranking.iter().map(|r| {
                [
                    r.rank.to_string(),
                    r.system_id.clone(),
                    format_f64(r.value),
                    r.tied.to_string(),
                ]
            });
            emit(
                output,
                &csv_string(&["rank", "system_id", "value", "tied"], rows)?,
            )?;
            if let Some(path) = output {
                manifest.write(&sidecar_manifest_path(path))?;
            }
            Ok(())
        }
    }
}
