mod index;
mod report;
mod simulate;
mod weigh;

use std::fs::File;

use indexforge_core::dataset::IndicatorMatrix;

use crate::args::{Cli, Command, DataArgs};
use crate::error::{CliError, CliResult, Context};

/// Seed used when neither `--seed` nor `INDEXFORGE_SEED` is set.
pub const DEFAULT_SEED: u64 = 42;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Weigh(a) => weigh::run(cli, a),
        Command::Index(a) => index::run(cli, a),
        Command::Simulate(a) => simulate::run(cli, a),
        Command::Report(a) => report::run(cli, a),
    }
}

/// Loads, optionally negates, and scales the data; returns validation warnings too.
fn load_data(args: &DataArgs) -> CliResult<(IndicatorMatrix, Vec<String>)> {
    let file = File::open(&args.csv).map_err(|e| CliError::io(&args.csv, e))?;
    let what = format!("reading {}", args.csv.display());
    let raw = IndicatorMatrix::load_csv(file).context(what.clone())?;
    let data = if args.prescaled {
        IndicatorMatrix::from_scaled(
            raw.system_ids().to_vec(),
            raw.indicator_names().to_vec(),
            raw.values().clone(),
        )
        .context(what)?
    } else {
        let oriented = if args.negate.is_empty() {
            raw
        } else {
            raw.negate_columns(&args.negate)
                .context("negating cost indicators")?
        };
        oriented.min_max_scale().context("min-max scaling")?
    };
    let warnings = data.validate().messages();
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok((data, warnings))
}

/// Seed recorded by commands that do not draw random numbers.
fn recorded_seed(cli: &Cli) -> CliResult<Option<u64>> {
    match cli.seed {
        Some(s) => Ok(Some(s)),
        None => env_seed(),
    }
}

/// `--seed`, then INDEXFORGE_SEED, then the config file, then the default.
fn resolve_seed(flag: Option<u64>, from_config: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = env_seed()? {
        return Ok(s);
    }
    Ok(from_config.unwrap_or(DEFAULT_SEED))
}

fn env_seed() -> CliResult<Option<u64>> {
    match std::env::var("INDEXFORGE_SEED") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            CliError::usage(format!("INDEXFORGE_SEED '{v}' is not an unsigned integer"))
        }),
        Err(_) => Ok(None),
    }
}

fn format_f64(v: f64) -> String {
    format!("{v}")
}
