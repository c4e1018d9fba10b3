//! Long-form CSV tables for simulation samples and boxplot summaries.

use std::path::Path;

use indexforge_core::simulation::{BoxplotSummary, SummaryCell, WeightSamples};
use indexforge_core::weighting::Method;

use crate::error::{CliError, CliResult};
use crate::output::{csv_string, read_to_string};

pub const SUMMARY_HEADER: [&str; 9] = [
    "method",
    "indicator",
    "n",
    "min",
    "q1",
    "median",
    "q3",
    "max",
    "mean",
];

pub fn samples_csv(samples: &WeightSamples) -> CliResult<String> {
    let mut rows = Vec::new();
    for method in &samples.methods {
        for s in &samples.samples[method] {
            for (name, w) in samples.indicator_names.iter().zip(&s.weights) {
                rows.push([
                    s.iteration.to_string(),
                    method.tag().to_string(),
                    name.clone(),
                    w.to_string(),
                ]);
            }
        }
    }
    csv_string(&["iteration", "method", "indicator", "weight"], rows)
}

pub fn summary_csv(summary: &BoxplotSummary) -> CliResult<String> {
    let rows = summary.cells.iter().map(|c| {
        [
            c.method.tag().to_string(),
            c.indicator.clone(),
            c.count.to_string(),
            c.min.to_string(),
            c.q1.to_string(),
            c.median.to_string(),
            c.q3.to_string(),
            c.max.to_string(),
            c.mean.to_string(),
        ]
    });
    csv_string(&SUMMARY_HEADER, rows)
}

/// Parses a summary CSV. The iteration count is taken as the largest `n`.
pub fn read_summary_csv(path: &Path) -> CliResult<BoxplotSummary> {
    let text = read_to_string(path)?;
    let bad = |line: usize, msg: String| {
        CliError::usage(format!("{} line {line}: {msg}", path.display()))
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if header.iter().ne(SUMMARY_HEADER) {
        return Err(bad(
            1,
            format!("expected header {}", SUMMARY_HEADER.join(",")),
        ));
    }
    let mut cells = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let r = record.map_err(|e| bad(line, e.to_string()))?;
        let method: Method = r[0].parse().map_err(|e| bad(line, format!("{e}")))?;
        let num = |j: usize| -> CliResult<f64> {
            r[j].parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    bad(
                        line,
                        format!("{} '{}' is not a number", SUMMARY_HEADER[j], &r[j]),
                    )
                })
        };
        let count = r[2]
            .parse()
            .map_err(|_| bad(line, format!("n '{}' is not a count", &r[2])))?;
        let cell = SummaryCell {
            method,
            indicator: r[1].to_string(),
            count,
            min: num(3)?,
            q1: num(4)?,
            median: num(5)?,
            q3: num(6)?,
            max: num(7)?,
            mean: num(8)?,
        };
        if !(cell.min <= cell.q1
            && cell.q1 <= cell.median
            && cell.median <= cell.q3
            && cell.q3 <= cell.max)
        {
            return Err(bad(line, "quantiles are not ordered".into()));
        }
        cells.push(cell);
    }
    if cells.is_empty() {
        return Err(bad(1, "no summary rows".into()));
    }
    let iterations = cells.iter().map(|c| c.count).max().unwrap_or(0);
    Ok(BoxplotSummary { iterations, cells })
}
