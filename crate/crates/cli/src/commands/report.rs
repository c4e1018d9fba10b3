use serde::Serialize;

use super::recorded_seed;
use crate::args::{Cli, ReportArgs};
use crate::error::CliResult;
use crate::manifest::RunManifest;
use crate::output::{to_compact_json, to_json, write_file};
use crate::svg;
use crate::tables::read_summary_csv;

#[derive(Serialize)]
struct ReportConfig {
    summary: String,
    output_dir: String,
}

pub fn run(cli: &Cli, args: &ReportArgs) -> CliResult<()> {
    let dir = match &cli.output {
        Some(d) => d.clone(),
        None => args
            .summary
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_default(),
    };
    let mut manifest =
        RunManifest::start("report", recorded_seed(cli)?).with_config(&ReportConfig {
            summary: args.summary.display().to_string(),
            output_dir: dir.display().to_string(),
        })?;
    let summary = read_summary_csv(&args.summary)?;
    manifest.finish();
    let embedded = to_compact_json(&manifest)?;
    for method in summary.methods() {
        let path = dir.join(svg::file_name(method));
        write_file(
            &path,
            &svg::render_boxplot(&summary, method, Some(&embedded)),
        )?;
        println!("{}", path.display());
    }
    write_file(&dir.join("report_manifest.json"), &to_json(&manifest)?)
}
