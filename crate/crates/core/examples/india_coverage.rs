// Full 24 h analysis over the bundled India footprint, writing all reports.
//
// cargo run --release --example india_coverage -- out/india

use std::path::Path;

use orbcov::constellation::ConstellationSpec;
use orbcov::coverage::AreaOfInterest;
use orbcov::fom::{grid_stats, Metric};
use orbcov::scenario::{analyze, write_outputs, RunOutputs, ScenarioConfig};
use orbcov::timebase::Epoch;

pub fn run(out: &Path) -> orbcov::Result<RunOutputs> {
    let epoch = Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?;
    let config = ScenarioConfig::new(ConstellationSpec::table1(epoch), AreaOfInterest::india());
    let analysis = analyze(&config, 0)?;

    let reports = analysis.reports();
    for metric in [
        Metric::RevisitMean,
        Metric::ResponseMean,
        Metric::TcTotal,
        Metric::NAccesses,
    ] {
        if let Some(s) = grid_stats(&reports, metric) {
            let scale = if metric.is_duration() { 60.0 } else { 1.0 };
            println!(
                "{:<14} min {:8.2}  mean {:8.2}  max {:8.2}",
                metric.name(),
                s.min / scale,
                s.mean / scale,
                s.max / scale
            );
        }
    }
    println!(
        "{} points; whole AOI covered at {:.1}% of samples",
        reports.len(),
        100.0 * analysis.series.fraction_full()
    );
    write_outputs(&analysis, out)
}

#[allow(dead_code)]
fn main() -> orbcov::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "orbcov-out/india".into());
    let outputs = run(Path::new(&dir))?;
    println!("reports in {}", outputs.dir.display());
    Ok(())
}
