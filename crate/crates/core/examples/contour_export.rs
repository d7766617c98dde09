// Writes a contour-ready GeoJSON point layer for any metric to stdout.
//
// cargo run --release --example contour_export -- revisit_max > revisit_max.geojson

use orbcov::constellation::ConstellationSpec;
use orbcov::coverage::AreaOfInterest;
use orbcov::scenario::{analyze, export, ScenarioConfig};
use orbcov::timebase::Epoch;

pub fn run(metric: &str, grid_resolution_deg: f64) -> orbcov::Result<String> {
    let epoch = Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?;
    let mut config = ScenarioConfig::new(ConstellationSpec::table1(epoch), AreaOfInterest::india());
    config.grid_resolution_deg = grid_resolution_deg;
    let analysis = analyze(&config, 0)?;
    export::contour_geojson(&analysis.reports(), metric)
}

#[allow(dead_code)]
fn main() {
    let metric = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "revisit_mean".into());
    match run(&metric, 0.5) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
