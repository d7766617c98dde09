// Iterates over plane count and inclination and ranks the designs by mean revisit.
//
// cargo run --release --example design_sweep

use orbcov::constellation::ConstellationSpec;
use orbcov::coverage::AreaOfInterest;
use orbcov::scenario::{run_sweep, ScenarioConfig, SweepRow, SweepSpec};
use orbcov::timebase::Epoch;

pub fn run(grid_resolution_deg: f64) -> orbcov::Result<Vec<SweepRow>> {
    let epoch = Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?;
    let mut config = ScenarioConfig::new(ConstellationSpec::table1(epoch), AreaOfInterest::india());
    config.grid_resolution_deg = grid_resolution_deg;
    config.sweep = Some(SweepSpec {
        inclination_deg: vec![30.0, 36.0, 45.0],
        planes: vec![2, 3, 4],
        ..SweepSpec::default()
    });
    run_sweep(&config, 0)
}

#[allow(dead_code)]
fn main() -> orbcov::Result<()> {
    println!(
        "{:>6} {:>6} {:>5} {:>14}",
        "i", "planes", "sats", "revisit [min]"
    );
    for row in run(1.0)? {
        let revisit = row
            .objective_value
            .map_or("undefined".to_owned(), |s| format!("{:.2}", s / 60.0));
        println!(
            "{:>6} {:>6} {:>5} {:>14}",
            row.inclination_deg, row.planes, row.satellites, revisit
        );
    }
    Ok(())
}
