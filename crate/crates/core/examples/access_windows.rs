// Access windows of the 12 satellites over one ground point (New Delhi) for a day.
//
// cargo run --example access_windows -- 28.6 77.2

use orbcov::constellation::{expand_constellation, ConstellationSpec};
use orbcov::coverage::{
    compute_accesses, merge_timeline, AccessInterval, GridPoint, SensorModel, TimeWindow,
};
use orbcov::orbits::GravityModel;
use orbcov::timebase::Epoch;

pub fn run(lat: f64, lon: f64) -> orbcov::Result<Vec<AccessInterval>> {
    let epoch = Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?;
    let sats = expand_constellation(&ConstellationSpec::table1(epoch))?;
    let point = GridPoint::new(0, lat, lon)?;
    let window = TimeWindow {
        start: epoch,
        duration_s: 86_400.0,
    };
    compute_accesses(
        &sats,
        &point,
        window,
        &SensorModel::default(),
        10.0,
        &GravityModel::with_j2(),
    )
}

#[allow(dead_code)]
fn main() -> orbcov::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let lat = args.next().and_then(Result::ok).unwrap_or(28.6);
    let lon = args.next().and_then(Result::ok).unwrap_or(77.2);
    let accesses = run(lat, lon)?;
    for a in &accesses {
        println!(
            "{:<6} {:>9.1} s -> {:>9.1} s  ({:5.1} min)",
            a.satellite_id,
            a.start_s,
            a.end_s,
            a.duration_s() / 60.0
        );
    }
    let merged = merge_timeline(&accesses);
    println!(
        "{} accesses, {} merged coverage spans",
        accesses.len(),
        merged.len()
    );
    Ok(())
}
