// Sub-satellite ground track of one satellite as CSV (time, lat, lon).
//
// cargo run --example ground_track -- G2-S1 > track.csv

use orbcov::constellation::{expand_constellation, ConstellationSpec};
use orbcov::orbits::{GravityModel, Trajectory};
use orbcov::timebase::{ecef_to_geodetic, eci_to_ecef, Epoch};

pub fn run(satellite: &str, hours: f64, step_s: f64) -> orbcov::Result<Vec<(f64, f64, f64)>> {
    let epoch = Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?;
    let sats = expand_constellation(&ConstellationSpec::table1(epoch))?;
    let sat = sats
        .iter()
        .find(|s| s.id == satellite)
        .ok_or_else(|| orbcov::Error::Runtime(format!("no satellite {satellite}")))?;
    let traj = Trajectory::new(&sat.elements, &GravityModel::with_j2());

    let steps = (hours * 3600.0 / step_s) as usize;
    Ok((0..=steps)
        .map(|k| {
            let t = k as f64 * step_s;
            let (ecef, _) = eci_to_ecef(&traj.state_at(t), &epoch.add_seconds(t));
            let geo = ecef_to_geodetic(&ecef);
            (t, geo.lat_deg(), geo.lon_deg())
        })
        .collect())
}

#[allow(dead_code)]
fn main() -> orbcov::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "G1-S1".into());
    println!("time_s,lat_deg,lon_deg");
    for (t, lat, lon) in run(&id, 3.0, 30.0)? {
        println!("{t},{lat:.4},{lon:.4}");
    }
    Ok(())
}
