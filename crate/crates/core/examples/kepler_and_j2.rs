// Kepler's equation, orbital period and J2 nodal drift for the 600 km / 36° orbit.
//
// cargo run --example kepler_and_j2

use std::f64::consts::FRAC_PI_2;

use orbcov::orbits::{
    orbital_period_s, propagate, secular_rates, solve_kepler, GravityModel, KeplerianElements,
};
use orbcov::timebase::Epoch;

pub fn run() -> orbcov::Result<Vec<String>> {
    let mut out = Vec::new();
    let e_anom = solve_kepler(FRAC_PI_2, 0.1)?;
    out.push(format!("E(M = pi/2, e = 0.1) = {e_anom:.12} rad"));

    let g = GravityModel::with_j2();
    let el = KeplerianElements::new(
        6978.137,
        0.0,
        36.0,
        70.0,
        0.0,
        0.0,
        Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?,
    )?;
    out.push(format!("period = {:.3} s", orbital_period_s(el.a_km(), &g)));

    let rates = secular_rates(&el, &g);
    let per_day = |r: f64| r.to_degrees() * 86_400.0;
    out.push(format!(
        "secular rates: RAAN {:+.4} deg/day, argp {:+.4} deg/day",
        per_day(rates.raan),
        per_day(rates.argp)
    ));

    for day in [1.0, 7.0, 30.0] {
        let later = propagate(&el, day * 86_400.0, &g);
        out.push(format!(
            "after {day:>4} d: RAAN {:8.4} deg, nu {:8.4} deg",
            later.raan_deg(),
            later.ta_deg()
        ));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> orbcov::Result<()> {
    run()?.iter().for_each(|l| println!("{l}"));
    Ok(())
}
