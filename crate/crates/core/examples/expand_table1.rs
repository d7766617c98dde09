// Expands the 4-plane, 12-satellite layout and prints one line per satellite.
//
// cargo run --example expand_table1

use orbcov::constellation::{expand_constellation, validate_spec, ConstellationSpec};
use orbcov::timebase::Epoch;

pub fn run() -> orbcov::Result<Vec<String>> {
    let spec = ConstellationSpec::table1(Epoch::from_utc(2021, 3, 1, 0, 0, 0.0)?);
    assert!(validate_spec(&spec).is_empty());

    let mut lines = vec![format!(
        "{:<6} {:>10} {:>6} {:>8} {:>8}",
        "id", "a [km]", "i", "RAAN", "nu"
    )];
    for sat in expand_constellation(&spec)? {
        let el = &sat.elements;
        lines.push(format!(
            "{:<6} {:>10.3} {:>6.1} {:>8.1} {:>8.1}",
            sat.id,
            el.a_km(),
            el.i_deg(),
            el.raan_deg(),
            el.ta_deg()
        ));
    }
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> orbcov::Result<()> {
    for line in run()? {
        println!("{line}");
    }
    Ok(())
}
