// Figures of merit on a hand-written timeline: coverage time, gaps, revisit, response.
//
// cargo run --example fom_timeline

use orbcov::coverage::AccessInterval;
use orbcov::fom::{access_counts, access_separation, evaluate_point, FomPointReport};

fn access(sat: &str, start_min: f64, end_min: f64) -> AccessInterval {
    AccessInterval {
        satellite_id: sat.into(),
        start_s: start_min * 60.0,
        end_s: end_min * 60.0,
    }
}

pub fn run() -> FomPointReport {
    let accesses = [
        access("A", 10.0, 20.0),
        access("B", 15.0, 30.0),
        access("A", 60.0, 70.0),
        access("C", 100.0, 130.0),
    ];
    let counts = access_counts(&accesses);
    println!(
        "accesses: {} total, per satellite {:?}",
        counts.total, counts.per_satellite
    );
    println!(
        "separation within 60 min: {}",
        access_separation(&accesses, 3600.0)
    );

    let eval = evaluate_point(0.0, 0.0, &accesses, 180.0 * 60.0, 3600.0);
    for span in &eval.timeline {
        println!(
            "covered {:6.1} -> {:6.1} min",
            span.start_s / 60.0,
            span.end_s / 60.0
        );
    }
    for gap in &eval.gaps {
        let kind = if gap.interior { "interior" } else { "edge" };
        println!(
            "gap     {:6.1} -> {:6.1} min ({kind})",
            gap.start_s / 60.0,
            gap.end_s / 60.0
        );
    }
    eval.report
}

#[allow(dead_code)]
fn main() {
    let r = run();
    let min = |s: Option<f64>| s.map_or("-".to_owned(), |s| format!("{:.1}", s / 60.0));
    println!(
        "total coverage {:.1} min over {} spans",
        r.t_c_total_s / 60.0,
        r.n_coverage
    );
    println!("mean revisit   {} min", min(r.revisit_mean_s));
    println!("avg gap        {:.1} min", r.t_avg_gap_s / 60.0);
    println!("response       {:.1} min", r.response_mean_s / 60.0);
}
