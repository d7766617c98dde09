//! Acceptance gate. Prints one `[PASS]`/`[FAIL]` line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbcov::constellation::{expand_constellation, ConstellationSpec};
use orbcov::coverage::{AccessInterval, AreaOfInterest, GridPoint, SensorModel, Span};
use orbcov::fom::{
    coverage_time_stats, extract_gaps, response_time, time_average_gap, GapInterval,
};
use orbcov::orbits::{
    elements_to_eci, orbital_period_s, propagate, solve_kepler, GravityModel, KeplerianElements,
};
use orbcov::scenario::{analyze, run_scenario, Analysis, ScenarioConfig};
use orbcov::timebase::{eci_to_ecef, topocentric_elevation_deg, Epoch};

/// Output file name and its bytes.
type NamedBytes = (String, Vec<u8>);

const KEPLER_SAMPLES: usize = 10_000;
const KEPLER_MAX_E: f64 = 0.9;
const KEPLER_RESIDUAL_RAD: f64 = 1e-12;
const ENERGY_DRIFT_REL: f64 = 1e-10;
const ENERGY_SAMPLE_STEP_S: f64 = 60.0;
const J2_DRIFT_TARGET_DEG_DAY: f64 = -5.89;
const J2_DRIFT_TOL_DEG_DAY: f64 = 0.01;
/// Propagated drift vs the closed-form rate evaluated here.
const J2_FORMULA_AGREEMENT_DEG: f64 = 1e-9;

const ORACLE_PAIRS: usize = 10;
const ORACLE_STEP_S: f64 = 1.0;
const ORACLE_TOL_S: f64 = 0.5;
const ORACLE_RUNTIME: Duration = Duration::from_secs(60);

const REVISIT_MEDIAN_MIN: (f64, f64) = (10.0, 60.0);
const REVISIT_REFERENCE_BAND_MIN: (f64, f64) = (15.0, 35.0);
const RESPONSE_MEDIAN_MIN: (f64, f64) = (12.0, 240.0);
const RESPONSE_REFERENCE_BAND_MIN: (f64, f64) = (25.0, 120.0);
/// Central 80 %: 10th to 90th percentile.
const CENTRAL_QUANTILES: (f64, f64) = (0.10, 0.90);
const FULL_COVERAGE_MIN_FRACTION: f64 = 0.5;
const MIN_AOI_ACCESSES_PER_SAT: usize = 3;
const FULL_RUN_BUDGET: Duration = Duration::from_secs(300);

const MONOTONE_RESOLUTION_DEG: f64 = 2.0;

fn epoch() -> Epoch {
    Epoch::from_utc(2021, 3, 1, 0, 0, 0.0).expect("valid epoch")
}

fn table1_config() -> ScenarioConfig {
    ScenarioConfig::new(ConstellationSpec::table1(epoch()), AreaOfInterest::india())
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn criterion_1() -> Outcome {
    let spec = ConstellationSpec::table1(epoch());
    let sats = match expand_constellation(&spec) {
        Ok(s) => s,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let mut problems = Vec::new();
    if sats.len() != 12 {
        problems.push(format!("{} satellites", sats.len()));
    }
    for s in &sats {
        let el = &s.elements;
        if el.i_deg() != 36.0 || el.a_km() != 6978.137 || el.e() != 0.0 {
            problems.push(format!(
                "{}: a={} e={} i={}",
                s.id,
                el.a_km(),
                el.e(),
                el.i_deg()
            ));
        }
    }
    for raan in [70.0, 90.0, 110.0, 130.0] {
        let plane: Vec<_> = sats
            .iter()
            .filter(|s| s.elements.raan_deg() == raan)
            .collect();
        let anomalies: Vec<f64> = plane.iter().map(|s| s.elements.ta_deg()).collect();
        if anomalies != [0.0, 120.0, 240.0] {
            problems.push(format!("RAAN {raan}: anomalies {anomalies:?}"));
        }
    }
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            "12 satellites, i = 36 deg, a = 6978.137 km, RAAN {70,90,110,130} x {0,120,240}".into()
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_residual: f64 = 0.0;
    for _ in 0..KEPLER_SAMPLES {
        let m = rng.gen_range(0.0..std::f64::consts::TAU);
        let e = rng.gen_range(0.0..=KEPLER_MAX_E);
        match solve_kepler(m, e) {
            Ok(ecc) => {
                let r = ecc - e * ecc.sin() - m;
                let r = (r + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
                    - std::f64::consts::PI;
                worst_residual = worst_residual.max(r.abs());
            }
            Err(_) => worst_residual = f64::INFINITY,
        }
    }

    let two_body = GravityModel::two_body();
    let el = KeplerianElements::new(7200.0, 0.05, 50.0, 10.0, 20.0, 30.0, epoch()).expect("valid");
    let energy = |el: &KeplerianElements| {
        let s = elements_to_eci(el, &two_body);
        s.velocity.norm_squared() / 2.0 - two_body.mu / s.position.norm()
    };
    let e0 = energy(&el);
    let steps = (86_400.0 / ENERGY_SAMPLE_STEP_S) as usize;
    let worst_energy = (0..=steps)
        .map(|k| {
            ((energy(&propagate(&el, k as f64 * ENERGY_SAMPLE_STEP_S, &two_body)) - e0) / e0).abs()
        })
        .fold(0.0, f64::max);

    let g = GravityModel::with_j2();
    let t1 = KeplerianElements::new(6978.137, 0.0, 36.0, 70.0, 0.0, 0.0, epoch()).expect("valid");
    let after = propagate(&t1, 86_400.0, &g);
    let drift = (after.raan_deg() - t1.raan_deg() + 180.0).rem_euclid(360.0) - 180.0;
    let n = std::f64::consts::TAU / orbital_period_s(6978.137, &g);
    let p = 6978.137;
    let formula = -1.5 * n * g.j2 * (g.r_e / p).powi(2) * 36f64.to_radians().cos();
    let formula_deg_day = formula.to_degrees() * 86_400.0;

    let pass = worst_residual < KEPLER_RESIDUAL_RAD
        && worst_energy < ENERGY_DRIFT_REL
        && (drift - J2_DRIFT_TARGET_DEG_DAY).abs() <= J2_DRIFT_TOL_DEG_DAY
        && (drift - formula_deg_day).abs() <= J2_FORMULA_AGREEMENT_DEG;
    Outcome::new(
        pass,
        format!(
            "max Kepler residual {worst_residual:.2e} rad; energy drift {worst_energy:.2e}; \
             RAAN drift {drift:.4} deg/day (formula {formula_deg_day:.4})"
        ),
    )
}

/// Transition brackets `[t_k, t_k+1]` where visibility sampled every second changes.
fn brute_force_brackets(
    el: &KeplerianElements,
    point: &GridPoint,
    start: &Epoch,
    duration_s: f64,
    min_elevation_deg: f64,
) -> Vec<(f64, f64, bool)> {
    let g = GravityModel::with_j2();
    let dt0 = start.seconds_since(&el.epoch());
    let visible = |t: f64| {
        let eci = elements_to_eci(&propagate(el, dt0 + t, &g), &g);
        let (ecef, _) = eci_to_ecef(&eci, &start.add_seconds(t));
        topocentric_elevation_deg(&point.geodetic, &ecef).expect("distinct") >= min_elevation_deg
    };
    let steps = (duration_s / ORACLE_STEP_S) as usize;
    let mut out = Vec::new();
    let mut prev = visible(0.0);
    for k in 1..=steps {
        let t = k as f64 * ORACLE_STEP_S;
        let now = visible(t);
        if now != prev {
            out.push((t - ORACLE_STEP_S, t, now));
        }
        prev = now;
    }
    out
}

fn criterion_3(full: &Analysis) -> Outcome {
    let began = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let window = full.config.time_window();
    let min_el = match full.config.sensor {
        SensorModel::ElevationMask { min_elevation_deg } => min_elevation_deg,
        other => return Outcome::new(false, format!("unexpected sensor {other:?}")),
    };
    let mut worst: f64 = 0.0;
    let mut transitions = 0;
    let mut problems = Vec::new();
    for _ in 0..ORACLE_PAIRS {
        let sat = rng.gen_range(0..full.satellites.len());
        let pi = rng.gen_range(0..full.grid.len());
        let id = &full.satellites[sat].id;
        let point = &full.grid[pi];
        let computed: Vec<&AccessInterval> = full.accesses[pi]
            .iter()
            .filter(|a| &a.satellite_id == id)
            .collect();
        let mut edges: Vec<(f64, bool)> = Vec::new();
        for a in &computed {
            if a.start_s > 0.0 {
                edges.push((a.start_s, true));
            }
            if a.end_s < window.duration_s {
                edges.push((a.end_s, false));
            }
        }
        let brackets = brute_force_brackets(
            &full.satellites[sat].elements,
            point,
            &window.start,
            window.duration_s,
            min_el,
        );
        if brackets.len() != edges.len() {
            problems.push(format!(
                "{id} @ ({}, {}): {} brute-force transitions vs {} refined",
                point.lat_deg,
                point.lon_deg,
                brackets.len(),
                edges.len()
            ));
            continue;
        }
        for ((lo, hi, rising), (t, opening)) in brackets.iter().zip(&edges) {
            let dist = if *t < *lo {
                lo - t
            } else if *t > *hi {
                t - hi
            } else {
                0.0
            };
            if rising != opening {
                problems.push(format!("{id}: transition direction mismatch at {t}"));
            }
            worst = worst.max(dist);
            transitions += 1;
        }
    }
    let elapsed = began.elapsed();
    let pass = problems.is_empty() && worst <= ORACLE_TOL_S && elapsed < ORACLE_RUNTIME;
    Outcome::new(
        pass,
        if problems.is_empty() {
            format!(
                "{transitions} transitions over {ORACLE_PAIRS} pairs, worst distance to 1 s bracket {worst:.3} s, {:.1} s",
                elapsed.as_secs_f64()
            )
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_4(full: &Analysis) -> Outcome {
    let m = 60.0;
    let spans = [
        Span::new(0.0, 10.0 * m),
        Span::new(20.0 * m, 40.0 * m),
        Span::new(50.0 * m, 80.0 * m),
    ];
    let stats = coverage_time_stats(&spans);
    let eq123 = stats.total_s == 60.0 * m
        && stats.mean_s == 20.0 * m
        && stats.max_s == 30.0 * m
        && stats.count == 3;
    let gaps = [
        GapInterval {
            start_s: 0.0,
            end_s: 30.0 * m,
            interior: false,
        },
        GapInterval {
            start_s: 40.0 * m,
            end_s: 80.0 * m,
            interior: true,
        },
        GapInterval {
            start_s: 90.0 * m,
            end_s: 140.0 * m,
            interior: false,
        },
    ];
    let avg = time_average_gap(&gaps);
    let eq5 = avg == 40.0 * m && response_time(avg) == 20.0 * m;

    let window = full.config.window.duration_s;
    let mut worst: f64 = 0.0;
    let mut exact = 0;
    for p in &full.points {
        let covered: f64 = p.timeline.iter().map(Span::duration_s).sum();
        let gaps: f64 = p.gaps.iter().map(|g| g.end_s - g.start_s).sum();
        let dev = (covered + gaps - window).abs();
        if dev == 0.0 {
            exact += 1;
        }
        worst = worst.max(dev);
        let recomputed = extract_gaps(&p.timeline, window);
        if recomputed != p.gaps {
            worst = f64::INFINITY;
        }
    }
    let pass = eq123 && eq5 && worst == 0.0;
    Outcome::new(
        pass,
        format!(
            "spans 10/20/30 min -> {}/{}/{} min; avg gap {} min -> response {} min; \
             partition exact at {exact}/{} points (max deviation {worst:e} s)",
            stats.total_s / m,
            stats.mean_s / m,
            stats.max_s / m,
            avg / m,
            response_time(avg) / m,
            full.points.len()
        ),
    )
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn overlaps(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

fn band(values: impl Iterator<Item = f64>) -> (f64, (f64, f64)) {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    (
        quantile(&v, 0.5),
        (
            quantile(&v, CENTRAL_QUANTILES.0),
            quantile(&v, CENTRAL_QUANTILES.1),
        ),
    )
}

fn criterion_5(full: &Analysis, elapsed: Duration) -> (Outcome, Vec<(&'static str, bool, String)>) {
    let reports = full.reports();
    let (rev_med, rev_band) = band(
        reports
            .iter()
            .filter_map(|r| r.revisit_mean_s)
            .map(|s| s / 60.0),
    );
    let a = (REVISIT_MEDIAN_MIN.0..=REVISIT_MEDIAN_MIN.1).contains(&rev_med)
        && overlaps(rev_band, REVISIT_REFERENCE_BAND_MIN);

    let (resp_med, resp_band) = band(reports.iter().map(|r| r.response_mean_s / 60.0));
    let b = (RESPONSE_MEDIAN_MIN.0..=RESPONSE_MEDIAN_MIN.1).contains(&resp_med)
        && overlaps(resp_band, RESPONSE_REFERENCE_BAND_MIN);

    let full_fraction = full.series.fraction_full();
    let c = full_fraction >= FULL_COVERAGE_MIN_FRACTION;

    let fewest = full
        .satellite_summaries
        .iter()
        .min_by_key(|s| s.aoi_accesses)
        .map(|s| (s.satellite_id.clone(), s.aoi_accesses));
    let d = fewest
        .as_ref()
        .is_some_and(|(_, n)| *n >= MIN_AOI_ACCESSES_PER_SAT);
    let fast = elapsed < FULL_RUN_BUDGET;

    let parts = vec![
        (
            "5a mean revisit",
            a,
            format!(
                "median {rev_med:.2} min, central 80% [{:.2}, {:.2}] min vs band {:?}",
                rev_band.0, rev_band.1, REVISIT_REFERENCE_BAND_MIN
            ),
        ),
        (
            "5b mean response",
            b,
            format!(
                "median {resp_med:.2} min, central 80% [{:.2}, {:.2}] min vs band {:?}",
                resp_band.0, resp_band.1, RESPONSE_REFERENCE_BAND_MIN
            ),
        ),
        (
            "5c percent coverage",
            c,
            format!(
                "100% at {:.1}% of {} samples (mean {:.1}%)",
                full_fraction * 100.0,
                full.series.percent.len(),
                full.series.percent.iter().sum::<f64>() / full.series.percent.len() as f64
            ),
        ),
        (
            "5d accesses per satellite",
            d,
            format!("fewest AOI accesses: {fewest:?}"),
        ),
    ];
    (
        Outcome::new(
            a && b && c && d && fast,
            format!(
                "{} grid points, {} satellites, run took {:.1} s",
                full.grid.len(),
                full.satellites.len(),
                elapsed.as_secs_f64()
            ),
        ),
        parts,
    )
}

fn criterion_6() -> Outcome {
    let run = |workers: usize| -> orbcov::Result<(tempfile::TempDir, Vec<NamedBytes>)> {
        let dir = tempfile::tempdir().expect("tempdir");
        let mut config = table1_config();
        config.output_dir = dir.path().to_owned();
        let out = run_scenario(&config, workers)?;
        let files = [
            &out.points_csv,
            &out.profiles_csv,
            &out.series_csv,
            &out.satellites_csv,
            &out.contour_geojson,
        ]
        .iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(p).expect("output readable"))
        })
        .collect();
        Ok((dir, files))
    };
    match (run(1), run(4)) {
        (Ok((_d1, a)), Ok((_d2, b))) => {
            let differing: Vec<&str> = a
                .iter()
                .zip(&b)
                .filter(|(x, y)| x != y)
                .map(|(x, _)| x.0.as_str())
                .collect();
            let bytes: usize = a.iter().map(|f| f.1.len()).sum();
            Outcome::new(
                differing.is_empty(),
                if differing.is_empty() {
                    format!(
                        "{} files, {bytes} bytes identical with 1 and 4 workers",
                        a.len()
                    )
                } else {
                    format!("differ: {differing:?}")
                },
            )
        }
        (Err(e), _) | (_, Err(e)) => Outcome::new(false, e.to_string()),
    }
}

fn criterion_7() -> Outcome {
    let mut base = table1_config();
    base.grid_resolution_deg = MONOTONE_RESOLUTION_DEG;
    let full = match analyze(&base, 0) {
        Ok(a) => a,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let mut gap_violations = Vec::new();
    let mut total_violations = Vec::new();
    let mut checked = 0;
    for plane in 0..base.constellation.plane_raans_deg.len() {
        let mut reduced_cfg = base.clone();
        reduced_cfg.constellation.plane_raans_deg.remove(plane);
        let reduced = match analyze(&reduced_cfg, 0) {
            Ok(a) => a,
            Err(e) => return Outcome::new(false, e.to_string()),
        };
        for (p, r) in full.points.iter().zip(&reduced.points) {
            let (p, r) = (&p.report, &r.report);
            checked += 1;
            if r.t_avg_gap_s < p.t_avg_gap_s {
                gap_violations.push(format!(
                    "without plane {} at ({}, {}): {:.2} < {:.2} min ({} vs {} gaps)",
                    plane + 1,
                    p.lat_deg,
                    p.lon_deg,
                    r.t_avg_gap_s / 60.0,
                    p.t_avg_gap_s / 60.0,
                    r.n_gaps,
                    p.n_gaps
                ));
            }
            if r.t_c_total_s > p.t_c_total_s {
                total_violations.push(format!(
                    "without plane {} at ({}, {}): {:.3} > {:.3} min",
                    plane + 1,
                    p.lat_deg,
                    p.lon_deg,
                    r.t_c_total_s / 60.0,
                    p.t_c_total_s / 60.0
                ));
            }
        }
    }
    let sample = |v: &[String]| v.first().cloned().unwrap_or_else(|| "none".into());
    Outcome::new(
        gap_violations.is_empty() && total_violations.is_empty(),
        format!(
            "{checked} (plane, point) checks on a {MONOTONE_RESOLUTION_DEG} deg grid; \
             t_avg_gap decreased at {} (e.g. {}); t_c_total increased at {} (e.g. {})",
            gap_violations.len(),
            sample(&gap_violations),
            total_violations.len(),
            sample(&total_violations)
        ),
    )
}

fn report(label: &str, o: &Outcome) -> bool {
    println!(
        "[{}] {label}: {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
    o.pass
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report("1 constellation fidelity", &criterion_1());
    ok &= report("2 propagator properties", &criterion_2());

    let began = Instant::now();
    let full = match analyze(&table1_config(), 0) {
        Ok(a) => a,
        Err(e) => {
            println!("[FAIL] full reference run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let elapsed = began.elapsed();

    ok &= report("3 access oracle equivalence", &criterion_3(&full));
    ok &= report("4 figure-of-merit exactness", &criterion_4(&full));
    let (c5, parts) = criterion_5(&full, elapsed);
    for (label, pass, detail) in &parts {
        println!(
            "    [{}] {label}: {detail}",
            if *pass { "PASS" } else { "FAIL" }
        );
    }
    ok &= report("5 reported-band reproduction", &c5);
    ok &= report("6 determinism across worker counts", &criterion_6());
    ok &= report("7 monotonicity under plane removal", &criterion_7());

    if ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: at least one criterion failed");
        ExitCode::FAILURE
    }
}
