use std::fs;
use std::path::Path;

use orbcov::constellation::ConstellationSpec;
use orbcov::coverage::{AreaOfInterest, SensorModel};
use orbcov::fom::{grid_stats, Metric};
use orbcov::scenario::export::{
    contour_geojson_from_triples, export_point_csv, export_profiles_csv, export_satellites_csv,
    export_series_csv, read_contour_geojson, read_point_csv, read_profiles_csv,
    read_satellites_csv, read_series_csv, write_point_rows,
};
use orbcov::scenario::{
    analyze, export_sweep_csv, read_sweep_csv, run_scenario, run_sweep, ScenarioConfig, SweepSpec,
};
use orbcov::timebase::Epoch;
use orbcov::{Error, ErrorKind};

fn epoch() -> Epoch {
    Epoch::from_utc(2021, 3, 1, 0, 0, 0.0).unwrap()
}

fn small_config(out: &Path) -> ScenarioConfig {
    let aoi = AreaOfInterest::new(
        "central",
        vec![(18.0, 76.0), (18.0, 80.0), (22.0, 80.0), (22.0, 76.0)],
    )
    .unwrap();
    let mut c = ScenarioConfig::new(ConstellationSpec::table1(epoch()), aoi);
    c.window.duration_s = 6.0 * 3600.0;
    c.grid_resolution_deg = 1.0;
    c.output_dir = out.to_owned();
    c
}

fn read(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap()
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let first = run_scenario(&config, 1).unwrap();
    let files = [
        &first.points_csv,
        &first.profiles_csv,
        &first.series_csv,
        &first.satellites_csv,
        &first.contour_geojson,
        &first.manifest_json,
    ];
    let before: Vec<Vec<u8>> = files.iter().map(|p| read(p)).collect();
    let second = run_scenario(&config, 3).unwrap();
    assert_eq!(first, second);
    let after: Vec<Vec<u8>> = files.iter().map(|p| read(p)).collect();
    assert_eq!(before, after);
}

#[test]
fn manifest_reproduces_the_run() {
    let a = tempfile::tempdir().unwrap();
    let out = run_scenario(&small_config(a.path()), 0).unwrap();

    let mut again = ScenarioConfig::load(&out.manifest_json).unwrap();
    let b = tempfile::tempdir().unwrap();
    again.output_dir = b.path().to_owned();
    let rerun = run_scenario(&again, 0).unwrap();
    assert_eq!(read(&out.points_csv), read(&rerun.points_csv));
    assert_eq!(read(&out.contour_geojson), read(&rerun.contour_geojson));
    assert_eq!(read(&out.series_csv), read(&rerun.series_csv));

    let manifest: serde_json::Value = serde_json::from_slice(&read(&out.manifest_json)).unwrap();
    assert_eq!(manifest["gravity"]["mu_km3_s2"], 398600.4418);
    assert_eq!(manifest["window"]["start_utc"], "2021-03-01T00:00:00Z");
    assert!(manifest["aoi"]["boundary_deg"].is_array());
}

#[test]
fn every_output_round_trips_through_its_parser() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_scenario(&small_config(dir.path()), 0).unwrap();

    let points = read(&out.points_csv);
    let rows = read_point_csv(points.as_slice()).unwrap();
    let mut again = Vec::new();
    write_point_rows(&rows, &mut again).unwrap();
    assert_eq!(points, again);

    let profiles = read(&out.profiles_csv);
    let mut again = Vec::new();
    export_profiles_csv(&read_profiles_csv(profiles.as_slice()).unwrap(), &mut again).unwrap();
    assert_eq!(profiles, again);

    let series = read(&out.series_csv);
    let mut again = Vec::new();
    export_series_csv(&read_series_csv(series.as_slice()).unwrap(), &mut again).unwrap();
    assert_eq!(series, again);

    let sats = read(&out.satellites_csv);
    let mut again = Vec::new();
    export_satellites_csv(&read_satellites_csv(sats.as_slice()).unwrap(), &mut again).unwrap();
    assert_eq!(sats, again);

    let contour = fs::read_to_string(&out.contour_geojson).unwrap();
    let (metric, triples) = read_contour_geojson(&contour).unwrap();
    assert_eq!(metric, Metric::RevisitMean);
    assert_eq!(triples.len(), rows.len());
    assert_eq!(contour_geojson_from_triples(metric, &triples), contour);
}

#[test]
fn rectangle_run_has_one_row_per_lattice_point() {
    let dir = tempfile::tempdir().unwrap();
    let aoi = AreaOfInterest::new(
        "rectangle",
        vec![(8.0, 68.0), (8.0, 97.5), (37.0, 97.5), (37.0, 68.0)],
    )
    .unwrap();
    let mut c = ScenarioConfig::new(ConstellationSpec::table1(epoch()), aoi);
    c.window.duration_s = 3600.0;
    c.output_dir = dir.path().to_owned();
    let out = run_scenario(&c, 0).unwrap();
    let text = fs::read_to_string(&out.points_csv).unwrap();
    assert_eq!(text.lines().count(), 3541);
    let features = read_contour_geojson(&fs::read_to_string(&out.contour_geojson).unwrap())
        .unwrap()
        .1;
    assert_eq!(features.len(), 3540);
}

#[test]
fn uncovered_points_have_empty_cells() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.sensor = SensorModel::swath(10.0, 600.0);
    c.window.duration_s = 3600.0;
    let analysis = analyze(&c, 0).unwrap();
    let silent = analysis
        .points
        .iter()
        .position(|p| p.report.n_accesses == 0)
        .expect("a 10 km swath misses most points within an hour");

    let mut buf = Vec::new();
    export_point_csv(&analysis.reports(), &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let line = text.lines().nth(silent + 1).unwrap();
    let cells: Vec<&str> = line.split(',').collect();
    assert_eq!(cells[2], "0.000");
    assert_eq!(&cells[3..5], ["", ""]);
    assert_eq!(&cells[9..12], ["", "", ""]);
    assert_eq!(cells[8], "60.000");
}

#[test]
fn aoi_file_resolves_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("box.geojson"),
        r#"{"type": "Polygon", "coordinates": [[[76, 18], [80, 18], [80, 22], [76, 22], [76, 18]]]}"#,
    )
    .unwrap();
    let text = r#"{
        "constellation": {
            "altitude_km": 600, "inclination_deg": 36, "plane_raans_deg": [70, 90, 110, 130],
            "sats_per_plane": 3, "anomaly_spacing_deg": 120, "epoch_utc": "2021-03-01T00:00:00Z"
        },
        "aoi": { "geojson_path": "box.geojson" },
        "grid_resolution_deg": 1.0
    }"#;
    let path = dir.path().join("scenario.json");
    fs::write(&path, text).unwrap();
    let config = ScenarioConfig::load(&path).unwrap();
    let aoi = config.area_of_interest().unwrap();
    assert_eq!(aoi.boundary.len(), 4);
    assert_eq!(aoi.bounding_box(), (18.0, 76.0, 22.0, 80.0));
}

#[test]
fn empty_grid_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.grid_resolution_deg = 10.0;
    c.aoi = orbcov::scenario::AoiSource::Inline(
        AreaOfInterest::new("sliver", vec![(20.0, 78.5), (20.5, 78.9), (20.2, 78.1)]).unwrap(),
    );
    let err = run_scenario(&c, 0).unwrap_err();
    assert!(matches!(err, Error::EmptyGrid { .. }), "{err:?}");
    assert_eq!(err.kind(), ErrorKind::Runtime);
}

#[test]
fn single_combination_sweep_matches_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config(dir.path());
    c.sweep = Some(SweepSpec {
        sats_per_plane: vec![3],
        ..SweepSpec::default()
    });
    let rows = run_sweep(&c, 0).unwrap();
    assert_eq!(rows.len(), 1);
    let direct = analyze(&c, 0).unwrap();
    let stats = grid_stats(&direct.reports(), Metric::RevisitMean).unwrap();
    assert_eq!(rows[0].objective_value, Some(stats.mean));
    assert_eq!(rows[0].satellites, 12);
    assert_eq!(rows[0].grid_points, direct.grid.len());
}

#[test]
fn table1_plane_sweep_over_india() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ScenarioConfig::new(ConstellationSpec::table1(epoch()), AreaOfInterest::india());
    c.output_dir = dir.path().to_owned();
    c.sweep = Some(SweepSpec {
        planes: vec![3, 4],
        ..SweepSpec::default()
    });
    let rows = run_sweep(&c, 0).unwrap();
    assert_eq!(rows.len(), 2);
    let by_planes = |n: usize| rows.iter().find(|r| r.planes == n).unwrap();
    let (three, four) = (by_planes(3), by_planes(4));
    assert_eq!(four.satellites, 12);
    assert!(four.objective_value.unwrap() <= three.objective_value.unwrap());
    // The 4-plane reference layout lands in the 15-35 min revisit band.
    let minutes = four.objective_value.unwrap() / 60.0;
    assert!((15.0..=35.0).contains(&minutes), "{minutes}");

    let mut csv = Vec::new();
    export_sweep_csv(&rows, &mut csv).unwrap();
    let parsed = read_sweep_csv(csv.as_slice()).unwrap();
    assert_eq!(parsed.len(), 2);
    assert_eq!(parsed[0].planes, rows[0].planes);
}
