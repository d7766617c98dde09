use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::ScenarioConfig;
use super::export;
use crate::constellation::{expand_constellation, SatelliteDefinition};
use crate::coverage::{generate_grid, merge_spans, AccessEngine, AccessInterval, GridPoint, Span};
use crate::error::{Error, Result};
use crate::fom::{
    aggregate_report, evaluate_point, percent_coverage_series, AggregateProfile, CoverageSeries,
    FomPointReport, PointEvaluation,
};

/// Coverage of the whole AOI by one satellite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SatelliteAoiSummary {
    pub satellite_id: String,
    /// Distinct passes over the AOI: the union of this satellite's access
    /// intervals across all grid points, counted as merged spans.
    pub aoi_accesses: usize,
    pub aoi_access_time_s: f64,
    /// Raw (point, pass) access count.
    pub grid_point_accesses: usize,
}

/// In-memory result of a scenario run.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// The resolved configuration that produced this analysis.
    pub config: ScenarioConfig,
    pub satellites: Vec<SatelliteDefinition>,
    pub grid: Vec<GridPoint>,
    /// Per grid point, in grid order.
    pub accesses: Vec<Vec<AccessInterval>>,
    pub points: Vec<PointEvaluation>,
    pub series: CoverageSeries,
    pub profile: AggregateProfile,
    pub satellite_summaries: Vec<SatelliteAoiSummary>,
}

impl Analysis {
    pub fn reports(&self) -> Vec<FomPointReport> {
        self.points.iter().map(|p| p.report.clone()).collect()
    }

    pub fn timelines(&self) -> Vec<Vec<Span>> {
        self.points.iter().map(|p| p.timeline.clone()).collect()
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Runtime(format!("cannot start {workers} workers: {e}")))
}

/// Runs the full pipeline in memory: expand, grid, access search, figures of merit.
///
/// `workers` sets the thread count (0 picks one per core). Results are
/// assembled in grid order and do not depend on it.
pub fn analyze(config: &ScenarioConfig, workers: usize) -> Result<Analysis> {
    let mut config = config.clone();
    config.resolve()?;
    config.validate()?;

    let satellites = expand_constellation(&config.constellation)?;
    let aoi = config.area_of_interest()?.clone();
    let grid = generate_grid(&aoi, config.grid_resolution_deg)?;
    let window = config.time_window();
    log::info!(
        "{} satellites, {} grid points over {:?}, {} s window",
        satellites.len(),
        grid.len(),
        aoi.name,
        window.duration_s
    );

    let pool = thread_pool(workers)?;
    let engine = pool.install(|| {
        AccessEngine::new(&satellites, window, config.coarse_step_s, &config.gravity)
    })?;
    let sensor = config.sensor;
    let tau = config.access_separation_tau_s;
    let per_point: Vec<(Vec<AccessInterval>, PointEvaluation)> = pool.install(|| {
        grid.par_iter()
            .map(|p| {
                let acc = engine.accesses(p, &sensor)?;
                let eval = evaluate_point(p.lat_deg, p.lon_deg, &acc, window.duration_s, tau);
                Ok((acc, eval))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let (accesses, points): (Vec<_>, Vec<_>) = per_point.into_iter().unzip();

    let timelines: Vec<Vec<Span>> = points
        .iter()
        .map(|p: &PointEvaluation| p.timeline.clone())
        .collect();
    let series = percent_coverage_series(&timelines, config.series_step_s, window.duration_s)?;
    let reports: Vec<FomPointReport> = points.iter().map(|p| p.report.clone()).collect();
    let profile = aggregate_report(&reports)?;
    let satellite_summaries = summarize_satellites(&satellites, &accesses);

    Ok(Analysis {
        config,
        satellites,
        grid,
        accesses,
        points,
        series,
        profile,
        satellite_summaries,
    })
}

fn summarize_satellites(
    satellites: &[SatelliteDefinition],
    accesses: &[Vec<AccessInterval>],
) -> Vec<SatelliteAoiSummary> {
    satellites
        .iter()
        .map(|sat| {
            let spans: Vec<Span> = accesses
                .iter()
                .flatten()
                .filter(|a| a.satellite_id == sat.id)
                .map(|a| Span::new(a.start_s, a.end_s))
                .collect();
            let grid_point_accesses = spans.len();
            let passes = merge_spans(spans);
            SatelliteAoiSummary {
                satellite_id: sat.id.clone(),
                aoi_accesses: passes.len(),
                aoi_access_time_s: passes.iter().map(Span::duration_s).sum(),
                grid_point_accesses,
            }
        })
        .collect()
}

/// Paths of everything a run writes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub dir: PathBuf,
    pub points_csv: PathBuf,
    pub profiles_csv: PathBuf,
    pub series_csv: PathBuf,
    pub satellites_csv: PathBuf,
    pub contour_geojson: PathBuf,
    pub manifest_json: PathBuf,
}

/// Runs the scenario and writes its reports into `config.output_dir`.
pub fn run_scenario(config: &ScenarioConfig, workers: usize) -> Result<RunOutputs> {
    let analysis = analyze(config, workers)?;
    write_outputs(&analysis, &analysis.config.output_dir)
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|source| Error::Write {
            path: path.to_owned(),
            source,
        })
}

/// Writes the report set of `analysis` into `dir`.
pub fn write_outputs(analysis: &Analysis, dir: &Path) -> Result<RunOutputs> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.to_owned(),
        source,
    })?;
    let metric = analysis.config.contour_metric;
    let out = RunOutputs {
        dir: dir.to_owned(),
        points_csv: dir.join("points.csv"),
        profiles_csv: dir.join("profiles.csv"),
        series_csv: dir.join("coverage_series.csv"),
        satellites_csv: dir.join("satellites.csv"),
        contour_geojson: dir.join(format!("contour_{}.geojson", metric.name())),
        manifest_json: dir.join("manifest.json"),
    };
    let reports = analysis.reports();
    let wrap = |path: &Path| {
        let path = path.to_owned();
        move |source| Error::Write { path, source }
    };

    export::export_point_csv(&reports, create(&out.points_csv)?).map_err(wrap(&out.points_csv))?;
    export::export_profiles_csv(&analysis.profile, create(&out.profiles_csv)?)
        .map_err(wrap(&out.profiles_csv))?;
    export::export_series_csv(&analysis.series, create(&out.series_csv)?)
        .map_err(wrap(&out.series_csv))?;
    export::export_satellites_csv(&analysis.satellite_summaries, create(&out.satellites_csv)?)
        .map_err(wrap(&out.satellites_csv))?;
    export::export_contour_geojson(&reports, metric.name(), create(&out.contour_geojson)?)?;
    std::fs::write(&out.manifest_json, analysis.config.to_json())
        .map_err(wrap(&out.manifest_json))?;
    log::info!("wrote reports to {}", dir.display());
    Ok(out)
}
