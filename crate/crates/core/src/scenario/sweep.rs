//! Grid search over constellation parameters.

use std::cmp::Ordering;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::pipeline::analyze;
use crate::error::{Error, Result};
use crate::fom::{grid_stats, Metric};

pub const DEFAULT_MAX_EVALUATIONS: usize = 256;

fn default_objective() -> Metric {
    Metric::RevisitMean
}
fn default_cap() -> usize {
    DEFAULT_MAX_EVALUATIONS
}

/// Parameter axes. An empty axis keeps the base scenario's value.
///
/// Plane RAANs are regenerated as `first + k · raan_spacing_deg` whenever
/// `planes` or `raan_spacing_deg` is swept, starting from the base list's
/// first RAAN. With both empty the base RAAN list is used verbatim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inclination_deg: Vec<f64>,
    /// Separation between adjacent plane RAANs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub raan_spacing_deg: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub planes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sats_per_plane: Vec<usize>,
    /// Tabulated as its grid mean over the points where it is defined.
    #[serde(default = "default_objective")]
    pub objective: Metric,
    #[serde(default = "default_cap")]
    pub max_evaluations: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            inclination_deg: Vec::new(),
            raan_spacing_deg: Vec::new(),
            planes: Vec::new(),
            sats_per_plane: Vec::new(),
            objective: default_objective(),
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

impl SweepSpec {
    pub fn combinations(&self) -> usize {
        [
            self.inclination_deg.len(),
            self.raan_spacing_deg.len(),
            self.planes.len(),
            self.sats_per_plane.len(),
        ]
        .iter()
        .map(|&n| n.max(1))
        .product()
    }

    pub fn validate(&self) -> Result<()> {
        if self.inclination_deg.is_empty()
            && self.raan_spacing_deg.is_empty()
            && self.planes.is_empty()
            && self.sats_per_plane.is_empty()
        {
            return bad_axis("at least one axis must list values");
        }
        if let Some(i) = self
            .inclination_deg
            .iter()
            .find(|i| !(0.0..=180.0).contains(*i))
        {
            return bad_axis(&format!("inclination_deg {i} is outside [0, 180]"));
        }
        if let Some(s) = self
            .raan_spacing_deg
            .iter()
            .find(|s| !(**s > 0.0 && **s < 360.0))
        {
            return bad_axis(&format!("raan_spacing_deg {s} is outside (0, 360)"));
        }
        if self.planes.contains(&0) {
            return bad_axis("planes must be at least 1");
        }
        if self.sats_per_plane.contains(&0) {
            return bad_axis("sats_per_plane must be at least 1");
        }
        if self.max_evaluations == 0 {
            return bad_axis("max_evaluations must be at least 1");
        }
        Ok(())
    }
}

fn bad_axis(msg: &str) -> Result<()> {
    Err(Error::Parse {
        what: "sweep spec",
        message: msg.to_owned(),
    })
}

/// One evaluated parameter combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub inclination_deg: f64,
    pub planes: usize,
    /// `None` when the base RAAN list was used as given.
    pub raan_spacing_deg: Option<f64>,
    pub sats_per_plane: usize,
    pub satellites: usize,
    pub objective: Metric,
    /// Grid mean of the objective in seconds (or counts); `None` if undefined everywhere.
    pub objective_value: Option<f64>,
    /// Points where the objective is defined.
    pub defined_points: usize,
    pub grid_points: usize,
}

fn base_spacing(raans: &[f64]) -> f64 {
    match raans {
        [a, b, ..] => (b - a).rem_euclid(360.0),
        _ => 20.0,
    }
}

/// Scenario configs for every combination, in axis order (inclination outermost).
pub fn sweep_configs(
    base: &ScenarioConfig,
    sweep: &SweepSpec,
) -> Result<Vec<(ScenarioConfig, Option<f64>)>> {
    sweep.validate()?;
    let n = sweep.combinations();
    if n > sweep.max_evaluations {
        return Err(Error::SweepTooLarge {
            combinations: n,
            cap: sweep.max_evaluations,
        });
    }
    let spec = &base.constellation;
    let axis = |v: &[f64], d: f64| if v.is_empty() { vec![d] } else { v.to_vec() };
    let regenerate = !sweep.planes.is_empty() || !sweep.raan_spacing_deg.is_empty();
    let incs = axis(&sweep.inclination_deg, spec.inclination_deg);
    let spacings = axis(&sweep.raan_spacing_deg, base_spacing(&spec.plane_raans_deg));
    let planes = if sweep.planes.is_empty() {
        vec![spec.plane_raans_deg.len()]
    } else {
        sweep.planes.clone()
    };
    let spp = if sweep.sats_per_plane.is_empty() {
        vec![spec.sats_per_plane]
    } else {
        sweep.sats_per_plane.clone()
    };
    let first = spec.plane_raans_deg.first().copied().unwrap_or(0.0);

    let mut out = Vec::with_capacity(n);
    for &inc in &incs {
        for &spacing in &spacings {
            for &np in &planes {
                for &k in &spp {
                    let mut c = base.clone();
                    c.sweep = None;
                    c.constellation.inclination_deg = inc;
                    c.constellation.sats_per_plane = k;
                    if regenerate {
                        c.constellation.plane_raans_deg = (0..np)
                            .map(|p| (first + p as f64 * spacing).rem_euclid(360.0))
                            .collect();
                    }
                    out.push((c, regenerate.then_some(spacing)));
                }
            }
        }
    }
    Ok(out)
}

/// Evaluates every combination of `config.sweep` and returns rows sorted by
/// objective ascending, undefined objectives last.
pub fn run_sweep(config: &ScenarioConfig, workers: usize) -> Result<Vec<SweepRow>> {
    let sweep = config.sweep.clone().ok_or_else(|| {
        Error::config(
            config.source_path.clone().unwrap_or_default(),
            "sweep",
            "no sweep section in the scenario config",
        )
    })?;
    let mut rows = Vec::new();
    for (scenario, spacing) in sweep_configs(config, &sweep)? {
        let analysis = analyze(&scenario, workers)?;
        let reports = analysis.reports();
        let stats = grid_stats(&reports, sweep.objective);
        let c = &scenario.constellation;
        log::info!(
            "sweep i={} planes={} spp={}: {:?}",
            c.inclination_deg,
            c.plane_raans_deg.len(),
            c.sats_per_plane,
            stats.map(|s| s.mean)
        );
        rows.push(SweepRow {
            inclination_deg: c.inclination_deg,
            planes: c.plane_raans_deg.len(),
            raan_spacing_deg: spacing,
            sats_per_plane: c.sats_per_plane,
            satellites: c.satellite_count(),
            objective: sweep.objective,
            objective_value: stats.map(|s| s.mean),
            defined_points: stats.map(|s| s.count).unwrap_or(0),
            grid_points: reports.len(),
        });
    }
    rows.sort_by(|a, b| match (a.objective_value, b.objective_value) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    });
    Ok(rows)
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "inclination_deg",
    "planes",
    "raan_spacing_deg",
    "sats_per_plane",
    "satellites",
    "objective",
    "objective_grid_mean",
    "defined_points",
    "grid_points",
];

/// Writes the comparison table; durations in minutes with 3 decimals.
pub fn export_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        let scale = if r.objective.is_duration() { 60.0 } else { 1.0 };
        out.write_record([
            r.inclination_deg.to_string(),
            r.planes.to_string(),
            r.raan_spacing_deg
                .map(|s| s.to_string())
                .unwrap_or_default(),
            r.sats_per_plane.to_string(),
            r.satellites.to_string(),
            r.objective.name().to_owned(),
            r.objective_value
                .map(|v| format!("{:.3}", v / scale))
                .unwrap_or_default(),
            r.defined_points.to_string(),
            r.grid_points.to_string(),
        ])?;
    }
    out.flush()
}

/// Parses a sweep table. Objective values come back in seconds, at the written precision.
pub fn read_sweep_csv<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let bad = |message: String| Error::Parse {
        what: "sweep CSV",
        message,
    };
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(SWEEP_COLUMNS.iter().copied()) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let cell = |i: usize| rec.get(i).unwrap_or("");
        let f = |i: usize| {
            cell(i)
                .parse::<f64>()
                .map_err(|e| bad(format!("{}: {e}", SWEEP_COLUMNS[i])))
        };
        let u = |i: usize| {
            cell(i)
                .parse::<usize>()
                .map_err(|e| bad(format!("{}: {e}", SWEEP_COLUMNS[i])))
        };
        let opt = |i: usize| {
            if cell(i).is_empty() {
                Ok(None)
            } else {
                f(i).map(Some)
            }
        };
        let objective: Metric = cell(5).parse()?;
        let scale = if objective.is_duration() { 60.0 } else { 1.0 };
        rows.push(SweepRow {
            inclination_deg: f(0)?,
            planes: u(1)?,
            raan_spacing_deg: opt(2)?,
            sats_per_plane: u(3)?,
            satellites: u(4)?,
            objective,
            objective_value: opt(6)?.map(|v| v * scale),
            defined_points: u(7)?,
            grid_points: u(8)?,
        });
    }
    Ok(rows)
}

/// Runs the sweep and writes `sweep.csv` into `dir`.
pub fn run_sweep_to_dir(config: &ScenarioConfig, workers: usize, dir: &Path) -> Result<PathBuf> {
    let rows = run_sweep(config, workers)?;
    std::fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.to_owned(),
        source,
    })?;
    let path = dir.join("sweep.csv");
    let file = std::fs::File::create(&path).map_err(|source| Error::Write {
        path: path.clone(),
        source,
    })?;
    export_sweep_csv(&rows, io::BufWriter::new(file)).map_err(|source| Error::Write {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
