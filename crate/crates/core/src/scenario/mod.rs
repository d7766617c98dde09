//! Scenario files, the end-to-end pipeline, report export and parameter sweeps.

mod config;
pub mod export;
mod pipeline;
mod sweep;

pub use config::{AoiBuiltin, AoiFile, AoiSource, ScenarioConfig, WindowConfig};
pub use pipeline::{
    analyze, run_scenario, write_outputs, Analysis, RunOutputs, SatelliteAoiSummary,
};
pub use sweep::{
    export_sweep_csv, read_sweep_csv, run_sweep, run_sweep_to_dir, sweep_configs, SweepRow,
    SweepSpec, DEFAULT_MAX_EVALUATIONS, SWEEP_COLUMNS,
};

use serde::Serialize;

use crate::constellation::{expand_constellation, validate_spec, Diagnostic};
use crate::coverage::generate_grid;
use crate::error::Result;

#[derive(Serialize)]
struct ExpandedSatellite<'a> {
    id: &'a str,
    a_km: f64,
    e: f64,
    i_deg: f64,
    raan_deg: f64,
    argp_deg: f64,
    ta_deg: f64,
    epoch_utc: String,
}

/// Pretty JSON array of the expanded satellites' elements, in expansion order.
pub fn expand_json(config: &ScenarioConfig) -> Result<String> {
    let sats = expand_constellation(&config.constellation)?;
    let rows: Vec<ExpandedSatellite> = sats
        .iter()
        .map(|s| ExpandedSatellite {
            id: &s.id,
            a_km: s.elements.a_km(),
            e: s.elements.e(),
            i_deg: s.elements.i_deg(),
            raan_deg: s.elements.raan_deg(),
            argp_deg: s.elements.argp_deg(),
            ta_deg: s.elements.ta_deg(),
            epoch_utc: s.elements.epoch().to_rfc3339(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&rows).expect("elements serialize");
    text.push('\n');
    Ok(text)
}

/// What `validate` found in an already loaded (resolved, validated) config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub satellites: usize,
    pub grid_points: usize,
    pub warnings: Vec<Diagnostic>,
    pub sweep_combinations: Option<usize>,
}

/// Lints a loaded config: counts satellites and grid points, collects warnings.
pub fn validation_summary(config: &ScenarioConfig) -> Result<ValidationSummary> {
    let grid = generate_grid(config.area_of_interest()?, config.grid_resolution_deg)?;
    Ok(ValidationSummary {
        satellites: config.constellation.satellite_count(),
        grid_points: grid.len(),
        warnings: validate_spec(&config.constellation),
        sweep_combinations: config.sweep.as_ref().map(SweepSpec::combinations),
    })
}
