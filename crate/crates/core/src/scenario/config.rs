use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sweep::SweepSpec;
use crate::constellation::{validate_spec, ConstellationSpec, Severity};
use crate::coverage::{
    AreaOfInterest, SensorModel, TimeWindow, DEFAULT_COARSE_STEP_S, DEFAULT_RESOLUTION_DEG,
    MAX_COARSE_STEP_S,
};
use crate::error::{Error, Result};
use crate::fom::{Metric, DEFAULT_SEPARATION_TAU_S, DEFAULT_SERIES_STEP_S};
use crate::orbits::GravityModel;
use crate::timebase::SECONDS_PER_DAY;

/// Where the area of interest comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AoiSource {
    Inline(AreaOfInterest),
    File(AoiFile),
    Builtin(AoiBuiltin),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AoiFile {
    /// GeoJSON Polygon file; relative paths resolve against the config file's directory.
    pub geojson_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AoiBuiltin {
    /// Name of a bundled AOI. Only `"india"` is bundled.
    pub builtin: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    /// Defaults to the constellation epoch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_utc: Option<crate::timebase::Epoch>,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            start_utc: None,
            duration_s: SECONDS_PER_DAY,
        }
    }
}

fn default_duration() -> f64 {
    SECONDS_PER_DAY
}
fn default_resolution() -> f64 {
    DEFAULT_RESOLUTION_DEG
}
fn default_coarse_step() -> f64 {
    DEFAULT_COARSE_STEP_S
}
fn default_series_step() -> f64 {
    DEFAULT_SERIES_STEP_S
}
fn default_tau() -> f64 {
    DEFAULT_SEPARATION_TAU_S
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("orbcov-out")
}
fn default_contour_metric() -> Metric {
    Metric::RevisitMean
}

/// A complete, declarative run description. Field names carry their units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub constellation: ConstellationSpec,
    pub aoi: AoiSource,
    #[serde(default)]
    pub sensor: SensorModel,
    #[serde(default)]
    pub window: WindowConfig,
    #[serde(default = "default_resolution")]
    pub grid_resolution_deg: f64,
    #[serde(default = "default_coarse_step")]
    pub coarse_step_s: f64,
    #[serde(default = "default_series_step")]
    pub series_step_s: f64,
    #[serde(default = "default_tau")]
    pub access_separation_tau_s: f64,
    #[serde(default)]
    pub gravity: GravityModel,
    #[serde(default = "default_contour_metric")]
    pub contour_metric: Metric,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    /// File the config was read from, for error messages and relative paths.
    #[serde(skip)]
    pub source_path: Option<PathBuf>,
}

impl ScenarioConfig {
    /// Defaults around a constellation and AOI: 5° elevation mask, 24 h, 0.5° grid.
    pub fn new(constellation: ConstellationSpec, aoi: AreaOfInterest) -> Self {
        Self {
            constellation,
            aoi: AoiSource::Inline(aoi),
            sensor: SensorModel::default(),
            window: WindowConfig::default(),
            grid_resolution_deg: DEFAULT_RESOLUTION_DEG,
            coarse_step_s: DEFAULT_COARSE_STEP_S,
            series_step_s: DEFAULT_SERIES_STEP_S,
            access_separation_tau_s: DEFAULT_SEPARATION_TAU_S,
            gravity: GravityModel::default(),
            contour_metric: Metric::RevisitMean,
            output_dir: default_output_dir(),
            sweep: None,
            source_path: None,
        }
    }

    /// Reads, resolves and validates a JSON scenario file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_owned(),
            source,
        })?;
        let mut config = Self::parse_json(&text, path)?;
        config.source_path = Some(path.to_owned());
        config.resolve()?;
        config.validate()?;
        Ok(config)
    }

    /// Parses JSON text; `origin` is only used to label errors.
    pub fn parse_json(text: &str, origin: &Path) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            Error::config(origin, field, e.into_inner())
        })
    }

    fn origin(&self) -> PathBuf {
        self.source_path
            .clone()
            .unwrap_or_else(|| PathBuf::from("<inline config>"))
    }

    /// Replaces file and builtin AOI references by inline polygons and pins the
    /// window start, so the config fully describes the run on its own.
    pub fn resolve(&mut self) -> Result<()> {
        let origin = self.origin();
        let aoi = match &self.aoi {
            AoiSource::Inline(aoi) => aoi.clone(),
            AoiSource::File(file) => {
                let base = self
                    .source_path
                    .as_deref()
                    .and_then(Path::parent)
                    .unwrap_or(Path::new("."));
                let path = base.join(&file.geojson_path);
                AreaOfInterest::from_geojson_file(&path)
                    .map_err(|e| Error::config(&origin, "aoi.geojson_path", e))?
            }
            AoiSource::Builtin(b) => match b.builtin.to_ascii_lowercase().as_str() {
                "india" => AreaOfInterest::india(),
                other => {
                    return Err(Error::config(
                        &origin,
                        "aoi.builtin",
                        format!("unknown bundled AOI {other:?}; available: india"),
                    ))
                }
            },
        };
        self.aoi = AoiSource::Inline(aoi);
        if self.window.start_utc.is_none() {
            self.window.start_utc = Some(self.constellation.epoch);
        }
        Ok(())
    }

    /// The inline AOI. Call [`ScenarioConfig::resolve`] first for file or builtin sources.
    pub fn area_of_interest(&self) -> Result<&AreaOfInterest> {
        match &self.aoi {
            AoiSource::Inline(aoi) => Ok(aoi),
            _ => Err(Error::config(
                self.origin(),
                "aoi",
                "AOI reference is not resolved",
            )),
        }
    }

    pub fn time_window(&self) -> TimeWindow {
        TimeWindow {
            start: self.window.start_utc.unwrap_or(self.constellation.epoch),
            duration_s: self.window.duration_s,
        }
    }

    /// Checks every field, reporting the first failure with its field path.
    pub fn validate(&self) -> Result<()> {
        let origin = self.origin();
        let bad = |field: &str, msg: String| Err(Error::config(&origin, field, msg));

        if let Some(d) = validate_spec(&self.constellation)
            .into_iter()
            .find(|d| d.severity == Severity::Error)
        {
            return bad(&format!("constellation.{}", d.field), d.message);
        }
        if let AoiSource::Inline(aoi) = &self.aoi {
            if let Err(e) = aoi.validate() {
                return bad("aoi", e.to_string());
            }
        }
        if let Err(e) = self.sensor.validate() {
            return bad("sensor", e.to_string());
        }
        if !(self.window.duration_s > 0.0) || !self.window.duration_s.is_finite() {
            return bad(
                "window.duration_s",
                format!("must be positive, got {}", self.window.duration_s),
            );
        }
        if !(self.grid_resolution_deg > 0.0) {
            return bad(
                "grid_resolution_deg",
                format!("must be positive, got {}", self.grid_resolution_deg),
            );
        }
        if !(self.coarse_step_s > 0.0 && self.coarse_step_s <= MAX_COARSE_STEP_S) {
            return bad(
                "coarse_step_s",
                format!(
                    "must be within (0, {MAX_COARSE_STEP_S}], got {}",
                    self.coarse_step_s
                ),
            );
        }
        if !(self.series_step_s > 0.0) {
            return bad(
                "series_step_s",
                format!("must be positive, got {}", self.series_step_s),
            );
        }
        if !(self.access_separation_tau_s > 0.0) {
            return bad(
                "access_separation_tau_s",
                format!("must be positive, got {}", self.access_separation_tau_s),
            );
        }
        if let Err(e) = self.gravity.validate() {
            return bad("gravity", e.to_string());
        }
        if let Some(sweep) = &self.sweep {
            if let Err(e) = sweep.validate() {
                return bad("sweep", e.to_string());
            }
        }
        Ok(())
    }

    /// Pretty JSON of the full config; re-loadable with [`ScenarioConfig::load`].
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}
