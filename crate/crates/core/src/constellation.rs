//! Expansion of a declarative plane/phase layout into per-satellite elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::KeplerianElements;
use crate::timebase::{Epoch, WGS84_A_KM};

/// A set of circular orbital planes sharing altitude and inclination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationSpec {
    pub altitude_km: f64,
    pub inclination_deg: f64,
    /// One RAAN per plane, in plane order.
    pub plane_raans_deg: Vec<f64>,
    pub sats_per_plane: usize,
    /// True-anomaly separation between consecutive satellites of a plane.
    pub anomaly_spacing_deg: f64,
    #[serde(rename = "epoch_utc")]
    pub epoch: Epoch,
    #[serde(default = "default_prefix")]
    pub name_prefix: String,
}

fn default_prefix() -> String {
    "G".to_owned()
}

impl ConstellationSpec {
    /// The 4-plane, 12-satellite layout: 600 km, 36°, RAAN 70°..130° in 20° steps,
    /// three satellites per plane 120° apart.
    pub fn table1(epoch: Epoch) -> Self {
        Self {
            altitude_km: 600.0,
            inclination_deg: 36.0,
            plane_raans_deg: vec![70.0, 90.0, 110.0, 130.0],
            sats_per_plane: 3,
            anomaly_spacing_deg: 120.0,
            epoch,
            name_prefix: default_prefix(),
        }
    }

    pub fn satellite_count(&self) -> usize {
        self.plane_raans_deg.len() * self.sats_per_plane
    }

    pub fn semi_major_axis_km(&self) -> f64 {
        WGS84_A_KM + self.altitude_km
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// One finding from [`validate_spec`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}: {}: {}", self.field, self.message)
    }
}

impl Diagnostic {
    fn error(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Checks every invariant of `spec`. Errors block expansion; warnings do not.
pub fn validate_spec(spec: &ConstellationSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !(spec.altitude_km > 100.0) || !spec.altitude_km.is_finite() {
        out.push(Diagnostic::error(
            "altitude_km",
            format!("must be > 100 km, got {}", spec.altitude_km),
        ));
    }
    if !(0.0..=180.0).contains(&spec.inclination_deg) {
        out.push(Diagnostic::error(
            "inclination_deg",
            format!("must be within [0, 180], got {}", spec.inclination_deg),
        ));
    }
    if spec.sats_per_plane < 1 {
        out.push(Diagnostic::error("sats_per_plane", "must be >= 1, got 0"));
    }
    if spec.plane_raans_deg.is_empty() {
        out.push(Diagnostic::error(
            "plane_raans_deg",
            "must list at least one plane",
        ));
    }
    for (idx, raan) in spec.plane_raans_deg.iter().enumerate() {
        if !(0.0..360.0).contains(raan) {
            out.push(Diagnostic::error(
                format!("plane_raans_deg[{idx}]"),
                format!("must be within [0, 360), got {raan}"),
            ));
        }
    }
    for (idx, raan) in spec.plane_raans_deg.iter().enumerate() {
        if spec.plane_raans_deg[..idx].contains(raan) {
            out.push(Diagnostic {
                severity: Severity::Warning,
                field: format!("plane_raans_deg[{idx}]"),
                message: format!("RAAN {raan} repeats an earlier plane"),
            });
        }
    }
    if !(spec.anomaly_spacing_deg > 0.0 && spec.anomaly_spacing_deg <= 360.0) {
        out.push(Diagnostic::error(
            "anomaly_spacing_deg",
            format!("must be within (0, 360], got {}", spec.anomaly_spacing_deg),
        ));
    }
    out
}

/// One member of an expanded constellation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteDefinition {
    pub id: String,
    pub elements: KeplerianElements,
}

/// Expands `spec` into satellites, plane-major then by anomaly.
///
/// Satellite `k` of plane `p` gets `Ω = plane_raans_deg[p]` and
/// `ν = k · anomaly_spacing_deg`; all orbits are circular with `ω = 0`.
/// Warnings are logged and do not stop expansion.
pub fn expand_constellation(spec: &ConstellationSpec) -> Result<Vec<SatelliteDefinition>> {
    let diagnostics = validate_spec(spec);
    let (errors, warnings): (Vec<_>, Vec<_>) = diagnostics
        .into_iter()
        .partition(|d| d.severity == Severity::Error);
    if !errors.is_empty() {
        return Err(Error::InvalidSpec(errors));
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    let a = spec.semi_major_axis_km();
    let mut sats = Vec::with_capacity(spec.satellite_count());
    for (p, &raan) in spec.plane_raans_deg.iter().enumerate() {
        for k in 0..spec.sats_per_plane {
            let ta = (k as f64 * spec.anomaly_spacing_deg).rem_euclid(360.0);
            sats.push(SatelliteDefinition {
                id: format!("{}{}-S{}", spec.name_prefix, p + 1, k + 1),
                elements: KeplerianElements::new(
                    a,
                    0.0,
                    spec.inclination_deg,
                    raan,
                    0.0,
                    ta,
                    spec.epoch,
                )?,
            });
        }
    }
    Ok(sats)
}
