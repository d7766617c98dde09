use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::aoi::GridPoint;
use crate::constellation::SatelliteDefinition;
use crate::error::{Error, Result};
use crate::orbits::{GravityModel, Trajectory};
use crate::timebase::{gmst_rad, rotate_to_earth_fixed, Epoch};

/// Largest coarse scan step accepted; anything longer can step over a short LEO pass.
pub const MAX_COARSE_STEP_S: f64 = 600.0;
pub const DEFAULT_COARSE_STEP_S: f64 = 10.0;
/// Width of the bracket left after refining a visibility transition.
pub const REFINE_TOLERANCE_S: f64 = 0.1;

/// Geometric visibility condition between a satellite and a ground point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SensorModel {
    /// Visible when the satellite is at least `min_elevation_deg` above the local horizon.
    ElevationMask { min_elevation_deg: f64 },
    /// Visible when the point lies within `half_angle_deg` of the satellite's nadir
    /// direction and the satellite is above the point's horizon.
    NadirCone { half_angle_deg: f64 },
}

impl Default for SensorModel {
    fn default() -> Self {
        SensorModel::ElevationMask {
            min_elevation_deg: 5.0,
        }
    }
}

impl SensorModel {
    /// Nadir cone whose ground footprint has the given swath width at the given altitude
    /// (flat-Earth approximation, adequate for swaths of tens of km).
    pub fn swath(swath_km: f64, altitude_km: f64) -> Self {
        SensorModel::NadirCone {
            half_angle_deg: (0.5 * swath_km / altitude_km).atan().to_degrees(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SensorModel::ElevationMask { min_elevation_deg } => {
                if !(0.0..90.0).contains(&min_elevation_deg) {
                    return Err(Error::InvalidSensor(format!(
                        "min_elevation_deg must be within [0, 90), got {min_elevation_deg}"
                    )));
                }
            }
            SensorModel::NadirCone { half_angle_deg } => {
                if !(half_angle_deg > 0.0 && half_angle_deg < 90.0) {
                    return Err(Error::InvalidSensor(format!(
                        "half_angle_deg must be within (0, 90), got {half_angle_deg}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn predicate(&self) -> Result<Predicate> {
        self.validate()?;
        Ok(match *self {
            SensorModel::ElevationMask { min_elevation_deg } => Predicate::Elevation {
                sin_mask: min_elevation_deg.to_radians().sin(),
            },
            SensorModel::NadirCone { half_angle_deg } => Predicate::Cone {
                cos_half: half_angle_deg.to_radians().cos(),
            },
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Predicate {
    Elevation { sin_mask: f64 },
    Cone { cos_half: f64 },
}

struct Observer {
    position: Vector3<f64>,
    up: Vector3<f64>,
}

impl Observer {
    fn new(point: &GridPoint) -> Self {
        Self {
            position: point.ecef.position,
            up: point.geodetic.up(),
        }
    }
}

impl Predicate {
    #[inline]
    fn holds(&self, obs: &Observer, sat: &Vector3<f64>) -> bool {
        let los = sat - obs.position;
        let range = los.norm();
        let height = obs.up.dot(&los);
        match *self {
            Predicate::Elevation { sin_mask } => height >= range * sin_mask,
            Predicate::Cone { cos_half } => {
                // Angle at the satellite between the geocentric nadir and the point.
                height >= 0.0 && (-los).dot(&(-sat)) >= range * sat.norm() * cos_half
            }
        }
    }
}

/// One continuous visibility window of a satellite over a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessInterval {
    pub satellite_id: String,
    pub start_s: f64,
    pub end_s: f64,
}

impl AccessInterval {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

/// The analysed time span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    #[serde(rename = "start_utc")]
    pub start: Epoch,
    pub duration_s: f64,
}

/// Shared, read-only ephemeris of a constellation over a window, sampled on
/// the coarse scan grid. Access searches for any number of points (from any
/// number of threads) reuse the same samples.
pub struct AccessEngine {
    ids: Vec<String>,
    trajectories: Vec<Trajectory>,
    /// Seconds from each satellite's element epoch to the window start.
    offsets_s: Vec<f64>,
    window: TimeWindow,
    sample_times: Vec<f64>,
    /// `samples[sat][k]`: Earth-fixed position at `sample_times[k]`.
    samples: Vec<Vec<Vector3<f64>>>,
}

impl AccessEngine {
    pub fn new(
        sats: &[SatelliteDefinition],
        window: TimeWindow,
        coarse_step_s: f64,
        gravity: &GravityModel,
    ) -> Result<Self> {
        if !(window.duration_s > 0.0) || !window.duration_s.is_finite() {
            return Err(Error::InvalidStep {
                name: "duration_s",
                value: window.duration_s,
                reason: "analysis window must be positive",
            });
        }
        check_coarse_step(coarse_step_s)?;

        let steps = (window.duration_s / coarse_step_s).ceil() as usize;
        let sample_times: Vec<f64> = (0..=steps)
            .map(|k| (k as f64 * coarse_step_s).min(window.duration_s))
            .collect();
        let thetas: Vec<f64> = sample_times
            .iter()
            .map(|&t| gmst_rad(&window.start.add_seconds(t)))
            .collect();

        let trajectories: Vec<Trajectory> = sats
            .iter()
            .map(|s| Trajectory::new(&s.elements, gravity))
            .collect();
        let offsets_s: Vec<f64> = sats
            .iter()
            .map(|s| window.start.seconds_since(&s.elements.epoch()))
            .collect();
        let samples = trajectories
            .iter()
            .zip(&offsets_s)
            .map(|(traj, &offset)| {
                sample_times
                    .iter()
                    .zip(&thetas)
                    .map(|(&t, &theta)| {
                        rotate_to_earth_fixed(&traj.state_at(offset + t).position, theta)
                    })
                    .collect()
            })
            .collect();

        Ok(Self {
            ids: sats.iter().map(|s| s.id.clone()).collect(),
            trajectories,
            offsets_s,
            window,
            sample_times,
            samples,
        })
    }

    pub fn window(&self) -> TimeWindow {
        self.window
    }

    pub fn satellite_ids(&self) -> &[String] {
        &self.ids
    }

    /// Earth-fixed position of satellite `sat` at `t_s` seconds into the window.
    pub fn satellite_ecef(&self, sat: usize, t_s: f64) -> Vector3<f64> {
        let theta = gmst_rad(&self.window.start.add_seconds(t_s));
        let state = self.trajectories[sat].state_at(self.offsets_s[sat] + t_s);
        rotate_to_earth_fixed(&state.position, theta)
    }

    /// Direct evaluation of the sensor condition at one instant.
    pub fn is_visible(
        &self,
        sat: usize,
        point: &GridPoint,
        sensor: &SensorModel,
        t_s: f64,
    ) -> Result<bool> {
        let pred = sensor.predicate()?;
        Ok(pred.holds(&Observer::new(point), &self.satellite_ecef(sat, t_s)))
    }

    /// All access intervals of all satellites over `point`, sorted by start time.
    ///
    /// Visibility is scanned on the coarse grid and every change of state is
    /// bisected down to [`REFINE_TOLERANCE_S`]; reported boundaries are the
    /// visible side of the final bracket.
    pub fn accesses(&self, point: &GridPoint, sensor: &SensorModel) -> Result<Vec<AccessInterval>> {
        let pred = sensor.predicate()?;
        let obs = Observer::new(point);
        let mut out: Vec<(usize, AccessInterval)> = Vec::new();
        for (sat, positions) in self.samples.iter().enumerate() {
            let mut prev = pred.holds(&obs, &positions[0]);
            let mut open = prev.then_some(0.0);
            #[allow(clippy::needless_range_loop)]
            for k in 1..positions.len() {
                let now = pred.holds(&obs, &positions[k]);
                if now == prev {
                    continue;
                }
                let (before, after) = self.refine(
                    sat,
                    &obs,
                    &pred,
                    self.sample_times[k - 1],
                    self.sample_times[k],
                    prev,
                );
                if now {
                    open = Some(after);
                } else if let Some(start) = open.take() {
                    self.push(&mut out, sat, start, before);
                }
                prev = now;
            }
            if let Some(start) = open {
                self.push(&mut out, sat, start, self.window.duration_s);
            }
        }
        out.sort_by(|a, b| a.1.start_s.total_cmp(&b.1.start_s).then(a.0.cmp(&b.0)));
        Ok(out.into_iter().map(|(_, a)| a).collect())
    }

    fn push(&self, out: &mut Vec<(usize, AccessInterval)>, sat: usize, start_s: f64, end_s: f64) {
        if end_s > start_s {
            out.push((
                sat,
                AccessInterval {
                    satellite_id: self.ids[sat].clone(),
                    start_s,
                    end_s,
                },
            ));
        }
    }

    /// Shrinks `[lo, hi]` around the transition; `lo` keeps state `state_lo`.
    fn refine(
        &self,
        sat: usize,
        obs: &Observer,
        pred: &Predicate,
        mut lo: f64,
        mut hi: f64,
        state_lo: bool,
    ) -> (f64, f64) {
        while hi - lo > REFINE_TOLERANCE_S {
            let mid = 0.5 * (lo + hi);
            if pred.holds(obs, &self.satellite_ecef(sat, mid)) == state_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }
}

fn check_coarse_step(coarse_step_s: f64) -> Result<()> {
    if !(coarse_step_s > 0.0) {
        return Err(Error::InvalidStep {
            name: "coarse_step_s",
            value: coarse_step_s,
            reason: "must be positive",
        });
    }
    if coarse_step_s > MAX_COARSE_STEP_S {
        return Err(Error::InvalidStep {
            name: "coarse_step_s",
            value: coarse_step_s,
            reason: "must not exceed 600 s or short LEO passes can be skipped",
        });
    }
    Ok(())
}

/// Access intervals of `sats` over one point. Builds a one-off [`AccessEngine`];
/// use the engine directly when scanning many points.
pub fn compute_accesses(
    sats: &[SatelliteDefinition],
    point: &GridPoint,
    window: TimeWindow,
    sensor: &SensorModel,
    coarse_step_s: f64,
    gravity: &GravityModel,
) -> Result<Vec<AccessInterval>> {
    AccessEngine::new(sats, window, coarse_step_s, gravity)?.accesses(point, sensor)
}
