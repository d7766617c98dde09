//! Keplerian elements, Kepler's equation and analytic two-body + J2 secular propagation.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timebase::{EciState, Epoch, WGS84_A_KM};

/// Gravity field constants. Only the J2 zonal term is modelled beyond the point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GravityModel {
    #[serde(rename = "mu_km3_s2")]
    pub mu: f64,
    pub j2: f64,
    #[serde(rename = "r_e_km")]
    pub r_e: f64,
    pub j2_enabled: bool,
}

impl GravityModel {
    pub const fn two_body() -> Self {
        Self {
            mu: 398_600.441_8,
            j2: 1.082_626_68e-3,
            r_e: WGS84_A_KM,
            j2_enabled: false,
        }
    }

    pub const fn with_j2() -> Self {
        Self {
            j2_enabled: true,
            ..Self::two_body()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu > 0.0 && self.j2 > 0.0 && self.r_e > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidElements(format!(
                "gravity constants must be positive (mu {}, j2 {}, r_e {})",
                self.mu, self.j2, self.r_e
            )))
        }
    }
}

impl Default for GravityModel {
    fn default() -> Self {
        Self::with_j2()
    }
}

/// Classical orbital elements at an epoch.
///
/// Angles are held in degrees exactly as configured (wrapped to [0, 360)), so
/// values such as 120° read back unchanged; radian views are derived on access.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeplerianElements {
    a_km: f64,
    e: f64,
    i_deg: f64,
    raan_deg: f64,
    argp_deg: f64,
    ta_deg: f64,
    epoch: Epoch,
}

impl KeplerianElements {
    /// Builds elements from degrees. Angles other than inclination are wrapped to [0, 360).
    pub fn new(
        a_km: f64,
        e: f64,
        i_deg: f64,
        raan_deg: f64,
        argp_deg: f64,
        ta_deg: f64,
        epoch: Epoch,
    ) -> Result<Self> {
        if !(a_km > WGS84_A_KM) {
            return Err(Error::InvalidElements(format!(
                "semi-major axis {a_km} km must exceed the Earth radius {WGS84_A_KM} km"
            )));
        }
        if !(0.0..1.0).contains(&e) {
            return Err(Error::UnsupportedEccentricity(e));
        }
        if !(0.0..=180.0).contains(&i_deg) {
            return Err(Error::InvalidElements(format!(
                "inclination {i_deg} deg must be within [0, 180]"
            )));
        }
        if ![raan_deg, argp_deg, ta_deg].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidElements("angles must be finite".into()));
        }
        Ok(Self {
            a_km,
            e,
            i_deg,
            raan_deg: wrap_360(raan_deg),
            argp_deg: wrap_360(argp_deg),
            ta_deg: wrap_360(ta_deg),
            epoch,
        })
    }

    pub fn from_radians(
        a_km: f64,
        e: f64,
        inc: f64,
        raan: f64,
        argp: f64,
        ta: f64,
        epoch: Epoch,
    ) -> Result<Self> {
        // acos can land a hair past π for retrograde equatorial states
        let i_deg = inc.to_degrees();
        let i_deg = if i_deg > 180.0 && i_deg < 180.0 + 1e-12 {
            180.0
        } else {
            i_deg
        };
        Self::new(
            a_km,
            e,
            i_deg,
            raan.to_degrees(),
            argp.to_degrees(),
            ta.to_degrees(),
            epoch,
        )
    }

    pub fn a_km(&self) -> f64 {
        self.a_km
    }
    pub fn e(&self) -> f64 {
        self.e
    }
    pub fn epoch(&self) -> Epoch {
        self.epoch
    }
    pub fn inclination_rad(&self) -> f64 {
        self.i_deg.to_radians()
    }
    pub fn raan_rad(&self) -> f64 {
        self.raan_deg.to_radians()
    }
    pub fn argp_rad(&self) -> f64 {
        self.argp_deg.to_radians()
    }
    pub fn true_anomaly_rad(&self) -> f64 {
        self.ta_deg.to_radians()
    }
    pub fn i_deg(&self) -> f64 {
        self.i_deg
    }
    pub fn raan_deg(&self) -> f64 {
        self.raan_deg
    }
    pub fn argp_deg(&self) -> f64 {
        self.argp_deg
    }
    pub fn ta_deg(&self) -> f64 {
        self.ta_deg
    }

    /// Semi-latus rectum p = a (1 - e²).
    pub fn semi_latus_rectum_km(&self) -> f64 {
        self.a_km * (1.0 - self.e * self.e)
    }

    pub fn mean_anomaly_rad(&self) -> f64 {
        let ecc = true_to_eccentric(self.true_anomaly_rad(), self.e);
        wrap_two_pi(ecc - self.e * ecc.sin())
    }
}

/// Degree-valued view used for serialization.
#[derive(Serialize, Deserialize)]
struct ElementsRecord {
    a_km: f64,
    e: f64,
    i_deg: f64,
    raan_deg: f64,
    argp_deg: f64,
    ta_deg: f64,
    epoch_utc: Epoch,
}

impl Serialize for KeplerianElements {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementsRecord {
            a_km: self.a_km,
            e: self.e,
            i_deg: self.i_deg(),
            raan_deg: self.raan_deg(),
            argp_deg: self.argp_deg(),
            ta_deg: self.ta_deg(),
            epoch_utc: self.epoch,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KeplerianElements {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ElementsRecord::deserialize(d)?;
        KeplerianElements::new(
            r.a_km,
            r.e,
            r.i_deg,
            r.raan_deg,
            r.argp_deg,
            r.ta_deg,
            r.epoch_utc,
        )
        .map_err(serde::de::Error::custom)
    }
}

#[inline]
fn wrap_360(x: f64) -> f64 {
    let w = x.rem_euclid(360.0);
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

#[inline]
pub(crate) fn wrap_two_pi(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Solves Kepler's equation `E - e sin E = M` for the eccentric anomaly.
///
/// Newton iteration kept inside a shrinking bracket; any step that leaves the
/// bracket is replaced by bisection. The result lies in the same revolution as `M`.
pub fn solve_kepler(mean_anomaly_rad: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::UnsupportedEccentricity(e));
    }
    if !mean_anomaly_rad.is_finite() {
        return Err(Error::InvalidElements(format!(
            "mean anomaly {mean_anomaly_rad} is not finite"
        )));
    }
    if e == 0.0 {
        return Ok(mean_anomaly_rad);
    }
    // Reduce to [-π, π]; the solution is odd in M and shifts with whole revolutions.
    let revs = (mean_anomaly_rad / TAU).round();
    let reduced = mean_anomaly_rad - revs * TAU;
    let sign = if reduced < 0.0 { -1.0 } else { 1.0 };
    let m = reduced.abs();

    let residual = |ecc: f64| ecc - e * ecc.sin() - m;
    let (mut lo, mut hi) = (0.0_f64, PI);
    let mut ecc = if e < 0.8 { m } else { PI };
    for _ in 0..100 {
        let f = residual(ecc);
        if f.abs() < 1e-15 {
            break;
        }
        if f < 0.0 {
            lo = ecc;
        } else {
            hi = ecc;
        }
        let newton = ecc - f / (1.0 - e * ecc.cos());
        ecc = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(sign * ecc + revs * TAU)
}

pub fn eccentric_to_true(ecc: f64, e: f64) -> f64 {
    2.0 * ((1.0 + e).sqrt() * (0.5 * ecc).sin()).atan2((1.0 - e).sqrt() * (0.5 * ecc).cos())
}

pub fn true_to_eccentric(ta: f64, e: f64) -> f64 {
    2.0 * ((1.0 - e).sqrt() * (0.5 * ta).sin()).atan2((1.0 + e).sqrt() * (0.5 * ta).cos())
}

/// Two-body period 2π √(a³/μ), seconds.
pub fn orbital_period_s(a_km: f64, gravity: &GravityModel) -> f64 {
    TAU * (a_km.powi(3) / gravity.mu).sqrt()
}

/// Rotation from the perifocal frame to the inertial frame.
fn perifocal_to_inertial(raan: f64, inc: f64, argp: f64) -> Matrix3<f64> {
    let (so, co) = raan.sin_cos();
    let (si, ci) = inc.sin_cos();
    let (sw, cw) = argp.sin_cos();
    Matrix3::new(
        co * cw - so * sw * ci,
        -co * sw - so * cw * ci,
        so * si,
        so * cw + co * sw * ci,
        -so * sw + co * cw * ci,
        -co * si,
        sw * si,
        cw * si,
        ci,
    )
}

pub fn elements_to_eci(el: &KeplerianElements, gravity: &GravityModel) -> EciState {
    let p = el.semi_latus_rectum_km();
    let (s, c) = el.true_anomaly_rad().sin_cos();
    let r = p / (1.0 + el.e * c);
    let vscale = (gravity.mu / p).sqrt();
    let rot = perifocal_to_inertial(el.raan_rad(), el.inclination_rad(), el.argp_rad());
    EciState {
        position: rot * Vector3::new(r * c, r * s, 0.0),
        velocity: rot * Vector3::new(-vscale * s, vscale * (el.e + c), 0.0),
    }
}

/// Recovers classical elements from an inertial state.
///
/// Circular orbits report ω = 0 with ν measured from the node; equatorial
/// orbits report Ω = 0 with ω (or ν, if also circular) measured from the x-axis.
pub fn eci_to_elements(
    state: &EciState,
    epoch: Epoch,
    gravity: &GravityModel,
) -> Result<KeplerianElements> {
    const SMALL: f64 = 1e-11;
    let r = state.position;
    let v = state.velocity;
    let rn = r.norm();
    let h = r.cross(&v);
    let hn = h.norm();
    let node = Vector3::z().cross(&h);
    let nn = node.norm();
    let ecc_vec = ((v.norm_squared() - gravity.mu / rn) * r - r.dot(&v) * v) / gravity.mu;
    let e = ecc_vec.norm();
    let energy = 0.5 * v.norm_squared() - gravity.mu / rn;
    let a = -gravity.mu / (2.0 * energy);
    let inc = (h.z / hn).clamp(-1.0, 1.0).acos();

    let equatorial = nn / hn < SMALL;
    let circular = e < SMALL;
    let angle_between = |u: &Vector3<f64>, w: &Vector3<f64>| {
        (u.dot(w) / (u.norm() * w.norm())).clamp(-1.0, 1.0).acos()
    };

    let raan = if equatorial {
        0.0
    } else {
        let o = (node.x / nn).clamp(-1.0, 1.0).acos();
        if node.y < 0.0 {
            TAU - o
        } else {
            o
        }
    };
    let (argp, ta) = match (circular, equatorial) {
        (false, false) => {
            let mut w = angle_between(&node, &ecc_vec);
            if ecc_vec.z < 0.0 {
                w = TAU - w;
            }
            let mut nu = angle_between(&ecc_vec, &r);
            if r.dot(&v) < 0.0 {
                nu = TAU - nu;
            }
            (w, nu)
        }
        (true, false) => {
            let mut u = angle_between(&node, &r);
            if r.z < 0.0 {
                u = TAU - u;
            }
            (0.0, u)
        }
        (false, true) => {
            let mut w = ecc_vec.y.atan2(ecc_vec.x);
            if h.z < 0.0 {
                w = -w;
            }
            let mut nu = angle_between(&ecc_vec, &r);
            if r.dot(&v) < 0.0 {
                nu = TAU - nu;
            }
            (w, nu)
        }
        (true, true) => {
            let mut l = r.y.atan2(r.x);
            if h.z < 0.0 {
                l = -l;
            }
            (0.0, l)
        }
    };
    KeplerianElements::from_radians(
        a,
        if circular { 0.0 } else { e },
        inc,
        raan,
        argp,
        ta,
        epoch,
    )
}

/// Secular rates of Ω, ω and M, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularRates {
    pub raan: f64,
    pub argp: f64,
    pub mean_anomaly: f64,
}

pub fn secular_rates(el: &KeplerianElements, gravity: &GravityModel) -> SecularRates {
    let n = (gravity.mu / el.a_km.powi(3)).sqrt();
    if !gravity.j2_enabled {
        return SecularRates {
            raan: 0.0,
            argp: 0.0,
            mean_anomaly: n,
        };
    }
    let k = gravity.j2 * (gravity.r_e / el.semi_latus_rectum_km()).powi(2);
    let ci = el.inclination_rad().cos();
    let eta = (1.0 - el.e * el.e).sqrt();
    SecularRates {
        raan: -1.5 * n * k * ci,
        argp: 0.75 * n * k * (5.0 * ci * ci - 1.0),
        mean_anomaly: n * (1.0 + 0.75 * k * eta * (3.0 * ci * ci - 1.0)),
    }
}

/// Advances elements by `dt_s` seconds (two-body mean motion plus J2 secular drift).
pub fn propagate(el: &KeplerianElements, dt_s: f64, gravity: &GravityModel) -> KeplerianElements {
    Trajectory::new(el, gravity).elements_at(dt_s)
}

/// Precomputed secular propagation of one orbit, for repeated evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Trajectory {
    base: KeplerianElements,
    gravity: GravityModel,
    rates: SecularRates,
    mean_anomaly0: f64,
}

impl Trajectory {
    pub fn new(el: &KeplerianElements, gravity: &GravityModel) -> Self {
        Self {
            base: *el,
            gravity: *gravity,
            rates: secular_rates(el, gravity),
            mean_anomaly0: el.mean_anomaly_rad(),
        }
    }

    pub fn elements(&self) -> &KeplerianElements {
        &self.base
    }

    pub fn rates(&self) -> SecularRates {
        self.rates
    }

    /// Elements `dt_s` seconds after the reference epoch.
    pub fn elements_at(&self, dt_s: f64) -> KeplerianElements {
        let el = &self.base;
        if dt_s == 0.0 {
            return *el;
        }
        let mean = self.mean_anomaly0 + self.rates.mean_anomaly * dt_s;
        let ta = if el.e == 0.0 {
            mean
        } else {
            let ecc = solve_kepler(wrap_two_pi(mean), el.e).expect("eccentricity validated");
            eccentric_to_true(ecc, el.e)
        };
        KeplerianElements {
            raan_deg: wrap_360(el.raan_deg + (self.rates.raan * dt_s).to_degrees()),
            argp_deg: wrap_360(el.argp_deg + (self.rates.argp * dt_s).to_degrees()),
            ta_deg: wrap_360(wrap_two_pi(ta).to_degrees()),
            epoch: el.epoch.add_seconds(dt_s),
            ..*el
        }
    }

    pub fn state_at(&self, dt_s: f64) -> EciState {
        elements_to_eci(&self.elements_at(dt_s), &self.gravity)
    }
}
