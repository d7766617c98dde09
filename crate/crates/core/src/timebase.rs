//! Time axis and reference frames.
//!
//! Epochs are UTC Julian dates with UT1 taken equal to UTC. The Earth-fixed
//! frame is obtained from the inertial one by a single rotation about the
//! pole through the Greenwich mean sidereal angle; precession, nutation and
//! polar motion are ignored.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use chrono::{Datelike, NaiveDate, Timelike};
use nalgebra::Vector3;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: f64 = 86_400.0;
/// Julian date of the J2000.0 reference epoch, 2000-01-01 12:00 UTC.
pub const JD_J2000: f64 = 2_451_545.0;
/// Julian date of 0001-01-01T00:00 in the proleptic Gregorian calendar, minus one day.
const JD_CE_ORIGIN: f64 = 1_721_424.5;

/// WGS-84 equatorial radius, km.
pub const WGS84_A_KM: f64 = 6378.137;
/// WGS-84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
/// WGS-84 first eccentricity squared.
pub const WGS84_E2: f64 = WGS84_F * (2.0 - WGS84_F);

/// An instant on the UTC time axis.
///
/// Stored as a midnight-aligned Julian date plus seconds past it, so that
/// differences of nearby epochs keep sub-microsecond precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epoch {
    jd_utc: f64,
    offset_s: f64,
}

impl Epoch {
    /// Builds an epoch from Gregorian calendar components (UTC).
    pub fn from_utc(
        year: i32,
        month: u32,
        day: u32,
        hour: u32,
        minute: u32,
        second: f64,
    ) -> Result<Self> {
        let invalid = |reason| Error::InvalidDate {
            year,
            month,
            day,
            hour,
            minute,
            second,
            reason,
        };
        let date = NaiveDate::from_ymd_opt(year, month, day)
            .ok_or_else(|| invalid("no such calendar day"))?;
        if hour > 23 {
            return Err(invalid("hour must be in 0..=23"));
        }
        if minute > 59 {
            return Err(invalid("minute must be in 0..=59"));
        }
        if !(0.0..61.0).contains(&second) {
            return Err(invalid("second must be in [0, 61)"));
        }
        let jd_utc = JD_CE_ORIGIN + f64::from(date.num_days_from_ce());
        if jd_utc <= 2_400_000.0 {
            return Err(invalid("dates before 1858-11-17 are not supported"));
        }
        Ok(Self {
            jd_utc,
            offset_s: f64::from(hour) * 3600.0 + f64::from(minute) * 60.0 + second,
        })
    }

    /// Builds an epoch from a continuous Julian date.
    pub fn from_jd(jd: f64) -> Result<Self> {
        if !jd.is_finite() || jd <= 2_400_000.0 {
            return Err(Error::Parse {
                what: "Julian date",
                message: format!("{jd} is not a Julian date after 2400000.0"),
            });
        }
        let jd_utc = (jd - 0.5).floor() + 0.5;
        Ok(Self {
            jd_utc,
            offset_s: (jd - jd_utc) * SECONDS_PER_DAY,
        })
    }

    /// Parses an RFC 3339 timestamp such as `2021-03-01T00:00:00Z`.
    pub fn parse_rfc3339(text: &str) -> Result<Self> {
        let dt = chrono::DateTime::parse_from_rfc3339(text)
            .map_err(|_| Error::InvalidTimestamp(text.to_owned()))?
            .naive_utc();
        let second = f64::from(dt.second()) + f64::from(dt.nanosecond()) * 1e-9;
        Self::from_utc(
            dt.year(),
            dt.month(),
            dt.day(),
            dt.hour(),
            dt.minute(),
            second,
        )
    }

    /// Continuous Julian date (UTC).
    pub fn jd(&self) -> f64 {
        self.jd_utc + self.offset_s / SECONDS_PER_DAY
    }

    /// Days since J2000.0, computed without forming the large Julian date first.
    pub fn days_since_j2000(&self) -> f64 {
        (self.jd_utc - JD_J2000) + self.offset_s / SECONDS_PER_DAY
    }

    pub fn add_seconds(&self, seconds: f64) -> Self {
        Self {
            jd_utc: self.jd_utc,
            offset_s: self.offset_s + seconds,
        }
    }

    /// Signed seconds from `earlier` to `self`.
    pub fn seconds_since(&self, earlier: &Epoch) -> f64 {
        (self.jd_utc - earlier.jd_utc) * SECONDS_PER_DAY + (self.offset_s - earlier.offset_s)
    }

    /// RFC 3339 rendering with microsecond resolution, trailing zeros trimmed.
    pub fn to_rfc3339(&self) -> String {
        let mut day_shift = (self.offset_s / SECONDS_PER_DAY).floor();
        let mut micros = ((self.offset_s - day_shift * SECONDS_PER_DAY) * 1e6).round() as i64;
        if micros >= 86_400_000_000 {
            micros -= 86_400_000_000;
            day_shift += 1.0;
        }
        let days_ce = (self.jd_utc + day_shift - JD_CE_ORIGIN).round() as i32;
        let date = NaiveDate::from_num_days_from_ce_opt(days_ce)
            .expect("epoch within chrono's supported range");
        let whole = micros / 1_000_000;
        let frac = micros % 1_000_000;
        let mut out = format!(
            "{}T{:02}:{:02}:{:02}",
            date.format("%Y-%m-%d"),
            whole / 3600,
            (whole / 60) % 60,
            whole % 60
        );
        if frac != 0 {
            let digits = format!("{frac:06}");
            out.push('.');
            out.push_str(digits.trim_end_matches('0'));
        }
        out.push('Z');
        out
    }
}

impl PartialOrd for Epoch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.seconds_since(other).partial_cmp(&0.0)
    }
}

impl fmt::Display for Epoch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rfc3339())
    }
}

impl Serialize for Epoch {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_rfc3339())
    }
}

impl<'de> Deserialize<'de> for Epoch {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Epoch::parse_rfc3339(&text).map_err(serde::de::Error::custom)
    }
}

/// Greenwich mean sidereal time (IAU 1982 expression), radians in [0, 2π).
pub fn gmst_rad(epoch: &Epoch) -> f64 {
    let d = epoch.days_since_j2000();
    let t = d / 36_525.0;
    // 67310.54841 s + (876600 h + 8640184.812866 s) T + 0.093104 T^2 - 6.2e-6 T^3,
    // re-expressed in degrees with the whole-revolution part of the linear term split off.
    let deg = 280.460_618_375 + 360.985_647_366_29 * d + 0.000_387_933 * t * t
        - t * t * t / 38_709_677.419_354_84;
    deg.rem_euclid(360.0).to_radians().rem_euclid(TAU)
}

/// Greenwich mean sidereal time in degrees, [0, 360).
pub fn gmst_deg(epoch: &Epoch) -> f64 {
    gmst_rad(epoch).to_degrees().rem_euclid(360.0)
}

/// Inertial position and velocity, km and km/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EciState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

/// Earth-fixed position, km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcefPosition {
    pub position: Vector3<f64>,
}

impl EcefPosition {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self {
            position: Vector3::new(x, y, z),
        }
    }
}

/// Rotates an inertial vector into the Earth-fixed frame for Earth rotation angle `theta`.
#[inline]
pub fn rotate_to_earth_fixed(v: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    let (s, c) = theta.sin_cos();
    Vector3::new(c * v.x + s * v.y, -s * v.x + c * v.y, v.z)
}

/// Converts an inertial state to the Earth-fixed frame at `epoch`.
///
/// The returned velocity is the inertial velocity expressed in Earth-fixed
/// axes (no transport term for Earth rotation).
pub fn eci_to_ecef(state: &EciState, epoch: &Epoch) -> (EcefPosition, Vector3<f64>) {
    let theta = gmst_rad(epoch);
    (
        EcefPosition {
            position: rotate_to_earth_fixed(&state.position, theta),
        },
        rotate_to_earth_fixed(&state.velocity, theta),
    )
}

/// A point on or above the WGS-84 ellipsoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodeticPoint {
    lat: f64,
    lon: f64,
    alt_km: f64,
}

impl GeodeticPoint {
    /// Geodetic latitude and longitude in degrees; longitude is wrapped to [-180, 180).
    pub fn new(lat_deg: f64, lon_deg: f64, alt_km: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat_deg) || !lon_deg.is_finite() || !alt_km.is_finite() {
            return Err(Error::InvalidAoi(format!(
                "geodetic point ({lat_deg}, {lon_deg}, {alt_km} km) is out of range"
            )));
        }
        Ok(Self {
            lat: lat_deg.to_radians(),
            lon: normalize_lon_deg(lon_deg).to_radians(),
            alt_km,
        })
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat.to_degrees()
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon.to_degrees()
    }

    pub fn lat_rad(&self) -> f64 {
        self.lat
    }

    pub fn lon_rad(&self) -> f64 {
        self.lon
    }

    pub fn alt_km(&self) -> f64 {
        self.alt_km
    }

    /// Unit vector along the local ellipsoid normal (the topocentric "up" axis).
    pub fn up(&self) -> Vector3<f64> {
        let (slat, clat) = self.lat.sin_cos();
        let (slon, clon) = self.lon.sin_cos();
        Vector3::new(clat * clon, clat * slon, slat)
    }
}

/// Wraps a longitude in degrees to [-180, 180).
pub fn normalize_lon_deg(lon_deg: f64) -> f64 {
    (lon_deg + 180.0).rem_euclid(360.0) - 180.0
}

pub fn geodetic_to_ecef(p: &GeodeticPoint) -> EcefPosition {
    let (slat, clat) = p.lat.sin_cos();
    let (slon, clon) = p.lon.sin_cos();
    let n = WGS84_A_KM / (1.0 - WGS84_E2 * slat * slat).sqrt();
    EcefPosition::new(
        (n + p.alt_km) * clat * clon,
        (n + p.alt_km) * clat * slon,
        (n * (1.0 - WGS84_E2) + p.alt_km) * slat,
    )
}

/// Inverse of [`geodetic_to_ecef`] by fixed-point iteration on latitude.
pub fn ecef_to_geodetic(pos: &EcefPosition) -> GeodeticPoint {
    let (x, y, z) = (pos.position.x, pos.position.y, pos.position.z);
    let p = x.hypot(y);
    let lon = y.atan2(x);
    let b = WGS84_A_KM * (1.0 - WGS84_F);
    if p < 1e-9 {
        return GeodeticPoint {
            lat: if z >= 0.0 { PI / 2.0 } else { -PI / 2.0 },
            lon: 0.0,
            alt_km: z.abs() - b,
        };
    }
    let mut lat = z.atan2(p * (1.0 - WGS84_E2));
    for _ in 0..50 {
        let slat = lat.sin();
        let n = WGS84_A_KM / (1.0 - WGS84_E2 * slat * slat).sqrt();
        let alt = p / lat.cos() - n;
        let next = z.atan2(p * (1.0 - WGS84_E2 * n / (n + alt)));
        let done = (next - lat).abs() < 1e-15;
        lat = next;
        if done {
            break;
        }
    }
    let slat = lat.sin();
    let n = WGS84_A_KM / (1.0 - WGS84_E2 * slat * slat).sqrt();
    // Recompute height in the form that stays well-conditioned near the poles.
    let alt = p * lat.cos() + z * slat - WGS84_A_KM * WGS84_A_KM / n;
    GeodeticPoint {
        lat,
        lon: normalize_lon_deg(lon.to_degrees()).to_radians(),
        alt_km: alt,
    }
}

/// Elevation of `target` above the local geodetic horizon of `origin`, degrees.
pub fn topocentric_elevation_deg(origin: &GeodeticPoint, target: &EcefPosition) -> Result<f64> {
    let line_of_sight = target.position - geodetic_to_ecef(origin).position;
    let range = line_of_sight.norm();
    if range < 1e-9 {
        return Err(Error::CoincidentPoints);
    }
    let up = origin.up();
    let vertical = up.dot(&line_of_sight);
    let horizontal = (line_of_sight - up * vertical).norm();
    Ok(vertical.atan2(horizontal).to_degrees())
}
