use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::FomPointReport;
use crate::error::{Error, Result};

/// A numeric field of [`FomPointReport`], addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum Metric {
    TcTotal,
    TcMean,
    TcMax,
    NCoverage,
    NAccesses,
    NGaps,
    TAvgGap,
    RevisitMin,
    RevisitMean,
    RevisitMax,
    ResponseMean,
    AccessSeparation,
}

impl Metric {
    pub const ALL: [Metric; 12] = [
        Metric::TcTotal,
        Metric::TcMean,
        Metric::TcMax,
        Metric::NCoverage,
        Metric::NAccesses,
        Metric::NGaps,
        Metric::TAvgGap,
        Metric::RevisitMin,
        Metric::RevisitMean,
        Metric::RevisitMax,
        Metric::ResponseMean,
        Metric::AccessSeparation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::TcTotal => "t_c_total",
            Metric::TcMean => "t_c_mean",
            Metric::TcMax => "t_c_max",
            Metric::NCoverage => "n_coverage",
            Metric::NAccesses => "n_accesses",
            Metric::NGaps => "n_gaps",
            Metric::TAvgGap => "t_avg_gap",
            Metric::RevisitMin => "revisit_min",
            Metric::RevisitMean => "revisit_mean",
            Metric::RevisitMax => "revisit_max",
            Metric::ResponseMean => "response_mean",
            Metric::AccessSeparation => "access_separation",
        }
    }

    /// Durations are carried in seconds and reported in minutes.
    pub fn is_duration(self) -> bool {
        !matches!(
            self,
            Metric::NCoverage | Metric::NAccesses | Metric::NGaps | Metric::AccessSeparation
        )
    }

    /// Raw value (seconds for durations), `None` when undefined for this point.
    pub fn value(self, r: &FomPointReport) -> Option<f64> {
        match self {
            Metric::TcTotal => Some(r.t_c_total_s),
            Metric::TcMean => r.t_c_mean_s,
            Metric::TcMax => r.t_c_max_s,
            Metric::NCoverage => Some(r.n_coverage as f64),
            Metric::NAccesses => Some(r.n_accesses as f64),
            Metric::NGaps => Some(r.n_gaps as f64),
            Metric::TAvgGap => Some(r.t_avg_gap_s),
            Metric::RevisitMin => r.revisit_min_s,
            Metric::RevisitMean => r.revisit_mean_s,
            Metric::RevisitMax => r.revisit_max_s,
            Metric::ResponseMean => Some(r.response_mean_s),
            Metric::AccessSeparation => Some(r.access_separation_count as f64),
        }
    }

    /// Value in reporting units: minutes for durations, plain counts otherwise.
    pub fn report_value(self, r: &FomPointReport) -> Option<f64> {
        self.value(r)
            .map(|v| if self.is_duration() { v / 60.0 } else { v })
    }
}

impl From<Metric> for &'static str {
    fn from(m: Metric) -> Self {
        m.name()
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMetric {
                name: s.to_owned(),
                valid: Metric::ALL.iter().map(|m| m.name()).collect(),
            })
    }
}

impl<'de> serde::Deserialize<'de> for Metric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// min / mean / max over the points where a metric is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandStats {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl BandStats {
    fn from_values(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut count = 0;
        let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for v in values {
            count += 1;
            min = min.min(v);
            max = max.max(v);
            sum += v;
        }
        (count > 0).then(|| BandStats {
            count,
            min,
            mean: sum / count as f64,
            max,
        })
    }
}

/// Statistics of every metric over the points sharing one latitude (or longitude).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandProfile {
    pub coordinate_deg: f64,
    pub points: usize,
    pub metrics: BTreeMap<Metric, Option<BandStats>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateProfile {
    /// South to north.
    pub latitude: Vec<BandProfile>,
    /// West to east.
    pub longitude: Vec<BandProfile>,
}

/// Groups point reports by latitude row and longitude column.
pub fn aggregate_report(reports: &[FomPointReport]) -> Result<AggregateProfile> {
    if reports.is_empty() {
        return Err(Error::EmptyReports);
    }
    Ok(AggregateProfile {
        latitude: bands(reports, |r| r.lat_deg),
        longitude: bands(reports, |r| r.lon_deg),
    })
}

fn bands(reports: &[FomPointReport], coord: impl Fn(&FomPointReport) -> f64) -> Vec<BandProfile> {
    // Key on nano-degrees so lattice coordinates group exactly.
    let mut groups: BTreeMap<i64, Vec<&FomPointReport>> = BTreeMap::new();
    for r in reports {
        groups
            .entry((coord(r) * 1e9).round() as i64)
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|members| BandProfile {
            coordinate_deg: coord(members[0]),
            points: members.len(),
            metrics: Metric::ALL
                .into_iter()
                .map(|m| {
                    (
                        m,
                        BandStats::from_values(members.iter().filter_map(|r| m.value(r))),
                    )
                })
                .collect(),
        })
        .collect()
}

/// Whole-grid statistics of one metric, `None` if it is undefined everywhere.
pub fn grid_stats(reports: &[FomPointReport], metric: Metric) -> Option<BandStats> {
    BandStats::from_values(reports.iter().filter_map(|r| metric.value(r)))
}

/// `(lat_deg, lon_deg, value)`; value is `None` where the metric is undefined.
pub type ContourPoint = (f64, f64, Option<f64>);

/// `(lat, lon, value)` for contouring, in report order.
pub fn contour_triples(reports: &[FomPointReport], metric: Metric) -> Vec<ContourPoint> {
    reports
        .iter()
        .map(|r| (r.lat_deg, r.lon_deg, metric.value(r)))
        .collect()
}
