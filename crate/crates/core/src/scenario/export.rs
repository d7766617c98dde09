//! CSV and GeoJSON report writers, and matching readers.
//!
//! Durations are written in minutes with three decimals. Undefined values
//! are empty CSV cells and `null` GeoJSON properties.

use std::io::{self, Read, Write};

use serde_json::{json, Value};

use super::pipeline::SatelliteAoiSummary;
use crate::error::{Error, Result};
use crate::fom::{
    AggregateProfile, BandProfile, ContourPoint, CoverageSeries, FomPointReport, Metric,
};

/// Column order of the per-point table.
pub const POINT_COLUMNS: [&str; 14] = [
    "lat_deg",
    "lon_deg",
    "t_c_total_min",
    "t_c_mean_min",
    "t_c_max_min",
    "n_coverage",
    "n_accesses",
    "n_gaps",
    "t_avg_gap_min",
    "revisit_min_min",
    "revisit_mean_min",
    "revisit_max_min",
    "response_mean_min",
    "access_separation_count",
];

fn minutes(seconds: f64) -> String {
    format!("{:.3}", seconds / 60.0)
}

fn opt_minutes(seconds: Option<f64>) -> String {
    seconds.map(minutes).unwrap_or_default()
}

fn fixed3(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.3}")).unwrap_or_default()
}

/// One row of the per-point table as written: minutes, rounded.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRow {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub t_c_total_min: f64,
    pub t_c_mean_min: Option<f64>,
    pub t_c_max_min: Option<f64>,
    pub n_coverage: usize,
    pub n_accesses: usize,
    pub n_gaps: usize,
    pub t_avg_gap_min: f64,
    pub revisit_min_min: Option<f64>,
    pub revisit_mean_min: Option<f64>,
    pub revisit_max_min: Option<f64>,
    pub response_mean_min: f64,
    pub access_separation_count: usize,
}

impl PointRow {
    fn record(&self) -> [String; 14] {
        let m = |v: f64| format!("{v:.3}");
        [
            self.lat_deg.to_string(),
            self.lon_deg.to_string(),
            m(self.t_c_total_min),
            fixed3(self.t_c_mean_min),
            fixed3(self.t_c_max_min),
            self.n_coverage.to_string(),
            self.n_accesses.to_string(),
            self.n_gaps.to_string(),
            m(self.t_avg_gap_min),
            fixed3(self.revisit_min_min),
            fixed3(self.revisit_mean_min),
            fixed3(self.revisit_max_min),
            m(self.response_mean_min),
            self.access_separation_count.to_string(),
        ]
    }
}

fn report_record(r: &FomPointReport) -> [String; 14] {
    [
        r.lat_deg.to_string(),
        r.lon_deg.to_string(),
        minutes(r.t_c_total_s),
        opt_minutes(r.t_c_mean_s),
        opt_minutes(r.t_c_max_s),
        r.n_coverage.to_string(),
        r.n_accesses.to_string(),
        r.n_gaps.to_string(),
        minutes(r.t_avg_gap_s),
        opt_minutes(r.revisit_min_s),
        opt_minutes(r.revisit_mean_s),
        opt_minutes(r.revisit_max_s),
        minutes(r.response_mean_s),
        r.access_separation_count.to_string(),
    ]
}

/// Header plus one row per report, in the given (grid) order.
pub fn export_point_csv<W: Write>(reports: &[FomPointReport], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(POINT_COLUMNS)?;
    for r in reports {
        out.write_record(report_record(r))?;
    }
    out.flush()
}

pub fn write_point_rows<W: Write>(rows: &[PointRow], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(POINT_COLUMNS)?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()
}

pub fn read_point_csv<R: Read>(r: R) -> Result<Vec<PointRow>> {
    let bad = |message: String| Error::Parse {
        what: "point CSV",
        message,
    };
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(POINT_COLUMNS.iter().copied()) {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let cell = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            cell(i).parse().map_err(|_| {
                bad(format!(
                    "row {}: {} = {:?}",
                    line + 1,
                    POINT_COLUMNS[i],
                    cell(i)
                ))
            })
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if cell(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let count = |i: usize| -> Result<usize> {
            cell(i).parse().map_err(|_| {
                bad(format!(
                    "row {}: {} = {:?}",
                    line + 1,
                    POINT_COLUMNS[i],
                    cell(i)
                ))
            })
        };
        rows.push(PointRow {
            lat_deg: num(0)?,
            lon_deg: num(1)?,
            t_c_total_min: num(2)?,
            t_c_mean_min: opt(3)?,
            t_c_max_min: opt(4)?,
            n_coverage: count(5)?,
            n_accesses: count(6)?,
            n_gaps: count(7)?,
            t_avg_gap_min: num(8)?,
            revisit_min_min: opt(9)?,
            revisit_mean_min: opt(10)?,
            revisit_max_min: opt(11)?,
            response_mean_min: num(12)?,
            access_separation_count: count(13)?,
        });
    }
    Ok(rows)
}

/// Long-format band table: one row per (axis, band, metric).
pub fn export_profiles_csv<W: Write>(profile: &AggregateProfile, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "axis",
        "coordinate_deg",
        "points",
        "metric",
        "unit",
        "count",
        "min",
        "mean",
        "max",
    ])?;
    let mut band_rows = |axis: &str, bands: &[BandProfile]| -> io::Result<()> {
        for band in bands {
            for (metric, stats) in &band.metrics {
                let scale = if metric.is_duration() {
                    1.0 / 60.0
                } else {
                    1.0
                };
                let unit = if metric.is_duration() { "min" } else { "count" };
                out.write_record([
                    axis.to_owned(),
                    band.coordinate_deg.to_string(),
                    band.points.to_string(),
                    metric.name().to_owned(),
                    unit.to_owned(),
                    stats.map(|s| s.count).unwrap_or(0).to_string(),
                    fixed3(stats.map(|s| s.min * scale)),
                    fixed3(stats.map(|s| s.mean * scale)),
                    fixed3(stats.map(|s| s.max * scale)),
                ])?;
            }
        }
        Ok(())
    };
    band_rows("latitude", &profile.latitude)?;
    band_rows("longitude", &profile.longitude)?;
    out.flush()
}

pub fn export_series_csv<W: Write>(series: &CoverageSeries, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["time_min", "percent_covered"])?;
    for (t, p) in series.times_s.iter().zip(&series.percent) {
        out.write_record([minutes(*t), format!("{p:.3}")])?;
    }
    out.flush()
}

pub fn export_satellites_csv<W: Write>(sats: &[SatelliteAoiSummary], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "satellite_id",
        "aoi_accesses",
        "aoi_access_time_min",
        "grid_point_accesses",
    ])?;
    for s in sats {
        out.write_record([
            s.satellite_id.clone(),
            s.aoi_accesses.to_string(),
            minutes(s.aoi_access_time_s),
            s.grid_point_accesses.to_string(),
        ])?;
    }
    out.flush()
}

fn csv_error(what: &'static str) -> impl Fn(csv::Error) -> Error {
    move |e| Error::Parse {
        what,
        message: e.to_string(),
    }
}

fn field<T: std::str::FromStr>(what: &'static str, rec: &csv::StringRecord, i: usize) -> Result<T> {
    let cell = rec.get(i).unwrap_or("");
    cell.parse().map_err(|_| Error::Parse {
        what,
        message: format!("column {i}: {cell:?}"),
    })
}

fn opt_field(what: &'static str, rec: &csv::StringRecord, i: usize) -> Result<Option<f64>> {
    match rec.get(i) {
        Some("") | None => Ok(None),
        Some(_) => field(what, rec, i).map(Some),
    }
}

/// Parses a profile table back into bands; durations return to seconds.
pub fn read_profiles_csv<R: Read>(r: R) -> Result<AggregateProfile> {
    const WHAT: &str = "profile CSV";
    let mut profile = AggregateProfile {
        latitude: Vec::new(),
        longitude: Vec::new(),
    };
    for rec in csv::Reader::from_reader(r).records() {
        let rec = rec.map_err(csv_error(WHAT))?;
        let axis = rec.get(0).unwrap_or("");
        let bands = match axis {
            "latitude" => &mut profile.latitude,
            "longitude" => &mut profile.longitude,
            other => {
                return Err(Error::Parse {
                    what: WHAT,
                    message: format!("unknown axis {other:?}"),
                })
            }
        };
        let coordinate_deg: f64 = field(WHAT, &rec, 1)?;
        let points: usize = field(WHAT, &rec, 2)?;
        let metric: Metric = rec.get(3).unwrap_or("").parse()?;
        let scale = if metric.is_duration() { 60.0 } else { 1.0 };
        let count: usize = field(WHAT, &rec, 5)?;
        let stats = match (
            opt_field(WHAT, &rec, 6)?,
            opt_field(WHAT, &rec, 7)?,
            opt_field(WHAT, &rec, 8)?,
        ) {
            (Some(min), Some(mean), Some(max)) => Some(crate::fom::BandStats {
                count,
                min: min * scale,
                mean: mean * scale,
                max: max * scale,
            }),
            _ => None,
        };
        if bands.last().map(|b| b.coordinate_deg) != Some(coordinate_deg) {
            bands.push(BandProfile {
                coordinate_deg,
                points,
                metrics: Default::default(),
            });
        }
        bands
            .last_mut()
            .expect("just pushed")
            .metrics
            .insert(metric, stats);
    }
    Ok(profile)
}

pub fn read_series_csv<R: Read>(r: R) -> Result<CoverageSeries> {
    const WHAT: &str = "coverage series CSV";
    let mut series = CoverageSeries {
        times_s: Vec::new(),
        percent: Vec::new(),
    };
    for rec in csv::Reader::from_reader(r).records() {
        let rec = rec.map_err(csv_error(WHAT))?;
        series.times_s.push(field::<f64>(WHAT, &rec, 0)? * 60.0);
        series.percent.push(field(WHAT, &rec, 1)?);
    }
    Ok(series)
}

pub fn read_satellites_csv<R: Read>(r: R) -> Result<Vec<SatelliteAoiSummary>> {
    const WHAT: &str = "satellite CSV";
    csv::Reader::from_reader(r)
        .records()
        .map(|rec| {
            let rec = rec.map_err(csv_error(WHAT))?;
            Ok(SatelliteAoiSummary {
                satellite_id: rec.get(0).unwrap_or("").to_owned(),
                aoi_accesses: field(WHAT, &rec, 1)?,
                aoi_access_time_s: field::<f64>(WHAT, &rec, 2)? * 60.0,
                grid_point_accesses: field(WHAT, &rec, 3)?,
            })
        })
        .collect()
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// GeoJSON FeatureCollection of Point features carrying one metric, one feature per line.
pub fn contour_geojson(reports: &[FomPointReport], metric_name: &str) -> Result<String> {
    let metric: Metric = metric_name.parse()?;
    let unit = if metric.is_duration() { "min" } else { "count" };
    let mut text = format!(
        "{{\"type\":\"FeatureCollection\",\"metric\":{},\"unit\":\"{unit}\",\"features\":[\n",
        json!(metric.name())
    );
    for (idx, r) in reports.iter().enumerate() {
        let value = metric.report_value(r).map(round3);
        let feature = json!({
            "type": "Feature",
            "geometry": { "type": "Point", "coordinates": [r.lon_deg, r.lat_deg] },
            "properties": { metric.name(): value },
        });
        if idx > 0 {
            text.push_str(",\n");
        }
        text.push_str(&feature.to_string());
    }
    text.push_str("\n]}\n");
    Ok(text)
}

pub fn export_contour_geojson<W: Write>(
    reports: &[FomPointReport],
    metric_name: &str,
    mut w: W,
) -> Result<()> {
    let text = contour_geojson(reports, metric_name)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| Error::Write {
            path: format!("contour_{metric_name}.geojson").into(),
            source,
        })
}

/// Parses a contour file back into its metric and `(lat, lon, value)` triples.
pub fn read_contour_geojson(text: &str) -> Result<(Metric, Vec<ContourPoint>)> {
    let bad = |message: &str| Error::Parse {
        what: "contour GeoJSON",
        message: message.to_owned(),
    };
    let root: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    let metric: Metric = root["metric"]
        .as_str()
        .ok_or_else(|| bad("missing metric"))?
        .parse()?;
    let features = root["features"]
        .as_array()
        .ok_or_else(|| bad("missing features"))?;
    features
        .iter()
        .map(|f| {
            let c = &f["geometry"]["coordinates"];
            let lon = c[0].as_f64().ok_or_else(|| bad("bad longitude"))?;
            let lat = c[1].as_f64().ok_or_else(|| bad("bad latitude"))?;
            let v = &f["properties"][metric.name()];
            let value = if v.is_null() {
                None
            } else {
                Some(v.as_f64().ok_or_else(|| bad("bad value"))?)
            };
            Ok((lat, lon, value))
        })
        .collect::<Result<Vec<_>>>()
        .map(|triples| (metric, triples))
}

/// Rebuilds a contour file from parsed triples (used to check lossless round trips).
pub fn contour_geojson_from_triples(metric: Metric, triples: &[ContourPoint]) -> String {
    let reports: Vec<FomPointReport> = triples
        .iter()
        .map(|&(lat, lon, v)| {
            let raw = v.map(|v| if metric.is_duration() { v * 60.0 } else { v });
            synthetic_report(lat, lon, metric, raw)
        })
        .collect();
    contour_geojson(&reports, metric.name()).expect("metric is valid")
}

fn synthetic_report(lat: f64, lon: f64, metric: Metric, raw: Option<f64>) -> FomPointReport {
    let mut r = FomPointReport {
        lat_deg: lat,
        lon_deg: lon,
        t_c_total_s: 0.0,
        t_c_mean_s: None,
        t_c_max_s: None,
        n_coverage: 0,
        n_accesses: 0,
        n_gaps: 0,
        t_avg_gap_s: 0.0,
        revisit_min_s: None,
        revisit_mean_s: None,
        revisit_max_s: None,
        response_mean_s: 0.0,
        access_separation_count: 0,
    };
    let v = raw.unwrap_or(0.0);
    match metric {
        Metric::TcTotal => r.t_c_total_s = v,
        Metric::TcMean => r.t_c_mean_s = raw,
        Metric::TcMax => r.t_c_max_s = raw,
        Metric::NCoverage => r.n_coverage = v as usize,
        Metric::NAccesses => r.n_accesses = v as usize,
        Metric::NGaps => r.n_gaps = v as usize,
        Metric::TAvgGap => r.t_avg_gap_s = v,
        Metric::RevisitMin => r.revisit_min_s = raw,
        Metric::RevisitMean => r.revisit_mean_s = raw,
        Metric::RevisitMax => r.revisit_max_s = raw,
        Metric::ResponseMean => r.response_mean_s = v,
        Metric::AccessSeparation => r.access_separation_count = v as usize,
    }
    r
}
