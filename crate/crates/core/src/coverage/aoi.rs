use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::timebase::{geodetic_to_ecef, EcefPosition, GeodeticPoint};

/// Default lattice spacing for AOI grids, degrees.
pub const DEFAULT_RESOLUTION_DEG: f64 = 0.5;

const EDGE_EPS_DEG: f64 = 1e-9;

/// A simple closed polygon in latitude/longitude, treated as planar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AreaOfInterest {
    pub name: String,
    /// Vertices as `[lat_deg, lon_deg]`, without a repeated closing vertex.
    #[serde(rename = "boundary_deg")]
    pub boundary: Vec<(f64, f64)>,
}

impl AreaOfInterest {
    pub fn new(name: impl Into<String>, mut boundary: Vec<(f64, f64)>) -> Result<Self> {
        if boundary.len() > 1 && boundary.first() == boundary.last() {
            boundary.pop();
        }
        let aoi = Self {
            name: name.into(),
            boundary,
        };
        aoi.validate()?;
        Ok(aoi)
    }

    /// Coarse outline of mainland India bundled with the crate.
    pub fn india() -> Self {
        Self::from_geojson_str("India", include_str!("../../data/india.geojson"))
            .expect("bundled India polygon is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.boundary.len();
        if n < 3 {
            return Err(Error::InvalidAoi(format!(
                "{:?} has {n} vertices, at least 3 are required",
                self.name
            )));
        }
        for (idx, &(lat, lon)) in self.boundary.iter().enumerate() {
            if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
                return Err(Error::InvalidAoi(format!(
                    "vertex {idx} ({lat}, {lon}) is outside lat [-90, 90] / lon [-180, 180]"
                )));
            }
        }
        let edge = |i: usize| (self.boundary[i], self.boundary[(i + 1) % n]);
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a, b) = edge(i);
                let (c, d) = edge(j);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidAoi(format!(
                        "{:?} self-intersects between edges {i} and {j}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Reads the first ring of the first Polygon in a GeoJSON geometry, Feature or
    /// FeatureCollection. GeoJSON positions are `[lon, lat]`.
    pub fn from_geojson_str(default_name: &str, text: &str) -> Result<Self> {
        let bad = |message: String| Error::Parse {
            what: "GeoJSON AOI",
            message,
        };
        let root: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let (name, geometry) =
            find_polygon(&root).ok_or_else(|| bad("no Polygon geometry found".to_owned()))?;
        let ring = geometry["coordinates"]
            .get(0)
            .and_then(Value::as_array)
            .ok_or_else(|| bad("Polygon has no outer ring".to_owned()))?;
        let mut boundary = Vec::with_capacity(ring.len());
        for (idx, pos) in ring.iter().enumerate() {
            let lon = pos.get(0).and_then(Value::as_f64);
            let lat = pos.get(1).and_then(Value::as_f64);
            match (lat, lon) {
                (Some(lat), Some(lon)) => boundary.push((lat, lon)),
                _ => return Err(bad(format!("position {idx} is not [lon, lat]"))),
            }
        }
        Self::new(name.unwrap_or_else(|| default_name.to_owned()), boundary)
    }

    pub fn from_geojson_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_owned(),
            source,
        })?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("aoi")
            .to_owned();
        Self::from_geojson_str(&stem, &text)
    }

    /// (min_lat, min_lon, max_lat, max_lon)
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        self.boundary.iter().fold(
            (
                f64::INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::NEG_INFINITY,
            ),
            |(a, b, c, d), &(lat, lon)| (a.min(lat), b.min(lon), c.max(lat), d.max(lon)),
        )
    }

    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        point_in_polygon(lat, lon, &self.boundary)
    }
}

fn find_polygon(v: &Value) -> Option<(Option<String>, &Value)> {
    match v.get("type")?.as_str()? {
        "Polygon" => Some((None, v)),
        "Feature" => {
            let name = v
                .get("properties")
                .and_then(|p| p.get("name"))
                .and_then(Value::as_str)
                .map(str::to_owned);
            let (_, g) = find_polygon(v.get("geometry")?)?;
            Some((name, g))
        }
        "FeatureCollection" => v.get("features")?.as_array()?.iter().find_map(find_polygon),
        _ => None,
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - qx).hypot(p.1 - qy) <= EDGE_EPS_DEG
}

fn segments_intersect(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

/// Planar ray-casting test with (lat, lon) as coordinates. Points on an edge or vertex are inside.
pub fn point_in_polygon(lat: f64, lon: f64, boundary: &[(f64, f64)]) -> bool {
    let n = boundary.len();
    if n == 0 {
        return false;
    }
    let p = (lat, lon);
    let mut inside = false;
    for i in 0..n {
        let a = boundary[i];
        let b = boundary[(i + 1) % n];
        if on_segment(p, a, b) {
            return true;
        }
        // Cast the ray towards +lon.
        if (a.0 > lat) != (b.0 > lat) {
            let lon_cross = a.1 + (lat - a.0) * (b.1 - a.1) / (b.0 - a.0);
            if lon < lon_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// One AOI sample point at zero altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    /// Position in row-major grid order.
    pub index: usize,
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub geodetic: GeodeticPoint,
    pub ecef: EcefPosition,
}

impl GridPoint {
    pub fn new(index: usize, lat_deg: f64, lon_deg: f64) -> Result<Self> {
        let geodetic = GeodeticPoint::new(lat_deg, lon_deg, 0.0)?;
        Ok(Self {
            index,
            lat_deg,
            lon_deg,
            geodetic,
            ecef: geodetic_to_ecef(&geodetic),
        })
    }
}

/// Lattice points inside `aoi`, anchored at its bounding box's south-west corner.
/// Rows run south to north, and west to east within a row.
pub fn generate_grid(aoi: &AreaOfInterest, resolution_deg: f64) -> Result<Vec<GridPoint>> {
    if !(resolution_deg > 0.0) || !resolution_deg.is_finite() {
        return Err(Error::InvalidAoi(format!(
            "grid resolution must be positive, got {resolution_deg}"
        )));
    }
    let (lat0, lon0, lat1, lon1) = aoi.bounding_box();
    let rows = ((lat1 - lat0) / resolution_deg + 1e-9).floor() as usize + 1;
    let cols = ((lon1 - lon0) / resolution_deg + 1e-9).floor() as usize + 1;
    let mut grid = Vec::new();
    for j in 0..rows {
        let lat = lat0 + j as f64 * resolution_deg;
        for k in 0..cols {
            let lon = lon0 + k as f64 * resolution_deg;
            if aoi.contains(lat, lon) {
                grid.push(GridPoint::new(grid.len(), lat, lon)?);
            }
        }
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid { resolution_deg });
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(lat0: f64, lon0: f64, lat1: f64, lon1: f64) -> AreaOfInterest {
        AreaOfInterest::new(
            "rect",
            vec![(lat0, lon0), (lat0, lon1), (lat1, lon1), (lat1, lon0)],
        )
        .unwrap()
    }

    #[test]
    fn rectangle_lattice_count() {
        let grid = generate_grid(&rect(8.0, 68.0, 37.0, 97.5), 0.5).unwrap();
        assert_eq!(grid.len(), 59 * 60);
        assert_eq!((grid[0].lat_deg, grid[0].lon_deg), (8.0, 68.0));
        assert_eq!((grid[1].lat_deg, grid[1].lon_deg), (8.0, 68.5));
        assert_eq!(
            grid.last().map(|g| (g.lat_deg, g.lon_deg)),
            Some((37.0, 97.5))
        );
        assert!(grid.iter().enumerate().all(|(i, g)| g.index == i));
    }

    #[test]
    fn tiny_triangle_has_no_points() {
        // Bounding-box corner (10.0, 70.0) is the only lattice point and lies outside.
        let tri =
            AreaOfInterest::new("tri", vec![(10.0, 70.5), (10.5, 70.0), (10.5, 70.6)]).unwrap();
        match generate_grid(&tri, 10.0) {
            Err(Error::EmptyGrid { resolution_deg }) => assert_eq!(resolution_deg, 10.0),
            other => panic!("expected EmptyGrid, got {other:?}"),
        }
    }

    #[test]
    fn point_in_polygon_cases() {
        let square = [(0.0, 0.0), (0.0, 10.0), (10.0, 10.0), (10.0, 0.0)];
        assert!(point_in_polygon(5.0, 5.0, &square));
        assert!(!point_in_polygon(20.0, 5.0, &square));
        assert!(!point_in_polygon(-1.0, -1.0, &square));
        assert!(point_in_polygon(0.0, 0.0, &square));
        assert!(point_in_polygon(10.0, 5.0, &square));
        let concave = [
            (0.0, 0.0),
            (10.0, 0.0),
            (10.0, 10.0),
            (5.0, 5.0),
            (0.0, 10.0),
        ];
        assert!(!point_in_polygon(8.0, 9.0, &concave));
        assert!(point_in_polygon(8.0, 5.0, &concave));
        assert!(point_in_polygon(2.0, 2.0, &concave));
    }

    #[test]
    fn rejects_bad_polygons() {
        assert!(AreaOfInterest::new("line", vec![(0.0, 0.0), (1.0, 1.0)]).is_err());
        let bowtie = vec![(0.0, 0.0), (10.0, 10.0), (10.0, 0.0), (0.0, 10.0)];
        assert!(AreaOfInterest::new("bowtie", bowtie).is_err());
        assert!(AreaOfInterest::new("off", vec![(0.0, 0.0), (95.0, 0.0), (0.0, 5.0)]).is_err());
    }

    #[test]
    fn geojson_input_and_closing_vertex() {
        let text = r#"{"type":"Feature","properties":{"name":"box"},
            "geometry":{"type":"Polygon","coordinates":[[[70,10],[71,10],[71,11],[70,11],[70,10]]]}}"#;
        let aoi = AreaOfInterest::from_geojson_str("fallback", text).unwrap();
        assert_eq!(aoi.name, "box");
        assert_eq!(
            aoi.boundary,
            vec![(10.0, 70.0), (10.0, 71.0), (11.0, 71.0), (11.0, 70.0)]
        );
        assert!(
            AreaOfInterest::from_geojson_str("x", r#"{"type":"Point","coordinates":[0,0]}"#)
                .is_err()
        );
    }

    #[test]
    fn bundled_india_is_valid() {
        let india = AreaOfInterest::india();
        assert!(india.boundary.len() >= 35);
        let grid = generate_grid(&india, DEFAULT_RESOLUTION_DEG).unwrap();
        assert!(grid.len() > 800 && grid.len() < 1800, "{}", grid.len());
        // New Delhi, Mumbai, Chennai, Kolkata
        for (lat, lon) in [(28.6, 77.2), (19.1, 72.9), (13.1, 80.3), (22.6, 88.4)] {
            assert!(india.contains(lat, lon), "({lat}, {lon})");
        }
        // Colombo, Karachi, Dhaka, Kathmandu
        for (lat, lon) in [(6.9, 79.9), (24.9, 67.0), (23.8, 90.4), (27.7, 85.3)] {
            assert!(!india.contains(lat, lon), "({lat}, {lon})");
        }
    }

    #[test]
    fn coarse_grid_is_subset_of_fine_grid() {
        let india = AreaOfInterest::india();
        let fine = generate_grid(&india, 0.5).unwrap();
        let coarse = generate_grid(&india, 1.0).unwrap();
        let fine_set: std::collections::HashSet<(u64, u64)> = fine
            .iter()
            .map(|g| (g.lat_deg.to_bits(), g.lon_deg.to_bits()))
            .collect();
        for g in &coarse {
            assert!(fine_set.contains(&(g.lat_deg.to_bits(), g.lon_deg.to_bits())));
        }
    }
}
