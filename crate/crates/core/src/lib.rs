//! Coverage analysis for small-satellite constellations.
//!
//! The pipeline expands a plane/phase layout into orbits ([`constellation`]),
//! propagates them analytically with J2 secular drift ([`orbits`]), finds
//! access windows over a lattice of points inside an area of interest
//! ([`coverage`]) and reduces the per-point timelines to coverage figures of
//! merit ([`fom`]). [`scenario`] ties the stages together behind a JSON
//! configuration and writes CSV / GeoJSON reports.
//!
//! ```no_run
//! use orbcov::scenario::{ScenarioConfig, run_scenario};
//!
//! let config = ScenarioConfig::load("scenario.json".as_ref())?;
//! let outputs = run_scenario(&config, 4)?;
//! println!("wrote {}", outputs.points_csv.display());
//! # Ok::<(), orbcov::Error>(())
//! ```

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constellation;
pub mod coverage;
mod error;
pub mod fom;
pub mod orbits;
pub mod scenario;
pub mod timebase;

pub use error::{Error, ErrorKind, Result};
