//! Area-of-interest grids and satellite access windows over them.

mod access;
mod aoi;
mod timeline;

pub use access::{
    compute_accesses, AccessEngine, AccessInterval, SensorModel, TimeWindow, DEFAULT_COARSE_STEP_S,
    MAX_COARSE_STEP_S, REFINE_TOLERANCE_S,
};
pub use aoi::{generate_grid, point_in_polygon, AreaOfInterest, GridPoint, DEFAULT_RESOLUTION_DEG};
pub use timeline::{merge_spans, merge_timeline, timeline_contains, Span};
