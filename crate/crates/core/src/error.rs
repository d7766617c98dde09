use std::path::PathBuf;

use thiserror::Error;

use crate::constellation::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used by the command line front end to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The inputs (configuration, AOI, parameters) are unusable.
    Config,
    /// The inputs were accepted but the run could not complete.
    Runtime,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid calendar date {year:04}-{month:02}-{day:02} {hour:02}:{minute:02}:{second}: {reason}")]
    InvalidDate {
        year: i32,
        month: u32,
        day: u32,
        hour: u32,
        minute: u32,
        second: f64,
        reason: &'static str,
    },

    #[error("invalid timestamp {0:?}: expected RFC 3339, e.g. 2021-03-01T00:00:00Z")]
    InvalidTimestamp(String),

    #[error("eccentricity {0} is outside the elliptic range [0, 1)")]
    UnsupportedEccentricity(f64),

    #[error("invalid orbital elements: {0}")]
    InvalidElements(String),

    #[error("target coincides with the observer; elevation is undefined")]
    CoincidentPoints,

    #[error("invalid constellation spec: {}", join_diagnostics(.0))]
    InvalidSpec(Vec<Diagnostic>),

    #[error("invalid area of interest: {0}")]
    InvalidAoi(String),

    #[error("invalid sensor model: {0}")]
    InvalidSensor(String),

    #[error("area of interest contains no lattice points at {resolution_deg} deg resolution")]
    EmptyGrid { resolution_deg: f64 },

    #[error("{name} = {value} s is invalid: {reason}")]
    InvalidStep {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown metric {name:?}; valid metrics: {}", .valid.join(", "))]
    UnknownMetric {
        name: String,
        valid: Vec<&'static str>,
    },

    #[error("no point reports to aggregate")]
    EmptyReports,

    #[error("sweep expands to {combinations} scenarios, above the cap of {cap}")]
    SweepTooLarge { combinations: usize, cap: usize },

    #[error("config error in {path}: field `{field}`: {message}")]
    Config {
        path: PathBuf,
        field: String,
        message: String,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("run failed: {0}")]
    Runtime(String),

    #[error("malformed {what}: {message}")]
    Parse { what: &'static str, message: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptyGrid { .. }
            | Error::EmptyReports
            | Error::Write { .. }
            | Error::Runtime(_) => ErrorKind::Runtime,
            _ => ErrorKind::Config,
        }
    }

    pub(crate) fn config(
        path: impl Into<PathBuf>,
        field: impl Into<String>,
        message: impl std::fmt::Display,
    ) -> Self {
        Error::Config {
            path: path.into(),
            field: field.into(),
            message: message.to_string(),
        }
    }
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
