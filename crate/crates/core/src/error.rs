use thiserror::Error;

/// Errors raised by the geometry, flow and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("curve is not strictly h-convex (min kappa - 1 = {margin:.3e})")]
    NotStrictlyHConvex { margin: f64 },

    #[error("curve is not h-convex (min kappa - 1 = {margin:.3e})")]
    NotHConvex { margin: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("h-convexity margin fell below the floor at t = {t:.6e} (margin {margin:.3e})")]
    AbortedMargin { t: f64, margin: f64 },

    #[error("monitor {name} exceeded ten times its tolerance ({value:.3e} vs {tol:.3e})")]
    InvariantViolation {
        name: &'static str,
        value: f64,
        tol: f64,
    },

    #[error("insufficient decay recorded for a rate fit: {0}")]
    InsufficientDecay(String),

    #[error("target {target:.6e} is not bracketed on ({lo:.1e}, {hi}]")]
    OutOfRange { target: f64, lo: f64, hi: f64 },

    #[error("spectrum is not in the Garding cone of order {k}")]
    NotInCone { k: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status: 2 for invalid input, 3 for numerical aborts, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Csv(_) => 4,
            Error::NonFinite(_)
            | Error::AbortedMargin { .. }
            | Error::InvariantViolation { .. }
            | Error::InsufficientDecay(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(values: &[f64], what: &'static str) -> Result<()> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
