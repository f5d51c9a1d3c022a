use thiserror::Error;

/// Errors raised by grids, kernels, solvers, oracles and the experiment runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An operation was called on the wrong kind of grid or with malformed input.
    #[error("usage error: {0}")]
    Usage(String),

    /// A scheme, kernel or model parameter lies outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A transform produced data that violates a representation invariant.
    #[error("numerical consistency error: {0}")]
    NumericalConsistency(String),

    /// The discrete solution stopped being finite (or exceeded the configured bound).
    #[error("blowup at t={t:.6e} (step {step}): field `{field}` reached max|value|={max_abs:.6e}")]
    Blowup {
        t: f64,
        step: usize,
        field: String,
        max_abs: f64,
    },

    /// A strictly positive quantity (depth, density, pressure) became non-positive.
    #[error("positivity loss at t={t:.6e} (step {step}): {field}={value:.6e} at node {node} (x={x:.6})")]
    PositivityLoss {
        t: f64,
        step: usize,
        field: String,
        node: usize,
        x: f64,
        value: f64,
    },

    /// A reference solution could not be evaluated.
    #[error("oracle error: {0}")]
    Oracle(String),

    /// A least-squares fit could not be formed.
    #[error("fit error: {0}")]
    Fit(String),

    /// An experiment configuration is invalid.
    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Attach the time-loop position to errors raised inside a right-hand side.
    pub fn at(self, t: f64, step: usize) -> Self {
        match self {
            Error::Blowup {
                field, max_abs, ..
            } => Error::Blowup {
                t,
                step,
                field,
                max_abs,
            },
            Error::PositivityLoss {
                field,
                node,
                x,
                value,
                ..
            } => Error::PositivityLoss {
                t,
                step,
                field,
                node,
                x,
                value,
            },
            other => other,
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, Error::Blowup { .. } | Error::PositivityLoss { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
