use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Error categories shared by every module.
///
/// The variants double as the machine-readable categories reported by the
/// command-line front end (see [`Error::category`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("fit window error: {0}")]
    Window(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("step size error at t = {t}: dt = {dt} exceeds the CFL limit {limit}")]
    StepSize { t: f64, dt: f64, limit: f64 },

    #[error("blow-up at t = {t}: {message}")]
    BlowUp { t: f64, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    /// Short stable identifier for the error family.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config { .. } => "config",
            Error::Domain(_) => "domain",
            Error::Data(_) => "data",
            Error::Window(_) => "window",
            Error::Usage(_) => "usage",
            Error::StepSize { .. } => "step-size",
            Error::BlowUp { .. } => "blow-up",
            Error::Io(_) | Error::Csv(_) => "io",
            Error::Format(_) => "format",
        }
    }

    /// Process exit code for the command-line front end. Solver failures are
    /// kept apart from configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Usage(_) => 2,
            Error::Domain(_) | Error::Data(_) | Error::Window(_) => 3,
            Error::StepSize { .. } | Error::BlowUp { .. } => 4,
            Error::Io(_) | Error::Csv(_) | Error::Format(_) => 5,
        }
    }

    /// Attach a failure time to solver errors that do not carry one yet.
    pub(crate) fn at_time(self, t: f64) -> Self {
        match self {
            Error::BlowUp { message, .. } => Error::BlowUp { t, message },
            Error::StepSize { dt, limit, .. } => Error::StepSize { t, dt, limit },
            other => other,
        }
    }
}
