use std::fmt;

/// Which geometric parameter violated a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryField {
    InteratomicDistance,
    PlateDistance,
    PlateSeparation,
    Acceleration,
}

impl fmt::Display for GeometryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GeometryField::InteratomicDistance => "d",
            GeometryField::PlateDistance => "z0",
            GeometryField::PlateSeparation => "L",
            GeometryField::Acceleration => "a",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid {field}: {reason}")]
pub struct GeometryError {
    pub field: GeometryField,
    pub reason: String,
}

impl GeometryError {
    pub(crate) fn new(field: GeometryField, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),

    #[error("kernel domain error: {0}")]
    Domain(String),

    #[error("invalid atom state: {0}")]
    State(String),

    /// The certified tail bound could not be pushed below `tol` within `n_cap` terms.
    #[error("series did not reach tol = {tol:e} within {n_cap} terms (bound at cap: {bound_at_cap:e})")]
    Convergence {
        tol: f64,
        n_cap: u64,
        bound_at_cap: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("run spec: {0}")]
    RunSpec(String),

    #[error("sweep point {value} of {param}: {source}")]
    SweepPoint {
        param: String,
        value: f64,
        source: Box<Error>,
    },

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by invalid user input (geometry, state, spec).
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Geometry(_)
            | Error::Domain(_)
            | Error::State(_)
            | Error::Unsupported(_)
            | Error::RunSpec(_) => true,
            Error::SweepPoint { source, .. } => source.is_validation(),
            Error::Convergence { .. } | Error::Io(_) => false,
        }
    }

    pub fn is_convergence(&self) -> bool {
        match self {
            Error::Convergence { .. } => true,
            Error::SweepPoint { source, .. } => source.is_convergence(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
