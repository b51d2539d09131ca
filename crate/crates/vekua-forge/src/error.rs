use crate::coeffexpr::EvalError;
use std::fmt;

/// Pipeline error. Every variant that originates at a grid point carries the
/// point, so batch callers can skip and report rather than abort.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A coefficient or solution expression failed to evaluate at a point.
    Eval {
        x: f64,
        y: f64,
        source: EvalError,
    },
    /// a11 or a22 is at or below the positivity threshold where the pipeline
    /// needs to divide by it.
    NonPositiveLeadingCoefficient {
        coefficient: &'static str,
        value: f64,
        x: f64,
        y: f64,
    },
    /// Structure parameters violate 4*alpha - beta^2 > 0.
    NotElliptic {
        alpha: f64,
        beta: f64,
    },
    InvalidRegion(String),
    /// An inner error annotated with the pipeline stage that raised it.
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    pub fn eval_at(x: f64, y: f64) -> impl Fn(EvalError) -> Error {
        move |source| Error::Eval { x, y, source }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Eval { x, y, source } => {
                write!(f, "evaluation failed at ({x}, {y}): {source}")
            }
            Error::NonPositiveLeadingCoefficient {
                coefficient,
                value,
                x,
                y,
            } => write!(f, "{coefficient} = {value} at ({x}, {y}) is not positive"),
            Error::NotElliptic { alpha, beta } => write!(
                f,
                "structure (alpha = {alpha}, beta = {beta}) is not elliptic: \
                 4*alpha - beta^2 = {} <= 0",
                4.0 * alpha - beta * beta
            ),
            Error::InvalidRegion(msg) => write!(f, "invalid region: {msg}"),
            Error::Stage { stage, source } => write!(f, "{stage}: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Eval { source, .. } => Some(source),
            Error::Stage { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

impl From<Error> for std::io::Error {
    fn from(e: Error) -> std::io::Error {
        std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string())
    }
}
