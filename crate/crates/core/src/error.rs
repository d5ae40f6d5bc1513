use thiserror::Error;

/// Errors raised by the special-function, channel and metric evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain of {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("gamma function pole at {0}")]
    Pole(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no vertical contour separates the left and right pole families")]
    NoSeparatingContour,

    #[error(
        "contour integral did not converge after {refinements} refinements \
         (last change {last_change:e}, value {value:e})"
    )]
    ContourNoConvergence {
        refinements: u32,
        last_change: f64,
        value: f64,
    },

    #[error("quadrature did not converge: estimated error {error:e} on value {value:e}")]
    QuadratureNoConvergence { value: f64, error: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown scenario: {0}")]
    UnknownScenario(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn invalid(detail: impl Into<String>) -> Error {
    Error::InvalidParameter(detail.into())
}
