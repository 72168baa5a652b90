use crate::analytic::ExerciseStyle;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{engine} engine does not support {style:?} exercise")]
    UnsupportedStyle {
        engine: &'static str,
        style: ExerciseStyle,
    },

    /// The per-step growth factor must lie strictly between the down and up moves.
    #[error("no-arbitrage violated: need down {down} < growth {growth} < up {up}")]
    NoArbitrage { down: f64, growth: f64, up: f64 },

    #[error("hedge configuration violates {constraint}: {detail}")]
    HedgeConstraint {
        constraint: &'static str,
        detail: String,
    },

    #[error("singular hedge system (determinant {determinant:e})")]
    SingularHedgeSystem { determinant: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
