use thiserror::Error;

use crate::expr::ExprError;

/// Broad class of a failure, used to pick process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Category {
    Input,
    NotQuantizable,
    Geometry,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("symbol `{0}` is not part of the chart")]
    ForeignSymbol(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("not quantizable: monomial `{monomial}` {reason}")]
    NotQuantizable { monomial: String, reason: String },
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("level set at E = {energy} is not compact in the search window")]
    NonCompactLeaf { energy: f64 },
    #[error("potential has {wells} wells in the search window; only single wells are supported")]
    MultiWell { wells: usize },
    #[error("energy {energy} is below the potential minimum {minimum}")]
    EnergyBelowMinimum { energy: f64, minimum: f64 },
    #[error("no energy bracket found for level n = {n}")]
    NotBracketed { n: usize },
    #[error("eigenvector {index} has tail mass {mass:e} at the grid boundary")]
    InsufficientDecay { index: usize, mass: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::NotQuantizable { .. } => Category::NotQuantizable,
            Error::NonCompactLeaf { .. }
            | Error::MultiWell { .. }
            | Error::EnergyBelowMinimum { .. }
            | Error::NotBracketed { .. }
            | Error::InvalidDistribution(_) => Category::Geometry,
            _ => Category::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
