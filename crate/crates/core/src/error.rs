use thiserror::Error;

use crate::coeff::CoeffError;
use crate::groebner::{GbStats, GroebnerError};
use crate::ring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Statistics of the run that hit its resource budget, if that is what failed.
    pub fn budget_stats(&self) -> Option<&GbStats> {
        match self {
            Error::Groebner(GroebnerError::Budget { stats, .. }) => Some(stats),
            _ => None,
        }
    }

    pub fn is_budget(&self) -> bool {
        self.budget_stats().is_some()
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
