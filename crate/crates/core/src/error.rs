//! Shared error type for the whole crate.

use std::fmt;

use thiserror::Error;

/// Which coordinate of a bivariate data set an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    X,
    Y,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::X => write!(f, "x"),
            Coord::Y => write!(f, "y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Tied values where a strict order is required. Indices are 0-based
    /// positions into the offending coordinate sequence.
    #[error("tied values in the {coord} coordinate at indices {first} and {second}")]
    Ties {
        coord: Coord,
        first: usize,
        second: usize,
    },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("input too small: {0}")]
    Size(String),

    #[error("work estimate exceeds budget: {0}")]
    Resource(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no closed-form pattern probabilities: {0}")]
    Model(String),

    #[error("degenerate coefficient vector: {0}")]
    Degenerate(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
