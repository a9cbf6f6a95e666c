use thiserror::Error;

use crate::splitting::PackingWitness;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group order overflows 64-bit arithmetic")]
    Overflow,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("residue {residue} out of range for cyclic factor of order {order}")]
    ResidueOutOfRange { residue: u64, order: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A parameter precondition was violated. The message names the rule.
    #[error("{0}")]
    Precondition(String),

    #[error("multiplier {multiplier} is not coprime to {modulus}{}", witness.as_ref().map(|w| format!("; extension is not a packing: {w}")).unwrap_or_default())]
    NotCoprime {
        multiplier: i64,
        modulus: u64,
        witness: Option<PackingWitness>,
    },

    #[error("not a packing: {0}")]
    NotPacking(PackingWitness),

    #[error("lattice is singular")]
    SingularLattice,

    #[error("packing density {num}/{den} exceeds 1")]
    DensityAboveOne { num: u64, den: u64 },

    #[error("size guard exceeded: {0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A verified invariant failed. This indicates a bug, not bad input.
    #[error("internal fault: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
