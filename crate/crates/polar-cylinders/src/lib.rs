//! Exact-arithmetic toolkit for polar cylinders on blow-ups of the
//! projective plane.
//!
//! Given an ample rational divisor class `A` on a blow-up of the plane, the
//! crate computes the pseudo-effective threshold `mu_A` of `K + lambda A`,
//! the smallest extremal face of the effective cone containing the boundary
//! class and its dimension `r_A`, and turns those numbers into a
//! cylinder-existence verdict. It also builds and verifies the explicit
//! cylinder constructions (tangent-pencil families and a ten-step blow-up
//! tower) down to exact class identities.
//!
//! Everything is rational arithmetic: the linear programming, the lattice
//! pushforwards, and every certificate check are exact. See the `cli`
//! module for the document formats of the command-line front end.

pub mod certify;
pub mod classify;
pub mod cli;
pub mod cone;
pub mod families;
mod linalg;
pub mod negcurves;
pub mod picard;
pub mod rational;

use rational::Rational;

/// Hard cap on lattice rank accepted from documents; keeps hostile inputs
/// from allocating unboundedly.
pub const MAX_RANK: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected rank {0}, got {1}")]
    DimensionMismatch(usize, usize),

    #[error("unknown curve `{0}`")]
    UnknownCurve(String),

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("{context}: {n} blow-ups outside the supported range (max {max})")]
    UnsupportedBlowups {
        n: usize,
        max: usize,
        context: &'static str,
    },

    #[error("divisor is not ample: {0}")]
    NotAmple(String),

    #[error("contraction step {step} (`{name}`): self-intersection {value}, need -1")]
    ContractionStep {
        step: usize,
        name: String,
        value: Rational,
    },

    #[error("parameter window violated: {0}")]
    ParameterWindow(String),

    #[error("identity `{name}` failed with residual {residual}")]
    IdentityResidual { name: String, residual: String },

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status the front end maps this error to: 1 for a failed
    /// verification, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::IdentityResidual { .. } | Error::InvalidCertificate(_) => 1,
            _ => 2,
        }
    }
}
