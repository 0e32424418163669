//! Exact arithmetic engine for refined tropical boundary counts.
//!
//! The crate is `no_std` (with `alloc`). Everything that touches files,
//! threads or the command line lives in the companion `quantrop` crate.
//!
//! Module map:
//!
//! * [`qlaurent`]: Laurent polynomials in `q` with rational exponents.
//! * [`lattice`]: lattice vectors, degrees, splittings `Δ(s)`.
//! * [`tropcurve`]: parametrized rational tropical curves.
//! * [`enumerate`]: solving the boundary moment problem over all trivalent types.
//! * [`realstruct`]: real structures on curves with ends of weight 1 or 2.
//! * [`qindex`]: log-areas and quantum indices of oriented real rational curves.
//! * [`localcount`]: closed-form vertex-local refined counts and their oracles.
//! * [`invariants`]: branch recursion, first order multiplicities, `R_{Δ,s}`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(test)]
extern crate std;

use alloc::string::String;

pub mod enumerate;
pub mod invariants;
pub mod lattice;
pub mod localcount;
pub mod qindex;
pub mod qlaurent;
pub mod realstruct;
pub mod tropcurve;

mod linalg;

/// Exact rational number used throughout.
pub type Rat = num_rational::BigRational;

pub use num_bigint::BigInt;

pub use qlaurent::{AffineExp, Exponent, Frac, Laurent, QFrac, QLaurent};

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("polynomial division leaves a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero lattice vector")]
    ZeroVector,
    #[error("degree vectors do not sum to zero")]
    Unbalanced,
    #[error("side {side} needs {needed} primitive copies but has {available}")]
    InsufficientMultiplicity {
        side: usize,
        needed: usize,
        available: usize,
    },
    #[error("invalid splitting: {0}")]
    InvalidSplit(String),
    #[error("vertex is not trivalent")]
    NotTrivalent,
    #[error("curve has a flat vertex")]
    FlatVertex,
    #[error("edge lengths must be strictly positive")]
    NonPositiveLength,
    #[error("balancing fails at vertex {0}")]
    BalancingViolated(usize),
    #[error("non-generic moments: degenerate system on topology {topology}")]
    DegenerateConfig { topology: usize },
    #[error("no generic moments found after {attempts} attempts")]
    GenericityFailure { attempts: usize },
    #[error("curve has no odd unbounded end")]
    NoOddEnd,
    #[error("unbounded end {0} has weight other than 1 or 2")]
    BadEndWeight(usize),
    #[error("last real point must be the point at infinity")]
    MissingInfinity,
    #[error("invalid parametrization: {0}")]
    InvalidParam(String),
    #[error("quantum index residual {residual} exceeds tolerance")]
    NotHalfInteger { residual: f64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("complex pair {pair} has a real boundary coordinate")]
    RealMomentDegenerate { pair: usize },
    #[error("input vectors are collinear")]
    CollinearInput,
    #[error("an exponent is exactly zero, its sign is undefined")]
    DegenerateArgument,
    #[error("angle data lies on a region boundary")]
    OnRegionBoundary,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
