//! Exact computations in cyclotomic towers.
//!
//! The library works at finite level `n` in the tower `K_n = K(mu_{p^{n+1}})`
//! over an abelian base field `K`:
//!
//! - [`fields`]: exact arithmetic in `Q(mu_f)`, abelian subfields, cyclotomic
//!   units and the norm relations between them, tower bookkeeping.
//! - [`grouprings`]: group rings `R[G]` for finite abelian Galois groups over
//!   exact rationals and `Z/p^M`, module lattices in Howell/Smith normal form,
//!   duals, Fitting ideals, idempotents, the twisted involution.
//! - [`symbols`]: split-prime search, power-residue symbols and the Frobenius
//!   rows of the Kummer pairing.
//! - [`ideals`]: the symbol-generated ideal of the real group ring, its
//!   annihilation of class groups, descent to subfields, and the dual
//!   characterization over `Q`.
//! - [`classgrp`]: real quadratic form class groups, exact Bernoulli numbers,
//!   minus class numbers, irregular-pair detection, Minkowski h=1 certification.
//! - [`stick`]: Stickelberger elements both as finite sums and as L-value
//!   vectors, the equivariant Gauss-sum element, the three-ideal identity and
//!   the principal generation of the image ideal.
//! - [`padic`]: precision-tracked arithmetic in `Z_p[zeta_{p^{n+1}}]`, the
//!   p-adic logarithm, the trace-pairing maps and their image lattices, and
//!   p-adic L-function truncations with lambda/mu extraction.
//! - [`lvalues`]: complex Dirichlet L-values at 0 and 1 in double-double
//!   precision and the equivariant functional equation.
//! - [`suites`]: named verification suites with seeded, reproducible JSON
//!   reports (drives the CLI).

pub mod arith;
pub mod par;

pub mod classgrp;
pub mod fields;
pub mod grouprings;
pub mod ideals;
pub mod lvalues;
pub mod padic;
pub mod stick;
pub mod suites;
pub mod symbols;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field data: {0}")]
    InvalidField(String),
    #[error("{0} is not a subfield of the ambient field")]
    NotSubfield(String),
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("element is congruent to zero modulo the chosen prime; resample")]
    BadPrimePair,
    #[error("precision underflow: {0}")]
    Precision(String),
    #[error("lattice is rank-deficient in its ambient span")]
    RankDeficient,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mismatched ambient structures: {0}")]
    Mismatch(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
