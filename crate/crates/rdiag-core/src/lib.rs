//! Exact combinatorics and norm estimates for R-diagonal dilation semigroups.
//!
//! The crate is organized around the objects that drive the estimates:
//!
//! * [`strings`] — 1/∗ exponent strings, runs, rotations, lattice paths.
//! * [`noncrossing`] — the lattice `NC(n)`, its Möbius function, and the
//!   constrained families `NC(S)` and `NC₂(S)`.
//! * [`cumulants`] — moment ↔ free-cumulant transforms and R-diagonal
//!   moment evaluation, all in exact rational arithmetic.
//! * [`bounds`] — Fuss-Catalan numbers and the lower/upper bound sandwich
//!   for `|NC₂(S)|`, with an exhaustive verification harness.
//! * [`mehler`] — orthogonal polynomials, Mehler kernels, and Markovianity
//!   checks for finite-support measures.
//! * [`semigroup`] — symbolic actions of the two completely positive
//!   extensions of the dilation semigroup, plus Poisson-kernel numerics.
//! * [`normlab`] — floating-point reproduction of the ultracontractivity
//!   exponents via truncated series and log-log slope fits.

pub mod bounds;
pub mod cumulants;
pub mod error;
pub mod mehler;
pub mod noncrossing;
pub mod normlab;
pub mod ratio;
pub mod semigroup;
pub mod strings;

pub use error::{Error, Result};
pub use ratio::Rat;
