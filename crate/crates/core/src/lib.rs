//! Exact symbolic-numeric toolkit for germs of real functions at +∞.
//!
//! The library is organized around a small decidable function class — unary
//! eventually-rational expressions with smooth bump-gate glue — and builds
//! four interlocking pieces on top of it:
//!
//! - [`expr`]: the expression core (exact rationals, sparse polynomials,
//!   rational functions, expression trees, parser and printer, evaluation and
//!   symbolic differentiation).
//! - [`germfield`]: the field of germs at +∞ of in-class functions, with
//!   dominance, eventual sign, inversion, and differentiation — all decidable
//!   because the class is eventually rational.
//! - [`zeroset`]: exact real root isolation by Sturm sequences, symbolic
//!   zero-sets closed under intersection/product/permutation, and the
//!   extension-by-zero dichotomy for eventual sign.
//! - [`smoothkit`]: smooth bump functions, finite-window partitions of unity,
//!   smooth extension from closed sets, and one-sided smooth prolongation.
//! - [`quotient`]: the ring of total in-class functions modulo the
//!   eventually-zero ideal, induced polynomial operations with Hadamard
//!   witnesses, and the embedding of the germ field into that quotient.
//!
//! [`suites`] packages the randomized verification suites used both by
//! `cargo test` and the CLI `selftest` verb.

pub mod expr;
pub mod germfield;
pub mod quotient;
pub mod smoothkit;
pub mod suites;
pub mod zeroset;

pub use expr::{Expr, Poly, Rat, RationalFunc};
