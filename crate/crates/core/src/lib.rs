//! Exact computational homological algebra over the rationals.
//!
//! The crate computes Hochschild, cyclic and relative (negative) cyclic
//! homology of finite-dimensional commutative Q-algebras, together with
//! Hodge decompositions via Eulerian idempotents, Adams/lambda operations,
//! pro-HKR tower certificates, Koszul comparison data, and the
//! Chevalley-Eilenberg / Loday-Quillen constructions for triangular-mod-I
//! matrix Lie algebras.
//!
//! Everything is exact: all arithmetic is arbitrary-precision rational and
//! every structural identity (d^2 = 0, bB + Bb = 0, idempotency, ...) is
//! verified as a matrix identity at construction time.

pub mod algebras;
pub mod complexes;
pub mod error;
pub mod exactlin;
pub mod hochcyc;
pub mod prohkr;
pub mod volodin;

pub use error::{Error, Result};
pub use exactlin::{Rat, SparseMat, Subquotient};
