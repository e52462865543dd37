//! Exact engine for a multivariate Markov chain on the symmetric group.
//!
//! The chain moves by sorting adjacent values (down-moves weighted by single
//! variables) plus one up-move swapping the values 1 and n. This crate builds
//! its transition matrix symbolically, computes the normalized stationary
//! vector ζ by exact fraction-free linear algebra over the polynomial ring,
//! constructs Schubert polynomials via divided differences, expands
//! polynomials in the Schubert basis, and mechanically checks the positivity,
//! monomial-factor, special-value and special-factor conjectures against the
//! computed data.
//!
//! Everything symbolic is exact: coefficients are arbitrary-precision
//! rationals and all comparisons are equality of canonical forms.

pub mod chain;
pub mod conjectures;
pub mod perm;
pub mod poly;
pub mod schubert;
pub mod simulate;

pub use perm::{LehmerCode, PermError, Permutation};
pub use poly::{DivError, Monomial, PolyError, Polynomial, Rational};
