//! Polynomial rings with commuting generalised Hasse-Schmidt operators.
//!
//! A finite-dimensional commutative `Q`-algebra, split into local blocks with
//! a ranked basis, determines a family of operators: one endomorphism `s<i>`
//! per block and one twisted derivation `d<i>.<j>` per nilpotent basis
//! element. This crate builds the polynomial ring in all operator images
//! `d^theta x_j` of finitely many indeterminates and provides
//!
//! - validation of the algebra from its structure constants ([`dalgebra`]),
//! - multi-indices, transforms and rankings ([`ordering`]),
//! - exact sparse polynomials with leader, initial and separant ([`poly`]),
//! - operator application through the product rule ([`operators`]),
//! - reduction with checkable certificates ([`reduction`]),
//! - autoreduced sets, characteristic sets and closure witnesses ([`charset`]),
//! - classical differential and difference oracles ([`classical`]),
//! - a batch command-line front end ([`cli`]).

pub mod charset;
pub mod classical;
pub mod cli;
pub mod dalgebra;
pub mod expr;
mod linalg;
pub mod operators;
pub mod ordering;
pub mod par;
pub mod poly;
pub mod rational;
pub mod reduction;

pub use dalgebra::{builtin, validate_algebra, AlgebraError, AlgebraSpec, Builtin, DAlgebra};
pub use expr::{parse_polynomial, parse_polynomial_list, parse_variable, ParseError};
pub use ordering::{DVariable, MultiIndex, Ranking};
pub use par::Execution;
pub use poly::{DPolynomial, PolyRing};
pub use rational::Rational;
