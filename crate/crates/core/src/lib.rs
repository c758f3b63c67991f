//! Integral and modular representations of elementary abelian p-groups:
//! permutation-lattice criteria and the diagram correspondence for
//! `C_p x C_p`.

pub mod algebra;
pub mod butler;
pub mod examples;
pub mod error;
pub mod fp_modules;
pub mod glattice;
pub mod group;
pub mod json;
pub mod linalg;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Integer matrices with arbitrary-precision entries.
pub type IntMatrix = linalg::Matrix<BigInt>;
/// Rational matrices, used for idempotent images before clearing denominators.
pub type RatMatrix = linalg::Matrix<BigRational>;
/// Rational group-algebra elements.
pub type RatElement = algebra::AlgebraElement<BigRational>;
/// Integral group-algebra elements.
pub type IntElement = algebra::AlgebraElement<BigInt>;
