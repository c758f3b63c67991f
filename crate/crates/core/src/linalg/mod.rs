//! Exact linear algebra over the integers and over prime fields.
//!
//! Integer routines are generic over [`IntScalar`]; the rest of the crate
//! instantiates them with arbitrary-precision integers through
//! [`crate::IntMatrix`]. Machine integers are only suitable for small test
//! inputs since nothing here checks for overflow.

mod fp;
mod hnf;
mod matrix;
mod snf;

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_integer::Integer;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub use fp::{inv_mod, FpMatrix, Subspace};
pub use hnf::{
    column_basis, determinant, hnf, int_kernel, int_solve, left_kernel, same_span, saturate,
    span_contains, unimodular_inverse, Hnf,
};
pub use matrix::Matrix;
pub use snf::{is_saturated, quotient, snf, QuotientStructure, Snf};

/// Exact commutative ring scalar: integers, rationals.
pub trait Scalar: Num + Clone + Neg<Output = Self> + Debug + Display {}

impl<T> Scalar for T where T: Num + Clone + Neg<Output = T> + Debug + Display {}

/// Euclidean integer scalar used by the normal-form algorithms.
pub trait IntScalar: Scalar + Integer + Signed + FromPrimitive + ToPrimitive + Ord {}

impl<T> IntScalar for T where T: Scalar + Integer + Signed + FromPrimitive + ToPrimitive + Ord {}
