//! Exact computation of A¹-Brouwer degrees of univariate polynomial maps.
//!
//! Degrees are symmetric bilinear forms (Bézoutians) whose classes in the
//! Grothendieck–Witt group are computed and compared exactly over ℚ, finite
//! fields and rational function fields.

pub mod arith;
pub mod degree;
pub mod error;
pub mod fields;
pub mod forms;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod sample;
pub mod selftest;
pub mod transfer;

pub use error::{Error, Result};
pub use fields::{Elem, Field};
pub use matrix::Matrix;
pub use num_rational::BigRational;
pub use poly::Poly;
