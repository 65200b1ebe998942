//! Exact linear algebra over the rationals and prime fields, and Smith normal
//! form over the integers.

mod matrix;
mod scalar;
mod snf;

pub use matrix::{FieldMatrix, IntMatrix};
pub use scalar::{Field, Scalar};
pub use snf::{smith_normal_form, solve_integer, SmithForm};
