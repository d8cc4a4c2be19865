//! Exact integer/rational matrix algebra and elementary number theory.

mod matrix;
mod number;
mod snf;

pub use matrix::{frac, mod_one, Fraction, IntMatrix, RatMatrix};
pub use number::{
    is_perfect_square, is_prime, is_square_free, jacobi_symbol, min_solution_8x2, mod_inverse,
    square_classes_mod,
};
pub use snf::{smith_normal_form, SnfResult};

/// Exact inverse of a square integer matrix.
pub fn rat_inverse(m: &IntMatrix) -> crate::Result<RatMatrix> {
    RatMatrix::from(m).inverse()
}
