//! Dense real matrices and the symmetric eigensolver.
//!
//! Everything is row-major and sized for the small problems this crate deals
//! with (side length around a dozen at most).

mod eigen;
mod matrix;

pub use eigen::{eigen_sym, eigenvalues_sym, EigenDecomposition, JACOBI_MAX_SWEEPS};
pub use matrix::{Matrix, Rotation, SkewMatrix, SymMatrix};
