//! Exact rational arithmetic and the linear-algebra kernels used throughout:
//! dense matrices for small systems and incremental sparse elimination for
//! the large, structured systems that come out of coproduct equations.

mod matrix;
mod rational;
mod sparse;

pub use matrix::{eval_poly, rational_roots, QMatrix, QVector};
pub use rational::{ParseRationalError, Rational};
pub use sparse::{kernel_of_images, rank_of, rref_sparse, EchelonBasis, Insertion, SparseVec};
