//! Exact rational arithmetic for doubly stochastic quadratic operators on the
//! standard simplex: majorization, the symmetrized matrix classes `U_k`, the
//! doubly stochastic test for quadratic operators, and extreme points of the
//! polytopes involved.

pub mod constraints;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod majorization;
pub mod matrix_classes;
pub mod permutation;
pub mod qso;
pub mod rational;
pub mod sampling;
pub mod simplex;
pub mod vertices;

pub use constraints::ConstraintSystem;
pub use error::{Error, Result};
pub use majorization::{majorizes, SimplexVector};
pub use matrix_classes::{RowSumMatrix, SubsetMask, SymMatrix, U1Violation};
pub use permutation::Permutation;
pub use qso::QsoTensor;
pub use rational::Rational;
