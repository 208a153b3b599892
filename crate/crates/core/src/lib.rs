//! Numerical toolkit for matrix representations of free and surface groups:
//! singular value gap certification over word balls, symplectic and exterior
//! linear algebra, and boundary limit map approximation.
//!
//! The crate is generic over the base field through [`scalar::Scalar`]
//! (`f32`/`f64` and their complex counterparts); the aliases below fix the
//! double-precision instantiations used by the command line tools.

pub mod error;
pub mod forms;
pub mod gaps;
pub mod limits;
pub mod matrix;
pub mod rep;
pub mod scalar;
pub mod svd;
pub mod symplectic;
pub mod wedge;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex double-precision scalar.
pub type Cx = num_complex::Complex64;

/// Real double-precision matrix.
pub type RealMatrix = matrix::Matrix<f64>;
/// Complex double-precision matrix.
pub type ComplexMatrix = matrix::Matrix<Cx>;
/// Real double-precision representation.
pub type RealRepresentation = rep::Representation<f64>;
/// Complex double-precision representation.
pub type ComplexRepresentation = rep::Representation<Cx>;
