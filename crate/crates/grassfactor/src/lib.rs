//! Grassmannians as involution matrices, and constructive factorizations of
//! SO(n), SU(n) and Sp(2n) into products of Grassmannian points.

pub mod backend;
pub mod decompose;
pub mod error;
pub mod grassmann;
pub mod phi;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
