//! Exact fields, vectors and covectors, and linear matroids.

pub mod config;
pub mod field;
pub mod linalg;

pub use config::{affine_consistency, AffineSystem, LinearKind, LinearMatroid, Vector};
pub use field::{Field, Scalar};
