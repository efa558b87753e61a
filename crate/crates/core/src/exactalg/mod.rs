//! Exact fields, linear algebra and structure-constant algebras.

pub mod algebra;
pub mod field;
pub mod linalg;
pub mod linmap;

pub use algebra::Algebra;
pub use field::{FieldSpec, Scalar};
pub use linalg::{Matrix, Subspace, Vector};
pub use linmap::LinearMap;

/// Ideals are subspaces in canonical form; ideal conditions are checked against an ambient algebra.
pub type Ideal = Subspace;

pub fn split_algebra(n: usize, field: FieldSpec) -> crate::Result<Algebra> {
    Algebra::split(n, field)
}
