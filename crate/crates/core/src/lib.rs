//! Exact computation with twisted partial actions of finite groupoids.
//!
//! The crate covers finite groupoids, structure-constant algebras over `Q` and `GF(p)`,
//! twisted partial actions and their crossed products, globalization, the Exel inverse
//! category, factor sets of partial projective representations and actions on K-semigroups.

pub mod action;
pub mod crossprod;
pub mod error;
pub mod exactalg;
pub mod exel;
pub mod fixtures;
pub mod globalize;
pub mod groupoid;
pub mod ksemigroup;
pub mod partrep;
pub mod report;

pub use error::{Error, Result};
pub use exactalg::{FieldSpec, Scalar};
pub use report::AxiomReport;
