//! Curvature, Lichnerowicz spectra and stability types of invariant Einstein
//! metrics on compact homogeneous spaces with multiplicity-free isotropy.

pub mod curvature;
pub mod einstein_solvers;
pub mod error;
pub mod lichnerowicz;
pub mod reports;
pub mod ricci_flow;
pub mod scalar;
pub mod space_model;

pub use error::{EswError, Result};
pub use scalar::{Field, Rational, Scalar};
pub use space_model::{DiagonalMetric, SpaceDescriptor, StructureConstants};
