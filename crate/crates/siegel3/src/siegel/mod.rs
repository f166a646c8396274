//! Vector-valued Siegel modular forms of degree three.

pub mod form;
pub mod gamma;
pub mod hecke;
pub mod s3;

pub use form::{HalfIntegralMatrix, VectorValuedForm};
