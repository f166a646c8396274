//! Concomitants of ternary quartics and vector-valued Siegel modular forms
//! of degree three, computed from theta constants with exact arithmetic.

pub mod checks;
pub mod conc;
pub mod error;
pub mod field;
pub mod json;
pub mod linalg;
pub mod modp;
pub mod rep3;
pub mod siegel;
pub mod sparse;
pub mod theta3;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Rat = num_rational::BigRational;
