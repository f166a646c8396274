//! Genus-three theta constants, their z-jets, and the modular forms built
//! from them.

pub mod block;
pub mod series;

pub use series::{QKey, QSeries};
pub mod forms;
pub mod laurent;
pub mod theta;

pub use forms::{alpha_bar, chi18, chi408};
pub use theta::{theta_constant, theta_jet, Characteristic};
