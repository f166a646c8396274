//! Concomitants of ternary quartics.

pub mod catalecticant;
pub mod concomitant;
pub mod dc;
pub mod disc;
pub mod hwv;
pub mod quartic;

pub use concomitant::{concomitant, expand_concomitant, pair, universal_quartic, ConcCoord, Concomitant, XMono};
pub use hwv::{highest_weight_vectors, is_highest_weight};
pub use quartic::{gl3_act, Conic, TernaryQuartic};
pub use dc::{dc_filtered_dimension, dc_vanishing_combinations, order_along_dc, order_along_dc_exact};
pub use disc::{disc_evaluate, disc_order_along_dc};
