//! Slices of random partition families and regularity measurements.

pub mod density;
pub mod family;
pub mod reduced;
pub mod refine;
