//! Time integration of the rescaled nonlinear flow and of linear sectors.

pub mod initial;
pub mod linear;
pub mod nonlinear;
