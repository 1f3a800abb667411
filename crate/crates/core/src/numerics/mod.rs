//! Grids, quadrature, sector quadratic forms and eigensolvers.

pub mod dense;
pub mod eigen;
pub mod extrapolate;
pub mod forms;
pub mod grid;
pub mod quadrature;
pub mod tridiag;
pub mod verify;
