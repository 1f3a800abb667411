//! Numerical laboratory for the fast diffusion equation in self-similar
//! variables.
//!
//! The crate covers four layers:
//!
//! * [`exponents`] and [`profiles`]: exponent bookkeeping, Barenblatt
//!   solutions, generalized profiles `V_D(x) = (D + |x|^2)^(1/(m-1))` and the
//!   self-similar change of variables.
//! * [`spectral`]: closed-form Hardy–Poincaré constants, the continuous and
//!   discrete spectrum of the linearized operator, and exact polynomial
//!   eigenfunctions obtained from terminating hypergeometric series.
//! * [`numerics`]: graded radial grids, weighted quadrature, P1 sector forms
//!   and constrained eigensolvers that check the closed forms independently.
//! * [`flow`] and [`entropy`]: an implicit finite-volume solver for the
//!   rescaled nonlinear Fokker–Planck equation, linear sector flows, and the
//!   entropy / Fisher-information instrumentation used to measure rates.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command line
//! live in the `fdrates` crate.

#![no_std]

extern crate alloc;

pub mod entropy;
pub mod error;
pub mod exponents;
pub mod field;
pub mod flow;
pub mod math;
pub mod numerics;
pub mod profiles;
pub mod spectral;

pub use error::{Error, Result};
pub use exponents::{ExponentSet, Regime};
pub use field::RadialField;
pub use numerics::grid::{Grading, RadialGrid};
pub use profiles::Profile;
