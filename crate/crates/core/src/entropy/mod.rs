//! Entropy, Fisher information and the estimates built on them.

pub mod functionals;
pub mod gronwall;
pub mod trace;
pub mod variational;

pub use functionals::{ProfileWeights, SandwichReport, Snapshot};
pub use trace::{EntropyTrace, RateFit, TraceRow};
