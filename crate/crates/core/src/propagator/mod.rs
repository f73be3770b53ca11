//! Fixed-step RK4 propagation of the master equation.

mod evolve;
mod rk4;
mod system;

pub use evolve::{evolve, evolve_span, evolve_with, IntegratorConfig, Sample, Trajectory};
pub use rk4::{rk4_step, Propagator};
pub use system::OpenSystem;
