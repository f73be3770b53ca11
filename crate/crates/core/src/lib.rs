//! Open-system simulator for two quantum-dot qubits coupled through a damped
//! plasmon mode, each QD also coupled to its own photonic cavity.
//!
//! The numeric core is generic over the real scalar ([`Real`], `f32` or
//! `f64`); the aliases below fix it to `f64`, which every tolerance in the
//! crate is calibrated for.

pub mod analytic;
pub mod error;
pub mod model;
pub mod observables;
pub mod propagator;
pub mod scalar;
pub mod scenario;
pub mod tensor;
pub mod units;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};
pub use tensor::{Mode, SubsystemLayout};

pub type Operator = tensor::QOperator<f64>;
pub type SparseOp = tensor::SparseOperator<f64>;
pub type Density = tensor::DensityMatrix<f64>;
pub type System = propagator::OpenSystem<f64>;
pub type Channel = model::LindbladChannel<f64>;
pub type C64 = Cplx<f64>;
