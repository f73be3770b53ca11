//! Physical model: parameters, rotating-frame Hamiltonians, dissipation
//! channels and drive envelopes.

mod channels;
pub mod derived;
mod hamiltonian;
mod params;
mod pulse;

pub use channels::{build_channels, ChannelKind, LindbladChannel};
pub use derived::{coupling_asymmetry, effective_xi, purcell_rate};
pub use hamiltonian::{drive_operator, hamiltonian_drive, hamiltonian_static, ModeOperators};
pub use params::{DephasingConvention, DriveConvention, SystemParams};
pub use pulse::{PulseShape, PulseSpec};

use crate::error::Result;
use crate::propagator::OpenSystem;
use crate::scalar::Real;

/// Assemble the open-system generator for `params` driven by `pulse`.
pub fn assemble<T: Real>(params: &SystemParams, pulse: &PulseSpec) -> Result<OpenSystem<T>> {
    params.validate()?;
    pulse.validate()?;
    let ops = ModeOperators::for_params(params)?;
    let h = hamiltonian_static(params, &ops, pulse.omega_drive)?;
    let drive = drive_operator(params, &ops)?;
    let channels = build_channels(params, &ops);
    OpenSystem::new(h, Some((drive, pulse.clone())), channels)
}
