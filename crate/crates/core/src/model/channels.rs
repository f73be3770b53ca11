use super::hamiltonian::ModeOperators;
use super::params::SystemParams;
use crate::scalar::Real;
use crate::tensor::{Mode, SparseOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Decay,
    Dephasing,
}

/// Collapse operator `A` with rate `γ` (eV): contributes `γ/ħ·(AρA† − ½{A†A, ρ})`.
#[derive(Debug, Clone)]
pub struct LindbladChannel<T: Real> {
    pub label: String,
    pub kind: ChannelKind,
    pub operator: SparseOperator<T>,
    pub rate: f64,
}

/// Decay of every mode plus pure dephasing of the QDs and cavities.
/// Zero-rate channels are omitted.
pub fn build_channels<T: Real>(params: &SystemParams, ops: &ModeOperators<T>) -> Vec<LindbladChannel<T>> {
    let mut out = Vec::new();
    let decay = [
        (Mode::Qd1, params.gamma_qd_decay[0]),
        (Mode::Qd2, params.gamma_qd_decay[1]),
        (Mode::Plasmon, params.gamma_pl),
        (Mode::Cavity1, params.gamma_cav_decay[0]),
        (Mode::Cavity2, params.gamma_cav_decay[1]),
    ];
    for (mode, rate) in decay {
        if rate > 0.0 {
            out.push(LindbladChannel {
                label: format!("decay_{mode}"),
                kind: ChannelKind::Decay,
                operator: ops.annihilator(mode).clone(),
                rate,
            });
        }
    }
    let factor = params.dephasing.channel_factor();
    let dephase = [
        (Mode::Qd1, params.gamma_qd_dephase[0]),
        (Mode::Qd2, params.gamma_qd_dephase[1]),
        (Mode::Cavity1, params.gamma_cav_dephase[0]),
        (Mode::Cavity2, params.gamma_cav_dephase[1]),
    ];
    for (mode, rate) in dephase {
        if rate > 0.0 {
            out.push(LindbladChannel {
                label: format!("dephase_{mode}"),
                kind: ChannelKind::Dephasing,
                operator: ops.number(mode),
                rate: factor * rate,
            });
        }
    }
    out
}
