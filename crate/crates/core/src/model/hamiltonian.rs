use num_traits::Zero;

use super::params::SystemParams;
use super::pulse::PulseSpec;
use crate::error::Result;
use crate::scalar::{cr, Cplx, Real};
use crate::tensor::{Mode, SparseOperator, SubsystemLayout};
use crate::units::dipole_energy_ev;

/// Annihilation operators of the five modes embedded in the full space.
#[derive(Debug, Clone)]
pub struct ModeOperators<T: Real> {
    layout: SubsystemLayout,
    ops: Vec<SparseOperator<T>>,
}

impl<T: Real> ModeOperators<T> {
    pub fn new(layout: &SubsystemLayout) -> Result<Self> {
        let ops = layout
            .dims()
            .iter()
            .enumerate()
            .map(|(site, &d)| SparseOperator::annihilation(d)?.embed(site, layout))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { layout: layout.clone(), ops })
    }

    pub fn for_params(params: &SystemParams) -> Result<Self> {
        Self::new(&SubsystemLayout::cqed(params.n_pl_levels, params.n_ph_levels)?)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn annihilator(&self, mode: Mode) -> &SparseOperator<T> {
        &self.ops[mode.site()]
    }

    pub fn number(&self, mode: Mode) -> SparseOperator<T> {
        let a = self.annihilator(mode);
        a.adjoint().multiply(a).expect("same layout")
    }

    /// Sum of all mode number operators.
    pub fn total_number(&self) -> SparseOperator<T> {
        Mode::ALL
            .iter()
            .map(|&m| self.number(m))
            .reduce(|acc, n| acc.add_scaled(cr(T::one()), &n).expect("same layout"))
            .expect("five modes")
    }
}

fn lit<T: Real>(x: f64) -> Cplx<T> {
    cr(T::lit(x))
}

/// `a†b + a b†`
fn exchange<T: Real>(a: &SparseOperator<T>, b: &SparseOperator<T>) -> SparseOperator<T> {
    let ab = a.adjoint().multiply(b).expect("same layout");
    ab.add_scaled(cr(T::one()), &ab.adjoint()).expect("same layout")
}

/// Rotating-frame system Hamiltonian in eV:
/// `Σ Δᵢσᵢ†σᵢ + Δ_s b†b + Σ Δ_cᵢ cᵢ†cᵢ − Σ g_sⁱ(σᵢ†b + h.c.) − Σ g(σᵢ†cᵢ + h.c.)`,
/// with detunings `Δ = ω_mode − ω_drive`.
pub fn hamiltonian_static<T: Real>(
    params: &SystemParams,
    ops: &ModeOperators<T>,
    omega_drive: f64,
) -> Result<SparseOperator<T>> {
    let mut h = SparseOperator::zeros(ops.layout().clone());
    let detunings = [
        (Mode::Qd1, params.omega_qd[0]),
        (Mode::Qd2, params.omega_qd[1]),
        (Mode::Plasmon, params.omega_pl),
        (Mode::Cavity1, params.omega_cav[0]),
        (Mode::Cavity2, params.omega_cav[1]),
    ];
    for (mode, omega) in detunings {
        let det = omega - omega_drive;
        if det != 0.0 {
            h = h.add_scaled(lit(det), &ops.number(mode))?;
        }
    }
    let b = ops.annihilator(Mode::Plasmon);
    for i in 0..2 {
        let sigma = ops.annihilator(Mode::qd(i));
        if params.g_s[i] != 0.0 {
            h = h.add_scaled(lit(-params.g_s[i]), &exchange(sigma, b))?;
        }
        if params.g != 0.0 {
            h = h.add_scaled(lit(-params.g), &exchange(sigma, ops.annihilator(Mode::cavity(i))))?;
        }
    }
    Ok(h)
}

/// Drive coupling per unit envelope field (eV per V/m):
/// `−κ[Σ dᵢ(σᵢ + σᵢ†) + d_s(b + b†)]` with `κ` from [`DriveConvention::factor`](super::DriveConvention::factor) (½ by default).
pub fn drive_operator<T: Real>(params: &SystemParams, ops: &ModeOperators<T>) -> Result<SparseOperator<T>> {
    let mut d = SparseOperator::zeros(ops.layout().clone());
    let dipoles = [(Mode::Qd1, params.d_qd[0]), (Mode::Qd2, params.d_qd[1]), (Mode::Plasmon, params.d_pl)];
    for (mode, debye) in dipoles {
        if debye == 0.0 {
            continue;
        }
        let a = ops.annihilator(mode);
        let x = a.add_scaled(cr(T::one()), &a.adjoint())?;
        d = d.add_scaled(lit(-params.drive.factor() * dipole_energy_ev(debye, 1.0)), &x)?;
    }
    Ok(d)
}

/// `H_d(t) = E₀(t) · drive_operator`, the rotating-wave drive at time `t`.
pub fn hamiltonian_drive<T: Real>(
    params: &SystemParams,
    ops: &ModeOperators<T>,
    pulse: &PulseSpec,
    t_fs: f64,
) -> Result<SparseOperator<T>> {
    let e0 = pulse.envelope(t_fs);
    let d = drive_operator(params, ops)?;
    if e0.is_zero() {
        return Ok(SparseOperator::zeros(ops.layout().clone()));
    }
    Ok(d.scale(lit(e0)))
}
