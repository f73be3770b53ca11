//! Closed-form limits for the two-cavity photon state and the concurrence decay rate.

use crate::error::{Error, Result};
use crate::observables::analyze_oscillations_default;
use crate::scalar::{Cplx, Real};
use crate::tensor::{DensityMatrix, SubsystemLayout};

/// Amplitudes of `A(x|11⟩ + y|00⟩ + Ψ⁻)`, `Ψ⁻ = (|01⟩ − |10⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedFamilyParams {
    pub x: f64,
    pub y: f64,
}

impl RestrictedFamilyParams {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("x and y must be finite (got {x}, {y})")));
        }
        Ok(Self { x, y })
    }

    /// Normalisation `A = 1/√(1 + x² + y²)`.
    pub fn norm(&self) -> f64 {
        (1.0 + self.x * self.x + self.y * self.y).sqrt().recip()
    }

    /// Amplitudes in the basis `|00⟩, |01⟩, |10⟩, |11⟩` (first cavity is the left digit).
    pub fn amplitudes(&self) -> [f64; 4] {
        let a = self.norm();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [a * self.y, a * s, -a * s, a * self.x]
    }
}

/// Pure two-cavity state of the family on two two-level sites.
pub fn restricted_state<T: Real>(p: &RestrictedFamilyParams) -> Result<DensityMatrix<T>> {
    let amps: Vec<Cplx<T>> = p.amplitudes().iter().map(|&a| Cplx::new(T::lit(a), T::zero())).collect();
    DensityMatrix::pure(SubsystemLayout::new(vec![2, 2])?, &amps)
}

/// The same state placed in the five-mode layout with two levels per cavity,
/// QDs and plasmon in their ground states.
pub fn restricted_state_cqed<T: Real>(p: &RestrictedFamilyParams, n_pl_levels: usize) -> Result<DensityMatrix<T>> {
    let layout = SubsystemLayout::cqed(n_pl_levels, 2)?;
    let mut amps = vec![Cplx::new(T::zero(), T::zero()); layout.total_dim()];
    for (k, a) in p.amplitudes().iter().enumerate() {
        amps[layout.compose(&[0, 0, 0, k >> 1, k & 1])?] = Cplx::new(T::lit(*a), T::zero());
    }
    DensityMatrix::pure(layout, &amps)
}

fn unit_interval(c_ph: f64) -> Result<()> {
    if (0.0..=1.0).contains(&c_ph) {
        Ok(())
    } else {
        Err(Error::Domain(format!("photon concurrence must lie in [0, 1] (got {c_ph})")))
    }
}

/// `g²₁₂ = (1 − C_ph)/(1 − C_ph/2)²`, for a small ground-state amplitude.
pub fn g12_from_cph(c_ph: f64) -> Result<f64> {
    unit_interval(c_ph)?;
    let d = 1.0 - 0.5 * c_ph;
    Ok((1.0 - c_ph) / (d * d))
}

/// `g²₁₂ ≈ 4x²/C_ph` for a small two-photon amplitude.
pub fn g12_small_x(x: f64, c_ph: f64) -> Result<f64> {
    if !(c_ph > 0.0) {
        return Err(Error::Domain(format!("photon concurrence must be > 0 (got {c_ph})")));
    }
    Ok(4.0 * x * x / c_ph)
}

/// Un-normalised `G²₁₂ = 1 − C_ph`.
pub fn unnormalized_g12(c_ph: f64) -> Result<f64> {
    unit_interval(c_ph)?;
    Ok(1.0 - c_ph)
}

/// Time-averaged QD and cavity occupations with their decay rates (eV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEstimateInputs {
    pub n_bar_qd: f64,
    pub n_bar_cav: f64,
    pub gamma_qd: f64,
    pub gamma_cav: f64,
}

impl DecayEstimateInputs {
    /// Occupation averages over `window` (inclusive, fs) of two sampled series.
    pub fn from_series(
        qd: &[(f64, f64)],
        cav: &[(f64, f64)],
        window: (f64, f64),
        gamma_qd: f64,
        gamma_cav: f64,
    ) -> Result<Self> {
        Ok(Self { n_bar_qd: time_average(qd, window)?, n_bar_cav: time_average(cav, window)?, gamma_qd, gamma_cav })
    }

    /// `(α_QD, α_C)`, the occupation fractions.
    pub fn alphas(&self) -> Result<(f64, f64)> {
        let total = self.n_bar_qd + self.n_bar_cav;
        if !(total > 0.0) {
            return Err(Error::Domain("total occupation must be > 0".into()));
        }
        let a = self.n_bar_qd / total;
        Ok((a, 1.0 - a))
    }
}

/// Default averaging window: from the first concurrence peak to the last sample.
pub fn default_alpha_window(concurrence: &[(f64, f64)]) -> Result<(f64, f64)> {
    let report = analyze_oscillations_default(concurrence)?;
    let last = concurrence.last().map(|p| p.0);
    match (report.peak_times.first(), last) {
        (Some(&t0), Some(t1)) => Ok((t0, t1)),
        _ => Err(Error::InvalidArgument("concurrence series has no peak".into())),
    }
}

/// `γ = α_QD·γ_QD + α_C·γ_C`.
pub fn concurrence_decay_rate(inputs: &DecayEstimateInputs) -> Result<f64> {
    let (aq, ac) = inputs.alphas()?;
    Ok(aq * inputs.gamma_qd + ac * inputs.gamma_cav)
}

/// Trapezoidal mean of `series` restricted to `window`.
pub fn time_average(series: &[(f64, f64)], window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = series.iter().copied().filter(|p| p.0 >= window.0 && p.0 <= window.1).collect();
    match pts.len() {
        0 => Err(Error::InvalidArgument(format!("no samples in [{}, {}] fs", window.0, window.1))),
        1 => Ok(pts[0].1),
        _ => {
            let area: f64 = pts.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum();
            Ok(area / (pts[pts.len() - 1].0 - pts[0].0))
        }
    }
}
