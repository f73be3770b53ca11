use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a pure-dephasing rate `γ` is turned into a Lindblad channel on `n̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DephasingConvention {
    /// Channel rate `2γ`: adjacent-level coherences decay as `e^{−γt/ħ}`.
    #[default]
    CoherenceRate,
    /// Channel rate `γ`: coherences decay as `e^{−γt/2ħ}`.
    ChannelRate,
}

impl DephasingConvention {
    pub fn channel_factor(self) -> f64 {
        match self {
            DephasingConvention::CoherenceRate => 2.0,
            DephasingConvention::ChannelRate => 1.0,
        }
    }
}

/// Rotating-frame amplitude of the drive `E(t) = E₀(t)cos ωt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveConvention {
    /// Rotating-wave average: coupling `½·d·E₀(t)`.
    #[default]
    RwaHalf,
    /// Coupling `d·E₀(t)`: the envelope enters the rotating-frame Hamiltonian unhalved.
    FullEnvelope,
}

impl DriveConvention {
    pub fn factor(self) -> f64 {
        match self {
            DriveConvention::RwaHalf => 0.5,
            DriveConvention::FullEnvelope => 1.0,
        }
    }
}

/// Physical constants of the two-QD / plasmon / two-cavity model.
///
/// Energies and rates are in eV, dipoles in Debye.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub omega_qd: [f64; 2],
    pub omega_pl: f64,
    pub omega_cav: [f64; 2],
    pub g_s: [f64; 2],
    pub g: f64,
    pub d_qd: [f64; 2],
    pub d_pl: f64,
    pub gamma_qd_decay: [f64; 2],
    pub gamma_qd_dephase: [f64; 2],
    pub gamma_pl: f64,
    pub gamma_cav_decay: [f64; 2],
    pub gamma_cav_dephase: [f64; 2],
    pub n_pl_levels: usize,
    pub n_ph_levels: usize,
    pub eps_med: f64,
    pub dephasing: DephasingConvention,
    pub drive: DriveConvention,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let named: [(&str, &[f64]); 8] = [
            ("g_s", &self.g_s),
            ("g", std::slice::from_ref(&self.g)),
            ("gamma_qd_decay", &self.gamma_qd_decay),
            ("gamma_qd_dephase", &self.gamma_qd_dephase),
            ("gamma_pl", std::slice::from_ref(&self.gamma_pl)),
            ("gamma_cav_decay", &self.gamma_cav_decay),
            ("gamma_cav_dephase", &self.gamma_cav_dephase),
            ("d_qd", &self.d_qd),
        ];
        for (name, vals) in named {
            if vals.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Config { key: name.into(), msg: "must be finite and >= 0".into() });
            }
        }
        if !self.d_pl.is_finite() || self.d_pl < 0.0 {
            return Err(Error::Config { key: "d_pl".into(), msg: "must be finite and >= 0".into() });
        }
        let energies = [self.omega_qd[0], self.omega_qd[1], self.omega_pl, self.omega_cav[0], self.omega_cav[1]];
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Config { key: "omega".into(), msg: "mode energies must be finite".into() });
        }
        if self.n_pl_levels < 2 {
            return Err(Error::Config { key: "n_pl_levels".into(), msg: "must be >= 2".into() });
        }
        if self.n_ph_levels < 2 {
            return Err(Error::Config { key: "n_ph_levels".into(), msg: "must be >= 2".into() });
        }
        if !(self.eps_med >= 1.0) {
            return Err(Error::Config { key: "eps_med".into(), msg: "must be >= 1".into() });
        }
        Ok(())
    }

    /// Mean QD–plasmon coupling, the characteristic `g_s` of the derived rates.
    pub fn g_s_avg(&self) -> f64 {
        0.5 * (self.g_s[0] + self.g_s[1])
    }
}
