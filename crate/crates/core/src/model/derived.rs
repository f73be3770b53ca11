//! Closed-form rates and couplings derived from the model parameters.

use crate::error::{Error, Result};

/// Plasmon-mediated (Purcell) QD decay rate `4g_s²/γ_s`, eV.
pub fn purcell_rate(g_s_avg: f64, gamma_pl: f64) -> Result<f64> {
    if gamma_pl <= 0.0 {
        return Err(Error::Domain("purcell rate needs a positive plasmon damping".into()));
    }
    Ok(4.0 * g_s_avg * g_s_avg / gamma_pl)
}

/// Dimensionless QD–cavity coupling `ξ = g·γ_s/g_s²`.
pub fn effective_xi(g: f64, g_s_avg: f64, gamma_pl: f64) -> Result<f64> {
    if g_s_avg == 0.0 {
        return Err(Error::Domain("effective coupling needs a non-zero QD-plasmon coupling".into()));
    }
    Ok(g * gamma_pl / (g_s_avg * g_s_avg))
}

/// `Δg_s = g_s¹ − g_s²`.
pub fn coupling_asymmetry(g_s: [f64; 2]) -> f64 {
    g_s[0] - g_s[1]
}
