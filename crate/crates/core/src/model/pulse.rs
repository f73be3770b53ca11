use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{j_per_m2_to_nj_per_cm2, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    Gaussian,
    FlatTop,
    Off,
}

/// Slowly varying envelope `E₀(t)` of the drive `E₀(t) cos ωt`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    pub shape: PulseShape,
    /// Peak field, V/m.
    pub e_max: f64,
    /// Intensity full width at half maximum of the Gaussian, fs.
    pub fwhm_fs: f64,
    pub t_peak_fs: f64,
    /// Flat-top switch-on and switch-off times, fs.
    pub t0_fs: f64,
    pub t1_fs: f64,
    /// Flat-top rise/fall time, fs.
    pub delta_fs: f64,
    /// Carrier photon energy `ħω`, eV; also the rotating-frame frequency.
    pub omega_drive: f64,
}

impl PulseSpec {
    pub fn off(omega_drive: f64) -> Self {
        Self {
            shape: PulseShape::Off,
            e_max: 0.0,
            fwhm_fs: 20.0,
            t_peak_fs: 0.0,
            t0_fs: 0.0,
            t1_fs: 20.0,
            delta_fs: 10.0,
            omega_drive,
        }
    }

    pub fn gaussian(e_max: f64, fwhm_fs: f64, t_peak_fs: f64, omega_drive: f64) -> Self {
        Self { shape: PulseShape::Gaussian, e_max, fwhm_fs, t_peak_fs, ..Self::off(omega_drive) }
    }

    pub fn flat_top(e_max: f64, t0_fs: f64, t1_fs: f64, delta_fs: f64, omega_drive: f64) -> Self {
        Self { shape: PulseShape::FlatTop, e_max, t0_fs, t1_fs, delta_fs, ..Self::off(omega_drive) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: &str| Err(Error::Config { key: key.into(), msg: msg.into() });
        if !(self.e_max >= 0.0) || !self.e_max.is_finite() {
            return bad("e_max", "must be finite and >= 0");
        }
        if !self.omega_drive.is_finite() {
            return bad("omega_drive", "must be finite");
        }
        match self.shape {
            PulseShape::Gaussian if !(self.fwhm_fs > 0.0) => bad("fwhm_fs", "must be > 0"),
            PulseShape::FlatTop if !(self.t1_fs > self.t0_fs) => bad("t1_fs", "must exceed t0_fs"),
            PulseShape::FlatTop if !(self.delta_fs > 0.0) => bad("delta_fs", "must be > 0"),
            _ => Ok(()),
        }
    }

    /// Standard deviation of the Gaussian field envelope; the FWHM refers to `E₀²`.
    pub fn sigma_field_fs(&self) -> f64 {
        self.fwhm_fs / (2.0 * std::f64::consts::LN_2.sqrt())
    }

    /// Midpoint of the flat-top window.
    pub fn t_center_fs(&self) -> f64 {
        0.5 * (self.t0_fs + self.t1_fs)
    }

    /// `E₀(t)` in V/m.
    pub fn envelope(&self, t_fs: f64) -> f64 {
        match self.shape {
            PulseShape::Off => 0.0,
            PulseShape::Gaussian => {
                let s = self.sigma_field_fs();
                let x = t_fs - self.t_peak_fs;
                self.e_max * (-x * x / (2.0 * s * s)).exp()
            }
            PulseShape::FlatTop => {
                let tc = self.t_center_fs();
                self.e_max * self.flat_top_denominator(tc) / self.flat_top_denominator(t_fs)
            }
        }
    }

    /// `(tanh[(t−t₀)/δ]+1)⁻¹ + (tanh[(t₁−t)/δ]+1)⁻¹`, using
    /// `1/(tanh u + 1) = (1 + e^{−2u})/2` so it stays finite far from the window.
    fn flat_top_denominator(&self, t: f64) -> f64 {
        let a = (-2.0 * (t - self.t0_fs) / self.delta_fs).exp();
        let b = (-2.0 * (self.t1_fs - t) / self.delta_fs).exp();
        1.0 + 0.5 * a + 0.5 * b
    }

    /// Interval outside which the envelope is below `1e-12·E_max`.
    pub fn support_fs(&self) -> Option<(f64, f64)> {
        match self.shape {
            PulseShape::Off => None,
            PulseShape::Gaussian => {
                let w = self.sigma_field_fs() * (2.0 * 12.0 * std::f64::consts::LN_10).sqrt();
                Some((self.t_peak_fs - w, self.t_peak_fs + w))
            }
            PulseShape::FlatTop => {
                let w = self.delta_fs * 0.5 * (2e12f64).ln() + self.delta_fs;
                Some((self.t0_fs - w, self.t1_fs + w))
            }
        }
    }

    /// Time after which the envelope stays below `1e-12·E_max`.
    pub fn end_fs(&self) -> f64 {
        self.support_fs().map_or(f64::NEG_INFINITY, |(_, b)| b)
    }

    /// Pulse fluence in nJ/cm², `½√ε·c·ε₀·∫E₀²dt` (carrier average ⟨cos²⟩ = ½).
    pub fn fluence(&self, eps_med: f64) -> f64 {
        let Some((a, b)) = self.support_fs() else {
            return 0.0;
        };
        if self.e_max == 0.0 {
            return 0.0;
        }
        // Composite Simpson on a grid much finer than the narrowest feature.
        let feature = match self.shape {
            PulseShape::Gaussian => self.sigma_field_fs(),
            _ => self.delta_fs,
        };
        let mut n = (((b - a) / feature) * 200.0).ceil() as usize;
        n += n % 2;
        let h = (b - a) / n as f64;
        let f = |t: f64| {
            let e = self.envelope(t);
            e * e
        };
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        let integral_v2_s_per_m2 = s * h / 3.0 * 1e-15;
        let j_per_m2 = 0.5 * eps_med.sqrt() * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY * integral_v2_s_per_m2;
        j_per_m2_to_nj_per_cm2(j_per_m2)
    }
}
