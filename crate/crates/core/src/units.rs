//! Physical constants and unit conversions.
//!
//! Energies are in eV, times in fs, dipoles in Debye and fields in V/m.
//! Every conversion factor used by the model lives here.

/// Reduced Planck constant in eV·fs.
pub const HBAR_EV_FS: f64 = 0.658_211_9;

/// One Debye expressed in e·nm.
pub const DEBYE_E_NM: f64 = 0.020_819_4;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

pub const MEV: f64 = 1e-3;
pub const UEV: f64 = 1e-6;

/// Dipole-field interaction energy `d·E` in eV for `d` in Debye and `E` in V/m.
pub fn dipole_energy_ev(d_debye: f64, field_v_per_m: f64) -> f64 {
    // e·nm · V/m = 1e-9 eV
    d_debye * DEBYE_E_NM * field_v_per_m * 1e-9
}

/// Convert J/m² to nJ/cm².
pub fn j_per_m2_to_nj_per_cm2(x: f64) -> f64 {
    x * 1e9 / 1e4
}
