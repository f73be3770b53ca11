use crate::model::{DephasingConvention, DriveConvention, PulseShape};
use crate::propagator::IntegratorConfig;

use super::config::{IntegratorSection, OutputSection, Precision, PulseSection, ScenarioConfig, SystemSection};

/// `(name, one-line description)` of every builtin scenario.
pub const BUILTINS: &[(&str, &str)] = &[
    ("fig2", "weak QD-cavity coupling (g = 1 meV, xi = 0.268), asymmetric plasmon coupling 30/17.3 meV"),
    ("fig3", "strong QD-cavity coupling (g = 10 meV, xi = 2.68)"),
    ("fig4", "fig3 with two photon levels per cavity, enabling photon concurrence"),
    ("fig5", "alias of fig5a-cavity"),
    ("fig5a-cavity", "storage: QD decay 500 ueV, g = 10 meV, Q = 1e6 cavities (fig2 pulse assumed)"),
    ("fig5a-open", "storage reference: fig5a-cavity with g = 0"),
    ("fig5b-cavity", "storage: QD decay 50 ueV, g = 3 meV, Q = 1e6 cavities (fig2 pulse assumed)"),
    ("fig5b-open", "storage reference: fig5b-cavity with g = 0"),
    ("fig6", "symmetric plasmon coupling 30/30 meV, g = 1 meV"),
    ("fig7", "fig3 couplings under a 720 fs flat-top pulse (delta = 10 fs)"),
];

fn base() -> ScenarioConfig {
    ScenarioConfig {
        name: "fig2".into(),
        description: BUILTINS[0].1.into(),
        system: SystemSection {
            omega_qd_ev: [2.05; 2],
            omega_pl_ev: 2.05,
            omega_cav_ev: [2.05; 2],
            g_s_mev: [30.0, 17.3],
            g_mev: 1.0,
            d_qd_debye: [13.0; 2],
            d_pl_debye: 4000.0,
            gamma_qd_decay_uev: [0.05; 2],
            gamma_qd_dephase_uev: [8.6; 2],
            gamma_pl_mev: 150.0,
            gamma_cav_decay_uev: [100.0; 2],
            gamma_cav_dephase_uev: [8.6; 2],
            n_pl_levels: 24,
            n_ph_levels: 4,
            eps_med: 2.25,
            dephasing: DephasingConvention::CoherenceRate,
            drive: DriveConvention::FullEnvelope,
        },
        pulse: PulseSection {
            shape: PulseShape::Gaussian,
            e_max_v_per_m: 2.5e6,
            omega_drive_ev: 2.05,
            fwhm_fs: 20.0,
            t_peak_fs: 36.3,
            t0_fs: 0.0,
            t1_fs: 0.0,
            delta_fs: 0.0,
        },
        integrator: IntegratorSection {
            dt_fs: 0.02,
            t_end_fs: 1000.0,
            record_every_fs: 1.0,
            renormalize_trace: false,
            memory_cap_mib: IntegratorConfig::default().memory_cap_mib,
            precision: Precision::F64,
            after_pulse: None,
        },
        output: OutputSection::default(),
    }
}

fn storage(name: &str, gamma_qd_uev: f64, g_mev: f64, t_end_fs: f64) -> ScenarioConfig {
    let mut c = base();
    c.system.gamma_qd_decay_uev = [gamma_qd_uev; 2];
    c.system.g_mev = g_mev;
    // Q = 10⁶ at ħω = 2.05 eV
    c.system.gamma_cav_decay_uev = [2.05; 2];
    c.integrator.t_end_fs = t_end_fs;
    c.name = name.into();
    c
}

/// Builtin scenario by name.
pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    let desc = BUILTINS.iter().find(|b| b.0 == name)?.1;
    let mut c = match name {
        "fig2" => base(),
        "fig3" => {
            let mut c = base();
            c.system.g_mev = 10.0;
            c
        }
        "fig4" => {
            let mut c = builtin("fig3")?;
            c.system.n_ph_levels = 2;
            c
        }
        "fig5" | "fig5a-cavity" => storage(name, 500.0, 10.0, 5000.0),
        "fig5a-open" => storage(name, 500.0, 0.0, 5000.0),
        "fig5b-cavity" => storage(name, 50.0, 3.0, 9100.0),
        "fig5b-open" => storage(name, 50.0, 0.0, 9100.0),
        "fig6" => {
            let mut c = base();
            c.system.g_s_mev = [30.0, 30.0];
            c
        }
        "fig7" => {
            let mut c = builtin("fig3")?;
            c.pulse = PulseSection {
                shape: PulseShape::FlatTop,
                t0_fs: 40.0,
                t1_fs: 760.0,
                delta_fs: 10.0,
                fwhm_fs: 0.0,
                t_peak_fs: 0.0,
                ..c.pulse
            };
            c.integrator.t_end_fs = 1300.0;
            c
        }
        _ => return None,
    };
    c.name = name.into();
    c.description = desc.into();
    Some(c)
}
