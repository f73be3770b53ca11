use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DephasingConvention, DriveConvention, PulseShape, PulseSpec, SystemParams};
use crate::propagator::IntegratorConfig;
use crate::units::{MEV, UEV};

use super::builtin;

/// A complete, self-describing run: model, drive, integrator and output.
///
/// Key names carry their units. Serialized as TOML; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub system: SystemSection,
    pub pulse: PulseSection,
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega_qd_ev: [f64; 2],
    pub omega_pl_ev: f64,
    pub omega_cav_ev: [f64; 2],
    pub g_s_mev: [f64; 2],
    pub g_mev: f64,
    pub d_qd_debye: [f64; 2],
    pub d_pl_debye: f64,
    pub gamma_qd_decay_uev: [f64; 2],
    pub gamma_qd_dephase_uev: [f64; 2],
    pub gamma_pl_mev: f64,
    pub gamma_cav_decay_uev: [f64; 2],
    pub gamma_cav_dephase_uev: [f64; 2],
    pub n_pl_levels: usize,
    pub n_ph_levels: usize,
    pub eps_med: f64,
    #[serde(default)]
    pub dephasing: DephasingConvention,
    #[serde(default)]
    pub drive: DriveConvention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub shape: PulseShape,
    pub e_max_v_per_m: f64,
    pub omega_drive_ev: f64,
    #[serde(default)]
    pub fwhm_fs: f64,
    #[serde(default)]
    pub t_peak_fs: f64,
    #[serde(default)]
    pub t0_fs: f64,
    #[serde(default)]
    pub t1_fs: f64,
    #[serde(default)]
    pub delta_fs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt_fs: f64,
    pub t_end_fs: f64,
    pub record_every_fs: f64,
    #[serde(default)]
    pub renormalize_trace: bool,
    #[serde(default = "default_memory_cap")]
    pub memory_cap_mib: u64,
    #[serde(default)]
    pub precision: Precision,
    /// Reduced truncation and step used once the drive has ended.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after_pulse: Option<AfterPulse>,
}

fn default_memory_cap() -> u64 {
    IntegratorConfig::default().memory_cap_mib
}

/// Switch to a smaller model after the drive has switched off.
///
/// The state is projected onto the lower levels; the discarded weight is reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AfterPulse {
    pub n_pl_levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_ph_levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_fs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: "out".into() }
    }
}

impl ScenarioConfig {
    /// Builtin scenario by name, or a TOML file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(cfg) = builtin::builtin(name_or_path) {
            return Ok(cfg);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            let names: Vec<&str> = builtin::BUILTINS.iter().map(|b| b.0).collect();
            return Err(Error::Config {
                key: name_or_path.into(),
                msg: format!("not a file and not a builtin scenario ({})", names.join(", ")),
            });
        }
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::Config { key: String::new(), msg: e.to_string() })?;
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
            key: e.path().to_string(),
            msg: e.inner().message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    /// Set one field by dotted key (`system.g_mev`, `system.g_s_mev.1`).
    ///
    /// `value` is read as a TOML value, falling back to a bare string.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |msg: String| Error::Config { key: key.into(), msg };
        let mut root = toml::Value::try_from(&*self).map_err(|e| bad(e.to_string()))?;
        let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.into()));
        // Missing table entries are created (optional sections are not serialized);
        // deserialization then rejects names that do not exist.
        let mut slot = &mut root;
        let parts: Vec<&str> = key.split('.').collect();
        for (k, part) in parts.iter().enumerate() {
            let part = *part;
            slot = match slot {
                toml::Value::Table(t) => Some(t.entry(part).or_insert_with(|| {
                    if k + 1 < parts.len() {
                        toml::Value::Table(toml::Table::new())
                    } else {
                        toml::Value::Boolean(false)
                    }
                })),
                toml::Value::Array(a) => part.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
                _ => None,
            }
            .ok_or_else(|| bad("unknown key".into()))?;
        }
        *slot = parsed;
        let updated: Self = root.try_into().map_err(|e: toml::de::Error| bad(e.message().to_string()))?;
        updated.validate()?;
        *self = updated;
        Ok(())
    }

    /// Apply `key=value` overrides in order.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o.split_once('=').ok_or_else(|| Error::Config {
                key: o.into(),
                msg: "override must look like key=value".into(),
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        self.pulse_spec().validate()?;
        self.integrator_config().validate()?;
        let i = &self.integrator;
        let stride = i.record_every_fs / i.dt_fs;
        if (stride - stride.round()).abs() > 1e-9 * stride.max(1.0) {
            return Err(Error::Config {
                key: "integrator.record_every_fs".into(),
                msg: "must be an integer multiple of dt_fs".into(),
            });
        }
        if let Some(a) = &i.after_pulse {
            let bad = |k: &str, msg: &str| Err(Error::Config { key: format!("integrator.after_pulse.{k}"), msg: msg.into() });
            if a.n_pl_levels < 2 || a.n_pl_levels > self.system.n_pl_levels {
                return bad("n_pl_levels", "must lie in [2, system.n_pl_levels]");
            }
            if let Some(n) = a.n_ph_levels {
                if n < 2 || n > self.system.n_ph_levels {
                    return bad("n_ph_levels", "must lie in [2, system.n_ph_levels]");
                }
            }
            if let Some(dt) = a.dt_fs {
                let s = i.record_every_fs / dt;
                if !(dt > 0.0) || (s - s.round()).abs() > 1e-9 * s.max(1.0) {
                    return bad("dt_fs", "must be > 0 and divide record_every_fs");
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> SystemParams {
        let s = &self.system;
        let map2 = |v: [f64; 2], unit: f64| [v[0] * unit, v[1] * unit];
        SystemParams {
            omega_qd: s.omega_qd_ev,
            omega_pl: s.omega_pl_ev,
            omega_cav: s.omega_cav_ev,
            g_s: map2(s.g_s_mev, MEV),
            g: s.g_mev * MEV,
            d_qd: s.d_qd_debye,
            d_pl: s.d_pl_debye,
            gamma_qd_decay: map2(s.gamma_qd_decay_uev, UEV),
            gamma_qd_dephase: map2(s.gamma_qd_dephase_uev, UEV),
            gamma_pl: s.gamma_pl_mev * MEV,
            gamma_cav_decay: map2(s.gamma_cav_decay_uev, UEV),
            gamma_cav_dephase: map2(s.gamma_cav_dephase_uev, UEV),
            n_pl_levels: s.n_pl_levels,
            n_ph_levels: s.n_ph_levels,
            eps_med: s.eps_med,
            dephasing: s.dephasing,
            drive: s.drive,
        }
    }

    pub fn pulse_spec(&self) -> PulseSpec {
        let p = &self.pulse;
        PulseSpec {
            shape: p.shape,
            e_max: p.e_max_v_per_m,
            fwhm_fs: p.fwhm_fs,
            t_peak_fs: p.t_peak_fs,
            t0_fs: p.t0_fs,
            t1_fs: p.t1_fs,
            delta_fs: p.delta_fs,
            omega_drive: p.omega_drive_ev,
        }
    }

    pub fn integrator_config(&self) -> IntegratorConfig {
        let i = &self.integrator;
        IntegratorConfig {
            dt_fs: i.dt_fs,
            t_end_fs: i.t_end_fs,
            record_every_fs: i.record_every_fs,
            renormalize_trace: i.renormalize_trace,
            memory_cap_mib: i.memory_cap_mib,
        }
    }
}
