use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{Precision, ScenarioConfig};
use super::csv_io::{CsvRow, CsvSink};
use crate::error::{Error, Result};
use crate::model::{assemble, effective_xi, purcell_rate, PulseSpec};
use crate::observables::{analyze_oscillations_default, OscillationReport};
use crate::propagator::evolve_span;
use crate::scalar::Real;
use crate::tensor::{DensityMatrix, Mode};

/// Concurrence level that counts as entangled when locating the onset.
pub const ONSET_THRESHOLD: f64 = 1e-3;

/// Run report. Everything except `wall_time_s` and `max_hermiticity_error` follows from the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub wall_time_s: f64,
    pub samples: usize,
    pub max_trace_error: f64,
    /// `max |ρ − ρ†|` over the recorded samples.
    #[serde(default)]
    pub max_hermiticity_error: f64,
    /// Start of the unbroken run of `C > ONSET_THRESHOLD` that contains the maximum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub onset_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max_c_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillation_c: Option<OscillationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillation_g2_12: Option<OscillationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    pub fluence_nj_per_cm2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purcell_rate_ev: Option<f64>,
    /// Trace removed when switching to the after-pulse truncation (the state is then renormalised).
    pub discarded_weight: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<String>,
}

impl RunSummary {
    /// Summary statistics of `rows` produced by `config`.
    pub fn from_rows(config: &ScenarioConfig, rows: &[CsvRow], discarded_weight: f64) -> Self {
        let params = config.params();
        let gs = params.g_s_avg();
        let c: Vec<(f64, f64)> = rows.iter().map(|r| (r.t_fs, r.c)).collect();
        let g12: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.g2_12.map(|g| (r.t_fs, g))).collect();
        let peak = c.iter().copied().fold(None, |best: Option<(f64, f64)>, p| match best {
            Some(b) if b.1 >= p.1 => Some(b),
            _ => Some(p),
        });
        let onset = peak.filter(|p| p.1 > ONSET_THRESHOLD).map(|(tp, _)| {
            let ip = c.iter().position(|p| p.0 == tp).unwrap_or(0);
            let start = c[..=ip].iter().rposition(|p| p.1 <= ONSET_THRESHOLD).map_or(0, |i| i + 1);
            c[start].0
        });
        Self {
            scenario: config.name.clone(),
            wall_time_s: 0.0,
            samples: rows.len(),
            max_trace_error: rows.iter().map(|r| r.trace_err).fold(0.0, f64::max),
            max_hermiticity_error: 0.0,
            onset_fs: onset,
            max_c: peak.map(|p| p.1),
            t_max_c_fs: peak.map(|p| p.0),
            oscillation_c: analyze_oscillations_default(&c).ok(),
            oscillation_g2_12: analyze_oscillations_default(&g12).ok(),
            xi: effective_xi(params.g, gs, params.gamma_pl).ok(),
            fluence_nj_per_cm2: config.pulse_spec().fluence(params.eps_med),
            purcell_rate_ev: purcell_rate(gs, params.gamma_pl).ok(),
            discarded_weight,
            truncated: None,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary is always representable")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config { key: "summary".into(), msg: e.message().to_string() })
    }
}

/// Rows, CSV text and summary of one run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<CsvRow>,
    pub csv: String,
    pub summary: RunSummary,
    /// Propagation failure; the CSV then ends with a truncation marker.
    pub failure: Option<Error>,
}

/// Run in memory.
pub fn run(config: &ScenarioConfig) -> Result<RunOutput> {
    let mut buf = Vec::new();
    let (rows, summary, failure) = run_into(config, &mut buf)?;
    let csv = String::from_utf8(buf).expect("csv output is utf-8");
    Ok(RunOutput { rows, csv, summary, failure })
}

/// Run and write `<name>.csv` and `<name>.summary.toml` under `dir`.
///
/// The CSV is streamed, so a failed run leaves the rows computed so far.
pub fn run_to_dir(config: &ScenarioConfig, dir: &Path) -> Result<(RunSummary, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", config.name));
    let out = BufWriter::new(File::create(&csv_path)?);
    let (_, summary, failure) = run_into(config, out)?;
    std::fs::write(dir.join(format!("{}.summary.toml", config.name)), summary.to_toml())?;
    match failure {
        Some(e) => Err(e),
        None => Ok((summary, csv_path)),
    }
}

fn run_into<W: Write>(config: &ScenarioConfig, out: W) -> Result<(Vec<CsvRow>, RunSummary, Option<Error>)> {
    config.validate()?;
    let started = Instant::now();
    let mut sink = CsvSink::new(out, config)?;
    let mut rows = Vec::new();
    let mut herm = 0.0;
    let result = match config.integrator.precision {
        Precision::F32 => propagate::<f32, W>(config, &mut sink, &mut rows, &mut herm),
        Precision::F64 => propagate::<f64, W>(config, &mut sink, &mut rows, &mut herm),
    };
    let (discarded, failure) = match result {
        Ok(d) => (d, None),
        Err(e) => {
            sink.truncated(&e.to_string())?;
            (0.0, Some(e))
        }
    };
    sink.finish()?;
    let mut summary = RunSummary::from_rows(config, &rows, discarded);
    summary.wall_time_s = started.elapsed().as_secs_f64();
    summary.max_hermiticity_error = herm;
    summary.truncated = failure.as_ref().map(|e| e.to_string());
    Ok((rows, summary, failure))
}

/// Time at which the after-pulse model takes over, on the recording grid.
pub fn switch_time_fs(config: &ScenarioConfig) -> f64 {
    let i = &config.integrator;
    if i.after_pulse.is_none() {
        return i.t_end_fs;
    }
    let end = config.pulse_spec().end_fs().max(0.0);
    ((end / i.record_every_fs).ceil() * i.record_every_fs).min(i.t_end_fs)
}

fn propagate<T: Real, W: Write>(
    config: &ScenarioConfig,
    sink: &mut CsvSink<W>,
    rows: &mut Vec<CsvRow>,
    herm: &mut f64,
) -> Result<f64> {
    let ic = config.integrator_config();
    if ic.t_end_fs == 0.0 {
        return Ok(0.0);
    }
    let params = config.params();
    let pulse = config.pulse_spec();
    let system = assemble::<T>(&params, &pulse)?;
    let mut observe = |s: &crate::propagator::Sample| {
        *herm = herm.max(s.hermiticity_error);
        let row = CsvRow::from(s);
        sink.row(&row)?;
        rows.push(row);
        Ok(())
    };
    let t_switch = switch_time_fs(config);
    let rho0 = DensityMatrix::<T>::ground(system.layout().clone());
    let rho = evolve_span(&system, &ic, &rho0, 0.0, t_switch, true, &mut observe)?;
    drop(system);

    let Some(after) = &config.integrator.after_pulse else {
        return Ok(0.0);
    };
    if t_switch >= ic.t_end_fs {
        return Ok(0.0);
    }
    let mut reduced = params.clone();
    reduced.n_pl_levels = after.n_pl_levels;
    reduced.n_ph_levels = after.n_ph_levels.unwrap_or(params.n_ph_levels);
    let (mut rho, mut discarded) = rho.truncate_levels(Mode::Plasmon.site(), reduced.n_pl_levels)?;
    for cav in [Mode::Cavity1, Mode::Cavity2] {
        let (r, d) = rho.truncate_levels(cav.site(), reduced.n_ph_levels)?;
        rho = r;
        discarded += d;
    }
    // the removed weight is reported, not carried as a trace error
    let rho = rho.normalized();
    let discarded = discarded.as_f64();
    drop(observe);
    sink.switch(t_switch, reduced.n_pl_levels, reduced.n_ph_levels, discarded)?;
    let mut observe = |s: &crate::propagator::Sample| {
        *herm = herm.max(s.hermiticity_error);
        let row = CsvRow::from(s);
        sink.row(&row)?;
        rows.push(row);
        Ok(())
    };
    let system = assemble::<T>(&reduced, &PulseSpec::off(pulse.omega_drive))?;
    let mut ic2 = ic.clone();
    ic2.dt_fs = after.dt_fs.unwrap_or(ic.dt_fs);
    evolve_span(&system, &ic2, &rho, t_switch, ic.t_end_fs, false, &mut observe)?;
    Ok(discarded)
}

/// `C_cavity(t*)/C_open(t*)` for two runs that differ only in the QD–cavity coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageComparison {
    pub t_star_fs: f64,
    pub c_cavity: f64,
    pub c_open: f64,
    pub ratio: f64,
}

/// Linear interpolation of the concurrence at `t`.
pub fn concurrence_at(rows: &[CsvRow], t: f64) -> Result<f64> {
    let out = || Error::InvalidArgument(format!("t* = {t} fs lies outside the recorded interval"));
    let k = rows.iter().position(|r| r.t_fs >= t).ok_or_else(out)?;
    if rows[k].t_fs == t {
        return Ok(rows[k].c);
    }
    if k == 0 {
        return Err(out());
    }
    let (a, b) = (&rows[k - 1], &rows[k]);
    let w = (t - a.t_fs) / (b.t_fs - a.t_fs);
    Ok(a.c + w * (b.c - a.c))
}

/// Compare already computed trajectories.
pub fn compare_rows(cavity: &[CsvRow], open: &[CsvRow], t_star_fs: f64) -> Result<StorageComparison> {
    let c_cavity = concurrence_at(cavity, t_star_fs)?;
    let c_open = concurrence_at(open, t_star_fs)?;
    Ok(StorageComparison { t_star_fs, c_cavity, c_open, ratio: c_cavity / c_open })
}

/// Run both configurations and compare them at `t_star_fs`.
pub fn compare_storage(cavity: &ScenarioConfig, open: &ScenarioConfig, t_star_fs: f64) -> Result<StorageComparison> {
    let mut probe = open.clone();
    probe.name.clone_from(&cavity.name);
    probe.description.clone_from(&cavity.description);
    probe.output = cavity.output.clone();
    probe.system.g_mev = cavity.system.g_mev;
    if probe != *cavity {
        return Err(Error::InvalidArgument("storage runs must differ only in system.g_mev".into()));
    }
    let a = run(cavity)?;
    if let Some(e) = a.failure {
        return Err(e);
    }
    let b = run(open)?;
    if let Some(e) = b.failure {
        return Err(e);
    }
    compare_rows(&a.rows, &b.rows, t_star_fs)
}
