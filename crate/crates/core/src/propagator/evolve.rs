use super::rk4::Propagator;
use super::system::OpenSystem;
use crate::error::{Error, Result};
use crate::observables::{record, ObservableRecord};
use crate::scalar::Real;
use crate::tensor::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub dt_fs: f64,
    pub t_end_fs: f64,
    pub record_every_fs: f64,
    pub renormalize_trace: bool,
    /// Refuse runs whose working set exceeds this many MiB.
    pub memory_cap_mib: u64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt_fs: 0.02, t_end_fs: 1000.0, record_every_fs: 1.0, renormalize_trace: false, memory_cap_mib: 4096 }
    }
}

impl IntegratorConfig {
    /// `0 < dt ≤ record_every ≤ t_end`; `t_end = 0` is accepted and records nothing.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(Error::Config { key: key.into(), msg });
        if !(self.dt_fs > 0.0) || !self.dt_fs.is_finite() {
            return bad("dt_fs", format!("must be > 0 (got {})", self.dt_fs));
        }
        if !(self.record_every_fs >= self.dt_fs) {
            return bad("record_every_fs", format!("must be >= dt_fs (got {})", self.record_every_fs));
        }
        if !(self.t_end_fs >= 0.0) || !self.t_end_fs.is_finite() {
            return bad("t_end_fs", format!("must be finite and >= 0 (got {})", self.t_end_fs));
        }
        if self.t_end_fs > 0.0 && self.t_end_fs < self.record_every_fs {
            return bad("t_end_fs", format!("must be >= record_every_fs (got {})", self.t_end_fs));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end_fs / self.dt_fs).round() as usize
    }

    pub fn record_stride(&self) -> usize {
        ((self.record_every_fs / self.dt_fs).round() as usize).max(1)
    }
}

/// Observables and integrator diagnostics at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t_fs: f64,
    pub record: ObservableRecord,
    /// `|Tr ρ − 1|`
    pub trace_error: f64,
    /// `max |ρ − ρ†|`
    pub hermiticity_error: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    pub samples: Vec<Sample>,
    pub steps: usize,
    pub final_state: DensityMatrix<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t_fs).collect()
    }

    pub fn series(&self, f: impl Fn(&ObservableRecord) -> f64) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t_fs, f(&s.record))).collect()
    }

    /// Samples where `f` is defined.
    pub fn series_opt(&self, f: impl Fn(&ObservableRecord) -> Option<f64>) -> Vec<(f64, f64)> {
        self.samples.iter().filter_map(|s| f(&s.record).map(|v| (s.t_fs, v))).collect()
    }

    pub fn max_trace_error(&self) -> f64 {
        self.samples.iter().map(|s| s.trace_error).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.samples.iter().map(|s| s.hermiticity_error).fold(0.0, f64::max)
    }
}

fn sample<T: Real>(p: &Propagator<'_, T>) -> Result<Sample> {
    let state = p.state();
    Ok(Sample {
        t_fs: p.time_fs(),
        record: record(&state)?,
        trace_error: (p.trace().re.as_f64() - 1.0).abs().max(p.trace().im.as_f64().abs()),
        hermiticity_error: p.hermiticity_error().as_f64(),
    })
}

/// Propagate and stream each sample to `observer`; returns the final state.
pub fn evolve_with<T: Real>(
    system: &OpenSystem<T>,
    config: &IntegratorConfig,
    initial: &DensityMatrix<T>,
    observer: impl FnMut(&Sample) -> Result<()>,
) -> Result<DensityMatrix<T>> {
    config.validate()?;
    if config.t_end_fs == 0.0 {
        return Ok(initial.clone());
    }
    evolve_span(system, config, initial, 0.0, config.t_end_fs, true, observer)
}

/// Propagate from `t0_fs` to `t1_fs` with the step and sampling of `config`.
///
/// Both ends must lie on the recording grid (multiples of `record_every_fs`).
/// A sample is taken at `t0_fs` when `sample_start` is set and at every later grid
/// point; `config.t_end_fs` is ignored.
pub fn evolve_span<T: Real>(
    system: &OpenSystem<T>,
    config: &IntegratorConfig,
    initial: &DensityMatrix<T>,
    t0_fs: f64,
    t1_fs: f64,
    sample_start: bool,
    mut observer: impl FnMut(&Sample) -> Result<()>,
) -> Result<DensityMatrix<T>> {
    let needed = system.working_set_bytes().div_ceil(1 << 20);
    if needed > config.memory_cap_mib {
        return Err(Error::Capacity { needed_mib: needed, cap_mib: config.memory_cap_mib });
    }
    let stride = config.record_stride();
    let on_grid = |t: f64| {
        let k = t / config.dt_fs;
        (k - k.round()).abs() < 1e-6 && (k.round() as usize) % stride == 0
    };
    if !(t1_fs >= t0_fs) || !on_grid(t0_fs) || !on_grid(t1_fs) {
        return Err(Error::InvalidArgument(format!(
            "span [{t0_fs}, {t1_fs}] fs is not on the {} fs recording grid",
            config.record_every_fs
        )));
    }
    let first = (t0_fs / config.dt_fs).round() as usize;
    let last = (t1_fs / config.dt_fs).round() as usize;
    let mut p = Propagator::new(system, initial, t0_fs)?.renormalize_trace(config.renormalize_trace);
    if sample_start {
        observer(&sample(&p)?)?;
    }
    for k in first + 1..=last {
        p.step(config.dt_fs)?;
        if k % stride == 0 {
            // re-anchor on the grid so long runs do not accumulate rounding in t
            p.set_time_fs(k as f64 * config.dt_fs);
            p.check_finite(config.dt_fs)?;
            observer(&sample(&p)?)?;
        }
    }
    Ok(p.state())
}

/// Propagate from `initial` and collect the full trajectory.
pub fn evolve<T: Real>(
    system: &OpenSystem<T>,
    config: &IntegratorConfig,
    initial: &DensityMatrix<T>,
) -> Result<Trajectory<T>> {
    let mut samples = Vec::new();
    let final_state = evolve_with(system, config, initial, |s| {
        samples.push(s.clone());
        Ok(())
    })?;
    Ok(Trajectory { samples, steps: config.n_steps(), final_state })
}
