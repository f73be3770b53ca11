use num_traits::Zero;

use super::system::OpenSystem;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::tensor::{hermiticity_error, DensityMatrix, QOperator};

/// Fixed-step classical RK4 integrator holding its own work buffers.
#[derive(Debug, Clone)]
pub struct Propagator<'a, T: Real> {
    system: &'a OpenSystem<T>,
    rho: Vec<Cplx<T>>,
    stage: Vec<Cplx<T>>,
    slope: Vec<Cplx<T>>,
    acc: Vec<Cplx<T>>,
    scratch: Vec<Cplx<T>>,
    t_fs: f64,
    steps: usize,
    renormalize: bool,
}

impl<'a, T: Real> Propagator<'a, T> {
    pub fn new(system: &'a OpenSystem<T>, initial: &DensityMatrix<T>, t0_fs: f64) -> Result<Self> {
        if initial.dim() != system.dim() {
            return Err(Error::InvalidDimension(format!(
                "initial state dim {} vs generator dim {}",
                initial.dim(),
                system.dim()
            )));
        }
        let nn = system.dim() * system.dim();
        Ok(Self {
            system,
            rho: initial.as_slice().to_vec(),
            stage: vec![Cplx::zero(); nn],
            slope: vec![Cplx::zero(); nn],
            acc: vec![Cplx::zero(); nn],
            scratch: vec![Cplx::zero(); nn],
            t_fs: t0_fs,
            steps: 0,
            renormalize: false,
        })
    }

    /// Rescale to unit trace after every step.
    pub fn renormalize_trace(mut self, on: bool) -> Self {
        self.renormalize = on;
        self
    }

    pub fn time_fs(&self) -> f64 {
        self.t_fs
    }

    pub fn set_time_fs(&mut self, t_fs: f64) {
        self.t_fs = t_fs;
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn raw_state(&self) -> &[Cplx<T>] {
        &self.rho
    }

    pub fn state(&self) -> DensityMatrix<T> {
        let op = QOperator::from_vec(self.system.layout().clone(), self.rho.clone()).expect("dims match");
        DensityMatrix::new_unchecked(op)
    }

    pub fn trace(&self) -> Cplx<T> {
        let n = self.system.dim();
        (0..n).map(|i| self.rho[i * n + i]).fold(Cplx::zero(), |a, b| a + b)
    }

    pub fn hermiticity_error(&self) -> T {
        hermiticity_error(&self.rho, self.system.dim())
    }

    /// Advance by `dt_fs` with one classical RK4 step.
    pub fn step(&mut self, dt_fs: f64) -> Result<()> {
        if !(dt_fs > 0.0) {
            return Err(Error::InvalidArgument(format!("time step must be > 0 (got {dt_fs})")));
        }
        let t = self.t_fs;
        let h = T::lit(dt_fs);
        let half = T::lit(0.5 * dt_fs);
        let two = T::lit(2.0);
        let sys = self.system;

        sys.apply(t, &self.rho, &mut self.slope, &mut self.scratch);
        for ((a, s), (k, r)) in self.acc.iter_mut().zip(self.stage.iter_mut()).zip(self.slope.iter().zip(&self.rho)) {
            *a = *k;
            *s = r + k * half;
        }
        sys.apply(t + 0.5 * dt_fs, &self.stage, &mut self.slope, &mut self.scratch);
        for ((a, s), (k, r)) in self.acc.iter_mut().zip(self.stage.iter_mut()).zip(self.slope.iter().zip(&self.rho)) {
            *a += k * two;
            *s = r + k * half;
        }
        sys.apply(t + 0.5 * dt_fs, &self.stage, &mut self.slope, &mut self.scratch);
        for ((a, s), (k, r)) in self.acc.iter_mut().zip(self.stage.iter_mut()).zip(self.slope.iter().zip(&self.rho)) {
            *a += k * two;
            *s = r + k * h;
        }
        sys.apply(t + dt_fs, &self.stage, &mut self.slope, &mut self.scratch);
        let sixth = T::lit(dt_fs / 6.0);
        for ((r, a), k) in self.rho.iter_mut().zip(&self.acc).zip(&self.slope) {
            *r += (a + k) * sixth;
        }

        self.steps += 1;
        self.t_fs = t + dt_fs;
        let tr = self.trace();
        if !tr.re.is_finite() || !tr.im.is_finite() {
            return Err(Error::NumericBlowup { step: self.steps, t_fs: self.t_fs, suggested_dt_fs: 0.5 * dt_fs });
        }
        if self.renormalize {
            let inv = T::one() / tr.re;
            self.rho.iter_mut().for_each(|r| *r = *r * inv);
        }
        Ok(())
    }

    /// Full finiteness scan of the state.
    pub fn check_finite(&self, dt_fs: f64) -> Result<()> {
        if self.rho.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NumericBlowup { step: self.steps, t_fs: self.t_fs, suggested_dt_fs: 0.5 * dt_fs })
        }
    }
}

/// One RK4 step from `rho` at `t` (allocating convenience wrapper).
pub fn rk4_step<T: Real>(
    system: &OpenSystem<T>,
    rho: &DensityMatrix<T>,
    t_fs: f64,
    dt_fs: f64,
    renormalize_trace: bool,
) -> Result<DensityMatrix<T>> {
    let mut p = Propagator::new(system, rho, t_fs)?.renormalize_trace(renormalize_trace);
    p.step(dt_fs)?;
    Ok(p.state())
}
