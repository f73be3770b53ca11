use num_traits::Zero;

use super::eigen::hermitian_eigenvalues;
use super::layout::SubsystemLayout;
use super::operator::QOperator;
use crate::error::{Error, Result};
use crate::scalar::{cr, Cplx, Real};

/// Hermitian, unit-trace, positive operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    op: QOperator<T>,
}

pub(crate) fn tolerance<T: Real>(x: f64) -> T {
    T::lit(x).max(T::epsilon() * T::lit(256.0))
}

impl<T: Real> DensityMatrix<T> {
    /// Validate Hermiticity (1e-10), trace (1e-8) and positivity (-1e-8).
    pub fn new(op: QOperator<T>) -> Result<Self> {
        let herm = op.hermiticity_error();
        if herm > tolerance(1e-10) {
            return Err(Error::Domain(format!("density matrix not Hermitian (max |rho - rho^dag| = {herm})")));
        }
        let tr = op.trace();
        if (tr - Cplx::new(T::one(), T::zero())).norm() > tolerance(1e-8) {
            return Err(Error::Domain(format!("density matrix trace {tr} != 1")));
        }
        let min = hermitian_eigenvalues(&op)?.last().copied().unwrap_or_else(T::zero);
        if min < -tolerance::<T>(1e-8) {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {min}")));
        }
        Ok(Self { op })
    }

    /// Wrap without validation; callers guarantee the invariants.
    pub(crate) fn new_unchecked(op: QOperator<T>) -> Self {
        Self { op }
    }

    /// Every subsystem in its lowest level.
    pub fn ground(layout: SubsystemLayout) -> Self {
        let mut op = QOperator::zeros(layout);
        op[(0, 0)] = cr(T::one());
        Self { op }
    }

    /// Projector onto the basis state with the given per-site levels.
    pub fn basis_state(layout: SubsystemLayout, levels: &[usize]) -> Result<Self> {
        let idx = layout.compose(levels)?;
        let mut op = QOperator::zeros(layout);
        op[(idx, idx)] = cr(T::one());
        Ok(Self { op })
    }

    /// `|ψ⟩⟨ψ|` for the normalised `amplitudes`.
    pub fn pure(layout: SubsystemLayout, amplitudes: &[Cplx<T>]) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::InvalidDimension(format!(
                "{} amplitudes for dim {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if norm.is_zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let psi: Vec<_> = amplitudes.iter().map(|a| a / norm).collect();
        Ok(Self { op: QOperator::from_fn(layout, |i, j| psi[i] * psi[j].conj()) })
    }

    /// Convex combination `Σ w_k ρ_k`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let total: T = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < T::zero()) || (total - T::one()).abs() > tolerance(1e-12) {
            return Err(Error::InvalidArgument("mixture weights must be >= 0 and sum to 1".into()));
        }
        let mut acc = QOperator::zeros(first.layout().clone());
        for (w, rho) in parts {
            acc = acc.add_scaled(cr(*w), &rho.op)?;
        }
        Ok(Self { op: acc })
    }

    pub fn op(&self) -> &QOperator<T> {
        &self.op
    }

    pub fn into_operator(self) -> QOperator<T> {
        self.op
    }

    pub fn layout(&self) -> &SubsystemLayout {
        self.op.layout()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        self.op.as_slice()
    }

    pub fn trace(&self) -> Cplx<T> {
        self.op.trace()
    }

    /// Real diagonal (basis-state populations).
    pub fn populations(&self) -> Vec<T> {
        let n = self.dim();
        (0..n).map(|i| self.op.as_slice()[i * n + i].re).collect()
    }

    pub fn hermiticity_error(&self) -> T {
        self.op.hermiticity_error()
    }

    /// Smallest eigenvalue; costs a full diagonalisation.
    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(hermitian_eigenvalues(&self.op)?.last().copied().unwrap_or_else(T::zero))
    }

    /// `Tr(ρσ)`.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension("overlap of different dims".into()));
        }
        let n = self.dim();
        let (a, b) = (self.as_slice(), other.as_slice());
        let mut acc = Cplx::zero();
        for i in 0..n {
            for j in 0..n {
                acc += a[i * n + j] * b[j * n + i];
            }
        }
        Ok(acc.re)
    }

    /// Project onto the lowest `levels` levels of `site`. Returns the projected
    /// (not renormalised) state and the discarded weight `1 − Tr` change.
    pub fn truncate_levels(&self, site: usize, levels: usize) -> Result<(Self, T)> {
        let layout = self.layout();
        if site >= layout.n_sites() {
            return Err(Error::InvalidArgument(format!("site {site} out of range for layout {layout}")));
        }
        let old = layout.dims()[site];
        if levels < 2 || levels > old {
            return Err(Error::InvalidArgument(format!("cannot truncate a {old}-level mode to {levels} levels")));
        }
        let mut dims = layout.dims().to_vec();
        dims[site] = levels;
        let small = SubsystemLayout::new(dims)?;
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| layout.level(i, site) < levels).collect();
        let n = self.dim();
        let m = keep.len();
        let src = self.as_slice();
        let mut data = Vec::with_capacity(m * m);
        for &i in &keep {
            data.extend(keep.iter().map(|&j| src[i * n + j]));
        }
        let op = QOperator::from_vec(small, data)?;
        let discarded = self.trace().re - op.trace().re;
        Ok((Self { op }, discarded))
    }

    /// Rescaled to unit trace.
    pub fn normalized(&self) -> Self {
        let inv = T::one() / self.trace().re;
        Self { op: self.op.scale(Cplx::new(inv, T::zero())) }
    }

    /// `U ρ U†`.
    pub fn transform(&self, unitary: &QOperator<T>) -> Result<Self> {
        let out = unitary.multiply(&self.op)?.multiply(&unitary.adjoint())?;
        Ok(Self { op: out.with_layout(self.layout().clone())? })
    }
}
