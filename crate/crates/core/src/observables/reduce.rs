use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::tensor::{DensityMatrix, Mode, QOperator};

/// Reduced operator on the sites in `keep` (any order; result keeps layout order).
pub fn partial_trace_op<T: Real>(op: &QOperator<T>, keep: &[usize]) -> Result<QOperator<T>> {
    let layout = op.layout();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace needs at least one kept subsystem".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&s) = kept.iter().find(|&&s| s >= layout.n_sites()) {
        return Err(Error::InvalidArgument(format!("site {s} outside layout {layout}")));
    }
    let traced: Vec<usize> = (0..layout.n_sites()).filter(|s| !kept.contains(s)).collect();
    let reduced_layout = layout.restrict(&kept)?;

    // Offsets into the full index contributed by kept and traced levels.
    let offsets = |sites: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &s in sites {
            let stride = layout.stride(s);
            let d = layout.dims()[s];
            offs = offs.iter().flat_map(|&o| (0..d).map(move |l| o + l * stride)).collect();
        }
        offs
    };
    let keep_off = offsets(&kept);
    let env_off = offsets(&traced);

    let n = op.dim();
    let m = keep_off.len();
    let data = op.as_slice();
    let mut out = vec![Cplx::<T>::zero(); m * m];
    for (a, &ka) in keep_off.iter().enumerate() {
        for (b, &kb) in keep_off.iter().enumerate() {
            let mut acc = Cplx::zero();
            for &e in &env_off {
                acc += data[(ka + e) * n + kb + e];
            }
            out[a * m + b] = acc;
        }
    }
    QOperator::from_vec(reduced_layout, out)
}

/// Reduced density matrix of the kept subsystems.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: &[usize]) -> Result<DensityMatrix<T>> {
    Ok(DensityMatrix::new_unchecked(partial_trace_op(rho.op(), keep)?))
}

/// Two-QD reduced state in the `{|00⟩, |01⟩, |10⟩, |11⟩}` basis.
pub fn qd_reduce<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    require_cqed(rho)?;
    partial_trace(rho, &[Mode::Qd1.site(), Mode::Qd2.site()])
}

/// Two-cavity reduced state (`N_ph² × N_ph²`).
pub fn photon_reduce<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    require_cqed(rho)?;
    partial_trace(rho, &[Mode::Cavity1.site(), Mode::Cavity2.site()])
}

/// Two-cavity reduced state as a pair of qubits; needs `N_ph = 2`.
pub fn photon_qubit_reduce<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    require_cqed(rho)?;
    let n_ph = rho.layout().dims()[Mode::Cavity1.site()];
    if n_ph != 2 {
        return Err(Error::UnsupportedLayout(format!(
            "photon concurrence needs two photon levels per cavity (have {n_ph})"
        )));
    }
    photon_reduce(rho)
}

fn require_cqed<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.layout().is_cqed() {
        Ok(())
    } else {
        Err(Error::UnsupportedLayout(format!("expected the five-mode layout, got {}", rho.layout())))
    }
}
