use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{LindbladChannel, PulseSpec};
use crate::scalar::{c, cr, Cplx, Real};
use crate::tensor::{DensityMatrix, QOperator, SparseOperator, SubsystemLayout};
use crate::units::HBAR_EV_FS;

/// `γ/ħ·AρA†`, specialised by the sparsity of `A`.
#[derive(Debug, Clone)]
enum Jump<T: Real> {
    /// `A[i, i + offset] = amp[i]` with real amplitudes (zero where the row is empty);
    /// every embedded ladder operator has this form.
    Shift { rate: T, offset: usize, amp: Vec<T> },
    /// At most one entry per row: `A[i, src] = amp`.
    Monomial { rate: T, rows: Vec<(usize, usize, Cplx<T>)> },
    General { rate: T, op: SparseOperator<T> },
}

/// One off-diagonal of a sparse operator: `H[k, k + offset] = coef[k]`.
#[derive(Debug, Clone)]
enum Band<T: Real> {
    Real { offset: isize, coef: Vec<T> },
    Complex { offset: isize, coef: Vec<Cplx<T>> },
}

/// Split a sparse operator into its main diagonal and its nonzero off-diagonals.
fn bands<T: Real>(op: &SparseOperator<T>) -> (Vec<Cplx<T>>, Vec<Band<T>>) {
    let n = op.dim();
    let mut by_offset: BTreeMap<isize, Vec<Cplx<T>>> = BTreeMap::new();
    for (i, j, v) in op.iter() {
        by_offset.entry(j as isize - i as isize).or_insert_with(|| vec![Cplx::zero(); n])[i] = v;
    }
    let diag = by_offset.remove(&0).unwrap_or_else(|| vec![Cplx::zero(); n]);
    let off = by_offset
        .into_iter()
        .map(|(offset, coef)| {
            if coef.iter().all(|z| z.im.is_zero()) {
                Band::Real { offset, coef: coef.into_iter().map(|z| z.re).collect() }
            } else {
                Band::Complex { offset, coef }
            }
        })
        .collect();
    (diag, off)
}

/// Channels with a real diagonal operator `a`. Together they act as
/// `ρ_ij ↦ −½ Σ γ/ħ (a_i − a_j)² ρ_ij`.
#[derive(Debug, Clone, Default)]
struct Dephasing<T: Real> {
    channels: Vec<(T, Vec<T>)>,
}

impl<T: Real> Dephasing<T> {
    #[inline]
    fn weight(&self, i: usize, j: usize) -> T {
        let mut w = T::zero();
        for (rate, a) in &self.channels {
            let d = a[i] - a[j];
            w += *rate * d * d;
        }
        w * T::lit(-0.5)
    }
}

/// Time-dependent Lindblad generator
/// `dρ/dt = −(i/ħ)[H₀ + E₀(t)·D, ρ] + Σ γ/ħ (AρA† − ½{A†A, ρ})`.
///
/// The anticommutators of non-diagonal channels are folded into
/// `H_eff = H − (i/2)Σ γ A†A`; with `M = H_eff ρ` the commutator part is
/// `−(i/ħ)(M − M†)`. Operators are stored by diagonals so every product is a
/// contiguous row operation.
#[derive(Debug, Clone)]
pub struct OpenSystem<T: Real> {
    layout: SubsystemLayout,
    hamiltonian: SparseOperator<T>,
    drive: Option<(SparseOperator<T>, PulseSpec)>,
    channels: Vec<LindbladChannel<T>>,
    diag_static: Vec<Cplx<T>>,
    diag_drive: Vec<Cplx<T>>,
    h_static: Vec<Band<T>>,
    h_drive: Vec<Band<T>>,
    jumps: Vec<Jump<T>>,
    dephasing: Dephasing<T>,
}

impl<T: Real> OpenSystem<T> {
    pub fn new(
        hamiltonian: SparseOperator<T>,
        drive: Option<(SparseOperator<T>, PulseSpec)>,
        channels: Vec<LindbladChannel<T>>,
    ) -> Result<Self> {
        let layout = hamiltonian.layout().clone();
        let n = layout.total_dim();
        let check = |op: &SparseOperator<T>, what: &str| {
            if op.dim() != n {
                Err(Error::InvalidDimension(format!("{what} has dim {} but the Hamiltonian has {n}", op.dim())))
            } else {
                Ok(())
            }
        };
        if let Some((d, _)) = &drive {
            check(d, "drive operator")?;
        }
        for ch in &channels {
            check(&ch.operator, &ch.label)?;
            if !(ch.rate >= 0.0) {
                return Err(Error::Domain(format!("channel {} has negative rate {}", ch.label, ch.rate)));
            }
        }

        let inv_hbar = 1.0 / HBAR_EV_FS;
        let mut h_eff = hamiltonian.clone();
        let mut dephasing = Dephasing::default();
        let mut jumps = Vec::new();
        for ch in &channels {
            let rate = T::lit(ch.rate * inv_hbar);
            let op = &ch.operator;
            if op.is_diagonal() && op.iter().all(|(_, _, v)| v.im.is_zero()) {
                dephasing.channels.push((rate, op.diagonal().iter().map(|v| v.re).collect()));
                continue;
            }
            let ada = op.adjoint().multiply(op)?;
            h_eff = h_eff.add_scaled(c(T::zero(), T::lit(-0.5 * ch.rate)), &ada)?;
            jumps.push(compile_jump(op, rate, n));
        }
        let (diag_static, h_static) = bands(&h_eff);
        let (diag_drive, h_drive) = match &drive {
            Some((d, _)) => bands(d),
            None => (vec![Cplx::zero(); n], Vec::new()),
        };

        Ok(Self { layout, hamiltonian, drive, channels, diag_static, diag_drive, h_static, h_drive, jumps, dephasing })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn hamiltonian(&self) -> &SparseOperator<T> {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[LindbladChannel<T>] {
        &self.channels
    }

    pub fn pulse(&self) -> Option<&PulseSpec> {
        self.drive.as_ref().map(|(_, p)| p)
    }

    /// Envelope value multiplying the drive operator at `t`; exactly zero outside
    /// the pulse support (where `E₀ < 10⁻¹²·E_max`).
    pub fn drive_amplitude(&self, t_fs: f64) -> f64 {
        let Some((_, p)) = &self.drive else { return 0.0 };
        match p.support_fs() {
            Some((a, b)) if t_fs >= a && t_fs <= b => p.envelope(t_fs),
            _ => 0.0,
        }
    }

    /// Full Hamiltonian `H₀ + E₀(t)·D` at time `t`.
    pub fn hamiltonian_at(&self, t_fs: f64) -> SparseOperator<T> {
        match &self.drive {
            Some((d, _)) => self
                .hamiltonian
                .add_scaled(cr(T::lit(self.drive_amplitude(t_fs))), d)
                .expect("same layout"),
            None => self.hamiltonian.clone(),
        }
    }

    /// `dρ/dt` at time `t`.
    pub fn rhs(&self, rho: &DensityMatrix<T>, t_fs: f64) -> Result<QOperator<T>> {
        if rho.dim() != self.dim() {
            return Err(Error::InvalidDimension(format!("state dim {} vs generator dim {}", rho.dim(), self.dim())));
        }
        let n = self.dim();
        let mut out = vec![Cplx::zero(); n * n];
        let mut scratch = vec![Cplx::zero(); n * n];
        self.apply(t_fs, rho.as_slice(), &mut out, &mut scratch);
        QOperator::from_vec(self.layout.clone(), out)
    }

    /// Write `dρ/dt` for row-major Hermitian `rho` into `out`; `scratch` is clobbered.
    pub(crate) fn apply(&self, t_fs: f64, rho: &[Cplx<T>], out: &mut [Cplx<T>], scratch: &mut [Cplx<T>]) {
        let n = self.dim();
        let f = T::lit(self.drive_amplitude(t_fs));
        self.offdiag_product(f, rho, scratch);

        // out = −(i/ħ)(M − M† + D ρ − ρ D†) + dephasing, upper triangle, with
        // D the diagonal of H_eff + f·drive
        let inv_hbar = T::lit(1.0 / HBAR_EV_FS);
        let diag: Vec<Cplx<T>> =
            self.diag_static.iter().zip(&self.diag_drive).map(|(s, d)| s + d * f).collect();
        const BLOCK: usize = 32;
        for ib in (0..n).step_by(BLOCK) {
            let ie = (ib + BLOCK).min(n);
            for jb in (ib..n).step_by(BLOCK) {
                let je = (jb + BLOCK).min(n);
                for i in ib..ie {
                    let di = diag[i];
                    for j in jb.max(i)..je {
                        let r = rho[i * n + j];
                        let m = scratch[i * n + j] - scratch[j * n + i].conj() + r * (di - diag[j].conj());
                        out[i * n + j] =
                            Cplx::new(m.im * inv_hbar, -m.re * inv_hbar) + r * self.dephasing.weight(i, j);
                    }
                }
            }
        }

        for jump in &self.jumps {
            match jump {
                Jump::Shift { rate, offset, amp } => {
                    let off = *offset;
                    for i in 0..n - off {
                        if amp[i].is_zero() {
                            continue;
                        }
                        let ci = amp[i] * *rate;
                        let src: &[T] = bytemuck::cast_slice(&rho[(i + off) * n + i + off..(i + off + 1) * n]);
                        let dst: &mut [T] = bytemuck::cast_slice_mut(&mut out[i * n + i..i * n + n - off]);
                        for ((d, s), &aj) in dst.chunks_exact_mut(2).zip(src.chunks_exact(2)).zip(&amp[i..n - off]) {
                            let c = ci * aj;
                            d[0] += s[0] * c;
                            d[1] += s[1] * c;
                        }
                    }
                }
                Jump::Monomial { rate, rows } => {
                    for &(i, pi, ai) in rows {
                        let src = &rho[pi * n..(pi + 1) * n];
                        let dst = &mut out[i * n..(i + 1) * n];
                        for &(j, pj, aj) in rows {
                            if j >= i {
                                dst[j] += ((ai * aj.conj()) * *rate) * src[pj];
                            }
                        }
                    }
                }
                Jump::General { rate, op } => {
                    // A ρ A† = (A (A ρ)†)†
                    sparse_dense(op, rho, scratch, n);
                    let mut tmp = vec![Cplx::zero(); n * n];
                    for i in 0..n {
                        for j in 0..n {
                            tmp[i * n + j] = scratch[j * n + i].conj();
                        }
                    }
                    sparse_dense(op, &tmp, scratch, n);
                    for i in 0..n {
                        for j in i..n {
                            out[i * n + j] += scratch[j * n + i].conj() * *rate;
                        }
                    }
                }
            }
        }
        hermitian_mirror(out, n);
    }

    /// `m = (H_eff − diag) ρ + f·(drive − diag) ρ`, full rows.
    fn offdiag_product(&self, f: T, rho: &[Cplx<T>], m: &mut [Cplx<T>]) {
        let n = self.dim();
        let mut terms: Vec<(T, usize)> = Vec::with_capacity(self.h_static.len() + self.h_drive.len());
        let drive_on = !f.is_zero();
        for i in 0..n {
            terms.clear();
            let dst = &mut m[i * n..(i + 1) * n];
            dst.fill(Cplx::zero());
            let bands = self.h_static.iter().map(|b| (b, T::one()));
            let drive = self.h_drive.iter().filter(|_| drive_on).map(|b| (b, f));
            for (band, s) in bands.chain(drive) {
                match band {
                    Band::Real { offset, coef } => {
                        let h = coef[i] * s;
                        if !h.is_zero() {
                            terms.push((h, (i as isize + offset) as usize));
                        }
                    }
                    Band::Complex { offset, coef } => {
                        let h = coef[i] * s;
                        if !h.is_zero() {
                            let k = (i as isize + offset) as usize;
                            for (d, r) in dst.iter_mut().zip(&rho[k * n..(k + 1) * n]) {
                                *d += *r * h;
                            }
                        }
                    }
                }
            }
            let dst: &mut [T] = bytemuck::cast_slice_mut(dst);
            let row = |k: usize| -> &[T] { bytemuck::cast_slice(&rho[k * n..(k + 1) * n]) };
            let mut chunks = terms.chunks_exact(4);
            for c in &mut chunks {
                let (s0, s1, s2, s3) = (row(c[0].1), row(c[1].1), row(c[2].1), row(c[3].1));
                for (j, d) in dst.iter_mut().enumerate() {
                    *d += c[0].0 * s0[j] + c[1].0 * s1[j] + c[2].0 * s2[j] + c[3].0 * s3[j];
                }
            }
            for &(h, k) in chunks.remainder() {
                for (d, &r) in dst.iter_mut().zip(row(k)) {
                    *d += h * r;
                }
            }
        }
    }

    /// Bytes of working memory an RK4 run needs at this dimension.
    pub fn working_set_bytes(&self) -> u64 {
        let n = self.dim() as u64;
        // state, stage state, stage slope, accumulator, scratch
        5 * n * n * std::mem::size_of::<Cplx<T>>() as u64
    }
}

/// Overwrite the strict lower triangle with the conjugate of the upper one.
fn hermitian_mirror<T: Real>(out: &mut [Cplx<T>], n: usize) {
    const BLOCK: usize = 32;
    for ib in (0..n).step_by(BLOCK) {
        for jb in (ib..n).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(n) {
                for j in jb.max(i + 1)..(jb + BLOCK).min(n) {
                    out[j * n + i] = out[i * n + j].conj();
                }
            }
        }
    }
}

fn compile_jump<T: Real>(op: &SparseOperator<T>, rate: T, n: usize) -> Jump<T> {
    if op.max_row_nnz() > 1 {
        return Jump::General { rate, op: op.clone() };
    }
    let entries: Vec<(usize, usize, Cplx<T>)> =
        (0..n).filter_map(|i| op.row(i).next().map(|(j, v)| (i, j, v))).collect();
    let offset = entries.first().map(|e| e.1 as isize - e.0 as isize);
    if let Some(off) = offset.filter(|&o| o > 0) {
        if entries.iter().all(|e| e.1 as isize - e.0 as isize == off && e.2.im.is_zero()) {
            let mut amp = vec![T::zero(); n];
            for (i, _, v) in &entries {
                amp[*i] = v.re;
            }
            return Jump::Shift { rate, offset: off as usize, amp };
        }
    }
    Jump::Monomial { rate, rows: entries }
}

fn sparse_dense<T: Real>(op: &SparseOperator<T>, rho: &[Cplx<T>], out: &mut [Cplx<T>], n: usize) {
    for i in 0..n {
        let dst = &mut out[i * n..(i + 1) * n];
        dst.fill(Cplx::zero());
        for (k, a) in op.row(i) {
            for (d, r) in dst.iter_mut().zip(&rho[k * n..(k + 1) * n]) {
                *d += a * r;
            }
        }
    }
}
