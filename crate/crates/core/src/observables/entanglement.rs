use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cr, Cplx, Real};
use crate::tensor::{jacobi, DensityMatrix};

fn check_two_qubit<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::Domain(format!("two-qubit state expected, got layout {}", rho.layout())));
    }
    let tol = T::lit(1e-8).max(T::epsilon() * T::lit(1e3));
    if rho.hermiticity_error() > tol {
        return Err(Error::Domain("two-qubit state is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - cr(T::one())).norm() > tol {
        return Err(Error::Domain(format!("two-qubit state has trace {tr}")));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// With `ρ = W W†` (`W = U√D` from the eigen-decomposition), the square roots
/// of the eigenvalues of `ρρ̃` are the singular values of `τ = Wᵀ(σ_y⊗σ_y)W`,
/// which are obtained from the Hermitian matrix `τ†τ`.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    check_two_qubit(rho)?;
    let lambdas = wootters_lambdas(rho.as_slice());
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// Descending `λᵢ` for a Hermitian 4×4 row-major matrix.
pub(crate) fn wootters_lambdas<T: Real>(rho: &[Cplx<T>]) -> [T; 4] {
    let eig = jacobi(rho, 4);
    let mut w = [Cplx::<T>::zero(); 16];
    for k in 0..4 {
        let s = eig.values[k].max(T::zero()).sqrt();
        for i in 0..4 {
            w[i * 4 + k] = eig.vectors[i * 4 + k] * s;
        }
    }
    // σ_y⊗σ_y is real and anti-diagonal: rows (0,3,−1), (1,2,+1), (2,1,+1), (3,0,−1).
    let yy = |i: usize| -> (usize, T) {
        match i {
            0 => (3, -T::one()),
            1 => (2, T::one()),
            2 => (1, T::one()),
            _ => (0, -T::one()),
        }
    };
    let mut tau = [Cplx::<T>::zero(); 16];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = Cplx::zero();
            for i in 0..4 {
                let (j, sign) = yy(i);
                acc += w[i * 4 + a] * w[j * 4 + b] * sign;
            }
            tau[a * 4 + b] = acc;
        }
    }
    let mut gram = [Cplx::<T>::zero(); 16];
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = Cplx::zero();
            for k in 0..4 {
                acc += tau[k * 4 + a].conj() * tau[k * 4 + b];
            }
            gram[a * 4 + b] = acc;
        }
    }
    let sv = jacobi(&gram, 4);
    let mut out = [T::zero(); 4];
    for (o, v) in out.iter_mut().zip(&sv.values) {
        *o = v.max(T::zero()).sqrt();
    }
    out
}

/// Squared fidelity `⟨Ψ⁻|ρ|Ψ⁻⟩` with `Ψ⁻ = (|01⟩ − |10⟩)/√2`.
pub fn bell_fidelity_sq<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let dims = rho.layout().dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::Domain(format!("two-mode state with equal dims expected, got {}", rho.layout())));
    }
    Ok(singlet_overlap(rho.as_slice(), dims[0]))
}

/// `⟨Ψ⁻|ρ|Ψ⁻⟩` for a pair of `d`-level modes, `Ψ⁻` spanned by `|0,1⟩` and `|1,0⟩`.
pub(crate) fn singlet_overlap<T: Real>(rho: &[Cplx<T>], d: usize) -> T {
    let n = d * d;
    let (a, b) = (1, d); // |0,1⟩, |1,0⟩
    let v = rho[a * n + a] + rho[b * n + b] - rho[a * n + b] - rho[b * n + a];
    (v.re * T::lit(0.5)).max(T::zero())
}
