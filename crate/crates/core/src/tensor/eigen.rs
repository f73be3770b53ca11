//! Cyclic Jacobi diagonalisation of complex Hermitian matrices.

use num_traits::{One, Zero};

use super::operator::{hermiticity_error, QOperator};
use crate::error::{Error, Result};
use crate::scalar::{c, Cplx, Real};

/// Eigenvalues (descending) and matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    /// Column `k` of this row-major `n×n` matrix is the eigenvector of `values[k]`.
    pub vectors: Vec<Cplx<T>>,
    pub n: usize,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<Cplx<T>> {
        (0..self.n).map(|i| self.vectors[i * self.n + k]).collect()
    }
}

fn hermitian_tol<T: Real>() -> T {
    // f32 cannot resolve 1e-10.
    T::lit(1e-10).max(T::epsilon() * T::lit(64.0))
}

/// Eigenvalues of a Hermitian operator, largest first.
pub fn hermitian_eigenvalues<T: Real>(op: &QOperator<T>) -> Result<Vec<T>> {
    Ok(hermitian_eigen(op)?.values)
}

pub fn hermitian_eigen<T: Real>(op: &QOperator<T>) -> Result<HermitianEigen<T>> {
    let err = op.hermiticity_error();
    let scale = op.as_slice().iter().map(|z| z.norm()).fold(T::one(), T::max);
    if err > hermitian_tol::<T>() * scale {
        return Err(Error::Domain(format!("operator is not Hermitian (max |A - A^dag| = {err})")));
    }
    Ok(jacobi(op.as_slice(), op.dim()))
}

/// Jacobi eigen-decomposition of a row-major Hermitian matrix.
pub(crate) fn jacobi<T: Real>(input: &[Cplx<T>], n: usize) -> HermitianEigen<T> {
    debug_assert!(hermiticity_error(input, n) < T::lit(1e-3).max(T::epsilon()));
    let mut a = input.to_vec();
    // Symmetrise so the sweep works on an exactly Hermitian matrix.
    for i in 0..n {
        a[i * n + i] = Cplx::new(a[i * n + i].re, T::zero());
        for j in i + 1..n {
            let m = (a[i * n + j] + a[j * n + i].conj()) * T::lit(0.5);
            a[i * n + j] = m;
            a[j * n + i] = m.conj();
        }
    }
    let mut v = vec![Cplx::<T>::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = Cplx::one();
    }

    let total: T = a.iter().map(|z| z.norm_sqr()).sum();
    let thresh = T::epsilon() * T::epsilon() * total.max(T::min_positive_value());
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += a[i * n + j].norm_sqr();
            }
        }
        if off <= thresh {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (T::lit(2.0) * mag);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                let ph_conj = phase.conj(); // e^{-iφ}
                // A <- A U, columns p and q.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * cs - akq * ph_conj * sn;
                    a[k * n + q] = akp * sn + akq * ph_conj * cs;
                }
                // A <- U† A, rows p and q.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * cs - aqk * phase * sn;
                    a[q * n + k] = apk * sn + aqk * phase * cs;
                }
                a[p * n + q] = Cplx::zero();
                a[q * n + p] = Cplx::zero();
                a[p * n + p] = c(a[p * n + p].re, T::zero());
                a[q * n + q] = c(a[q * n + q].re, T::zero());
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * cs - vkq * ph_conj * sn;
                    v[k * n + q] = vkp * sn + vkq * ph_conj * cs;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[y * n + y].re.partial_cmp(&a[x * n + x].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let mut vectors = vec![Cplx::zero(); n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_k] = v[i * n + old_k];
        }
    }
    HermitianEigen { values, vectors, n }
}
