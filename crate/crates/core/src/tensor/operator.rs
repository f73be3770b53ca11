use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::layout::SubsystemLayout;
use crate::error::{Error, Result};
use crate::scalar::{cr, Cplx, Real};

/// Dense complex operator on a tensor-product space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator<T: Real> {
    layout: SubsystemLayout,
    data: Vec<Cplx<T>>,
}

impl<T: Real> QOperator<T> {
    pub fn zeros(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self { layout, data: vec![Cplx::zero(); n * n] }
    }

    pub fn identity(layout: SubsystemLayout) -> Self {
        let mut out = Self::zeros(layout);
        let n = out.dim();
        for i in 0..n {
            out.data[i * n + i] = Cplx::one();
        }
        out
    }

    pub fn from_fn(layout: SubsystemLayout, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let n = layout.total_dim();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { layout, data }
    }

    /// Wrap row-major data; `data.len()` must be `total_dim²`.
    pub fn from_vec(layout: SubsystemLayout, data: Vec<Cplx<T>>) -> Result<Self> {
        let n = layout.total_dim();
        if data.len() != n * n {
            return Err(Error::InvalidDimension(format!("{} entries for a {n}x{n} operator", data.len())));
        }
        Ok(Self { layout, data })
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(layout: SubsystemLayout, diag: &[T]) -> Result<Self> {
        let n = layout.total_dim();
        if diag.len() != n {
            return Err(Error::InvalidDimension(format!("{} diagonal entries for dim {n}", diag.len())));
        }
        let mut out = Self::zeros(layout);
        for (i, &d) in diag.iter().enumerate() {
            out.data[i * n + i] = cr(d);
        }
        Ok(out)
    }

    /// Bosonic (or two-level, for `n_levels == 2`) annihilation operator.
    pub fn annihilation(n_levels: usize) -> Result<Self> {
        let layout = SubsystemLayout::single(n_levels)?;
        let mut out = Self::zeros(layout);
        for m in 0..n_levels - 1 {
            out[(m, m + 1)] = cr(T::lit(((m + 1) as f64).sqrt()));
        }
        Ok(out)
    }

    /// Number operator `a†a` on `n_levels` levels.
    pub fn number(n_levels: usize) -> Result<Self> {
        let levels: Vec<T> = (0..n_levels).map(|m| T::lit(m as f64)).collect();
        Self::diagonal(SubsystemLayout::single(n_levels)?, &levels)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn as_slice(&self) -> &[Cplx<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Cplx<T>] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Cplx<T>> {
        self.data
    }

    /// Same entries, reinterpreted under another layout of equal total dimension.
    pub fn with_layout(self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "cannot relabel dim {} as {layout}",
                self.dim()
            )));
        }
        Ok(Self { layout, data: self.data })
    }

    /// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` placed at `site`.
    pub fn embed(op: &QOperator<T>, site: usize, layout: &SubsystemLayout) -> Result<Self> {
        SparseOperator::from_dense(op).embed(site, layout).map(|s| s.to_dense())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        Self::from_fn(self.layout.clone(), |i, j| self.data[j * n + i].conj())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension(format!(
                "operator dims {} and {} differ",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.dim();
        let mut out = Self::zeros(self.layout.clone());
        for i in 0..n {
            let row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: Cplx<T>, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        Ok(Self { layout: self.layout.clone(), data })
    }

    pub fn scale(&self, alpha: Cplx<T>) -> Self {
        Self { layout: self.layout.clone(), data: self.data.iter().map(|a| a * alpha).collect() }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.multiply(other)?;
        let ba = other.multiply(self)?;
        ab.add_scaled(-Cplx::one(), &ba)
    }

    pub fn trace(&self) -> Cplx<T> {
        let n = self.dim();
        (0..n).map(|i| self.data[i * n + i]).fold(Cplx::zero(), |a, b| a + b)
    }

    /// Kronecker product; the layouts are concatenated.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let mut dims = self.layout.dims().to_vec();
        dims.extend_from_slice(other.layout.dims());
        let layout = SubsystemLayout::new(dims)?;
        let (na, nb) = (self.dim(), other.dim());
        Ok(Self::from_fn(layout, |i, j| {
            self.data[(i / nb) * na + j / nb] * other.data[(i % nb) * nb + j % nb]
        }))
    }

    /// Largest elementwise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest elementwise modulus of `self − self†`.
    pub fn hermiticity_error(&self) -> T {
        hermiticity_error(&self.data, self.dim())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::InvalidDimension(format!("vector of length {} for dim {n}", v.len())));
        }
        Ok((0..n)
            .map(|i| self.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).fold(Cplx::zero(), |s, x| s + x))
            .collect())
    }
}

pub(crate) fn hermiticity_error<T: Real>(data: &[Cplx<T>], n: usize) -> T {
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            let d = (data[i * n + j] - data[j * n + i].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

impl<T: Real> Index<(usize, usize)> for QOperator<T> {
    type Output = Cplx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx<T> {
        &self.data[i * self.dim() + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for QOperator<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx<T> {
        let n = self.dim();
        &mut self.data[i * n + j]
    }
}

/// Compressed-sparse-row operator; used for the Hamiltonian and collapse
/// operators, which have a handful of entries per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator<T: Real> {
    layout: SubsystemLayout,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Cplx<T>>,
}

impl<T: Real> SparseOperator<T> {
    pub fn zeros(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self { layout, indptr: vec![0; n + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self {
            layout,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            values: vec![Cplx::one(); n],
        }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed and
    /// explicit zeros dropped.
    pub fn from_triplets(layout: SubsystemLayout, mut trip: Vec<(usize, usize, Cplx<T>)>) -> Result<Self> {
        let n = layout.total_dim();
        if let Some(&(i, j, _)) = trip.iter().find(|&&(i, j, _)| i >= n || j >= n) {
            return Err(Error::InvalidDimension(format!("entry ({i}, {j}) outside dim {n}")));
        }
        trip.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0; n + 1];
        let mut indices = Vec::with_capacity(trip.len());
        let mut values: Vec<Cplx<T>> = Vec::with_capacity(trip.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(trip.len());
        for (i, j, v) in trip {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                values.push(v);
                rows.push(i);
                last = Some((i, j));
            }
        }
        let mut keep_idx = Vec::with_capacity(indices.len());
        let mut keep_val = Vec::with_capacity(values.len());
        for ((r, j), v) in rows.into_iter().zip(indices).zip(values) {
            if !v.is_zero() {
                indptr[r + 1] += 1;
                keep_idx.push(j);
                keep_val.push(v);
            }
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        Ok(Self { layout, indptr, indices: keep_idx, values: keep_val })
    }

    pub fn from_dense(op: &QOperator<T>) -> Self {
        let n = op.dim();
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = op[(i, j)];
                if !v.is_zero() {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(op.layout().clone(), trip).expect("indices in range")
    }

    pub fn annihilation(n_levels: usize) -> Result<Self> {
        QOperator::annihilation(n_levels).map(|op| Self::from_dense(&op))
    }

    pub fn to_dense(&self) -> QOperator<T> {
        let mut out = QOperator::zeros(self.layout.clone());
        for (i, j, v) in self.iter() {
            out[(i, j)] += v;
        }
        out
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Cplx<T>)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Cplx<T>)> + '_ {
        (0..self.dim()).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    /// Embed a single-subsystem operator (this one) at `site` of `layout`.
    pub fn embed(&self, site: usize, layout: &SubsystemLayout) -> Result<Self> {
        if site >= layout.n_sites() {
            return Err(Error::InvalidDimension(format!("site {site} outside layout {layout}")));
        }
        if self.dim() != layout.dims()[site] {
            return Err(Error::InvalidDimension(format!(
                "operator of dim {} cannot sit on a {}-level subsystem",
                self.dim(),
                layout.dims()[site]
            )));
        }
        let stride = layout.stride(site);
        let d = layout.dims()[site];
        let n = layout.total_dim();
        let mut trip = Vec::with_capacity(self.nnz() * n / d);
        for i in 0..n {
            let li = (i / stride) % d;
            let base = i - li * stride;
            for (lj, v) in self.row(li) {
                trip.push((i, base + lj * stride, v));
            }
        }
        Self::from_triplets(layout.clone(), trip)
    }

    pub fn adjoint(&self) -> Self {
        let trip = self.iter().map(|(i, j, v)| (j, i, v.conj())).collect();
        Self::from_triplets(self.layout.clone(), trip).expect("indices in range")
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension(format!("operator dims {} and {} differ", self.dim(), other.dim())));
        }
        let mut trip = Vec::new();
        for i in 0..self.dim() {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    trip.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.layout.clone(), trip)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: Cplx<T>, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension(format!("operator dims {} and {} differ", self.dim(), other.dim())));
        }
        let trip = self.iter().chain(other.iter().map(|(i, j, v)| (i, j, alpha * v))).collect();
        Self::from_triplets(self.layout.clone(), trip)
    }

    pub fn scale(&self, alpha: Cplx<T>) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    pub fn trace(&self) -> Cplx<T> {
        self.iter().filter(|&(i, j, _)| i == j).fold(Cplx::zero(), |a, (_, _, v)| a + v)
    }

    /// Diagonal entries (zero where absent).
    pub fn diagonal(&self) -> Vec<Cplx<T>> {
        let mut d = vec![Cplx::zero(); self.dim()];
        for (i, j, v) in self.iter() {
            if i == j {
                d[i] += v;
            }
        }
        d
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(i, j, _)| i == j)
    }

    /// Largest number of stored entries in any row.
    pub fn max_row_nnz(&self) -> usize {
        (0..self.dim()).map(|i| self.indptr[i + 1] - self.indptr[i]).max().unwrap_or(0)
    }

    pub fn hermiticity_error(&self) -> T {
        let diff = self.add_scaled(-Cplx::one(), &self.adjoint()).expect("same dim");
        diff.values.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }
}
