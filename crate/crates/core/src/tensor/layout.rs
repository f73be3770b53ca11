use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five modes of the coupled system.
///
/// Their position in this enum is the tensor-product order used everywhere:
/// `[QD1, QD2, plasmon, cavity1, cavity2]`, with the last factor varying
/// fastest in a flattened basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    Qd1,
    Qd2,
    Plasmon,
    Cavity1,
    Cavity2,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Qd1, Mode::Qd2, Mode::Plasmon, Mode::Cavity1, Mode::Cavity2];

    /// Site index of the mode in the canonical layout.
    pub fn site(self) -> usize {
        self as usize
    }

    pub fn qd(i: usize) -> Mode {
        [Mode::Qd1, Mode::Qd2][i]
    }

    pub fn cavity(i: usize) -> Mode {
        [Mode::Cavity1, Mode::Cavity2][i]
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Qd1 => "qd1",
            Mode::Qd2 => "qd2",
            Mode::Plasmon => "plasmon",
            Mode::Cavity1 => "cav1",
            Mode::Cavity2 => "cav2",
        };
        f.write_str(s)
    }
}

/// Level counts of each tensor factor, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    total_dim: usize,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("layout needs at least one subsystem".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(format!("subsystem with {d} levels (need >= 2)")));
        }
        let total_dim = dims.iter().product();
        Ok(Self { dims, total_dim })
    }

    /// Single subsystem with `n` levels.
    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Canonical two-QD / plasmon / two-cavity layout.
    pub fn cqed(n_pl_levels: usize, n_ph_levels: usize) -> Result<Self> {
        Self::new(vec![2, 2, n_pl_levels, n_ph_levels, n_ph_levels])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Whether this is the five-mode layout of the coupled system.
    pub fn is_cqed(&self) -> bool {
        self.dims.len() == 5 && self.dims[0] == 2 && self.dims[1] == 2 && self.dims[3] == self.dims[4]
    }

    /// Flattened-index stride of `site`.
    pub fn stride(&self, site: usize) -> usize {
        self.dims[site + 1..].iter().product()
    }

    /// Level of `site` in flattened basis state `index`.
    #[inline]
    pub fn level(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.dims[site]
    }

    /// Per-site levels of a flattened basis index.
    pub fn decompose(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Flattened basis index from per-site levels.
    pub fn compose(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.dims.len() {
            return Err(Error::InvalidDimension(format!(
                "expected {} levels, got {}",
                self.dims.len(),
                levels.len()
            )));
        }
        let mut idx = 0;
        for (&l, &d) in levels.iter().zip(&self.dims) {
            if l >= d {
                return Err(Error::InvalidDimension(format!("level {l} out of range for {d}-level subsystem")));
            }
            idx = idx * d + l;
        }
        Ok(idx)
    }

    /// Layout of the kept sites, in their original order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        Self::new(keep.iter().map(|&s| self.dims[s]).collect())
    }
}

impl fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("x"))
    }
}
