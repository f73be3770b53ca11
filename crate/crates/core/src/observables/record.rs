use super::entanglement::{singlet_overlap, wootters_lambdas};
use super::reduce::partial_trace_op;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::{DensityMatrix, Mode};

/// Population floor below which `g²` is reported as undefined.
pub const POPULATION_FLOOR: f64 = 1e-6;

/// Everything recorded at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRecord {
    pub n_qd: [f64; 2],
    pub n_cav: [f64; 2],
    pub n_pl: f64,
    pub n_total: f64,
    /// `g²₁₁, g²₂₂, g²₁₂`; `None` when the normalising populations are below the floor.
    pub g2: [Option<f64>; 3],
    pub concurrence: f64,
    /// Photon-pair concurrence, only for two photon levels per cavity.
    pub concurrence_ph: Option<f64>,
    pub concurrence_tot: Option<f64>,
    /// `⟨Ψ⁻|ρ_ph|Ψ⁻⟩` of the cavity pair.
    pub fidelity_sq: f64,
}

impl ObservableRecord {
    pub fn g2_11(&self) -> Option<f64> {
        self.g2[0]
    }
    pub fn g2_22(&self) -> Option<f64> {
        self.g2[1]
    }
    pub fn g2_12(&self) -> Option<f64> {
        self.g2[2]
    }
    pub fn fidelity(&self) -> f64 {
        self.fidelity_sq.sqrt()
    }
}

fn require_cqed<T: Real>(rho: &DensityMatrix<T>) -> Result<()> {
    if rho.layout().is_cqed() {
        Ok(())
    } else {
        Err(Error::UnsupportedLayout(format!("expected the five-mode layout, got {}", rho.layout())))
    }
}

/// Per-basis-state level of `mode`.
fn levels<T: Real>(rho: &DensityMatrix<T>, mode: Mode) -> impl Iterator<Item = usize> + '_ {
    let l = rho.layout();
    (0..l.total_dim()).map(move |i| l.level(i, mode.site()))
}

/// `Tr(n̂_mode ρ)`.
pub fn population<T: Real>(rho: &DensityMatrix<T>, mode: Mode) -> Result<f64> {
    require_cqed(rho)?;
    let n = rho.dim();
    let data = rho.as_slice();
    let mut re = T::zero();
    let mut im = T::zero();
    for (i, lvl) in levels(rho, mode).enumerate() {
        if lvl > 0 {
            let w = T::lit(lvl as f64);
            re += w * data[i * n + i].re;
            im += w * data[i * n + i].im;
        }
    }
    debug_assert!(im.abs().as_f64() < 1e-10, "population has imaginary part {im}");
    Ok(re.as_f64())
}

/// Un-normalised same-time correlation `Tr(cᵢ†cⱼ†cⱼcᵢρ)`, `i, j ∈ {1, 2}`.
pub fn g2_numerator<T: Real>(rho: &DensityMatrix<T>, i: usize, j: usize) -> Result<f64> {
    require_cqed(rho)?;
    if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
        return Err(Error::InvalidArgument(format!("cavity indices must be 1 or 2 (got {i}, {j})")));
    }
    let layout = rho.layout();
    let (si, sj) = (Mode::cavity(i - 1).site(), Mode::cavity(j - 1).site());
    let n = rho.dim();
    let data = rho.as_slice();
    let mut acc = T::zero();
    for k in 0..n {
        let (li, lj) = (layout.level(k, si), layout.level(k, sj));
        let w = if i == j { li * li.saturating_sub(1) } else { li * lj };
        if w > 0 {
            acc += T::lit(w as f64) * data[k * n + k].re;
        }
    }
    Ok(acc.as_f64())
}

/// Normalised `g²ᵢⱼ(t, τ = 0)`; `None` when `nᵢnⱼ` is below [`POPULATION_FLOOR`].
pub fn g2_same_time<T: Real>(rho: &DensityMatrix<T>, i: usize, j: usize) -> Result<Option<f64>> {
    let num = g2_numerator(rho, i, j)?;
    let ni = population(rho, Mode::cavity(i - 1))?;
    let nj = population(rho, Mode::cavity(j - 1))?;
    Ok(normalise_g2(num, ni, nj))
}

fn normalise_g2(num: f64, ni: f64, nj: f64) -> Option<f64> {
    let den = ni * nj;
    if den < POPULATION_FLOOR {
        None
    } else {
        Some(num / den)
    }
}

/// Evaluate every recorded observable on a five-mode state.
pub fn record<T: Real>(rho: &DensityMatrix<T>) -> Result<ObservableRecord> {
    require_cqed(rho)?;
    let layout = rho.layout();
    let n = rho.dim();
    let data = rho.as_slice();
    let sites: Vec<usize> = Mode::ALL.iter().map(|m| m.site()).collect();

    let mut pops = [0.0f64; 5];
    let mut g2num = [0.0f64; 3];
    for k in 0..n {
        let p = data[k * n + k].re.as_f64();
        if p == 0.0 {
            continue;
        }
        let lv: Vec<usize> = sites.iter().map(|&s| layout.level(k, s)).collect();
        for (acc, &l) in pops.iter_mut().zip(&lv) {
            *acc += l as f64 * p;
        }
        let (c1, c2) = (lv[3], lv[4]);
        g2num[0] += (c1 * c1.saturating_sub(1)) as f64 * p;
        g2num[1] += (c2 * c2.saturating_sub(1)) as f64 * p;
        g2num[2] += (c1 * c2) as f64 * p;
    }
    let [q1, q2, pl, c1, c2] = pops;

    let qd = partial_trace_op(rho.op(), &[Mode::Qd1.site(), Mode::Qd2.site()])?;
    let concurrence = concurrence_of(qd.as_slice());
    let ph = partial_trace_op(rho.op(), &[Mode::Cavity1.site(), Mode::Cavity2.site()])?;
    let n_ph = layout.dims()[Mode::Cavity1.site()];
    let fidelity_sq = singlet_overlap(ph.as_slice(), n_ph).as_f64();
    let concurrence_ph = (n_ph == 2).then(|| concurrence_of(ph.as_slice()));

    Ok(ObservableRecord {
        n_qd: [q1, q2],
        n_cav: [c1, c2],
        n_pl: pl,
        n_total: q1 + q2 + pl + c1 + c2,
        g2: [normalise_g2(g2num[0], c1, c1), normalise_g2(g2num[1], c2, c2), normalise_g2(g2num[2], c1, c2)],
        concurrence,
        concurrence_ph,
        concurrence_tot: concurrence_ph.map(|cp| concurrence + cp),
        fidelity_sq,
    })
}

fn concurrence_of<T: Real>(rho4: &[crate::scalar::Cplx<T>]) -> f64 {
    let l = wootters_lambdas(rho4);
    (l[0] - l[1] - l[2] - l[3]).max(T::zero()).min(T::one()).as_f64()
}
