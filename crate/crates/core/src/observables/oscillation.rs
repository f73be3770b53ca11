use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Peaks, mean period and modulation depth of a sampled signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// Mean spacing of consecutive peaks; `None` with fewer than two peaks.
    pub mean_period: Option<f64>,
    /// `(max − min)/(max + min)` over the series.
    pub modulation_k: f64,
}

/// Default peak prominence: this fraction of the series range.
pub const DEFAULT_PROMINENCE_FRACTION: f64 = 0.05;

/// Local maxima whose topographic prominence is at least `prominence`.
///
/// A flat-topped maximum is reported at the middle of its plateau.
pub fn analyze_oscillations(series: &[(f64, f64)], prominence: f64) -> Result<OscillationReport> {
    if series.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 samples, got {}", series.len())));
    }
    let v: Vec<f64> = series.iter().map(|p| p.1).collect();
    let n = v.len();

    let mut candidates = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if v[i] > v[i - 1] {
            let mut j = i;
            while j + 1 < n && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < n && v[j + 1] < v[i] {
                candidates.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    let mut peak_times = Vec::new();
    let mut peak_values = Vec::new();
    for &p in &candidates {
        let h = v[p];
        let mut left_min = h;
        for k in (0..p).rev() {
            if v[k] > h {
                break;
            }
            left_min = left_min.min(v[k]);
        }
        let mut right_min = h;
        for &x in &v[p + 1..] {
            if x > h {
                break;
            }
            right_min = right_min.min(x);
        }
        let prom = h - left_min.max(right_min);
        if prom >= prominence && prom > 0.0 {
            peak_times.push(series[p].0);
            peak_values.push(h);
        }
    }

    let mean_period = (peak_times.len() >= 2)
        .then(|| (peak_times[peak_times.len() - 1] - peak_times[0]) / (peak_times.len() - 1) as f64);
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let modulation_k = if max + min > 0.0 { ((max - min) / (max + min)).clamp(0.0, 1.0) } else { 0.0 };
    Ok(OscillationReport { peak_times, peak_values, mean_period, modulation_k })
}

/// [`analyze_oscillations`] with the prominence set to 5% of the series range.
pub fn analyze_oscillations_default(series: &[(f64, f64)]) -> Result<OscillationReport> {
    let max = series.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let min = series.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    analyze_oscillations(series, DEFAULT_PROMINENCE_FRACTION * (max - min))
}
