//! Analyticity-strip width from the exponential tail of a Fourier spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::dealias_cutoff;
use crate::schemes::{SchemeConfig, SchemeKind};

/// Spectral power below this is treated as round-off.
pub const NOISE_FLOOR: f64 = 1e-28;
/// Round-off level relative to the largest mode of a spectrum.
pub const RELATIVE_NOISE_FLOOR: f64 = 1e-26;
pub const MIN_FIT_MODES: usize = 10;
/// RMS misfit of `ln|û_k|²` above which a fit is flagged.
pub const POOR_FIT_RESIDUAL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitQuality {
    Good,
    NegativeDelta,
    PoorFit,
}

impl FitQuality {
    pub fn name(&self) -> &'static str {
        match self {
            FitQuality::Good => "good",
            FitQuality::NegativeDelta => "negative-delta",
            FitQuality::PoorFit => "poor-fit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaFit {
    pub delta: f64,
    /// Coefficient of `ln k`, present when the algebraic prefactor is fitted.
    pub log_coefficient: Option<f64>,
    pub intercept: f64,
    pub residual: f64,
    pub modes: usize,
    pub quality: FitQuality,
}

/// Least squares of `ln P` against `{1, k}` or `{1, k, ln k}`; `δ = −slope/2`.
///
/// `k` is the abscissa the decay rate refers to (an index or a physical
/// wavenumber). Points at or below [`NOISE_FLOOR`] are dropped.
pub fn fit_delta(k: &[f64], power: &[f64], algebraic_term: bool) -> Result<DeltaFit> {
    fit_delta_above(k, power, algebraic_term, NOISE_FLOOR)
}

fn fit_delta_above(k: &[f64], power: &[f64], algebraic_term: bool, floor: f64) -> Result<DeltaFit> {
    if k.len() != power.len() {
        return Err(Error::Usage("wavenumber and power lengths differ".into()));
    }
    let (ks, ys): (Vec<f64>, Vec<f64>) = k
        .iter()
        .zip(power)
        .filter(|(_, &p)| p > floor && p.is_finite())
        .map(|(&k, &p)| (k, p.ln()))
        .unzip();
    if ks.len() < MIN_FIT_MODES {
        return Err(Error::Fit(format!(
            "only {} modes above the noise floor (need {MIN_FIT_MODES})",
            ks.len()
        )));
    }
    if algebraic_term && ks.iter().any(|&k| k <= 0.0) {
        return Err(Error::Fit("the ln k regressor needs positive wavenumbers".into()));
    }
    let mut cols = vec![vec![1.0; ks.len()], ks.clone()];
    if algebraic_term {
        cols.push(ks.iter().map(|k| k.ln()).collect());
    }
    let (beta, residual) = least_squares(&cols, &ys)?;
    let delta = -beta[1] / 2.0;
    let quality = if delta < 0.0 {
        FitQuality::NegativeDelta
    } else if residual > POOR_FIT_RESIDUAL {
        FitQuality::PoorFit
    } else {
        FitQuality::Good
    };
    Ok(DeltaFit {
        delta,
        log_coefficient: beta.get(2).copied(),
        intercept: beta[0],
        residual,
        modes: ks.len(),
        quality,
    })
}

/// Fit over mode indices `k_min..=k_max` of a one-sided spectrum, with abscissa `k · kappa_unit`.
/// Needs at least `2·MIN_FIT_MODES` modes.
pub fn fit_delta_window(
    spectrum: &[f64],
    k_min: usize,
    k_max: usize,
    kappa_unit: f64,
    algebraic_term: bool,
) -> Result<DeltaFit> {
    if k_min >= k_max || k_max >= spectrum.len() {
        return Err(Error::Fit(format!(
            "window [{k_min}, {k_max}] does not fit a spectrum of {} modes",
            spectrum.len()
        )));
    }
    // Adjacent modes are summed in pairs: an exponential tail keeps its decay
    // rate, and a spectrum whose odd modes sit at round-off (or grow out of it)
    // no longer alternates between two levels.
    let (k, p): (Vec<f64>, Vec<f64>) = (k_min..k_max)
        .step_by(2)
        .map(|j| (j as f64 * kappa_unit, spectrum[j] + spectrum[j + 1]))
        .unzip();
    fit_delta_above(&k, &p, algebraic_term, 2.0 * noise_floor(spectrum))
}

/// `window` shrunk to the resolved part of the spectrum: the upper end stops
/// where the spectrum reaches the noise floor and the lower end follows the
/// `max(8, k_max/8)` rule. `None` when too few modes remain.
pub fn resolved_window(spectrum: &[f64], window: (usize, usize)) -> Option<(usize, usize)> {
    let end = usable_end(spectrum)?;
    if end >= window.1 {
        return Some(window);
    }
    let lo = (end / 8).max(8).min(window.0);
    (end + 1 >= lo + 2 * MIN_FIT_MODES).then_some((lo, end))
}

/// Largest of [`NOISE_FLOOR`] and the relative round-off level of `spectrum`.
pub fn noise_floor(spectrum: &[f64]) -> f64 {
    let peak = spectrum.iter().filter(|p| p.is_finite()).fold(0.0f64, |m, &p| m.max(p));
    NOISE_FLOOR.max(RELATIVE_NOISE_FLOOR * peak)
}

/// Last mode above the noise floor before the spectrum first drops to it.
/// Pairs of adjacent modes are tested together so spectra with a parity
/// symmetry (every odd mode zero) are not cut at `k = 1`.
fn usable_end(spectrum: &[f64]) -> Option<usize> {
    let floor = noise_floor(spectrum);
    let above = |k: usize| spectrum.get(k).is_some_and(|p| p.is_finite() && *p > floor);
    let mut last = None;
    for k in 0..spectrum.len() {
        if above(k) {
            last = Some(k);
        } else if !above(k + 1) {
            break;
        }
    }
    last
}

/// Solve `min ||Σ β_j cols_j − y||` by Householder QR; returns `β` and the RMS residual.
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = y.len();
    let p = cols.len();
    // Column scaling keeps the ln k and k regressors comparable.
    let scale: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE))
        .collect();
    let mut a: Vec<Vec<f64>> = cols
        .iter()
        .zip(&scale)
        .map(|(c, s)| c.iter().map(|v| v / s).collect())
        .collect();
    let mut b = y.to_vec();
    for j in 0..p {
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Fit("regressors are linearly dependent".into()));
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>();
        if vn > 0.0 {
            for col in a.iter_mut().skip(j) {
                let d = 2.0 * v.iter().zip(&col[j..]).map(|(x, y)| x * y).sum::<f64>() / vn;
                for (c, x) in col[j..].iter_mut().zip(&v) {
                    *c -= d * x;
                }
            }
            let d = 2.0 * v.iter().zip(&b[j..]).map(|(x, y)| x * y).sum::<f64>() / vn;
            for (c, x) in b[j..].iter_mut().zip(&v) {
                *c -= d * x;
            }
        }
        if a[j][j].abs() < 1e-13 * norm.max(1.0) {
            return Err(Error::Fit("regressors are linearly dependent".into()));
        }
    }
    let mut beta = vec![0.0; p];
    for j in (0..p).rev() {
        let s: f64 = (j + 1..p).map(|i| a[i][j] * beta[i]).sum();
        beta[j] = (b[j] - s) / a[j][j];
    }
    let residual = if n > p {
        (b[p..].iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt()
    } else {
        0.0
    };
    for (bj, s) in beta.iter_mut().zip(&scale) {
        *bj /= s;
    }
    Ok((beta, residual))
}

/// Fit window `(k_min, k_max)` in mode indices for a scheme on bandwidth `n`.
///
/// `k_max` is the last index before any damping acts: the dealiasing cutoff
/// for dealiased runs, the end of the unit plateau of the kernel for SR/SP,
/// and the SVV activation index. `k_min = max(8, k_max/8)`.
pub fn select_fit_window(scheme: &SchemeConfig, n: usize) -> Result<(usize, usize)> {
    let mut k_max = match scheme.kind {
        SchemeKind::Pps => n,
        SchemeKind::Sr | SchemeKind::Sp => {
            let mult = scheme.kernel.coeffs(n)?;
            mult.iter().take_while(|&&m| m >= 1.0 - 1e-12).count().saturating_sub(1)
        }
        SchemeKind::Svv => (scheme.svv_cutoff.floor() as usize).min(n),
    };
    if scheme.dealias {
        k_max = k_max.min(dealias_cutoff(n));
    }
    let k_min = (k_max / 8).max(8);
    if k_max + 1 < k_min + 2 * MIN_FIT_MODES {
        return Err(Error::Fit(format!(
            "fit window [{k_min}, {k_max}] holds fewer than {} modes",
            2 * MIN_FIT_MODES
        )));
    }
    Ok((k_min, k_max))
}

/// Modes summed per bin when testing where a spectrum stops decaying.
pub const DECAY_BIN: usize = 16;

/// Width of the part of `k_min..=k_max` where the spectrum still decays
/// toward the noise floor. Power is summed over bins of [`DECAY_BIN`] modes;
/// the range ends at the first bin that reaches the floor or holds at least
/// as much power as the bin before it (a thermalised or rising tail).
pub fn usable_fit_range(spectrum: &[f64], k_min: usize, k_max: usize) -> usize {
    let floor = noise_floor(spectrum);
    let hi = k_max.min(spectrum.len().saturating_sub(1));
    let mut end = None;
    let mut prev = f64::INFINITY;
    let mut a = k_min;
    while a + DECAY_BIN <= hi + 1 {
        let bin: f64 = spectrum[a..a + DECAY_BIN].iter().sum();
        if !(bin > DECAY_BIN as f64 * floor) || bin >= prev {
            break;
        }
        prev = bin;
        end = Some(a + DECAY_BIN - 1);
        a += DECAY_BIN;
    }
    end.map_or(0, |e| e + 1 - k_min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaPoint {
    pub t: f64,
    pub delta: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub residual: f64,
    pub quality: FitQuality,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extrapolation {
    /// `δ(t) ≈ a + b t`.
    Linear,
    /// `δ(t) ≈ c (t* − t)^p`, fitted as a line through `δ^{1/p}`.
    Power(f64),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DeltaSeries {
    pub points: Vec<DeltaPoint>,
    pub t_star_estimate: Option<f64>,
}

impl DeltaSeries {
    pub fn push(&mut self, p: DeltaPoint) {
        self.points.push(p);
    }

    /// Extrapolate to `δ = 0` using the points with `t` in `[t0, t1]` and
    /// a positive, unflagged fit. Stores and returns the estimate.
    pub fn extrapolate(&mut self, t0: f64, t1: f64, method: Extrapolation) -> Result<f64> {
        let (t, d): (Vec<f64>, Vec<f64>) = self
            .points
            .iter()
            .filter(|p| p.t >= t0 && p.t <= t1 && p.quality == FitQuality::Good)
            .map(|p| (p.t, p.delta))
            .unzip();
        let ts = extrapolate_t_star(&t, &d, method)?;
        self.t_star_estimate = Some(ts);
        Ok(ts)
    }

    /// `δ` interpolated linearly in `t`; `None` outside the recorded range.
    pub fn delta_at(&self, t: f64) -> Option<f64> {
        let p = &self.points;
        if p.is_empty() || t < p[0].t || t > p[p.len() - 1].t {
            return None;
        }
        let i = p.partition_point(|q| q.t < t);
        if p[i].t == t || i == 0 {
            return Some(p[i].delta);
        }
        let (a, b) = (p[i - 1], p[i]);
        let w = (t - a.t) / (b.t - a.t);
        Some((1.0 - w) * a.delta + w * b.delta)
    }
}

/// Time at which the fitted `δ(t)` reaches zero.
pub fn extrapolate_t_star(t: &[f64], delta: &[f64], method: Extrapolation) -> Result<f64> {
    if t.len() != delta.len() || t.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points to extrapolate, got {}", t.len())));
    }
    let y: Vec<f64> = match method {
        Extrapolation::Linear => delta.to_vec(),
        Extrapolation::Power(p) => {
            if !(p > 0.0) {
                return Err(Error::Fit(format!("power must be positive, got {p}")));
            }
            if delta.iter().any(|&d| !(d > 0.0)) {
                return Err(Error::Fit("power extrapolation needs positive δ".into()));
            }
            delta.iter().map(|d| d.powf(1.0 / p)).collect()
        }
    };
    let (beta, _) = least_squares(&[vec![1.0; t.len()], t.to_vec()], &y)?;
    if !(beta[1] < 0.0) {
        return Err(Error::Fit(format!("δ(t) is not decreasing (slope {:e})", beta[1])));
    }
    Ok(-beta[0] / beta[1])
}
