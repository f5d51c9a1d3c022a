//! Spectral multipliers `K̂(k)` for the mollifying kernels, the SVV activation
//! profile, and the `(α, γ) → (m, τ)` parameter law.
//!
//! Every multiplier vector has length `N+1` and is indexed by `|k|` (Fourier)
//! or polynomial degree (Chebyshev).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelFamily {
    /// `K̂ ≡ 1`; SR and SP then reduce to the plain pseudospectral scheme.
    Identity,
    FejerKorovkin,
    Jackson,
    JacksonDlvp,
    /// Trapezoid with plateau `n = r·N^γ` and ramp `p = (1-r)·N^γ`.
    DeLaValleePoussin { plateau: f64 },
    /// Exponential filter `exp((k/N)^p / ((k/N)² - 1))` with order `p = N^γ`.
    Tt05,
    /// `exp(-10^{-β}(k-m)^{2p})` beyond `m = N^γ`.
    Mmo78 { beta: f64, p: f64 },
    /// Gaussian-regularised Shannon kernel of order `r`.
    Rsk { order: f64 },
}

pub const DLVP_DEFAULT_PLATEAU: f64 = 0.5;
pub const DLVP_HL_PLATEAU: f64 = 0.92;

impl KernelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Identity => "identity",
            KernelFamily::FejerKorovkin => "feko",
            KernelFamily::Jackson => "jackson",
            KernelFamily::JacksonDlvp => "jdlvp",
            KernelFamily::DeLaValleePoussin { .. } => "dlvp",
            KernelFamily::Tt05 => "tt05",
            KernelFamily::Mmo78 { .. } => "mmo78",
            KernelFamily::Rsk { .. } => "rsk",
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            KernelFamily::FejerKorovkin | KernelFamily::Jackson | KernelFamily::JacksonDlvp
        )
    }

    pub const NAMES: [&'static str; 8] = [
        "identity", "feko", "jackson", "jdlvp", "dlvp", "tt05", "mmo78", "rsk",
    ];
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a family name with default extra parameters.
impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "identity" | "none" => KernelFamily::Identity,
            "feko" | "fejer-korovkin" | "fejerkorovkin" => KernelFamily::FejerKorovkin,
            "jackson" | "jksn" => KernelFamily::Jackson,
            "jdlvp" | "jackson-dlvp" => KernelFamily::JacksonDlvp,
            "dlvp" | "de-la-vallee-poussin" => KernelFamily::DeLaValleePoussin {
                plateau: DLVP_DEFAULT_PLATEAU,
            },
            "tt05" => KernelFamily::Tt05,
            "mmo78" => KernelFamily::Mmo78 { beta: 2.5, p: 1.0 },
            "rsk" => KernelFamily::Rsk { order: 1.5 },
            other => {
                return Err(Error::Parameter(format!(
                    "unknown kernel family `{other}` (expected one of {})",
                    KernelFamily::NAMES.join(", ")
                )))
            }
        })
    }
}

/// A kernel family with the exponents of the parameter law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub alpha: f64,
    pub gamma: f64,
}

/// Kernel bandwidth `m = N^γ` and relaxation time `τ = N^{-α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams {
    pub m: f64,
    pub tau: f64,
}

pub fn relaxation_params(n: usize, alpha: f64, gamma: f64) -> Result<RelaxationParams> {
    if n < 2 {
        return Err(Error::Parameter(format!("bandwidth N must be >= 2, got {n}")));
    }
    check_gamma(gamma)?;
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    let nf = n as f64;
    Ok(RelaxationParams {
        m: nf.powf(gamma),
        tau: nf.powf(-alpha),
    })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Parameter(format!(
            "gamma must lie strictly inside (0,1), got {gamma}"
        )));
    }
    Ok(())
}

impl KernelSpec {
    pub fn new(family: KernelFamily, alpha: f64, gamma: f64) -> Self {
        KernelSpec {
            family,
            alpha,
            gamma,
        }
    }

    pub fn identity() -> Self {
        KernelSpec::new(KernelFamily::Identity, 0.0, 0.5)
    }

    pub fn relaxation(&self, n: usize) -> Result<RelaxationParams> {
        relaxation_params(n, self.alpha, self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma(self.gamma)?;
        match self.family {
            KernelFamily::DeLaValleePoussin { plateau } if !(plateau > 0.0 && plateau < 1.0) => {
                Err(Error::Parameter(format!(
                    "DLVP plateau fraction must lie in (0,1), got {plateau}"
                )))
            }
            KernelFamily::Mmo78 { beta, p } if !beta.is_finite() || !(p > 0.0) => Err(
                Error::Parameter(format!("MMO78 needs finite beta and p > 0, got ({beta}, {p})")),
            ),
            KernelFamily::Rsk { order } if !(order > 0.0) => Err(Error::Parameter(format!(
                "RSK order must be positive, got {order}"
            ))),
            _ => Ok(()),
        }
    }

    /// Multipliers `K̂(k)` for `k = 0..=N`.
    pub fn coeffs(&self, n: usize) -> Result<Vec<f64>> {
        kernel_coeffs(self, n)
    }

    /// Last index where the multiplier equals one, when the family has a plateau.
    pub fn plateau_end(&self, n: usize) -> Result<Option<usize>> {
        let c = self.coeffs(n)?;
        Ok(match self.family {
            KernelFamily::Identity | KernelFamily::DeLaValleePoussin { .. } | KernelFamily::Mmo78 { .. } => {
                c.iter().rposition(|&v| v == 1.0)
            }
            _ => None,
        })
    }
}

pub fn kernel_coeffs(spec: &KernelSpec, n: usize) -> Result<Vec<f64>> {
    if spec.family == KernelFamily::Identity {
        return Ok(vec![1.0; n + 1]);
    }
    spec.validate()?;
    let mgamma = relaxation_params(n, spec.alpha, spec.gamma)?.m;
    let ks = 0..=n;
    let out = match spec.family {
        KernelFamily::Identity => unreachable!(),
        KernelFamily::FejerKorovkin => {
            // Integer bandwidth keeps the kernel positive in real space.
            let m = mgamma.floor();
            let mp2 = m + 2.0;
            if mp2 <= 1.0 {
                return Err(Error::Parameter(format!(
                    "Fejér–Korovkin needs m+2 > 1, got m={m}"
                )));
            }
            let cot = 1.0 / (std::f64::consts::PI / mp2).tan();
            ks.map(|k| {
                let k = k as f64;
                if k > m {
                    0.0
                } else {
                    let arg = k * std::f64::consts::PI / mp2;
                    (1.0 - k / mp2) * arg.cos() + cot * arg.sin() / mp2
                }
            })
            .collect()
        }
        KernelFamily::Jackson => {
            // Degree 2m-2 is matched to N^γ.
            let m = (mgamma / 2.0).floor() + 1.0;
            let c = 2.0 * m * (2.0 * m * m + 1.0);
            ks.map(|k| {
                let k = k as f64;
                if k <= m {
                    (3.0 * k * k * k - 6.0 * m * k * k - 3.0 * k + 4.0 * m * m * m + 2.0 * m) / c
                } else if k <= 2.0 * m - 2.0 {
                    (-k * k * k + 6.0 * m * k * k - (12.0 * m * m - 1.0) * k + 8.0 * m * m * m
                        - 2.0 * m)
                        / c
                } else {
                    0.0
                }
            })
            .collect()
        }
        KernelFamily::JacksonDlvp => {
            // Degree 2m-1 is matched to N^γ.
            let m = ((mgamma + 1.0) / 2.0).floor().max(1.0);
            ks.map(|k| {
                let q = k as f64 / m;
                if q <= 1.0 {
                    1.0 - 1.5 * q * q + 0.75 * q * q * q
                } else if k as f64 <= 2.0 * m - 1.0 {
                    0.25 * (2.0 - q).powi(3)
                } else {
                    0.0
                }
            })
            .collect()
        }
        KernelFamily::DeLaValleePoussin { plateau } => {
            dlvp_coeffs(n, plateau * mgamma, (1.0 - plateau) * mgamma)
        }
        KernelFamily::Tt05 => {
            let p = mgamma;
            let nf = n as f64;
            ks.map(|k| {
                if k >= n {
                    0.0
                } else {
                    let q = k as f64 / nf;
                    (q.powf(p) / (q * q - 1.0)).exp()
                }
            })
            .collect()
        }
        KernelFamily::Mmo78 { beta, p } => {
            let xi = 10f64.powf(-beta);
            ks.map(|k| {
                let k = k as f64;
                if k <= mgamma {
                    1.0
                } else {
                    (-xi * (k - mgamma).powf(2.0 * p)).exp()
                }
            })
            .collect()
        }
        KernelFamily::Rsk { order } => {
            let delta = (n as f64).powf(-spec.gamma);
            let sigma = order * delta;
            let s = sigma / std::f64::consts::SQRT_2;
            let edge = std::f64::consts::PI / delta;
            // Rescaled so the mean passes through unchanged.
            let mass = libm::erf(s * edge);
            ks.map(|k| {
                let k = k as f64;
                0.5 * (libm::erf(s * (edge - k)) + libm::erf(s * (edge + k))) / mass
            })
            .collect()
        }
    };
    Ok(out)
}

/// de La Vallée Poussin trapezoid with plateau end `n_plateau` and ramp width `p`.
pub fn dlvp_coeffs(n: usize, n_plateau: f64, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let k = k as f64;
            if k <= n_plateau {
                1.0
            } else if k >= n_plateau + p {
                0.0
            } else {
                (n_plateau + p - k) / p
            }
        })
        .collect()
}

/// SVV activation profile `Q̂(k) = exp(-(k-N)²/(k-M)²)` for `k > M`, zero otherwise.
pub fn svv_q_coeffs(n: usize, cutoff: f64) -> Result<Vec<f64>> {
    let nf = n as f64;
    if !(cutoff > 0.0 && cutoff < nf) {
        return Err(Error::Parameter(format!(
            "SVV cutoff M must satisfy 0 < M < N={n}, got {cutoff}"
        )));
    }
    Ok((0..=n)
        .map(|k| {
            let k = k as f64;
            if k > cutoff {
                let a = k - nf;
                let b = k - cutoff;
                (-(a * a) / (b * b)).exp()
            } else {
                0.0
            }
        })
        .collect())
}

/// Real-space kernel `K(θ) = Σ_{|k|≤N} K̂(k) e^{ikθ}` on `points` equispaced θ ∈ [0, 2π).
pub fn real_space_profile(multipliers: &[f64], points: usize) -> Result<Vec<f64>> {
    let n = multipliers.len().saturating_sub(1);
    if points < 2 * n + 1 {
        return Err(Error::Usage(format!(
            "need at least {} synthesis points for {} multipliers, got {points}",
            2 * n + 1,
            multipliers.len()
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); points];
    for (k, &v) in multipliers.iter().enumerate() {
        buf[k].re += v;
        if k > 0 {
            buf[points - k].re += v;
        }
    }
    FftPlanner::<f64>::new().plan_fft_inverse(points).process(&mut buf);
    Ok(buf.into_iter().map(|v| v.re).collect())
}
