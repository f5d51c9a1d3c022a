//! Semi-discrete right-hand sides for the PPS, SR, SP and SVV schemes, the
//! classical RK4 integrator, and the time loop.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Basis, Coeffs, Grid};
use crate::kernels::{svv_q_coeffs, KernelSpec};
use crate::models::Model;

mod rk4;
mod time_loop;

pub use rk4::{rk4_step, Rk4};
pub use time_loop::{run, Observer, RunConfig, RunOutput, Snapshot, SnapshotRef, TimeStep, DEFAULT_CFL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// Pure pseudospectral (Galerkin truncation only).
    Pps,
    /// Spectral relaxation: BGK-type pull toward the mollified solution.
    Sr,
    /// Spectral purging: mollify the solution every `τ`.
    Sp,
    /// Spectral vanishing viscosity.
    Svv,
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemeKind::Pps => "pps",
            SchemeKind::Sr => "sr",
            SchemeKind::Sp => "sp",
            SchemeKind::Svv => "svv",
        })
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pps" => Ok(SchemeKind::Pps),
            "sr" => Ok(SchemeKind::Sr),
            "sp" => Ok(SchemeKind::Sp),
            "svv" => Ok(SchemeKind::Svv),
            other => Err(Error::Parameter(format!(
                "unknown scheme `{other}` (expected pps, sr, sp or svv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    /// Kernel and `(α, γ)` for SR and SP.
    pub kernel: KernelSpec,
    /// SVV viscosity amplitude `ε`.
    pub svv_eps: f64,
    /// SVV activation wavenumber `M`.
    pub svv_cutoff: f64,
    pub dealias: bool,
}

impl SchemeConfig {
    pub fn pps(dealias: bool) -> Self {
        SchemeConfig {
            kind: SchemeKind::Pps,
            kernel: KernelSpec::identity(),
            svv_eps: 0.0,
            svv_cutoff: 0.0,
            dealias,
        }
    }

    pub fn sr(kernel: KernelSpec) -> Self {
        SchemeConfig {
            kind: SchemeKind::Sr,
            kernel,
            dealias: false,
            ..Self::pps(false)
        }
    }

    pub fn sp(kernel: KernelSpec) -> Self {
        SchemeConfig {
            kind: SchemeKind::Sp,
            ..Self::sr(kernel)
        }
    }

    pub fn svv(eps: f64, cutoff: f64) -> Self {
        SchemeConfig {
            kind: SchemeKind::Svv,
            svv_eps: eps,
            svv_cutoff: cutoff,
            ..Self::pps(false)
        }
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    /// Spectral bandwidth used by the parameter law: `N` for Fourier grids,
    /// the polynomial degree for Chebyshev grids.
    pub fn law_bandwidth(grid: &Grid) -> usize {
        grid.bandwidth()
    }

    pub fn prepare(&self, grid: &Grid) -> Result<Stabiliser> {
        let n = Self::law_bandwidth(grid);
        match self.kind {
            SchemeKind::Pps => Ok(Stabiliser::None),
            SchemeKind::Sr => {
                let kernel = self.kernel.coeffs(n)?;
                let tau = self.kernel.relaxation(n)?.tau;
                let rate = kernel.iter().map(|k| (k - 1.0) / tau).collect();
                Ok(Stabiliser::Relaxation { rate, tau })
            }
            SchemeKind::Sp => {
                let kernel = self.kernel.coeffs(n)?;
                let tau = self.kernel.relaxation(n)?.tau;
                if !(tau > 0.0 && tau.is_finite()) {
                    return Err(Error::Parameter(format!("purge interval must be positive, got {tau}")));
                }
                Ok(Stabiliser::Purge { kernel, tau })
            }
            SchemeKind::Svv => {
                if grid.basis() != Basis::FourierPeriodic {
                    return Err(Error::Usage("SVV is implemented for Fourier grids only".into()));
                }
                if !(self.svv_eps >= 0.0) {
                    return Err(Error::Parameter(format!(
                        "SVV epsilon must be non-negative, got {}",
                        self.svv_eps
                    )));
                }
                let q = svv_q_coeffs(n, self.svv_cutoff)?;
                let rate = q
                    .iter()
                    .enumerate()
                    .map(|(k, q)| {
                        let kappa = grid.kappa(k as i64);
                        -self.svv_eps * kappa * kappa * q
                    })
                    .collect();
                Ok(Stabiliser::Viscosity { rate })
            }
        }
    }
}

/// Precomputed stabilisation data for one grid.
#[derive(Debug, Clone)]
pub enum Stabiliser {
    None,
    /// Linear spectral damping with rate `(K̂(k) - 1)/τ` added to the tendency.
    Relaxation { rate: Vec<f64>, tau: f64 },
    /// Kernel applied to the state every `τ`.
    Purge { kernel: Vec<f64>, tau: f64 },
    /// Linear spectral damping `-ε κ² Q̂(k)`.
    Viscosity { rate: Vec<f64> },
}

impl Stabiliser {
    fn tendency_rate(&self) -> Option<&[f64]> {
        match self {
            Stabiliser::Relaxation { rate, .. } | Stabiliser::Viscosity { rate } => Some(rate),
            _ => None,
        }
    }

    /// Relaxation time of SR, used to cap explicit time steps.
    pub fn relaxation_time(&self) -> Option<f64> {
        match self {
            Stabiliser::Relaxation { tau, .. } | Stabiliser::Purge { tau, .. } => Some(*tau),
            _ => None,
        }
    }
}

/// Add `backward(rate(k) · forward(u))` to `out`.
pub fn add_spectral_damping(grid: &Grid, u: &[f64], rate: &[f64], out: &mut [f64]) -> Result<()> {
    let mut c = grid.forward(u)?;
    c.scale_by_abs_index(rate)?;
    let d = grid.backward(&c)?;
    for (o, v) in out.iter_mut().zip(d) {
        *o += v;
    }
    Ok(())
}

/// Replace `u` by the kernel-mollified field.
pub fn apply_kernel_nodal(grid: &Grid, u: &mut [f64], kernel: &[f64]) -> Result<()> {
    let mut c: Coeffs = grid.forward(u)?;
    c.scale_by_abs_index(kernel)?;
    u.copy_from_slice(&grid.backward(&c)?);
    Ok(())
}

/// Full semi-discrete tendency of a model under a stabiliser.
pub struct SemiDiscrete<'a> {
    pub model: &'a dyn Model,
    pub stabiliser: Stabiliser,
    pub dealias: bool,
}

impl<'a> SemiDiscrete<'a> {
    pub fn new(model: &'a dyn Model, scheme: &SchemeConfig) -> Result<Self> {
        Ok(SemiDiscrete {
            model,
            stabiliser: scheme.prepare(model.grid())?,
            dealias: scheme.dealias,
        })
    }

    pub fn tendency(&self, state: &[Vec<f64>], out: &mut [Vec<f64>]) -> Result<()> {
        self.model.rhs(state, self.dealias, out)?;
        if let Some(rate) = self.stabiliser.tendency_rate() {
            let refs: Vec<&[f64]> = state.iter().map(|u| u.as_slice()).collect();
            let damping = self.model.grid().multiply_many(&refs, rate)?;
            for (o, d) in out.iter_mut().zip(damping) {
                o.iter_mut().zip(d).for_each(|(o, v)| *o += v);
            }
        }
        self.model.finish_tendency(state, out);
        Ok(())
    }
}

/// PPS tendency of a model.
pub fn rhs_pps(model: &dyn Model, state: &[Vec<f64>], dealias: bool) -> Result<Vec<Vec<f64>>> {
    tendency_with(model, &SchemeConfig::pps(dealias), state)
}

/// SR tendency: PPS plus `(K̂ - 1)/τ` damping on every component.
pub fn rhs_sr(
    model: &dyn Model,
    state: &[Vec<f64>],
    kernel: &KernelSpec,
    dealias: bool,
) -> Result<Vec<Vec<f64>>> {
    tendency_with(model, &SchemeConfig::sr(*kernel).with_dealias(dealias), state)
}

/// SVV tendency: PPS plus `-ε κ² Q̂(k)` damping.
pub fn rhs_svv(
    model: &dyn Model,
    state: &[Vec<f64>],
    eps: f64,
    cutoff: f64,
    dealias: bool,
) -> Result<Vec<Vec<f64>>> {
    tendency_with(model, &SchemeConfig::svv(eps, cutoff).with_dealias(dealias), state)
}

fn tendency_with(model: &dyn Model, scheme: &SchemeConfig, state: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    model.check_state(state)?;
    let sd = SemiDiscrete::new(model, scheme)?;
    let mut out = vec![vec![0.0; model.grid().len()]; state.len()];
    sd.tendency(state, &mut out)?;
    Ok(out)
}
