//! Reference solutions: exact Burgers, exact Riemann solvers and a finite-volume fallback.

pub mod burgers;
pub mod euler_riemann;
pub mod finite_volume;
pub mod sw_riemann;

pub use burgers::{exact_burgers, BurgersIc, ExactBurgers, T_STAR};
pub use euler_riemann::{euler_riemann, EulerRiemann, Wave};
pub use finite_volume::{fv_reference, FvBoundary, FvProblem, FvSolution, FvSystem};
pub use sw_riemann::{shallow_water_riemann, DamBreak};

use crate::error::{Error, Result};
use crate::models::euler::GAMMA_AIR;
use crate::models::ic::{self, IcId, IcParams};

/// Closed-form reference for the named problems that have one.
#[derive(Debug, Clone, Copy)]
pub enum ExactReference {
    Burgers(ExactBurgers),
    /// Discontinuity initially at `x = 0`.
    Euler(EulerRiemann),
    /// Dam initially at `x = 0`.
    DamBreak(DamBreak),
}

impl ExactReference {
    pub fn for_ic(id: IcId, params: &IcParams) -> Result<Self> {
        match id {
            IcId::BurgersIc0 => Ok(ExactReference::Burgers(ExactBurgers::new(BurgersIc::Ic0))),
            IcId::BurgersIc1 => Ok(ExactReference::Burgers(ExactBurgers::new(BurgersIc::Ic1))),
            IcId::EulerSod => Ok(ExactReference::Euler(EulerRiemann::solve(
                ic::sod(-1.0),
                ic::sod(1.0),
                GAMMA_AIR,
            )?)),
            IcId::EulerLax => Ok(ExactReference::Euler(EulerRiemann::solve(
                ic::lax(-1.0),
                ic::lax(1.0),
                GAMMA_AIR,
            )?)),
            IcId::SwDamBreak => Ok(ExactReference::DamBreak(DamBreak::solve(
                params.dam_left,
                params.dam_right,
                params.gravity,
            )?)),
            other => Err(Error::Oracle(format!(
                "no closed-form solution for `{other}`; use the finite-volume reference"
            ))),
        }
    }

    /// Conserved variables in model component order at each `x`.
    pub fn eval(&self, x: &[f64], t: f64) -> Result<Vec<Vec<f64>>> {
        match self {
            ExactReference::Burgers(b) => Ok(vec![b.eval_many(x, t)?]),
            ExactReference::Euler(r) => {
                let mut out = vec![Vec::with_capacity(x.len()); 3];
                for &x in x {
                    let q = r.sample_xt(x, 0.0, t).conserved(r.gamma);
                    for c in 0..3 {
                        out[c].push(q[c]);
                    }
                }
                Ok(out)
            }
            ExactReference::DamBreak(d) => {
                let (h, hu) = x
                    .iter()
                    .map(|&x| {
                        let (h, u) = d.sample_xt(x, 0.0, t);
                        (h, h * u)
                    })
                    .unzip();
                Ok(vec![h, hu])
            }
        }
    }
}

/// Reference fields (model component order) for `ic` at time `t` on the points `x`:
/// the closed-form solution, or a Rusanov solution on `fv_cells` cells when given.
pub fn evaluate_reference(
    ic: IcId,
    params: &IcParams,
    x: &[f64],
    t: f64,
    fv_cells: Option<usize>,
) -> Result<Vec<Vec<f64>>> {
    match fv_cells {
        None => ExactReference::for_ic(ic, params)?.eval(x, t),
        Some(cells) => Ok(fv_reference(ic, cells, t, params)?.sample_all(x)),
    }
}
