//! First-order Rusanov (local Lax–Friedrichs) finite-volume reference solver.
//!
//! Components follow the spectral models: Burgers `[u]`, shallow water
//! `[h, hu]`, Euler `[ρ, E, ρu]`.

use crate::error::{Error, Result};
use crate::models::euler::{Boundary, EulerBoundaries, GAMMA_AIR};
use crate::models::ic::{self, IcId, IcParams};

pub const FV_CFL: f64 = 0.45;
/// Sub-cell samples used to form initial cell averages.
const AVERAGE_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FvSystem {
    Burgers,
    ShallowWater { gravity: f64 },
    Euler { gamma: f64 },
}

impl FvSystem {
    pub fn components(&self) -> usize {
        match self {
            FvSystem::Burgers => 1,
            FvSystem::ShallowWater { .. } => 2,
            FvSystem::Euler { .. } => 3,
        }
    }

    fn momentum_index(&self) -> usize {
        match self {
            FvSystem::Burgers => 0,
            FvSystem::ShallowWater { .. } => 1,
            FvSystem::Euler { .. } => 2,
        }
    }

    fn flux(&self, q: &[f64; 3]) -> [f64; 3] {
        match *self {
            FvSystem::Burgers => [0.5 * q[0] * q[0], 0.0, 0.0],
            FvSystem::ShallowWater { gravity } => {
                let u = velocity(q[0], q[1]);
                [q[1], q[1] * u + 0.5 * gravity * q[0] * q[0], 0.0]
            }
            FvSystem::Euler { gamma } => {
                let u = q[2] / q[0];
                let p = (gamma - 1.0) * (q[1] - 0.5 * q[2] * u);
                [q[2], u * (q[1] + p), q[2] * u + p]
            }
        }
    }

    fn max_speed(&self, q: &[f64; 3]) -> f64 {
        match *self {
            FvSystem::Burgers => q[0].abs(),
            FvSystem::ShallowWater { gravity } => {
                velocity(q[0], q[1]).abs() + (gravity * q[0].max(0.0)).sqrt()
            }
            FvSystem::Euler { gamma } => {
                let u = q[2] / q[0];
                let p = (gamma - 1.0) * (q[1] - 0.5 * q[2] * u);
                u.abs() + (gamma * p / q[0]).sqrt()
            }
        }
    }

    /// First violated positivity constraint, as `(field, value)`.
    fn positivity(&self, q: &[f64; 3]) -> Option<(&'static str, f64)> {
        match *self {
            FvSystem::Burgers => None,
            FvSystem::ShallowWater { .. } => (q[0] < 0.0).then_some(("h", q[0])),
            FvSystem::Euler { gamma } => {
                if !(q[0] > 0.0) {
                    return Some(("rho", q[0]));
                }
                let p = (gamma - 1.0) * (q[1] - 0.5 * q[2] * q[2] / q[0]);
                (!(p > 0.0)).then_some(("p", p))
            }
        }
    }
}

fn velocity(h: f64, hu: f64) -> f64 {
    if h > 1e-14 {
        hu / h
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FvBoundary {
    Periodic,
    /// Zero-gradient outflow.
    Transmissive,
    /// Reflecting wall: mirrored state with negated momentum.
    Wall,
    /// Ghost cell frozen at the initial boundary state.
    Fixed,
}

impl From<Boundary> for FvBoundary {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Periodic => FvBoundary::Periodic,
            Boundary::ReflectingWall => FvBoundary::Wall,
            Boundary::SupersonicInflow => FvBoundary::Fixed,
            Boundary::NonReflectingOutflow => FvBoundary::Transmissive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvProblem {
    pub system: FvSystem,
    pub a: f64,
    pub b: f64,
    pub cells: usize,
    pub left: FvBoundary,
    pub right: FvBoundary,
}

#[derive(Debug, Clone)]
pub struct FvSolution {
    pub centers: Vec<f64>,
    /// Cell averages, one vector per component.
    pub state: Vec<Vec<f64>>,
    pub t: f64,
    pub steps: usize,
}

impl FvSolution {
    /// Linear interpolation between cell centres, constant beyond the outer centres.
    pub fn sample(&self, component: usize, x: f64) -> f64 {
        let c = &self.centers;
        let v = &self.state[component];
        let n = c.len();
        if x <= c[0] {
            return v[0];
        }
        if x >= c[n - 1] {
            return v[n - 1];
        }
        let dx = c[1] - c[0];
        let i = (((x - c[0]) / dx).floor() as usize).min(n - 2);
        let w = (x - c[i]) / dx;
        (1.0 - w) * v[i] + w * v[i + 1]
    }

    pub fn sample_all(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..self.state.len())
            .map(|c| x.iter().map(|&x| self.sample(c, x)).collect())
            .collect()
    }
}

impl FvProblem {
    pub fn solve(&self, initial: impl Fn(f64) -> [f64; 3], t_end: f64) -> Result<FvSolution> {
        if self.cells < 2 {
            return Err(Error::Oracle(format!("need at least 2 cells, got {}", self.cells)));
        }
        if (self.left == FvBoundary::Periodic) != (self.right == FvBoundary::Periodic) {
            return Err(Error::Oracle("periodic boundaries must be paired".into()));
        }
        if !(t_end >= 0.0) {
            return Err(Error::Oracle(format!("t_end must be non-negative, got {t_end}")));
        }
        let n = self.cells;
        let dx = (self.b - self.a) / n as f64;
        let centers: Vec<f64> = (0..n).map(|i| self.a + (i as f64 + 0.5) * dx).collect();
        let mut q: Vec<[f64; 3]> = centers
            .iter()
            .map(|&xc| {
                let mut acc = [0.0; 3];
                for s in 0..AVERAGE_SAMPLES {
                    let x = xc - 0.5 * dx + (s as f64 + 0.5) * dx / AVERAGE_SAMPLES as f64;
                    let v = initial(x);
                    for c in 0..3 {
                        acc[c] += v[c] / AVERAGE_SAMPLES as f64;
                    }
                }
                acc
            })
            .collect();
        let fixed = (q[0], q[n - 1]);
        let mut flux = vec![[0.0; 3]; n + 1];
        let mut ext = vec![[0.0; 3]; n + 2];
        let m = self.system.components();
        let mom = self.system.momentum_index();
        let mut t = 0.0;
        let mut steps = 0;
        self.check(&q, &centers, t, steps)?;
        while t < t_end {
            ext[1..=n].copy_from_slice(&q);
            ext[0] = self.ghost(self.left, q[0], q[n - 1], fixed.0, mom);
            ext[n + 1] = self.ghost(self.right, q[n - 1], q[0], fixed.1, mom);
            let smax = ext.iter().map(|s| self.system.max_speed(s)).fold(0.0, f64::max);
            if !smax.is_finite() {
                return Err(Error::Oracle(format!("finite-volume solution diverged at t={t}")));
            }
            let mut dt = if smax > 0.0 { FV_CFL * dx / smax } else { t_end - t };
            if t + dt >= t_end {
                dt = t_end - t;
            }
            for i in 0..=n {
                let (l, r) = (&ext[i], &ext[i + 1]);
                let (fl, fr) = (self.system.flux(l), self.system.flux(r));
                let a = self.system.max_speed(l).max(self.system.max_speed(r));
                for c in 0..m {
                    flux[i][c] = 0.5 * (fl[c] + fr[c]) - 0.5 * a * (r[c] - l[c]);
                }
            }
            let k = dt / dx;
            for (i, qi) in q.iter_mut().enumerate() {
                for c in 0..m {
                    qi[c] -= k * (flux[i + 1][c] - flux[i][c]);
                }
            }
            t = if t + dt >= t_end { t_end } else { t + dt };
            steps += 1;
            self.check(&q, &centers, t, steps)?;
        }
        Ok(FvSolution {
            centers,
            state: (0..m).map(|c| q.iter().map(|s| s[c]).collect()).collect(),
            t,
            steps,
        })
    }

    fn ghost(&self, b: FvBoundary, inner: [f64; 3], opposite: [f64; 3], fixed: [f64; 3], mom: usize) -> [f64; 3] {
        match b {
            FvBoundary::Periodic => opposite,
            FvBoundary::Transmissive => inner,
            FvBoundary::Fixed => fixed,
            FvBoundary::Wall => {
                let mut g = inner;
                g[mom] = -g[mom];
                g
            }
        }
    }

    fn check(&self, q: &[[f64; 3]], x: &[f64], t: f64, step: usize) -> Result<()> {
        for (i, s) in q.iter().enumerate() {
            if let Some((field, value)) = self.system.positivity(s) {
                return Err(Error::PositivityLoss {
                    t,
                    step,
                    field: field.into(),
                    node: i,
                    x: x[i],
                    value,
                });
            }
        }
        Ok(())
    }
}

/// Finite-volume reference for a named initial condition.
pub fn fv_reference(ic: IcId, cells: usize, t_end: f64, params: &IcParams) -> Result<FvSolution> {
    if cells < 100 {
        return Err(Error::Oracle(format!("reference needs at least 100 cells, got {cells}")));
    }
    let euler = |a: f64, b: f64, bc: EulerBoundaries, f: fn(f64) -> crate::models::euler::Primitive| {
        let g = GAMMA_AIR;
        let p = FvProblem {
            system: FvSystem::Euler { gamma: g },
            a,
            b,
            cells,
            left: bc.left.into(),
            right: bc.right.into(),
        };
        p.solve(|x| f(x).conserved(g), t_end)
    };
    let sw = FvSystem::ShallowWater { gravity: params.gravity };
    match ic {
        IcId::BurgersIc0 | IcId::BurgersIc1 => {
            let f = if ic == IcId::BurgersIc0 { ic::burgers_ic0 } else { ic::burgers_ic1 };
            FvProblem {
                system: FvSystem::Burgers,
                a: 0.0,
                b: 1.0,
                cells,
                left: FvBoundary::Periodic,
                right: FvBoundary::Periodic,
            }
            .solve(|x| [f(x), 0.0, 0.0], t_end)
        }
        IcId::SwHump => {
            let beta = params.hump_beta;
            FvProblem {
                system: sw,
                a: -5.0,
                b: 5.0,
                cells,
                left: FvBoundary::Periodic,
                right: FvBoundary::Periodic,
            }
            .solve(|x| [1.0 + 0.4 * (-beta * x * x).exp(), 0.0, 0.0], t_end)
        }
        IcId::SwDamBreak => {
            let (hl, hr) = (params.dam_left, params.dam_right);
            // Mirror symmetry of the spectral domain is a pair of reflecting walls.
            FvProblem {
                system: sw,
                a: -5.0,
                b: 5.0,
                cells,
                left: FvBoundary::Wall,
                right: FvBoundary::Wall,
            }
            .solve(|x| [if x <= 0.0 { hl } else { hr }, 0.0, 0.0], t_end)
        }
        IcId::EulerSod => euler(-1.0, 1.0, EulerBoundaries::walls(), ic::sod),
        IcId::EulerLax => euler(-1.0, 1.0, EulerBoundaries::walls(), ic::lax),
        IcId::EulerShuOsher => euler(-1.0, 1.0, EulerBoundaries::inflow_outflow(), ic::shu_osher),
        IcId::EulerBlast => euler(0.0, 1.0, EulerBoundaries::walls(), ic::blast),
        IcId::HlDefault => Err(Error::Oracle(
            "no finite-volume reference for the wall model; use a high-resolution spectral run".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::euler::Primitive;
    use crate::oracles::burgers::{exact_burgers, BurgersIc};
    use crate::oracles::euler_riemann::EulerRiemann;

    fn burgers_l1(cells: usize) -> f64 {
        let s = fv_reference(IcId::BurgersIc0, cells, 0.2, &IcParams::default()).unwrap();
        let dx = 1.0 / cells as f64;
        s.centers
            .iter()
            .zip(&s.state[0])
            .map(|(&x, &u)| (u - exact_burgers(x, 0.2, BurgersIc::Ic0).unwrap()).abs() * dx)
            .sum()
    }

    #[test]
    fn constant_state_is_preserved() {
        for system in [
            FvSystem::Burgers,
            FvSystem::ShallowWater { gravity: 1.0 },
            FvSystem::Euler { gamma: 1.4 },
        ] {
            let p = FvProblem {
                system,
                a: 0.0,
                b: 1.0,
                cells: 100,
                left: FvBoundary::Periodic,
                right: FvBoundary::Periodic,
            };
            let s = p.solve(|_| [1.5, 2.0, 0.3], 0.3).unwrap();
            for c in 0..system.components() {
                let want = [1.5, 2.0, 0.3][c];
                assert!(s.state[c].iter().all(|v| (v - want).abs() < 1e-13));
            }
        }
    }

    #[test]
    fn burgers_matches_exact_at_first_order() {
        let e1 = burgers_l1(2000);
        let e2 = burgers_l1(8000);
        assert!(e2 < 2e-3, "{e2}");
        let order = (e1 / e2).ln() / 4.0f64.ln();
        assert!((0.7..=1.1).contains(&order), "order {order}");
    }

    #[test]
    fn sod_matches_riemann_solver() {
        let s = fv_reference(IcId::EulerSod, 8000, 0.2, &IcParams::default()).unwrap();
        let r = EulerRiemann::solve(Primitive::new(1.0, 0.0, 1.0), Primitive::new(0.125, 0.0, 0.1), 1.4)
            .unwrap();
        let dx = 2.0 / 8000.0;
        let l1: f64 = s
            .centers
            .iter()
            .zip(&s.state[0])
            .map(|(&x, &rho)| (rho - r.sample_xt(x, 0.0, 0.2).rho).abs() * dx)
            .sum();
        assert!(l1 < 5e-3, "{l1}");
    }

    #[test]
    fn walls_conserve_mass() {
        let s = fv_reference(IcId::SwDamBreak, 400, 6.0, &IcParams::default()).unwrap();
        let mass: f64 = s.state[0].iter().sum::<f64>() * 10.0 / 400.0;
        assert!((mass - 20.0).abs() < 1e-10);
    }

    #[test]
    fn too_few_cells_rejected() {
        assert!(fv_reference(IcId::EulerSod, 50, 0.1, &IcParams::default()).is_err());
        assert!(fv_reference(IcId::HlDefault, 500, 0.1, &IcParams::default()).is_err());
    }
}
