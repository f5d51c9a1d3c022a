//! Compressible Euler equations on a Chebyshev grid with characteristic
//! boundary conditions.
//!
//! Conserved state `[ρ, E, ρu]`. The right-hand side is assembled from the
//! wave amplitudes `L₁ = λ₁(p_x − ρc u_x)`, `L₂ = λ₂(c²ρ_x − p_x)`,
//! `L₃ = λ₃(p_x + ρc u_x)` with `λ = (u−c, u, u+c)`; at the end nodes the
//! amplitudes of incoming waves are replaced according to the boundary type.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Basis, Grid};
use crate::models::{positivity_error, product_inputs, Model};

pub const GAMMA_AIR: f64 = 1.4;

/// Primitive state `(ρ, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Primitive { rho, u, p }
    }

    pub fn conserved(&self, gamma: f64) -> [f64; 3] {
        [
            self.rho,
            self.p / (gamma - 1.0) + 0.5 * self.rho * self.u * self.u,
            self.rho * self.u,
        ]
    }

    pub fn from_conserved(q: [f64; 3], gamma: f64) -> Self {
        let u = q[2] / q[0];
        Primitive {
            rho: q[0],
            u,
            p: (gamma - 1.0) * (q[1] - 0.5 * q[0] * u * u),
        }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    ReflectingWall,
    /// All characteristics enter; the boundary state stays at its initial value.
    SupersonicInflow,
    /// The single incoming amplitude is set to zero.
    NonReflectingOutflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerBoundaries {
    pub left: Boundary,
    pub right: Boundary,
}

impl EulerBoundaries {
    pub fn walls() -> Self {
        EulerBoundaries {
            left: Boundary::ReflectingWall,
            right: Boundary::ReflectingWall,
        }
    }

    pub fn inflow_outflow() -> Self {
        EulerBoundaries {
            left: Boundary::SupersonicInflow,
            right: Boundary::NonReflectingOutflow,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lp = self.left == Boundary::Periodic;
        let rp = self.right == Boundary::Periodic;
        if lp != rp {
            return Err(Error::Parameter(
                "periodic on one side requires periodic on both".into(),
            ));
        }
        Ok(())
    }
}

/// Node-wise characteristic quantities of the last right-hand-side evaluation.
#[derive(Debug, Clone, Default)]
pub struct CharacteristicWorkspace {
    pub lambda: [Vec<f64>; 3],
    pub amplitude: [Vec<f64>; 3],
    pub d: [Vec<f64>; 3],
    pub c: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Euler {
    grid: Arc<Grid>,
    gamma: f64,
    bc: EulerBoundaries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl Euler {
    pub fn new(grid: Arc<Grid>, gamma: f64, bc: EulerBoundaries) -> Result<Self> {
        bc.validate()?;
        if grid.basis() != Basis::ChebyshevExtrema {
            return Err(Error::Usage(
                "the characteristic Euler solver needs a Chebyshev grid".into(),
            ));
        }
        if bc.left == Boundary::Periodic {
            return Err(Error::Usage(
                "periodic boundaries are not available on Chebyshev grids".into(),
            ));
        }
        if !(gamma > 1.0) {
            return Err(Error::Parameter(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Euler { grid, gamma, bc })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn boundaries(&self) -> EulerBoundaries {
        self.bc
    }

    /// Conserved state sampled from a primitive profile.
    pub fn state_from_primitive(&self, f: impl Fn(f64) -> Primitive) -> Vec<Vec<f64>> {
        let mut s = vec![Vec::with_capacity(self.grid.len()); 3];
        for &x in self.grid.nodes() {
            let q = f(x).conserved(self.gamma);
            for c in 0..3 {
                s[c].push(q[c]);
            }
        }
        s
    }

    /// Primitive fields `(ρ, u, p)` of a conserved state.
    pub fn primitives(&self, state: &[Vec<f64>]) -> [Vec<f64>; 3] {
        let n = state[0].len();
        let mut u = Vec::with_capacity(n);
        let mut p = Vec::with_capacity(n);
        for j in 0..n {
            let w = Primitive::from_conserved([state[0][j], state[1][j], state[2][j]], self.gamma);
            u.push(w.u);
            p.push(w.p);
        }
        [state[0].clone(), u, p]
    }

    fn checked_primitives(&self, state: &[Vec<f64>]) -> Result<[Vec<f64>; 3]> {
        let prim = self.primitives(state);
        for (name, v) in [("rho", &prim[0]), ("p", &prim[2])] {
            for (j, &x) in v.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::Blowup {
                        t: 0.0,
                        step: 0,
                        field: name.into(),
                        max_abs: x.abs(),
                    });
                }
                if x <= 0.0 {
                    return Err(positivity_error(name, j, self.grid.nodes()[j], x));
                }
            }
        }
        Ok(prim)
    }

    /// Characteristic right-hand side with its intermediate quantities.
    pub fn characteristic_rhs(
        &self,
        state: &[Vec<f64>],
        dealias: bool,
        out: &mut [Vec<f64>],
    ) -> Result<CharacteristicWorkspace> {
        self.checked_primitives(state)?;
        let q = product_inputs(&self.grid, state, dealias)?;
        let [rho, u, p] = if dealias {
            self.checked_primitives(&q)?
        } else {
            self.primitives(&q)
        };
        let [rho_x, u_x, p_x]: [Vec<f64>; 3] = self
            .grid
            .derivative_nodal_many(&[&rho, &u, &p], dealias)?
            .try_into()
            .expect("three derivatives");
        let g = self.gamma;
        let n = rho.len();
        let mut ws = CharacteristicWorkspace {
            lambda: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            amplitude: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            d: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            c: vec![0.0; n],
        };
        for j in 0..n {
            let c = (g * p[j] / rho[j]).sqrt();
            ws.c[j] = c;
            let lam = [u[j] - c, u[j], u[j] + c];
            let rc = rho[j] * c;
            ws.lambda[0][j] = lam[0];
            ws.lambda[1][j] = lam[1];
            ws.lambda[2][j] = lam[2];
            ws.amplitude[0][j] = lam[0] * (p_x[j] - rc * u_x[j]);
            ws.amplitude[1][j] = lam[1] * (c * c * rho_x[j] - p_x[j]);
            ws.amplitude[2][j] = lam[2] * (p_x[j] + rc * u_x[j]);
        }
        self.apply_boundary(&mut ws, 0, Side::Left, self.bc.left);
        self.apply_boundary(&mut ws, n - 1, Side::Right, self.bc.right);
        for j in 0..n {
            let [l1, l2, l3] = [ws.amplitude[0][j], ws.amplitude[1][j], ws.amplitude[2][j]];
            let c = ws.c[j];
            let d1 = (l2 + 0.5 * (l3 + l1)) / (c * c);
            let d2 = 0.5 * (l3 + l1);
            let d3 = (l3 - l1) / (2.0 * rho[j] * c);
            ws.d[0][j] = d1;
            ws.d[1][j] = d2;
            ws.d[2][j] = d3;
            let uj = u[j];
            out[0][j] = -d1;
            out[1][j] = -(0.5 * uj * uj * d1 + d2 / (g - 1.0) + rho[j] * uj * d3);
            out[2][j] = -(uj * d1 + rho[j] * d3);
        }
        Ok(ws)
    }

    fn apply_boundary(&self, ws: &mut CharacteristicWorkspace, j: usize, side: Side, bc: Boundary) {
        // A wave enters through the left end when λ > 0 and through the right end when λ < 0.
        let incoming = |lam: f64| match side {
            Side::Left => lam > 0.0,
            Side::Right => lam < 0.0,
        };
        let lam = [ws.lambda[0][j], ws.lambda[1][j], ws.lambda[2][j]];
        let interior = [ws.amplitude[0][j], ws.amplitude[1][j], ws.amplitude[2][j]];
        let mut target = interior;
        match (bc, side) {
            (Boundary::Periodic, _) => {}
            (Boundary::ReflectingWall, Side::Left) => {
                target[1] = 0.0;
                target[2] = interior[0];
            }
            (Boundary::ReflectingWall, Side::Right) => {
                target[1] = 0.0;
                target[0] = interior[2];
            }
            (Boundary::SupersonicInflow, _) => target = [0.0; 3],
            (Boundary::NonReflectingOutflow, Side::Right) => target[0] = 0.0,
            (Boundary::NonReflectingOutflow, Side::Left) => target[2] = 0.0,
        }
        for i in 0..3 {
            if incoming(lam[i]) {
                ws.amplitude[i][j] = target[i];
            }
        }
    }

    /// `-∂x F(q)` of the conservative flux, for cross-checking the characteristic form.
    pub fn flux_divergence_rhs(&self, state: &[Vec<f64>], out: &mut [Vec<f64>]) -> Result<()> {
        let [rho, u, p] = self.checked_primitives(state)?;
        let e = &state[1];
        let f0: Vec<f64> = rho.iter().zip(&u).map(|(r, u)| r * u).collect();
        let f1: Vec<f64> = (0..rho.len()).map(|j| (e[j] + p[j]) * u[j]).collect();
        let f2: Vec<f64> = (0..rho.len()).map(|j| rho[j] * u[j] * u[j] + p[j]).collect();
        for (o, f) in out.iter_mut().zip([f0, f1, f2]) {
            let d = self.grid.derivative_nodal(&f, false)?;
            o.iter_mut().zip(d).for_each(|(o, d)| *o = -d);
        }
        Ok(())
    }
}

impl Model for Euler {
    fn name(&self) -> &'static str {
        "euler"
    }

    fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["rho", "E", "rhou"]
    }

    fn rhs(&self, state: &[Vec<f64>], dealias: bool, out: &mut [Vec<f64>]) -> Result<()> {
        self.characteristic_rhs(state, dealias, out).map(|_| ())
    }

    fn derived_fields(&self, state: &[Vec<f64>]) -> Result<Vec<(&'static str, Vec<f64>)>> {
        let [_, u, p] = self.primitives(state);
        Ok(vec![("u", u), ("p", p)])
    }

    fn max_wave_speed(&self, state: &[Vec<f64>]) -> f64 {
        let [rho, u, p] = self.primitives(state);
        (0..rho.len())
            .map(|j| u[j].abs() + (self.gamma * p[j].max(0.0) / rho[j]).sqrt())
            .fold(0.0, f64::max)
    }

    /// Walls keep zero momentum; a supersonic inflow node keeps its state.
    fn finish_tendency(&self, _state: &[Vec<f64>], out: &mut [Vec<f64>]) {
        let last = out[0].len() - 1;
        for (bc, j) in [(self.bc.left, 0), (self.bc.right, last)] {
            match bc {
                Boundary::ReflectingWall => out[2][j] = 0.0,
                Boundary::SupersonicInflow => {
                    for o in out.iter_mut() {
                        o[j] = 0.0;
                    }
                }
                _ => {}
            }
        }
    }
}
