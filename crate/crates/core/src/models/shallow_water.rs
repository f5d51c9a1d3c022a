use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Basis, Grid, GridSpec};
use crate::models::{positivity_error, product_inputs, Model};

pub const DEFAULT_GRAVITY: f64 = 1.0;

/// Shallow-water equations in conserved variables `[h, hu]` on a periodic grid.
#[derive(Debug, Clone)]
pub struct ShallowWater {
    grid: Arc<Grid>,
    gravity: f64,
}

impl ShallowWater {
    pub fn new(grid: Arc<Grid>, gravity: f64) -> Result<Self> {
        if grid.basis() != Basis::FourierPeriodic {
            return Err(Error::Usage("shallow water runs on periodic Fourier grids".into()));
        }
        if !(gravity > 0.0) {
            return Err(Error::Parameter(format!("gravity must be positive, got {gravity}")));
        }
        Ok(ShallowWater { grid, gravity })
    }

    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    fn check_depth(&self, h: &[f64]) -> Result<()> {
        for (j, &v) in h.iter().enumerate() {
            if !(v > 0.0) {
                if !v.is_finite() {
                    return Err(Error::Blowup {
                        t: 0.0,
                        step: 0,
                        field: "h".into(),
                        max_abs: v.abs(),
                    });
                }
                return Err(positivity_error("h", j, self.grid.nodes()[j], v));
            }
        }
        Ok(())
    }
}

impl Model for ShallowWater {
    fn name(&self) -> &'static str {
        "shallow-water"
    }

    fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["h", "hu"]
    }

    fn rhs(&self, state: &[Vec<f64>], dealias: bool, out: &mut [Vec<f64>]) -> Result<()> {
        self.check_depth(&state[0])?;
        let q = product_inputs(&self.grid, state, dealias)?;
        let (h, hu) = (&q[0], &q[1]);
        let g = self.gravity;
        let momentum_flux: Vec<f64> = h
            .iter()
            .zip(hu.iter())
            .map(|(&h, &m)| m * m / h + 0.5 * g * h * h)
            .collect();
        let d = self.grid.derivative_nodal_many(&[hu, &momentum_flux], dealias)?;
        for (o, d) in out.iter_mut().zip(d) {
            o.iter_mut().zip(d).for_each(|(o, v)| *o = -v);
        }
        Ok(())
    }

    fn derived_fields(&self, state: &[Vec<f64>]) -> Result<Vec<(&'static str, Vec<f64>)>> {
        let u = state[0].iter().zip(&state[1]).map(|(h, m)| m / h).collect();
        Ok(vec![("u", u)])
    }

    fn max_wave_speed(&self, state: &[Vec<f64>]) -> f64 {
        state[0]
            .iter()
            .zip(&state[1])
            .map(|(&h, &m)| (m / h).abs() + (self.gravity * h.max(0.0)).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Even/odd reflection of data on `[a, b]` about `x = a` onto the periodic
/// interval `[2a - b, b]`.
///
/// The doubled grid has `nx` (odd) nodes. Node `j` and node `nx - j` are mirror
/// images, node 0 (at `2a - b`, identified with `b`) is its own image, and
/// `x = a` falls halfway between two nodes.
#[derive(Debug, Clone)]
pub struct MirrorDomain {
    a: f64,
    b: f64,
    grid: Arc<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl MirrorDomain {
    pub fn new(a: f64, b: f64, nx: usize) -> Result<Self> {
        let spec = GridSpec::fourier_nx(2.0 * a - b, b, nx)?;
        Ok(MirrorDomain {
            a,
            b,
            grid: Arc::new(Grid::new(spec)?),
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn physical_domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Indices of doubled-grid nodes that lie in `[a, b]`, in increasing `x`.
    pub fn physical_indices(&self) -> Vec<usize> {
        let nx = self.grid.len();
        let mut idx: Vec<usize> = ((nx + 1) / 2..nx).collect();
        idx.push(0);
        idx
    }

    /// Physical coordinates of [`Self::physical_indices`]; node 0 is reported at `b`.
    pub fn physical_nodes(&self) -> Vec<f64> {
        self.physical_indices()
            .into_iter()
            .map(|j| if j == 0 { self.b } else { self.grid.nodes()[j] })
            .collect()
    }

    /// Sample `f` on `[a, b]` and extend by reflection.
    pub fn extend_fn(&self, f: impl Fn(f64) -> f64, parity: Parity) -> Vec<f64> {
        let half: Vec<f64> = self.physical_nodes().into_iter().map(f).collect();
        self.extend_nodal(&half, parity)
            .expect("physical node count matches by construction")
    }

    /// Extend values given at [`Self::physical_nodes`] by reflection.
    pub fn extend_nodal(&self, half: &[f64], parity: Parity) -> Result<Vec<f64>> {
        let idx = self.physical_indices();
        if half.len() != idx.len() {
            return Err(Error::Usage(format!(
                "expected {} physical values, got {}",
                idx.len(),
                half.len()
            )));
        }
        let nx = self.grid.len();
        let sign = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let mut out = vec![0.0; nx];
        for (&j, &v) in idx.iter().zip(half) {
            out[j] = v;
            if j != 0 {
                out[nx - j] = sign * v;
            }
        }
        if parity == Parity::Odd {
            out[0] = 0.0;
        }
        Ok(out)
    }

    /// Values of a doubled-grid field at [`Self::physical_nodes`].
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.physical_indices().into_iter().map(|j| full[j]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::wavenumber;

    fn model(nx: usize) -> ShallowWater {
        let g = Arc::new(Grid::new(GridSpec::fourier_nx(-5.0, 5.0, nx).unwrap()).unwrap());
        ShallowWater::new(g, 1.0).unwrap()
    }

    #[test]
    fn lake_at_rest() {
        let m = model(41);
        let mut out = vec![vec![0.0; 41]; 2];
        m.rhs(&[vec![2.0; 41], vec![0.0; 41]], false, &mut out).unwrap();
        assert!(out.iter().flatten().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn hump_initial_tendency() {
        let m = model(401);
        let x = m.grid().nodes().to_vec();
        let h: Vec<f64> = x.iter().map(|x| 1.0 + 0.4 * (-5.0 * x * x).exp()).collect();
        let mut out = vec![vec![0.0; 401]; 2];
        m.rhs(&[h.clone(), vec![0.0; 401]], false, &mut out).unwrap();
        for (j, &x) in x.iter().enumerate() {
            let hx = 0.4 * (-10.0 * x) * (-5.0 * x * x).exp();
            assert!(out[0][j].abs() < 1e-12);
            assert!((out[1][j] + h[j] * hx).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn non_positive_depth_is_reported() {
        let m = model(11);
        let mut h = vec![1.0; 11];
        h[4] = -0.1;
        let mut out = vec![vec![0.0; 11]; 2];
        let e = m.rhs(&[h, vec![0.0; 11]], false, &mut out).unwrap_err();
        assert!(matches!(e, Error::PositivityLoss { node: 4, .. }));
    }

    #[test]
    fn mirror_of_linear_ramp() {
        let d = MirrorDomain::new(0.0, 1.0, 21).unwrap();
        let h = d.extend_fn(|x| x, Parity::Even);
        for (&x, &v) in d.grid().nodes().iter().zip(&h).skip(1) {
            assert!((v - x.abs()).abs() < 1e-14);
        }
        let u = d.extend_fn(|_| 2.0, Parity::Odd);
        for (&x, &v) in d.grid().nodes().iter().zip(&u).skip(1) {
            assert_eq!(v, if x > 0.0 { 2.0 } else { -2.0 });
        }
        let back = d.restrict(&h);
        let again = d.extend_nodal(&back, Parity::Even).unwrap();
        assert_eq!(again, h);
    }

    #[test]
    fn mirrored_dam_break_depth_has_no_sine_content() {
        let d = MirrorDomain::new(-5.0, 5.0, 101).unwrap();
        let h = d.extend_fn(|x| if x <= 0.0 { 3.0 } else { 1.0 }, Parity::Even);
        // Even about x=a means û(k) e^{iκa} is real.
        let c = d.grid().fourier_forward(&h).unwrap();
        for (j, v) in c.iter().enumerate() {
            let kappa = d.grid().kappa(wavenumber(j, 101));
            let rotated = v * num_complex::Complex64::from_polar(1.0, kappa * -5.0);
            assert!(rotated.im.abs() < 1e-13, "k={}", wavenumber(j, 101));
        }
    }

    #[test]
    fn symmetric_hump_stays_symmetric() {
        use crate::schemes::{run, RunConfig, SchemeConfig, TimeStep};
        let m = model(201);
        let x = m.grid().nodes().to_vec();
        let h: Vec<f64> = x.iter().map(|x| 1.0 + 0.4 * (-5.0 * x * x).exp()).collect();
        let cfg = RunConfig {
            t_end: 100.0 * 0.01,
            time_step: TimeStep::Fixed(0.01),
            ..RunConfig::default()
        };
        let out = run(&m, &SchemeConfig::pps(false), vec![h, vec![0.0; 201]], &cfg, &mut [])
            .unwrap()
            .into_result()
            .unwrap();
        let hf = &out.final_state[0];
        // x_j and x_{nx-j} are mirror images about 0 on [-5, 5].
        for j in 1..201 {
            assert!((hf[j] - hf[201 - j]).abs() < 1e-10);
        }
    }
}
