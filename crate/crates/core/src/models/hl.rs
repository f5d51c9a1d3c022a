//! One-dimensional wall model of axisymmetric Euler flow:
//! `u_t + v u_x = 0`, `ω_t + v ω_x = u_x`, with `v_x = H(ω)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{wavenumber, Basis, Coeffs, Grid, GridSpec};
use crate::models::{product_inputs, Model};

pub const HL_PERIOD: f64 = 1.0 / 6.0;
pub const HL_AMPLITUDE: f64 = 1e4;
/// Reference blowup time of the default initial condition.
pub const HL_SINGULAR_TIME: f64 = 0.0035056;

#[derive(Debug, Clone)]
pub struct HlModel {
    grid: Arc<Grid>,
}

impl HlModel {
    pub fn new(grid: Arc<Grid>) -> Result<Self> {
        if grid.basis() != Basis::FourierPeriodic {
            return Err(Error::Usage("the wall model is periodic: use a Fourier grid".into()));
        }
        Ok(HlModel { grid })
    }

    /// Default period `1/6` starting at `x = 0`.
    pub fn with_nodes(nx: usize) -> Result<Self> {
        HlModel::new(Arc::new(Grid::new(GridSpec::fourier_nx(0.0, HL_PERIOD, nx)?)?))
    }

    /// Velocity from vorticity: `v̂(k) = -ω̂(k)/|κ|`, `v̂(0) = 0`.
    pub fn velocity(&self, omega: &[f64]) -> Result<Vec<f64>> {
        let mut c = self.grid.fourier_forward(omega)?;
        self.velocity_in_place(&mut c);
        self.grid.fourier_backward(&c)
    }

    fn velocity_in_place(&self, c: &mut [Complex64]) {
        let nx = c.len();
        for (j, v) in c.iter_mut().enumerate() {
            let k = wavenumber(j, nx);
            *v = if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                -*v / self.grid.kappa(k).abs()
            };
        }
    }
}

impl Model for HlModel {
    fn name(&self) -> &'static str {
        "hl"
    }

    fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["u", "omega"]
    }

    fn rhs(&self, state: &[Vec<f64>], dealias: bool, out: &mut [Vec<f64>]) -> Result<()> {
        let q = product_inputs(&self.grid, state, dealias)?;
        let g = &self.grid;
        let c = g.forward_many(&[&q[0], &q[1]])?;
        let (Coeffs::Fourier(cu), Coeffs::Fourier(cw)) = (&c[0], &c[1]) else {
            return Err(Error::Usage("HL model needs a Fourier grid".into()));
        };
        let mut du = cu.clone();
        g.fourier_derivative_in_place(&mut du);
        let mut dw = cw.clone();
        g.fourier_derivative_in_place(&mut dw);
        let mut cv = cw.clone();
        self.velocity_in_place(&mut cv);
        let b = g.backward_many(&[Coeffs::Fourier(cv), Coeffs::Fourier(du), Coeffs::Fourier(dw)])?;
        let (v, u_x, w_x) = (&b[0], &b[1], &b[2]);
        for j in 0..v.len() {
            out[0][j] = -v[j] * u_x[j];
            out[1][j] = -v[j] * w_x[j] + u_x[j];
        }
        if dealias {
            let t = g.truncate_23_many(&[&out[0], &out[1]])?;
            for (o, t) in out.iter_mut().zip(t) {
                o.copy_from_slice(&t);
            }
        }
        Ok(())
    }

    fn derived_fields(&self, state: &[Vec<f64>]) -> Result<Vec<(&'static str, Vec<f64>)>> {
        Ok(vec![("v", self.velocity(&state[1])?)])
    }

    fn max_wave_speed(&self, state: &[Vec<f64>]) -> f64 {
        match self.velocity(&state[1]) {
            Ok(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Err(_) => f64::NAN,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ic(m: &HlModel) -> Vec<Vec<f64>> {
        let l = HL_PERIOD;
        vec![
            m.grid()
                .nodes()
                .iter()
                .map(|x| HL_AMPLITUDE * (2.0 * PI * x / l).sin().powi(2))
                .collect(),
            vec![0.0; m.grid().len()],
        ]
    }

    #[test]
    fn zero_vorticity_gives_pure_forcing() {
        let m = HlModel::with_nodes(65).unwrap();
        let s = ic(&m);
        let mut out = vec![vec![0.0; 65]; 2];
        m.rhs(&s, false, &mut out).unwrap();
        let l = HL_PERIOD;
        for (j, &x) in m.grid().nodes().iter().enumerate() {
            assert!(out[0][j].abs() < 1e-9);
            let want = HL_AMPLITUDE * (2.0 * PI / l) * (4.0 * PI * x / l).sin();
            assert!((out[1][j] - want).abs() < 1e-8 * HL_AMPLITUDE * 2.0 * PI / l);
        }
    }

    #[test]
    fn velocity_derivative_is_hilbert_of_vorticity() {
        let m = HlModel::with_nodes(33).unwrap();
        let l = HL_PERIOD;
        let w: Vec<f64> = m.grid().nodes().iter().map(|x| (2.0 * PI * x / l).sin()).collect();
        let v = m.velocity(&w).unwrap();
        let vx = m.grid().derivative_nodal(&v, false).unwrap();
        let mut c = m.grid().fourier_forward(&w).unwrap();
        crate::grid::hilbert_in_place(&mut c);
        let hw = m.grid().fourier_backward(&c).unwrap();
        for (a, b) in vx.iter().zip(&hw) {
            assert!((a - b).abs() < 1e-12);
        }
        // H(sin) = -cos
        for (b, x) in hw.iter().zip(m.grid().nodes()) {
            assert!((b + (2.0 * PI * x / l).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn chebyshev_grid_rejected() {
        let g = Arc::new(Grid::new(GridSpec::chebyshev(0.0, 1.0, 8, None)).unwrap());
        assert!(HlModel::new(g).is_err());
    }
}
