use std::sync::Arc;

use crate::error::Result;
use crate::grid::{Grid, GridSpec};
use crate::models::{neg_flux_divergence, product_inputs, Model};

/// Inviscid Burgers equation `u_t + (u²/2)_x = 0` on a periodic Fourier grid.
#[derive(Debug, Clone)]
pub struct Burgers {
    grid: Arc<Grid>,
}

pub fn burgers_flux(u: &[f64]) -> Vec<f64> {
    u.iter().map(|v| 0.5 * v * v).collect()
}

impl Burgers {
    pub fn new(grid: Arc<Grid>) -> Self {
        Burgers { grid }
    }

    /// Unit-period grid with `nx = 2N+1` nodes.
    pub fn unit_periodic(nx: usize) -> Result<Self> {
        let spec = GridSpec::fourier_nx(0.0, 1.0, nx)?;
        Ok(Burgers::new(Arc::new(Grid::new(spec)?)))
    }
}

impl Model for Burgers {
    fn name(&self) -> &'static str {
        "burgers"
    }

    fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn component_names(&self) -> &'static [&'static str] {
        &["u"]
    }

    fn rhs(&self, state: &[Vec<f64>], dealias: bool, out: &mut [Vec<f64>]) -> Result<()> {
        let inputs = product_inputs(&self.grid, state, dealias)?;
        let flux = burgers_flux(&inputs[0]);
        neg_flux_divergence(&self.grid, &flux, dealias, &mut out[0])
    }

    fn max_wave_speed(&self, state: &[Vec<f64>]) -> f64 {
        state[0].iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
