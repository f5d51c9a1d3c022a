//! Physical systems evolved by the schemes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;

pub mod burgers;
pub mod euler;
pub mod hl;
pub mod ic;
pub mod shallow_water;

pub use burgers::Burgers;
pub use euler::{Boundary, Euler, EulerBoundaries};
pub use hl::HlModel;
pub use shallow_water::{MirrorDomain, ShallowWater};

/// A semi-discrete hyperbolic system on a collocation grid.
///
/// The state is a list of nodal vectors, one per conserved component.
pub trait Model: Send + Sync {
    fn name(&self) -> &'static str;

    fn grid(&self) -> &Arc<Grid>;

    fn component_names(&self) -> &'static [&'static str];

    /// Hyperbolic tendency without any stabilisation term.
    fn rhs(&self, state: &[Vec<f64>], dealias: bool, out: &mut [Vec<f64>]) -> Result<()>;

    /// Largest characteristic speed over the grid, used for CFL time steps.
    fn max_wave_speed(&self, state: &[Vec<f64>]) -> f64;

    /// Non-conserved fields written next to the state in snapshots.
    fn derived_fields(&self, _state: &[Vec<f64>]) -> Result<Vec<(&'static str, Vec<f64>)>> {
        Ok(Vec::new())
    }

    /// Final adjustment of the full tendency (boundary enforcement).
    fn finish_tendency(&self, _state: &[Vec<f64>], _out: &mut [Vec<f64>]) {}

    fn check_state(&self, state: &[Vec<f64>]) -> Result<()> {
        if state.len() != self.component_names().len() {
            return Err(Error::Usage(format!(
                "{} expects {} components, got {}",
                self.name(),
                self.component_names().len(),
                state.len()
            )));
        }
        for s in state {
            if s.len() != self.grid().len() {
                return Err(Error::Usage(format!(
                    "component has {} values, grid has {} nodes",
                    s.len(),
                    self.grid().len()
                )));
            }
        }
        Ok(())
    }
}

/// `-∂x F` with the flux spectrum optionally truncated by the two-thirds rule.
pub(crate) fn neg_flux_divergence(grid: &Grid, flux: &[f64], dealias: bool, out: &mut [f64]) -> Result<()> {
    let d = grid.derivative_nodal(flux, dealias)?;
    for (o, v) in out.iter_mut().zip(d) {
        *o = -v;
    }
    Ok(())
}

/// Nodal values entering the nonlinear products: truncated copies when dealiasing.
pub(crate) fn product_inputs<'a>(
    grid: &Grid,
    state: &'a [Vec<f64>],
    dealias: bool,
) -> Result<std::borrow::Cow<'a, [Vec<f64>]>> {
    if !dealias {
        return Ok(std::borrow::Cow::Borrowed(state));
    }
    let refs: Vec<&[f64]> = state.iter().map(|u| u.as_slice()).collect();
    Ok(std::borrow::Cow::Owned(grid.truncate_23_many(&refs)?))
}

pub(crate) fn positivity_error(field: &str, node: usize, x: f64, value: f64) -> Error {
    Error::PositivityLoss {
        t: 0.0,
        step: 0,
        field: field.to_string(),
        node,
        x,
        value,
    }
}
