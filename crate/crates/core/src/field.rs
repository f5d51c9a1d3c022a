use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{hilbert_in_place, Basis, Coeffs, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sync {
    Nodal,
    Spectral,
    Both,
}

/// A scalar field on a collocation grid holding nodal values, spectral
/// coefficients, or both. The stale representation is rebuilt on demand.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<Grid>,
    nodal: Vec<f64>,
    coeffs: Option<Coeffs>,
    sync: Sync,
}

impl SpectralField {
    pub fn from_nodal(grid: Arc<Grid>, nodal: Vec<f64>) -> Result<Self> {
        if nodal.len() != grid.len() {
            return Err(Error::Usage(format!(
                "nodal vector has length {}, grid has {} nodes",
                nodal.len(),
                grid.len()
            )));
        }
        Ok(SpectralField {
            grid,
            nodal,
            coeffs: None,
            sync: Sync::Nodal,
        })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let nodal = grid.nodes().iter().map(|&x| f(x)).collect();
        SpectralField {
            grid,
            nodal,
            coeffs: None,
            sync: Sync::Nodal,
        }
    }

    pub fn from_coeffs(grid: Arc<Grid>, coeffs: Coeffs) -> Result<Self> {
        let ok = matches!(
            (&coeffs, grid.basis()),
            (Coeffs::Fourier(_), Basis::FourierPeriodic)
                | (Coeffs::Chebyshev(_), Basis::ChebyshevExtrema)
        );
        if !ok || coeffs.len() != grid.len() {
            return Err(Error::Usage(
                "coefficient vector does not match the grid basis or size".into(),
            ));
        }
        Ok(SpectralField {
            grid,
            nodal: Vec::new(),
            coeffs: Some(coeffs),
            sync: Sync::Spectral,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn nodal(&mut self) -> Result<&[f64]> {
        if self.sync == Sync::Spectral {
            self.nodal = self.grid.backward(self.coeffs.as_ref().expect("spectral"))?;
            self.sync = Sync::Both;
        }
        Ok(&self.nodal)
    }

    pub fn coeffs(&mut self) -> Result<&Coeffs> {
        if self.sync == Sync::Nodal {
            self.coeffs = Some(self.grid.forward(&self.nodal)?);
            self.sync = Sync::Both;
        }
        Ok(self.coeffs.as_ref().expect("synced"))
    }

    pub fn into_nodal(mut self) -> Result<Vec<f64>> {
        self.nodal()?;
        Ok(self.nodal)
    }

    /// Spectral derivative in physical space.
    pub fn derivative(&mut self) -> Result<SpectralField> {
        let grid = self.grid.clone();
        let d = grid.derivative(self.coeffs()?)?;
        SpectralField::from_nodal(grid, d)
    }

    /// Scale each coefficient by the multiplier at its absolute index.
    pub fn apply_kernel(&mut self, multipliers: &[f64]) -> Result<()> {
        self.coeffs()?;
        self.coeffs
            .as_mut()
            .expect("synced")
            .scale_by_abs_index(multipliers)?;
        self.sync = Sync::Spectral;
        Ok(())
    }

    pub fn hilbert(&mut self) -> Result<SpectralField> {
        if self.grid.basis() != Basis::FourierPeriodic {
            return Err(Error::Usage(
                "the Hilbert transform is defined on periodic Fourier grids only".into(),
            ));
        }
        let mut c = match self.coeffs()? {
            Coeffs::Fourier(c) => c.clone(),
            Coeffs::Chebyshev(_) => unreachable!(),
        };
        hilbert_in_place(&mut c);
        SpectralField::from_coeffs(self.grid.clone(), Coeffs::Fourier(c))
    }

    /// Quadrature mean over the domain.
    pub fn mean(&mut self) -> Result<f64> {
        let grid = self.grid.clone();
        let u = self.nodal()?;
        let total: f64 = u.iter().zip(grid.weights()).map(|(v, w)| v * w).sum();
        Ok(total / grid.spec().length())
    }
}
