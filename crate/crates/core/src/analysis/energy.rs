//! Energy and spectrum diagnostics, with observers for the time loop.

use crate::analysis::delta::{fit_delta_window, resolved_window, DeltaPoint, DeltaSeries};
use crate::error::{Error, Result};
use crate::grid::{Basis, Grid};
use crate::schemes::{Observer, SnapshotRef};

/// `Σ w_j u_j²`: `Δx Σ u²` on uniform grids, trapezoid on mapped grids.
pub fn energy(u: &[f64], weights: &[f64]) -> f64 {
    u.iter().zip(weights).map(|(u, w)| w * u * u).sum()
}

/// One-sided power spectrum `|û_k|²`, `k = 0..=N`.
pub fn spectrum(grid: &Grid, u: &[f64]) -> Result<Vec<f64>> {
    Ok(grid.forward(u)?.power_spectrum())
}

/// Physical wavenumber of mode index 1 (`2π/L` on Fourier grids).
pub fn kappa_unit(grid: &Grid) -> Result<f64> {
    match grid.basis() {
        Basis::FourierPeriodic => Ok(grid.kappa(1)),
        Basis::ChebyshevExtrema => Err(Error::Usage(
            "analyticity-strip fits need a Fourier grid".into(),
        )),
    }
}

/// Records `(t, energy)` of one component.
#[derive(Debug, Clone, Default)]
pub struct EnergyTracker {
    pub component: usize,
    /// Record after every step instead of only at output times.
    pub every_step: bool,
    pub records: Vec<(f64, f64)>,
}

impl EnergyTracker {
    pub fn new(component: usize, every_step: bool) -> Self {
        EnergyTracker {
            component,
            every_step,
            records: Vec::new(),
        }
    }

    fn record(&mut self, s: &SnapshotRef) {
        let e = energy(&s.state[self.component], s.grid.weights());
        if self.records.last().map_or(true, |&(t, _)| t != s.t) {
            self.records.push((s.t, e));
        }
    }

    /// Largest `|E(t) − E(0)|/E(0)` over the records.
    pub fn max_relative_drift(&self) -> Option<f64> {
        let &(_, e0) = self.records.first()?;
        Some(
            self.records
                .iter()
                .map(|&(_, e)| ((e - e0) / e0).abs())
                .fold(0.0, f64::max),
        )
    }
}

impl Observer for EnergyTracker {
    fn on_step(&mut self, s: &SnapshotRef) -> Result<()> {
        if self.every_step {
            self.record(s);
        }
        Ok(())
    }

    fn on_output(&mut self, s: &SnapshotRef) -> Result<()> {
        self.record(s);
        Ok(())
    }
}

/// Stores the power spectrum of one component at each output time.
#[derive(Debug, Clone, Default)]
pub struct SpectrumRecorder {
    pub component: usize,
    pub spectra: Vec<(f64, Vec<f64>)>,
}

impl SpectrumRecorder {
    pub fn new(component: usize) -> Self {
        SpectrumRecorder {
            component,
            spectra: Vec::new(),
        }
    }
}

impl Observer for SpectrumRecorder {
    fn on_output(&mut self, s: &SnapshotRef) -> Result<()> {
        self.spectra.push((s.t, spectrum(s.grid, &s.state[self.component])?));
        Ok(())
    }
}

/// Fits `δ` at each output time; times where the fit fails are skipped.
#[derive(Debug, Clone)]
pub struct DeltaRecorder {
    pub component: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub algebraic_term: bool,
    pub series: DeltaSeries,
    pub skipped: Vec<(f64, String)>,
}

impl DeltaRecorder {
    pub fn new(component: usize, window: (usize, usize), algebraic_term: bool) -> Self {
        DeltaRecorder {
            component,
            k_min: window.0,
            k_max: window.1,
            algebraic_term,
            series: DeltaSeries::default(),
            skipped: Vec::new(),
        }
    }
}

impl Observer for DeltaRecorder {
    fn on_output(&mut self, s: &SnapshotRef) -> Result<()> {
        let spec = spectrum(s.grid, &s.state[self.component])?;
        let unit = kappa_unit(s.grid)?;
        let Some((k_min, k_max)) = resolved_window(&spec, (self.k_min, self.k_max)) else {
            self.skipped.push((s.t, "too few modes above the noise floor".into()));
            return Ok(());
        };
        match fit_delta_window(&spec, k_min, k_max, unit, self.algebraic_term) {
            Ok(f) => self.series.push(DeltaPoint {
                t: s.t,
                delta: f.delta,
                k_min,
                k_max,
                residual: f.residual,
                quality: f.quality,
            }),
            Err(Error::Fit(msg)) => self.skipped.push((s.t, msg)),
            Err(e) => return Err(e),
        }
        Ok(())
    }
}
