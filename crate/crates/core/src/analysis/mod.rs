//! Error norms, convergence orders, energy, spectra and analyticity-strip fits.

pub mod csv_out;
pub mod delta;
pub mod energy;
pub mod norms;

pub use delta::{
    extrapolate_t_star, fit_delta, fit_delta_window, noise_floor, resolved_window, select_fit_window, usable_fit_range, DeltaFit,
    DeltaPoint, DeltaSeries, Extrapolation, FitQuality,
};
pub use energy::{energy, kappa_unit, spectrum, DeltaRecorder, EnergyTracker, SpectrumRecorder};
pub use norms::{convergence_orders, error_norms, error_norms_uniform, ErrorNorms, ErrorReport, ErrorRow, Norm};
