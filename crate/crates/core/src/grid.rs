//! Collocation grids and the transforms attached to them.
//!
//! Fourier grids carry `2N+1` equispaced nodes on a periodic interval and use
//! the normalization `û(k) = (1/(2N+1)) Σ u_j e^{-iκx_j}` with `κ = 2πk/L`.
//! Chebyshev grids carry the `N+1` extrema of `T_N`, optionally pulled through
//! the Kosloff–Tal-Ezer arcsine map, and are stored in increasing `x`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Imaginary residue (relative to the real amplitude) that a backward Fourier
/// transform silently discards.
pub const IMAG_DISCARD_TOL: f64 = 1e-12;
/// Imaginary residue above which a backward Fourier transform is rejected.
pub const IMAG_ERROR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Basis {
    FourierPeriodic,
    ChebyshevExtrema,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::FourierPeriodic => f.write_str("fourier"),
            Basis::ChebyshevExtrema => f.write_str("chebyshev"),
        }
    }
}

/// Geometry of a collocation grid.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub basis: Basis,
    pub domain_start: f64,
    pub domain_end: f64,
    /// `N`: the Fourier grid has `2N+1` nodes, the Chebyshev grid `N+1`.
    pub bandwidth: usize,
    /// Kosloff–Tal-Ezer parameter; `None` keeps the plain extrema.
    pub kosloff_beta: Option<f64>,
}

impl GridSpec {
    pub fn fourier(domain_start: f64, domain_end: f64, bandwidth: usize) -> Self {
        GridSpec {
            basis: Basis::FourierPeriodic,
            domain_start,
            domain_end,
            bandwidth,
            kosloff_beta: None,
        }
    }

    /// Fourier grid from an odd node count `nx = 2N+1`.
    pub fn fourier_nx(domain_start: f64, domain_end: f64, nx: usize) -> Result<Self> {
        if nx < 3 || nx % 2 == 0 {
            return Err(Error::Usage(format!(
                "Fourier grids need an odd node count >= 3, got {nx}"
            )));
        }
        Ok(Self::fourier(domain_start, domain_end, (nx - 1) / 2))
    }

    pub fn chebyshev(
        domain_start: f64,
        domain_end: f64,
        bandwidth: usize,
        kosloff_beta: Option<f64>,
    ) -> Self {
        GridSpec {
            basis: Basis::ChebyshevExtrema,
            domain_start,
            domain_end,
            bandwidth,
            kosloff_beta,
        }
    }

    /// Chebyshev grid from a node count `nx = N+1`.
    pub fn chebyshev_nx(
        domain_start: f64,
        domain_end: f64,
        nx: usize,
        kosloff_beta: Option<f64>,
    ) -> Result<Self> {
        if nx < 3 {
            return Err(Error::Usage(format!(
                "Chebyshev grids need at least 3 nodes, got {nx}"
            )));
        }
        Ok(Self::chebyshev(domain_start, domain_end, nx - 1, kosloff_beta))
    }

    pub fn length(&self) -> f64 {
        self.domain_end - self.domain_start
    }

    pub fn node_count(&self) -> usize {
        match self.basis {
            Basis::FourierPeriodic => 2 * self.bandwidth + 1,
            Basis::ChebyshevExtrema => self.bandwidth + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.domain_end > self.domain_start) || !self.length().is_finite() {
            return Err(Error::Usage(format!(
                "empty or invalid domain [{}, {}]",
                self.domain_start, self.domain_end
            )));
        }
        match self.basis {
            Basis::FourierPeriodic => {
                if self.bandwidth < 1 {
                    return Err(Error::Usage("Fourier bandwidth must be >= 1".into()));
                }
                if self.kosloff_beta.is_some() {
                    return Err(Error::Usage(
                        "the Kosloff map applies to Chebyshev grids only".into(),
                    ));
                }
            }
            Basis::ChebyshevExtrema => {
                if self.bandwidth < 2 {
                    return Err(Error::Usage(format!(
                        "Chebyshev degree must be >= 2, got {}",
                        self.bandwidth
                    )));
                }
                if let Some(beta) = self.kosloff_beta {
                    if !(beta > 0.0 && beta < 1.0) {
                        return Err(Error::Usage(format!(
                            "kosloff_beta must lie strictly inside (0,1), got {beta}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Spectral coefficients of a field.
///
/// Fourier modes are kept in FFT order: slot `j` holds wavenumber `j` for
/// `j <= N` and `j - (2N+1)` otherwise. Chebyshev coefficients are indexed by
/// polynomial degree in the reference coordinate `X ∈ [-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeffs {
    Fourier(Vec<Complex64>),
    Chebyshev(Vec<f64>),
}

impl Coeffs {
    pub fn len(&self) -> usize {
        match self {
            Coeffs::Fourier(c) => c.len(),
            Coeffs::Chebyshev(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Multiply the coefficient of (absolute) index `k` by `mult[k]`.
    pub fn scale_by_abs_index(&mut self, mult: &[f64]) -> Result<()> {
        match self {
            Coeffs::Fourier(c) => scale_fourier(c, mult),
            Coeffs::Chebyshev(c) => {
                if mult.len() != c.len() {
                    return Err(Error::Usage(format!(
                        "multiplier length {} does not match {} Chebyshev coefficients",
                        mult.len(),
                        c.len()
                    )));
                }
                for (a, m) in c.iter_mut().zip(mult) {
                    *a *= m;
                }
                Ok(())
            }
        }
    }

    /// `|coefficient|²` indexed by absolute wavenumber / degree `0..=N`.
    ///
    /// For Fourier data this is `|û(k)|²` read from the non-negative half.
    pub fn power_spectrum(&self) -> Vec<f64> {
        match self {
            Coeffs::Fourier(c) => {
                let n = (c.len() - 1) / 2;
                (0..=n).map(|k| c[k].norm_sqr()).collect()
            }
            Coeffs::Chebyshev(c) => c.iter().map(|a| a * a).collect(),
        }
    }
}

/// Wavenumber held in FFT slot `j` of a length-`nx` (odd) Fourier vector.
#[inline]
pub fn wavenumber(j: usize, nx: usize) -> i64 {
    let n = (nx - 1) / 2;
    if j <= n {
        j as i64
    } else {
        j as i64 - nx as i64
    }
}

/// FFT slot holding wavenumber `k` in a length-`nx` (odd) Fourier vector.
#[inline]
pub fn mode_index(k: i64, nx: usize) -> usize {
    if k >= 0 {
        k as usize
    } else {
        (nx as i64 + k) as usize
    }
}

/// Multiply Fourier modes by a multiplier indexed by `|k|` (length `N+1`).
pub fn scale_fourier(c: &mut [Complex64], mult: &[f64]) -> Result<()> {
    let nx = c.len();
    if nx % 2 == 0 || mult.len() != (nx - 1) / 2 + 1 {
        return Err(Error::Usage(format!(
            "multiplier length {} does not match {} Fourier modes",
            mult.len(),
            nx
        )));
    }
    for (j, v) in c.iter_mut().enumerate() {
        *v *= mult[wavenumber(j, nx).unsigned_abs() as usize];
    }
    Ok(())
}

/// Two-thirds rule: zero every mode with `|k| > floor(2N/3)`.
pub fn dealias_23(c: &mut [Complex64]) {
    let nx = c.len();
    let n = (nx - 1) / 2;
    let cutoff = dealias_cutoff(n);
    for (j, v) in c.iter_mut().enumerate() {
        if wavenumber(j, nx).unsigned_abs() as usize > cutoff {
            *v = Complex64::new(0.0, 0.0);
        }
    }
}

/// Largest wavenumber kept by [`dealias_23`].
pub fn dealias_cutoff(bandwidth: usize) -> usize {
    2 * bandwidth / 3
}

/// Two-thirds truncation by polynomial degree for Chebyshev coefficients.
pub fn dealias_23_chebyshev(c: &mut [f64]) {
    let cutoff = dealias_cutoff(c.len() - 1);
    for a in c.iter_mut().skip(cutoff + 1) {
        *a = 0.0;
    }
}

/// Hilbert multiplier `-i·sgn(k)` applied in place.
pub fn hilbert_in_place(c: &mut [Complex64]) {
    let nx = c.len();
    for (j, v) in c.iter_mut().enumerate() {
        let k = wavenumber(j, nx);
        *v = match k.signum() {
            1 => Complex64::new(v.im, -v.re),
            -1 => Complex64::new(-v.im, v.re),
            _ => Complex64::new(0.0, 0.0),
        };
    }
}

/// A grid with cached nodes, FFT plans and metric factors.
pub struct Grid {
    spec: GridSpec,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Chebyshev: reference coordinate `X` of each stored node.
    reference: Vec<f64>,
    /// Chebyshev: `dX/dx` at each stored node.
    metric: Vec<f64>,
    /// Fourier: `e^{-iκ a}` per FFT slot when the domain does not start at 0.
    phase: Option<Vec<Complex64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("spec", &self.spec)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let mut planner = FftPlanner::<f64>::new();
        let n = spec.bandwidth;
        let a = spec.domain_start;
        let len = spec.length();
        match spec.basis {
            Basis::FourierPeriodic => {
                let nx = 2 * n + 1;
                let dx = len / nx as f64;
                let nodes: Vec<f64> = (0..nx).map(|j| a + j as f64 * dx).collect();
                let phase = (a != 0.0).then(|| {
                    (0..nx)
                        .map(|j| {
                            let kappa =
                                2.0 * std::f64::consts::PI * wavenumber(j, nx) as f64 / len;
                            Complex64::from_polar(1.0, -kappa * a)
                        })
                        .collect()
                });
                Ok(Grid {
                    spec,
                    weights: vec![dx; nx],
                    nodes,
                    reference: Vec::new(),
                    metric: Vec::new(),
                    phase,
                    fwd: planner.plan_fft_forward(nx),
                    inv: planner.plan_fft_inverse(nx),
                })
            }
            Basis::ChebyshevExtrema => {
                let nf = n as f64;
                // Stored node i sits at X = -cos(πi/N), increasing in i.
                let reference: Vec<f64> = (0..=n)
                    .map(|i| {
                        if i == 0 {
                            -1.0
                        } else if i == n {
                            1.0
                        } else if 2 * i == n {
                            0.0
                        } else {
                            -(std::f64::consts::PI * i as f64 / nf).cos()
                        }
                    })
                    .collect();
                let half = 0.5 * len;
                let (chi, dchi_dx): (Vec<f64>, Vec<f64>) = match spec.kosloff_beta {
                    None => (reference.clone(), vec![1.0; n + 1]),
                    Some(beta) => {
                        let s = beta.asin();
                        reference
                            .iter()
                            .map(|&x| {
                                let bx = beta * x;
                                ((bx).asin() / s, beta / (s * (1.0 - bx * bx).sqrt()))
                            })
                            .unzip()
                    }
                };
                let mut nodes: Vec<f64> = chi.iter().map(|&c| a + (c + 1.0) * half).collect();
                nodes[0] = spec.domain_start;
                nodes[n] = spec.domain_end;
                // dX/dx = (dX/dχ)(dχ/dx) with dχ/dx = 2/L.
                let metric = dchi_dx.iter().map(|&d| 1.0 / (d * half)).collect();
                let mut weights = vec![0.0; n + 1];
                for i in 0..n {
                    let h = 0.5 * (nodes[i + 1] - nodes[i]);
                    weights[i] += h;
                    weights[i + 1] += h;
                }
                Ok(Grid {
                    spec,
                    nodes,
                    weights,
                    reference,
                    metric,
                    phase: None,
                    fwd: planner.plan_fft_forward(2 * n),
                    inv: planner.plan_fft_inverse(2 * n),
                })
            }
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn basis(&self) -> Basis {
        self.spec.basis
    }

    pub fn bandwidth(&self) -> usize {
        self.spec.bandwidth
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights: `Δx` on Fourier grids, trapezoid on Chebyshev grids.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Reference coordinate `X ∈ [-1,1]` of each node (Chebyshev only).
    pub fn reference_nodes(&self) -> &[f64] {
        &self.reference
    }

    pub fn min_spacing(&self) -> f64 {
        match self.spec.basis {
            Basis::FourierPeriodic => self.weights[0],
            Basis::ChebyshevExtrema => self
                .nodes
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Angular wavenumber `2πk/L`.
    pub fn kappa(&self, k: i64) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.spec.length()
    }

    fn require(&self, basis: Basis, op: &str) -> Result<()> {
        if self.spec.basis != basis {
            return Err(Error::Usage(format!(
                "{op} requires a {basis} grid, got {}",
                self.spec.basis
            )));
        }
        Ok(())
    }

    fn require_len(&self, got: usize, want: usize, what: &str) -> Result<()> {
        if got != want {
            return Err(Error::Usage(format!(
                "{what} has length {got}, grid expects {want}"
            )));
        }
        Ok(())
    }

    pub fn fourier_forward(&self, u: &[f64]) -> Result<Vec<Complex64>> {
        self.require(Basis::FourierPeriodic, "fourier_forward")?;
        self.require_len(u.len(), self.len(), "nodal vector")?;
        let nx = self.len();
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        run_fft(self.fwd.as_ref(), &mut buf);
        let scale = 1.0 / nx as f64;
        match &self.phase {
            Some(ph) => buf.iter_mut().zip(ph).for_each(|(v, p)| *v *= p * scale),
            None => buf.iter_mut().for_each(|v| *v *= scale),
        }
        Ok(buf)
    }

    pub fn fourier_backward(&self, c: &[Complex64]) -> Result<Vec<f64>> {
        self.require(Basis::FourierPeriodic, "fourier_backward")?;
        self.require_len(c.len(), self.len(), "coefficient vector")?;
        let mut buf = match &self.phase {
            Some(ph) => c.iter().zip(ph).map(|(v, p)| v * p.conj()).collect(),
            None => c.to_vec(),
        };
        run_fft(self.inv.as_ref(), &mut buf);
        let mut re_max = 0.0f64;
        let mut im_max = 0.0f64;
        for v in &buf {
            re_max = re_max.max(v.re.abs());
            im_max = im_max.max(v.im.abs());
        }
        if im_max > IMAG_ERROR_TOL * re_max.max(1.0) {
            return Err(Error::NumericalConsistency(format!(
                "backward Fourier transform left an imaginary part of {im_max:.3e} \
                 (real scale {re_max:.3e}); coefficients are not conjugate-symmetric"
            )));
        }
        Ok(buf.into_iter().map(|v| v.re).collect())
    }

    pub fn chebyshev_forward(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.require(Basis::ChebyshevExtrema, "chebyshev_forward")?;
        self.require_len(u.len(), self.len(), "nodal vector")?;
        let n = self.spec.bandwidth;
        // u at X_j = cos(πj/N) is the stored vector reversed; extend evenly.
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        for j in 0..=n {
            buf[j].re = u[n - j];
        }
        for j in 1..n {
            buf[2 * n - j].re = u[n - j];
        }
        run_fft(self.fwd.as_ref(), &mut buf);
        let nf = n as f64;
        Ok((0..=n)
            .map(|k| {
                let cbar = if k == 0 || k == n { 2.0 } else { 1.0 };
                buf[k].re / (nf * cbar)
            })
            .collect())
    }

    pub fn chebyshev_backward(&self, a: &[f64]) -> Result<Vec<f64>> {
        self.require(Basis::ChebyshevExtrema, "chebyshev_backward")?;
        self.require_len(a.len(), self.len(), "coefficient vector")?;
        let n = self.spec.bandwidth;
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
        for k in 0..=n {
            buf[k].re = a[k];
        }
        for k in 1..n {
            buf[2 * n - k].re = a[k];
        }
        // The inverse plan is unnormalized, and for real even input matches the forward sum.
        run_fft(self.inv.as_ref(), &mut buf);
        Ok((0..=n)
            .map(|i| {
                let j = n - i;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                0.5 * (buf[j].re + a[0] + sign * a[n])
            })
            .collect())
    }

    pub fn forward(&self, u: &[f64]) -> Result<Coeffs> {
        match self.spec.basis {
            Basis::FourierPeriodic => self.fourier_forward(u).map(Coeffs::Fourier),
            Basis::ChebyshevExtrema => self.chebyshev_forward(u).map(Coeffs::Chebyshev),
        }
    }

    pub fn backward(&self, c: &Coeffs) -> Result<Vec<f64>> {
        match c {
            Coeffs::Fourier(v) => self.fourier_backward(v),
            Coeffs::Chebyshev(v) => self.chebyshev_backward(v),
        }
    }

    /// Physical-space derivative at the nodes of the field with coefficients `c`.
    pub fn derivative(&self, c: &Coeffs) -> Result<Vec<f64>> {
        match c {
            Coeffs::Fourier(v) => {
                self.require(Basis::FourierPeriodic, "Fourier derivative")?;
                let mut d = v.clone();
                self.fourier_derivative_in_place(&mut d);
                self.fourier_backward(&d)
            }
            Coeffs::Chebyshev(v) => {
                self.require(Basis::ChebyshevExtrema, "Chebyshev derivative")?;
                let d = chebyshev_derivative_coeffs(v);
                let mut out = self.chebyshev_backward(&d)?;
                out.iter_mut().zip(&self.metric).for_each(|(o, m)| *o *= m);
                Ok(out)
            }
        }
    }

    /// Apply the two-thirds truncation to a nodal vector.
    pub fn truncate_23(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut c = self.forward(u)?;
        match &mut c {
            Coeffs::Fourier(v) => dealias_23(v),
            Coeffs::Chebyshev(v) => dealias_23_chebyshev(v),
        }
        self.backward(&c)
    }

    /// Nodal derivative of nodal data, optionally truncating the spectrum first.
    pub fn derivative_nodal(&self, u: &[f64], dealias: bool) -> Result<Vec<f64>> {
        let mut c = self.forward(u)?;
        if dealias {
            match &mut c {
                Coeffs::Fourier(v) => dealias_23(v),
                Coeffs::Chebyshev(v) => dealias_23_chebyshev(v),
            }
        }
        self.derivative(&c)
    }

    /// Forward transforms of several fields, two real fields per complex FFT.
    pub fn forward_many(&self, fields: &[&[f64]]) -> Result<Vec<Coeffs>> {
        let mut out = Vec::with_capacity(fields.len());
        for pair in fields.chunks(2) {
            match pair {
                [u, v] => {
                    let (a, b) = self.forward_pair(u, v)?;
                    out.push(a);
                    out.push(b);
                }
                [u] => out.push(self.forward(u)?),
                _ => unreachable!(),
            }
        }
        Ok(out)
    }

    /// Backward transforms of several coefficient sets, two per complex FFT.
    ///
    /// Fourier inputs must be conjugate-symmetric; unlike [`Grid::backward`]
    /// this is not checked.
    pub fn backward_many(&self, coeffs: &[Coeffs]) -> Result<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(coeffs.len());
        for pair in coeffs.chunks(2) {
            match pair {
                [a, b] => {
                    let (u, v) = self.backward_pair(a, b)?;
                    out.push(u);
                    out.push(v);
                }
                [a] => out.push(self.backward(a)?),
                _ => unreachable!(),
            }
        }
        Ok(out)
    }

    fn forward_pair(&self, u: &[f64], v: &[f64]) -> Result<(Coeffs, Coeffs)> {
        self.require_len(u.len(), self.len(), "nodal vector")?;
        self.require_len(v.len(), self.len(), "nodal vector")?;
        match self.spec.basis {
            Basis::FourierPeriodic => {
                let nx = self.len();
                let (su, sv) = (pair_scale(u), pair_scale(v));
                let mut z: Vec<Complex64> =
                    u.iter().zip(v).map(|(&a, &b)| Complex64::new(a / su, b / sv)).collect();
                run_fft(self.fwd.as_ref(), &mut z);
                let scale = 0.5 / nx as f64;
                let mut cu = vec![Complex64::new(0.0, 0.0); nx];
                let mut cv = vec![Complex64::new(0.0, 0.0); nx];
                for k in 0..nx {
                    let zk = z[k];
                    let zm = z[(nx - k) % nx].conj();
                    cu[k] = (zk + zm) * (scale * su);
                    let d = (zk - zm) * (scale * sv);
                    cv[k] = Complex64::new(d.im, -d.re);
                }
                if let Some(ph) = &self.phase {
                    for ((a, b), p) in cu.iter_mut().zip(cv.iter_mut()).zip(ph) {
                        *a *= p;
                        *b *= p;
                    }
                }
                Ok((Coeffs::Fourier(cu), Coeffs::Fourier(cv)))
            }
            Basis::ChebyshevExtrema => {
                let n = self.spec.bandwidth;
                let (su, sv) = (pair_scale(u), pair_scale(v));
                let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
                for j in 0..=n {
                    buf[j] = Complex64::new(u[n - j] / su, v[n - j] / sv);
                }
                for j in 1..n {
                    buf[2 * n - j] = buf[j];
                }
                run_fft(self.fwd.as_ref(), &mut buf);
                let nf = n as f64;
                let (mut a, mut b) = (vec![0.0; n + 1], vec![0.0; n + 1]);
                for k in 0..=n {
                    let cbar = if k == 0 || k == n { 2.0 } else { 1.0 };
                    a[k] = su * buf[k].re / (nf * cbar);
                    b[k] = sv * buf[k].im / (nf * cbar);
                }
                Ok((Coeffs::Chebyshev(a), Coeffs::Chebyshev(b)))
            }
        }
    }

    fn backward_pair(&self, a: &Coeffs, b: &Coeffs) -> Result<(Vec<f64>, Vec<f64>)> {
        self.require_len(a.len(), self.len(), "coefficient vector")?;
        self.require_len(b.len(), self.len(), "coefficient vector")?;
        match (a, b) {
            (Coeffs::Fourier(a), Coeffs::Fourier(b)) => {
                self.require(Basis::FourierPeriodic, "fourier_backward")?;
                let sa = a.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
                let sb = b.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
                let i = Complex64::new(0.0, 1.0);
                let mut z: Vec<Complex64> = match &self.phase {
                    Some(ph) => a
                        .iter()
                        .zip(b)
                        .zip(ph)
                        .map(|((x, y), p)| (x / sa + i * y / sb) * p.conj())
                        .collect(),
                    None => a.iter().zip(b).map(|(x, y)| x / sa + i * y / sb).collect(),
                };
                run_fft(self.inv.as_ref(), &mut z);
                Ok(z.iter().map(|c| (c.re * sa, c.im * sb)).unzip())
            }
            (Coeffs::Chebyshev(a), Coeffs::Chebyshev(b)) => {
                self.require(Basis::ChebyshevExtrema, "chebyshev_backward")?;
                let n = self.spec.bandwidth;
                let (sa, sb) = (pair_scale(a), pair_scale(b));
                let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
                for k in 0..=n {
                    buf[k] = Complex64::new(a[k] / sa, b[k] / sb);
                }
                for k in 1..n {
                    buf[2 * n - k] = buf[k];
                }
                run_fft(self.inv.as_ref(), &mut buf);
                Ok((0..=n)
                    .map(|i| {
                        let j = n - i;
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        (
                            0.5 * (sa * buf[j].re + a[0] + sign * a[n]),
                            0.5 * (sb * buf[j].im + b[0] + sign * b[n]),
                        )
                    })
                    .unzip())
            }
            _ => Err(Error::Usage("coefficient kinds differ".into())),
        }
    }

    /// Coefficients of the derivative; Chebyshev results are in `X` and still
    /// need the metric after the backward transform.
    fn derivative_coeffs(&self, c: &mut Coeffs) {
        match c {
            Coeffs::Fourier(v) => self.fourier_derivative_in_place(v),
            Coeffs::Chebyshev(v) => *v = chebyshev_derivative_coeffs(v),
        }
    }

    /// [`Grid::derivative_nodal`] for several fields at once.
    pub fn derivative_nodal_many(&self, fields: &[&[f64]], dealias: bool) -> Result<Vec<Vec<f64>>> {
        let mut c = self.forward_many(fields)?;
        for c in c.iter_mut() {
            if dealias {
                truncate_coeffs(c);
            }
            self.derivative_coeffs(c);
        }
        let mut out = self.backward_many(&c)?;
        if self.spec.basis == Basis::ChebyshevExtrema {
            for o in out.iter_mut() {
                o.iter_mut().zip(&self.metric).for_each(|(o, m)| *o *= m);
            }
        }
        Ok(out)
    }

    /// [`Grid::truncate_23`] for several fields at once.
    pub fn truncate_23_many(&self, fields: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
        let mut c = self.forward_many(fields)?;
        c.iter_mut().for_each(truncate_coeffs);
        self.backward_many(&c)
    }

    /// `backward(mult(|k|) · forward(u))` for several fields at once.
    pub fn multiply_many(&self, fields: &[&[f64]], mult: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mut c = self.forward_many(fields)?;
        for c in c.iter_mut() {
            c.scale_by_abs_index(mult)?;
        }
        self.backward_many(&c)
    }

    /// Multiply Fourier modes by `iκ`.
    pub fn fourier_derivative_in_place(&self, c: &mut [Complex64]) {
        let nx = c.len();
        for (j, v) in c.iter_mut().enumerate() {
            let kappa = self.kappa(wavenumber(j, nx));
            *v = Complex64::new(-kappa * v.im, kappa * v.re);
        }
    }
}

thread_local! {
    static FFT_SCRATCH: std::cell::RefCell<Vec<Complex64>> = const { std::cell::RefCell::new(Vec::new()) };
}

/// In-place FFT with a reused per-thread scratch buffer.
fn run_fft(fft: &dyn Fft<f64>, buf: &mut [Complex64]) {
    FFT_SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        let need = fft.get_inplace_scratch_len();
        if s.len() < need {
            s.resize(need, Complex64::new(0.0, 0.0));
        }
        fft.process_with_scratch(buf, &mut s[..need]);
    })
}

/// Normalisation keeping the two halves of a paired FFT at comparable magnitude.
fn pair_scale(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |m: f64, v| m.max(v.abs())).max(f64::MIN_POSITIVE)
}

fn truncate_coeffs(c: &mut Coeffs) {
    match c {
        Coeffs::Fourier(v) => dealias_23(v),
        Coeffs::Chebyshev(v) => dealias_23_chebyshev(v),
    }
}

/// Coefficients of `du/dX` from those of `u` (descending recurrence).
pub fn chebyshev_derivative_coeffs(a: &[f64]) -> Vec<f64> {
    let n = a.len() - 1;
    let mut d = vec![0.0; n + 1];
    if n == 0 {
        return d;
    }
    d[n - 1] = 2.0 * n as f64 * a[n];
    for k in (0..n.saturating_sub(1)).rev() {
        d[k] = d[k + 2] + 2.0 * (k + 1) as f64 * a[k + 1];
    }
    d[0] *= 0.5;
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn fgrid(n: usize, a: f64, b: f64) -> Grid {
        Grid::new(GridSpec::fourier(a, b, n)).unwrap()
    }

    fn max_err(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Direct O(n²) evaluation of the forward DFT.
    fn direct_dft(g: &Grid, u: &[f64]) -> Vec<Complex64> {
        let nx = g.len();
        (0..nx)
            .map(|j| {
                let kappa = g.kappa(wavenumber(j, nx));
                u.iter()
                    .zip(g.nodes())
                    .map(|(&v, &x)| Complex64::from_polar(v, -kappa * x))
                    .sum::<Complex64>()
                    / nx as f64
            })
            .collect()
    }

    fn batched_matches_single(g: &Grid) {
        let fields: Vec<Vec<f64>> = (0..3)
            .map(|m| {
                g.nodes()
                    .iter()
                    .map(|x| (1.3 * x + m as f64).sin() + 0.2 * (m as f64 * x).cos() * x)
                    .collect()
            })
            .collect();
        let refs: Vec<&[f64]> = fields.iter().map(|f| f.as_slice()).collect();
        let coeffs = g.forward_many(&refs).unwrap();
        for (f, c) in fields.iter().zip(&coeffs) {
            let single = g.forward(f).unwrap();
            let (a, b) = (c.power_spectrum(), single.power_spectrum());
            assert!(max_err(&a, &b) < 1e-13);
            assert!(max_err(&g.backward(c).unwrap(), &g.backward(&single).unwrap()) < 1e-13);
        }
        for (f, u) in fields.iter().zip(g.backward_many(&coeffs).unwrap()) {
            assert!(max_err(f, &u) < 1e-13);
        }
        for dealias in [false, true] {
            let many = g.derivative_nodal_many(&refs, dealias).unwrap();
            for (f, d) in fields.iter().zip(&many) {
                let single = g.derivative_nodal(f, dealias).unwrap();
                let scale = single.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                assert!(max_err(d, &single) < 1e-12 * scale);
            }
        }
        let t = g.truncate_23_many(&refs).unwrap();
        assert!(max_err(&t[2], &g.truncate_23(&fields[2]).unwrap()) < 1e-13);
    }

    #[test]
    fn batched_transforms_match_single() {
        batched_matches_single(&fgrid(20, -1.0, 2.0));
        batched_matches_single(&Grid::new(GridSpec::chebyshev(-1.0, 1.0, 24, None)).unwrap());
        batched_matches_single(&Grid::new(GridSpec::chebyshev(0.0, 1.0, 31, Some(0.99))).unwrap());
    }

    #[test]
    fn sine_has_two_modes() {
        let g = fgrid(8, 0.0, 1.0);
        let u: Vec<f64> = g.nodes().iter().map(|x| (2.0 * PI * x).sin()).collect();
        let c = g.fourier_forward(&u).unwrap();
        for (j, v) in c.iter().enumerate() {
            let want = match wavenumber(j, 17) {
                1 => Complex64::new(0.0, -0.5),
                -1 => Complex64::new(0.0, 0.5),
                _ => Complex64::new(0.0, 0.0),
            };
            assert!((v - want).norm() < 1e-14, "k={} {v}", wavenumber(j, 17));
        }
        let back = g.fourier_backward(&c).unwrap();
        assert!(max_err(&back, &u) < 1e-14);
    }

    #[test]
    fn constant_maps_to_mean_mode() {
        let g = fgrid(5, 0.0, 1.0);
        let c = g.fourier_forward(&[1.0; 11]).unwrap();
        assert!((c[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c[1..].iter().all(|v| v.norm() < 1e-15));
        let mut only_mean = vec![Complex64::new(0.0, 0.0); 11];
        only_mean[0] = Complex64::new(2.5, 0.0);
        let u = g.fourier_backward(&only_mean).unwrap();
        assert!(u.iter().all(|&v| (v - 2.5).abs() < 1e-15));
    }

    #[test]
    fn sine_squared_on_short_period() {
        let l = 1.0 / 6.0;
        let g = fgrid(16, 0.0, l);
        let u: Vec<f64> = g
            .nodes()
            .iter()
            .map(|x| (2.0 * PI * x / l).sin().powi(2))
            .collect();
        let c = g.fourier_forward(&u).unwrap();
        let direct = direct_dft(&g, &u);
        for (j, v) in c.iter().enumerate() {
            assert!((v - direct[j]).norm() < 1e-14);
            let want = match wavenumber(j, 33).abs() {
                0 => 0.5,
                2 => -0.25,
                _ => 0.0,
            };
            assert!((v.re - want).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn shifted_domain_matches_direct_sum() {
        let g = fgrid(10, -5.0, 5.0);
        let u: Vec<f64> = g.nodes().iter().map(|x| (-0.3 * x * x).exp()).collect();
        let c = g.fourier_forward(&u).unwrap();
        let direct = direct_dft(&g, &u);
        for (a, b) in c.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!(max_err(&g.fourier_backward(&c).unwrap(), &u) < 1e-14);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let g = fgrid(4, 0.0, 1.0);
        let mut c = vec![Complex64::new(0.0, 0.0); 9];
        c[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            g.fourier_backward(&c),
            Err(Error::NumericalConsistency(_))
        ));
    }

    #[test]
    fn wrong_basis_is_usage_error() {
        let g = fgrid(4, 0.0, 1.0);
        assert!(matches!(g.chebyshev_forward(&[0.0; 9]), Err(Error::Usage(_))));
        let c = Grid::new(GridSpec::chebyshev(0.0, 1.0, 8, None)).unwrap();
        assert!(matches!(c.fourier_forward(&[0.0; 9]), Err(Error::Usage(_))));
    }

    #[test]
    fn even_and_tiny_grids_rejected() {
        assert!(GridSpec::fourier_nx(0.0, 1.0, 614).is_err());
        assert!(Grid::new(GridSpec::chebyshev(0.0, 1.0, 1, None)).is_err());
        assert!(Grid::new(GridSpec::chebyshev(0.0, 1.0, 8, Some(1.0))).is_err());
        assert!(Grid::new(GridSpec::chebyshev(0.0, 1.0, 8, Some(0.0))).is_err());
    }

    #[test]
    fn fourier_derivative_of_sine() {
        let g = fgrid(16, 0.0, 1.0);
        let u: Vec<f64> = g.nodes().iter().map(|x| (2.0 * PI * x).sin()).collect();
        let d = g.derivative(&g.forward(&u).unwrap()).unwrap();
        let want: Vec<f64> = g.nodes().iter().map(|x| 2.0 * PI * (2.0 * PI * x).cos()).collect();
        assert!(max_err(&d, &want) < 1e-11);
        let zero = g.derivative(&g.forward(&[3.0; 33]).unwrap()).unwrap();
        assert!(zero.iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn derivative_of_product_of_modes() {
        let g = fgrid(32, 0.0, 2.0);
        let f = |x: f64| (PI * x).sin() * (3.0 * PI * x).cos();
        let df = |x: f64| {
            PI * (PI * x).cos() * (3.0 * PI * x).cos()
                - 3.0 * PI * (PI * x).sin() * (3.0 * PI * x).sin()
        };
        let u: Vec<f64> = g.nodes().iter().map(|&x| f(x)).collect();
        let want: Vec<f64> = g.nodes().iter().map(|&x| df(x)).collect();
        let d = g.derivative(&g.forward(&u).unwrap()).unwrap();
        assert!(max_err(&d, &want) < 1e-10);
    }

    fn cgrid(n: usize, beta: Option<f64>, a: f64, b: f64) -> Grid {
        Grid::new(GridSpec::chebyshev(a, b, n, beta)).unwrap()
    }

    #[test]
    fn chebyshev_basis_identities() {
        let g = cgrid(8, None, -1.0, 1.0);
        let x = g.reference_nodes().to_vec();
        let t3: Vec<f64> = x.iter().map(|x| 4.0 * x * x * x - 3.0 * x).collect();
        let a = g.chebyshev_forward(&t3).unwrap();
        for (k, v) in a.iter().enumerate() {
            assert!((v - if k == 3 { 1.0 } else { 0.0 }).abs() < 1e-13);
        }
        let a = g.chebyshev_forward(&[1.0; 9]).unwrap();
        assert!((a[0] - 1.0).abs() < 1e-14 && a[1..].iter().all(|v| v.abs() < 1e-14));

        let sq: Vec<f64> = x.iter().map(|x| x * x).collect();
        let a = g.chebyshev_forward(&sq).unwrap();
        // Direct cosine-sum oracle for X^2.
        let n = 8usize;
        for k in 0..=n {
            let mut s = 0.0;
            for j in 0..=n {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                let xj = (PI * j as f64 / n as f64).cos();
                s += w * xj * xj * (PI * (j * k) as f64 / n as f64).cos();
            }
            let cbar = if k == 0 || k == n { 2.0 } else { 1.0 };
            let direct = 2.0 * s / (n as f64 * cbar);
            assert!((a[k] - direct).abs() < 1e-14);
        }
        assert!((a[0] - 0.5).abs() < 1e-14 && (a[2] - 0.5).abs() < 1e-14);
        assert!(a.iter().enumerate().all(|(k, v)| k == 0 || k == 2 || v.abs() < 1e-14));
    }

    #[test]
    fn chebyshev_nodes_monotone_with_exact_endpoints() {
        for beta in [None, Some(0.5), Some(0.999)] {
            let g = cgrid(40, beta, 0.0, 1.0);
            let x = g.nodes();
            assert_eq!(x[0], 0.0);
            assert_eq!(x[40], 1.0);
            assert!(x.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn kosloff_map_widens_min_spacing() {
        let plain = cgrid(614, None, 0.0, 1.0);
        let mapped = cgrid(614, Some(0.999), 0.0, 1.0);
        assert!(mapped.min_spacing() > plain.min_spacing());
    }

    #[test]
    fn chebyshev_derivative_of_cubic() {
        let cube = |g: &Grid| -> f64 {
            let u: Vec<f64> = g.nodes().iter().map(|x| x * x * x).collect();
            let d = g.derivative(&g.forward(&u).unwrap()).unwrap();
            let want: Vec<f64> = g.nodes().iter().map(|x| 3.0 * x * x).collect();
            max_err(&d, &want)
        };
        assert!(cube(&cgrid(32, None, -1.0, 1.0)) < 1e-11);
        assert!(cube(&cgrid(32, Some(0.5), -1.0, 1.0)) < 1e-9);
        assert!(cube(&cgrid(512, Some(0.999), -1.0, 1.0)) < 1e-9);
        // affine rescaling
        assert!(cube(&cgrid(48, Some(0.5), 0.0, 2.0)) < 1e-9);
    }

    #[test]
    fn dealias_examples() {
        let mut c = vec![Complex64::new(1.0, 0.0); 615];
        dealias_23(&mut c);
        for (j, v) in c.iter().enumerate() {
            let k = wavenumber(j, 615).unsigned_abs();
            assert_eq!(v.re, if k <= 204 { 1.0 } else { 0.0 });
        }
        let once = c.clone();
        dealias_23(&mut c);
        assert_eq!(once, c);
        let mut c = vec![Complex64::new(1.0, 0.0); 7];
        dealias_23(&mut c);
        let zeroed: Vec<i64> = (0..7).filter(|&j| c[j].re == 0.0).map(|j| wavenumber(j, 7)).collect();
        assert_eq!(zeroed, vec![3, -3]);
    }

    #[test]
    fn hilbert_of_sine_and_constant() {
        let g = fgrid(8, 0.0, 1.0);
        let u: Vec<f64> = g.nodes().iter().map(|x| (2.0 * PI * x).sin()).collect();
        let mut c = g.fourier_forward(&u).unwrap();
        hilbert_in_place(&mut c);
        let h = g.fourier_backward(&c).unwrap();
        let want: Vec<f64> = g.nodes().iter().map(|x| -(2.0 * PI * x).cos()).collect();
        assert!(max_err(&h, &want) < 1e-14);
        let mut c = g.fourier_forward(&[4.0; 17]).unwrap();
        hilbert_in_place(&mut c);
        assert!(c.iter().all(|v| v.norm() < 1e-15));
    }

    fn nodal_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-10.0f64..10.0, len)
    }

    proptest! {
        #[test]
        fn fourier_roundtrip(u in nodal_strategy(31), a in -3.0f64..3.0) {
            let g = fgrid(15, a, a + 2.5);
            let back = g.fourier_backward(&g.fourier_forward(&u).unwrap()).unwrap();
            let scale = u.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
            prop_assert!(max_err(&back, &u) <= 1e-12 * scale);
        }

        #[test]
        fn conjugate_symmetry(u in nodal_strategy(21)) {
            let g = fgrid(10, 0.0, 1.0);
            let c = g.fourier_forward(&u).unwrap();
            for k in 1..=10i64 {
                let d = c[mode_index(k, 21)] - c[mode_index(-k, 21)].conj();
                prop_assert!(d.norm() < 1e-14);
            }
        }

        #[test]
        fn parseval(u in nodal_strategy(41)) {
            let g = fgrid(20, 0.0, 3.0);
            let c = g.fourier_forward(&u).unwrap();
            let lhs: f64 = g.weights()[0] * u.iter().map(|v| v * v).sum::<f64>();
            let rhs: f64 = 3.0 * c.iter().map(|v| v.norm_sqr()).sum::<f64>();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1e-300));
        }

        #[test]
        fn chebyshev_roundtrip(u in nodal_strategy(25), beta in 0.05f64..0.99) {
            let g = cgrid(24, Some(beta), -2.0, 1.0);
            let back = g.chebyshev_backward(&g.chebyshev_forward(&u).unwrap()).unwrap();
            let scale = u.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
            prop_assert!(max_err(&back, &u) <= 1e-12 * scale);
        }

        #[test]
        fn dealias_is_projection(re in nodal_strategy(61), im in nodal_strategy(61)) {
            let mut c: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
            dealias_23(&mut c);
            let once = c.clone();
            dealias_23(&mut c);
            prop_assert_eq!(once, c);
        }

        #[test]
        fn hilbert_squared_is_minus_identity_on_zero_mean(u in nodal_strategy(33)) {
            let g = fgrid(16, 0.0, 1.0);
            let mut c = g.fourier_forward(&u).unwrap();
            hilbert_in_place(&mut c);
            hilbert_in_place(&mut c);
            let hh = g.fourier_backward(&c).unwrap();
            let mean = u.iter().sum::<f64>() / u.len() as f64;
            let want: Vec<f64> = u.iter().map(|v| -(v - mean)).collect();
            prop_assert!(max_err(&hh, &want) < 1e-12);
        }
    }
}
