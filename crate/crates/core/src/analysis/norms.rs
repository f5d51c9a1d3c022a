use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorNorms {
    pub fn get(&self, norm: Norm) -> f64 {
        match norm {
            Norm::L1 => self.l1,
            Norm::L2 => self.l2,
            Norm::Linf => self.linf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];

    pub fn name(&self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

/// Discrete `L1`, `L2`, `L∞` norms of `approx − reference` with quadrature weights.
pub fn error_norms(approx: &[f64], reference: &[f64], weights: &[f64]) -> Result<ErrorNorms> {
    if approx.len() != reference.len() || approx.len() != weights.len() {
        return Err(Error::Usage(format!(
            "length mismatch: approx {}, reference {}, weights {}",
            approx.len(),
            reference.len(),
            weights.len()
        )));
    }
    let mut n = ErrorNorms::default();
    let mut sq = 0.0;
    for ((a, r), w) in approx.iter().zip(reference).zip(weights) {
        let e = (a - r).abs();
        n.l1 += w * e;
        sq += w * e * e;
        n.linf = n.linf.max(e);
    }
    n.l2 = sq.sqrt();
    Ok(n)
}

/// Norms on a uniform grid with spacing `dx`.
pub fn error_norms_uniform(approx: &[f64], reference: &[f64], dx: f64) -> Result<ErrorNorms> {
    error_norms(approx, reference, &vec![dx; approx.len()])
}

/// Observed order between successive rows `(Nx, error)`: `ln(e_a/e_b)/ln(N_b/N_a)`.
///
/// The first entry is always `None`; rows with a zero or non-finite error, or a
/// repeated resolution, also give `None`.
pub fn convergence_orders(rows: &[(usize, f64)]) -> Vec<Option<f64>> {
    let mut out = vec![None; rows.len()];
    for i in 1..rows.len() {
        let (na, ea) = rows[i - 1];
        let (nb, eb) = rows[i];
        if na == nb || !(ea > 0.0 && eb > 0.0 && ea.is_finite() && eb.is_finite()) {
            continue;
        }
        out[i] = Some((ea / eb).ln() / (nb as f64 / na as f64).ln());
    }
    out
}

/// One line of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub nx: usize,
    pub t: f64,
    pub norms: ErrorNorms,
}

/// Errors over resolutions at a fixed time, with orders between adjacent rows.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn push(&mut self, row: ErrorRow) {
        self.rows.push(row);
    }

    /// Rows at time `t`, sorted by resolution.
    pub fn at_time(&self, t: f64) -> Vec<&ErrorRow> {
        let mut r: Vec<&ErrorRow> = self
            .rows
            .iter()
            .filter(|r| (r.t - t).abs() <= 1e-12 * t.abs().max(1.0))
            .collect();
        r.sort_by_key(|r| r.nx);
        r
    }

    pub fn times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.rows.iter().map(|r| r.t).collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    pub fn orders(&self, t: f64, norm: Norm) -> Vec<Option<f64>> {
        let rows: Vec<(usize, f64)> = self
            .at_time(t)
            .iter()
            .map(|r| (r.nx, r.norms.get(norm)))
            .collect();
        convergence_orders(&rows)
    }
}
