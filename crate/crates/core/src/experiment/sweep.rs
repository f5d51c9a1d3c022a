//! Parameter sweeps: independent member runs joined into one table.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::csv_out::{fmt_f64, to_file};
use crate::analysis::{convergence_orders, ErrorRow, Norm};
use crate::error::{Error, Result};
use crate::experiment::config::{ExperimentConfig, SweepAxis};
use crate::experiment::runner::{run_experiment, RunStatus, BUILD_DESCRIBE};

pub const SWEEP_HEADER: [&str; 13] = [
    "value", "nx", "t", "status", "l1", "order_l1", "l2", "order_l2", "linf", "order_linf",
    "t_star", "member", "failure",
];

/// Outcome of one sweep member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberOutcome {
    pub value: f64,
    /// Members with equal `group` form one convergence series (NaN for an `nx` sweep).
    pub group: f64,
    pub nx: usize,
    pub member: String,
    pub status: RunStatus,
    pub failure: Option<String>,
    pub t_final: f64,
    pub errors: Vec<ErrorRow>,
    pub t_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: String,
    pub axis: Option<SweepAxis>,
    pub build: String,
    pub members: Vec<MemberOutcome>,
}

impl SweepReport {
    /// Error rows of completed members in `group`, by resolution, at time `t`.
    pub fn series(&self, group: f64, t: f64) -> Vec<(usize, ErrorRow)> {
        let mut rows: Vec<(usize, ErrorRow)> = self
            .members
            .iter()
            .filter(|m| m.status == RunStatus::Completed && same(m.group, group))
            .flat_map(|m| m.errors.iter().filter(|r| same(r.t, t)).map(|r| (m.nx, r.clone())))
            .collect();
        rows.sort_by_key(|r| r.0);
        rows
    }

    /// Orders between adjacent resolutions within one group.
    pub fn orders(&self, group: f64, t: f64, norm: Norm) -> Vec<(usize, Option<f64>)> {
        let s = self.series(group, t);
        let e: Vec<(usize, f64)> = s.iter().map(|(n, r)| (*n, r.norms.get(norm))).collect();
        s.iter().map(|r| r.0).zip(convergence_orders(&e)).collect()
    }
}

fn same(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-12 * a.abs().max(1.0)
}

/// Run every member (in parallel on `jobs` threads) under `dir/<member>/` and
/// write `dir/sweep.csv`. A failing member marks its row; the others proceed.
pub fn run_sweep(cfg: &ExperimentConfig, dir: &Path, jobs: usize) -> Result<SweepReport> {
    cfg.validate()?;
    let members = cfg.sweep_members();
    let by_nx = matches!(&cfg.sweep, Some(s) if s.axis == SweepAxis::Nx);
    let group = |v: f64| if by_nx { f64::NAN } else { v };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Usage(e.to_string()))?;
    let outcomes: Vec<MemberOutcome> = pool.install(|| {
        members
            .par_iter()
            .map(|(value, m)| match run_experiment(m, &dir.join(&m.name)) {
                Ok((res, _)) => MemberOutcome {
                    value: *value,
                    group: group(*value),
                    nx: m.nx,
                    member: m.name.clone(),
                    status: if res.failed() {
                        RunStatus::Failed
                    } else {
                        RunStatus::Completed
                    },
                    failure: res.output.failure.as_ref().map(|e| e.to_string()),
                    t_final: res.output.t_final,
                    errors: res.errors.rows.clone(),
                    t_star: res.t_star_estimate(),
                },
                Err(e) => MemberOutcome {
                    value: *value,
                    group: group(*value),
                    nx: m.nx,
                    member: m.name.clone(),
                    status: RunStatus::Failed,
                    failure: Some(e.to_string()),
                    t_final: 0.0,
                    errors: Vec::new(),
                    t_star: None,
                },
            })
            .collect()
    });
    let report = SweepReport {
        name: cfg.name.clone(),
        axis: cfg.sweep.as_ref().map(|s| s.axis),
        build: BUILD_DESCRIBE.to_string(),
        members: outcomes,
    };
    to_file(&dir.join("sweep.csv"), |f| write_sweep_table(f, &report))?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("sweep.json"), text + "\n")?;
    Ok(report)
}

/// One line per member and error time; orders are taken between adjacent
/// resolutions of the same swept value. Failed members keep a single row.
pub fn write_sweep_table<W: std::io::Write>(w: W, report: &SweepReport) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let e = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(SWEEP_HEADER).map_err(e)?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for m in &report.members {
        let status = match m.status {
            RunStatus::Completed => "completed",
            RunStatus::Failed => "failed",
        };
        let value = if m.value.is_nan() { String::new() } else { fmt_f64(m.value) };
        if m.errors.is_empty() || m.status == RunStatus::Failed {
            w.write_record([
                value,
                m.nx.to_string(),
                fmt_f64(m.t_final),
                status.into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                opt(m.t_star),
                m.member.clone(),
                m.failure.clone().unwrap_or_default(),
            ])
            .map_err(e)?;
            continue;
        }
        for r in &m.errors {
            let order = |n: Norm| {
                report
                    .orders(m.group, r.t, n)
                    .into_iter()
                    .find(|(nx, _)| *nx == m.nx)
                    .and_then(|(_, o)| o)
            };
            w.write_record([
                value.clone(),
                m.nx.to_string(),
                fmt_f64(r.t),
                status.into(),
                fmt_f64(r.norms.l1),
                opt(order(Norm::L1)),
                fmt_f64(r.norms.l2),
                opt(order(Norm::L2)),
                fmt_f64(r.norms.linf),
                opt(order(Norm::Linf)),
                opt(m.t_star),
                m.member.clone(),
                String::new(),
            ])
            .map_err(e)?;
        }
    }
    w.flush()?;
    Ok(())
}
