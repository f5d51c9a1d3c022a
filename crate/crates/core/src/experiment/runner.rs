//! Executes one experiment and writes its CSV artifacts and manifest.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::csv_out::{
    to_file, write_delta_series, write_energy, write_error_table, write_snapshot, write_spectra,
};
use crate::analysis::{
    error_norms, select_fit_window, DeltaRecorder, EnergyTracker, ErrorReport, ErrorRow,
    Extrapolation, SpectrumRecorder,
};
use crate::error::{Error, Result};
use crate::experiment::config::{ExperimentConfig, ReferenceKind};
use crate::models::ic::Problem;
use crate::oracles::{fv_reference, ExactReference};
use crate::schemes::{run, Observer, RunOutput};

/// Build identifier recorded in manifests.
pub const BUILD_DESCRIBE: &str = env!("SPECRELAX_GIT_DESCRIBE");

/// Everything a finished (or failed) run produced, before anything is written.
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub problem: Problem,
    pub output: RunOutput,
    /// Errors of the reference component at each snapshot time.
    pub errors: ErrorReport,
    pub energy: Option<EnergyTracker>,
    pub spectra: Option<SpectrumRecorder>,
    pub delta: Option<DeltaRecorder>,
    pub wall_time: Duration,
}

impl ExperimentResult {
    pub fn failed(&self) -> bool {
        self.output.failure.is_some()
    }

    pub fn t_star_estimate(&self) -> Option<f64> {
        self.delta.as_ref().and_then(|d| d.series.t_star_estimate)
    }

    pub fn error_at(&self, t: f64) -> Option<&ErrorRow> {
        self.errors.at_time(t).into_iter().next()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub build: String,
    pub config: ExperimentConfig,
    pub status: RunStatus,
    pub failure: Option<String>,
    pub t_final: f64,
    pub steps: usize,
    pub dt_initial: f64,
    pub purges: usize,
    pub wall_time_s: f64,
    pub errors: Vec<ErrorRow>,
    pub energy_drift: Option<f64>,
    pub t_star_estimate: Option<f64>,
    pub outputs: Vec<OutputFile>,
}

/// Run the experiment in memory.
pub fn execute(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let params = cfg.ic_params();
    let problem = Problem::new(cfg.ic, cfg.nx, &params)?;
    let grid = problem.model.grid().clone();
    let scheme = cfg.scheme.scheme_config(grid.bandwidth())?;
    let obs = &cfg.observers;
    let comp = obs.component;

    let mut energy = obs.energy.then(|| EnergyTracker::new(comp, obs.energy_every_step));
    let mut spectra = obs.spectra.then(|| SpectrumRecorder::new(comp));
    let mut delta = match obs.delta {
        true => {
            let window = match obs.delta_window {
                Some([lo, hi]) => (lo, hi),
                None => select_fit_window(&scheme, grid.bandwidth())?,
            };
            Some(DeltaRecorder::new(comp, window, obs.delta_algebraic))
        }
        false => None,
    };

    let run_cfg = cfg.run_config();
    let start = Instant::now();
    let output = {
        let mut list: Vec<&mut dyn Observer> = Vec::new();
        if let Some(e) = energy.as_mut() {
            list.push(e);
        }
        if let Some(s) = spectra.as_mut() {
            list.push(s);
        }
        if let Some(d) = delta.as_mut() {
            list.push(d);
        }
        run(problem.model.as_ref(), &scheme, problem.initial.clone(), &run_cfg, &mut list)?
    };
    let wall_time = start.elapsed();

    if let Some(d) = delta.as_mut() {
        let (t0, t1) = match obs.delta_fit_times {
            Some([a, b]) => (a, b),
            None => (f64::NEG_INFINITY, f64::INFINITY),
        };
        if let Err(e) = d.series.extrapolate(t0, t1, Extrapolation::Linear) {
            d.skipped.push((f64::NAN, format!("extrapolation: {e}")));
        }
    }

    let mut result = ExperimentResult {
        config: cfg.clone(),
        problem,
        output,
        errors: ErrorReport::default(),
        energy,
        spectra,
        delta,
        wall_time,
    };
    result.errors = compute_errors(&result)?;
    Ok(result)
}

fn compute_errors(res: &ExperimentResult) -> Result<ErrorReport> {
    let cfg = &res.config;
    let mut report = ErrorReport::default();
    if cfg.reference.kind == ReferenceKind::None {
        return Ok(report);
    }
    let comp = cfg.reference.component;
    let params = cfg.ic_params();
    let weights = res.problem.physical_weights();
    let exact = match cfg.reference.kind {
        ReferenceKind::Exact => Some(ExactReference::for_ic(cfg.ic, &params)?),
        _ => None,
    };
    for snap in &res.output.snapshots {
        let (x, fields) = res.problem.physical_view(&snap.state);
        let reference = match cfg.reference.kind {
            ReferenceKind::Exact => exact.as_ref().expect("built above").eval(&x, snap.t)?.swap_remove(comp),
            ReferenceKind::Fv => {
                let sol = fv_reference(cfg.ic, cfg.reference.cells, snap.t, &params)?;
                x.iter().map(|&x| sol.sample(comp, x)).collect()
            }
            ReferenceKind::SelfRef => {
                let dir = cfg.reference.path.as_ref().expect("validated");
                let name = res.problem.model.component_names()[comp];
                read_reference(&dir.join(snapshot_name(snap.t)), name, &x)?
            }
            ReferenceKind::None => unreachable!(),
        };
        report.push(ErrorRow {
            nx: cfg.nx,
            t: snap.t,
            norms: error_norms(&fields[comp], &reference, &weights)?,
        });
    }
    Ok(report)
}

pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t:.8e}.csv")
}

/// Column `name` of a snapshot CSV, linearly interpolated onto `x`.
pub fn read_reference(path: &Path, name: &str, x: &[f64]) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let header = rdr.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    let col = |n: &str| {
        header
            .iter()
            .position(|h| h == n)
            .ok_or_else(|| Error::Oracle(format!("{} has no column `{n}`", path.display())))
    };
    let (ix, iv) = (col("x")?, col(name)?);
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .map_err(|_| Error::Oracle(format!("bad number `{}` in {}", &rec[i], path.display())))
        };
        xs.push(parse(ix)?);
        vs.push(parse(iv)?);
    }
    if xs.len() < 2 {
        return Err(Error::Oracle(format!("{} holds fewer than two rows", path.display())));
    }
    Ok(x.iter().map(|&x| interpolate(&xs, &vs, x)).collect())
}

fn interpolate(xs: &[f64], vs: &[f64], x: f64) -> f64 {
    let i = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
    (1.0 - w) * vs[i - 1] + w * vs[i]
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Write all observer CSVs and the manifest into `dir`.
pub fn write_artifacts(res: &ExperimentResult, dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(dir)?;
    let mut files: Vec<PathBuf> = Vec::new();
    let mut emit = |name: String, f: &dyn Fn(std::fs::File) -> Result<()>| -> Result<()> {
        let path = dir.join(&name);
        to_file(&path, f)?;
        files.push(path);
        Ok(())
    };
    if res.config.observers.snapshots {
        for s in &res.output.snapshots {
            let (x, names, fields) = res.problem.output_fields(&s.state)?;
            emit(snapshot_name(s.t), &|f| write_snapshot(f, &x, &names, &fields))?;
        }
        if res.failed() && !res.output.final_state.is_empty() {
            let (x, names, fields) = res.problem.output_fields(&res.output.final_state)?;
            emit("last_state.csv".into(), &|f| write_snapshot(f, &x, &names, &fields))?;
        }
    }
    if let Some(e) = &res.energy {
        emit("energy.csv".into(), &|f| write_energy(f, &e.records))?;
    }
    if let Some(s) = &res.spectra {
        emit("spectra.csv".into(), &|f| write_spectra(f, &s.spectra))?;
    }
    if let Some(d) = &res.delta {
        emit("delta.csv".into(), &|f| write_delta_series(f, &d.series))?;
    }
    if !res.errors.rows.is_empty() {
        emit("errors.csv".into(), &|f| write_error_table(f, &res.errors))?;
    }
    let outputs = files
        .iter()
        .map(|p| {
            Ok(OutputFile {
                file: p.file_name().expect("file").to_string_lossy().into_owned(),
                sha256: sha256_file(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        name: res.config.name.clone(),
        build: BUILD_DESCRIBE.to_string(),
        config: res.config.clone(),
        status: if res.failed() {
            RunStatus::Failed
        } else {
            RunStatus::Completed
        },
        failure: res.output.failure.as_ref().map(|e| e.to_string()),
        t_final: res.output.t_final,
        steps: res.output.steps,
        dt_initial: res.output.dt_initial,
        purges: res.output.purges,
        wall_time_s: res.wall_time.as_secs_f64(),
        errors: res.errors.rows.clone(),
        energy_drift: res.energy.as_ref().and_then(|e| e.max_relative_drift()),
        t_star_estimate: res.t_star_estimate(),
        outputs,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(dir.join("manifest.json"), text + "\n")?;
    Ok(manifest)
}

/// Execute and write artifacts. Blowup is reported in the manifest, not as an error.
pub fn run_experiment(cfg: &ExperimentConfig, dir: &Path) -> Result<(ExperimentResult, Manifest)> {
    let res = execute(cfg)?;
    let manifest = write_artifacts(&res, dir)?;
    Ok((res, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(extra: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(&format!(
            "name = \"t\"\nic = \"burgers-ic0\"\nnx = 65\nt_end = 0.05\noutput_times = [0.0, 0.05]\n{extra}"
        ))
        .unwrap()
    }

    #[test]
    fn writes_hashed_outputs_deterministically() {
        let c = cfg("[observers]\nenergy = true\nspectra = true\n[reference]\nkind = \"exact\"\n");
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (res, m1) = run_experiment(&c, a.path()).unwrap();
        let (_, m2) = run_experiment(&c, b.path()).unwrap();
        assert!(!res.failed());
        assert_eq!(m1.status, RunStatus::Completed);
        assert_eq!(m1.outputs, m2.outputs);
        let names: Vec<&str> = m1.outputs.iter().map(|o| o.file.as_str()).collect();
        assert!(names.contains(&"errors.csv") && names.contains(&"energy.csv"));
        assert_eq!(names.iter().filter(|n| n.starts_with("snapshot_")).count(), 2);
        for o in &m1.outputs {
            assert_eq!(sha256_file(&a.path().join(&o.file)).unwrap(), o.sha256);
        }
        assert!(a.path().join("manifest.json").exists());
        assert!(m1.errors[1].norms.l1 < 1e-6);
    }

    #[test]
    fn empty_output_times_give_final_snapshot_only() {
        let mut c = cfg("");
        c.output_times.clear();
        let d = tempfile::tempdir().unwrap();
        let (_, m) = run_experiment(&c, d.path()).unwrap();
        assert_eq!(m.outputs.len(), 1);
        assert_eq!(m.outputs[0].file, snapshot_name(0.05));
    }

    #[test]
    fn self_reference_reads_snapshots() {
        let d = tempfile::tempdir().unwrap();
        let hi = ExperimentConfig {
            nx: 129,
            ..cfg("")
        };
        run_experiment(&hi, d.path()).unwrap();
        let c = cfg(&format!(
            "[reference]\nkind = \"self\"\npath = \"{}\"\n",
            d.path().display()
        ));
        let res = execute(&c).unwrap();
        let e = res.error_at(0.05).unwrap();
        assert!(e.norms.linf < 1e-3, "{e:?}");
    }

    #[test]
    fn blowup_is_reported() {
        let c = cfg("[time]\nblowup_threshold = 0.5\n");
        let d = tempfile::tempdir().unwrap();
        let (res, m) = run_experiment(&c, d.path()).unwrap();
        assert!(res.failed());
        assert_eq!(m.status, RunStatus::Failed);
        assert!(m.failure.unwrap().contains("blowup"));
    }
}
