use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::models::Model;
use crate::schemes::{apply_kernel_nodal, Rk4, SchemeConfig, SemiDiscrete, Stabiliser};

/// How the step size is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `dt = cfl · Δx_min / max|λ|`, from the initial state unless `adaptive`.
    Cfl {
        cfl: f64,
        adaptive: bool,
        max_dt: Option<f64>,
    },
}

pub const DEFAULT_CFL: f64 = 0.4;

impl Default for TimeStep {
    fn default() -> Self {
        TimeStep::Cfl {
            cfl: DEFAULT_CFL,
            adaptive: false,
            max_dt: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub t_end: f64,
    pub time_step: TimeStep,
    /// Times at which snapshots are taken; steps are shortened to land on them.
    pub output_times: Vec<f64>,
    /// Abort when any component exceeds this magnitude.
    pub blowup_threshold: Option<f64>,
    /// Keep copies of the state at output times in [`RunOutput::snapshots`].
    pub keep_snapshots: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            t_end: 1.0,
            time_step: TimeStep::default(),
            output_times: Vec::new(),
            blowup_threshold: None,
            keep_snapshots: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub step: usize,
    pub state: Vec<Vec<f64>>,
}

/// Borrowed view of the state handed to observers.
pub struct SnapshotRef<'a> {
    pub t: f64,
    pub step: usize,
    pub state: &'a [Vec<f64>],
    pub grid: &'a Grid,
    pub names: &'a [&'static str],
}

pub trait Observer {
    /// Called after every accepted step.
    fn on_step(&mut self, _snap: &SnapshotRef) -> Result<()> {
        Ok(())
    }
    /// Called at each requested output time (and at `t = 0` if requested).
    fn on_output(&mut self, _snap: &SnapshotRef) -> Result<()> {
        Ok(())
    }
    /// Called around each spectral-purging event.
    fn on_purge(&mut self, _before: &SnapshotRef, _after: &SnapshotRef, _index: usize) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub final_state: Vec<Vec<f64>>,
    pub t_final: f64,
    pub steps: usize,
    pub purges: usize,
    /// Step size chosen at `t = 0`.
    pub dt_initial: f64,
    /// Blowup or positivity loss that ended the run early.
    pub failure: Option<Error>,
}

impl RunOutput {
    pub fn into_result(self) -> Result<RunOutput> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        self.snapshots
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

fn choose_dt(
    model: &dyn Model,
    state: &[Vec<f64>],
    time_step: &TimeStep,
    tau_cap: Option<f64>,
) -> Result<f64> {
    let dt = match *time_step {
        TimeStep::Fixed(dt) => dt,
        TimeStep::Cfl { cfl, max_dt, .. } => {
            let speed = model.max_wave_speed(state);
            let dx = model.grid().min_spacing();
            let dt = if speed > 0.0 && speed.is_finite() {
                cfl * dx / speed
            } else if speed == 0.0 {
                f64::INFINITY
            } else {
                return Err(Error::Blowup {
                    t: 0.0,
                    step: 0,
                    field: "wave speed".into(),
                    max_abs: speed,
                });
            };
            let dt = dt.min(max_dt.unwrap_or(f64::INFINITY));
            if !dt.is_finite() {
                return Err(Error::Parameter(
                    "zero wave speed: set max_dt or a fixed dt".into(),
                ));
            }
            dt.min(tau_cap.unwrap_or(f64::INFINITY))
        }
    };
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
    }
    Ok(dt)
}

fn check_threshold(
    state: &[Vec<f64>],
    names: &[&'static str],
    threshold: Option<f64>,
    t: f64,
    step: usize,
) -> Result<()> {
    for (c, u) in state.iter().enumerate() {
        let mut max_abs = 0.0f64;
        let mut finite = true;
        for v in u {
            if !v.is_finite() {
                finite = false;
                max_abs = f64::INFINITY;
                break;
            }
            max_abs = max_abs.max(v.abs());
        }
        if !finite || threshold.is_some_and(|thr| max_abs > thr) {
            return Err(Error::Blowup {
                t,
                step,
                field: names[c].to_string(),
                max_abs,
            });
        }
    }
    Ok(())
}

/// Integrate `initial` to `cfg.t_end` with classical RK4.
///
/// SR relaxation and SVV damping are part of the right-hand side of every
/// stage. SP mollifies every component after the first step ending at or past
/// each multiple of `τ`; output times that coincide with a purge see the
/// pre-purge state. Blowups and positivity losses end the run and are returned
/// in [`RunOutput::failure`] together with everything recorded so far.
pub fn run(
    model: &dyn Model,
    scheme: &SchemeConfig,
    initial: Vec<Vec<f64>>,
    cfg: &RunConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<RunOutput> {
    model.check_state(&initial)?;
    if !(cfg.t_end > 0.0 && cfg.t_end.is_finite()) {
        return Err(Error::Parameter(format!("t_end must be positive, got {}", cfg.t_end)));
    }
    let mut outputs: Vec<f64> = cfg.output_times.clone();
    if outputs.iter().any(|&t| !(0.0..=cfg.t_end).contains(&t) || t.is_nan()) {
        return Err(Error::Parameter(format!(
            "output times must lie in [0, {}]",
            cfg.t_end
        )));
    }
    outputs.sort_by(|a, b| a.total_cmp(b));
    outputs.dedup();

    let sd = SemiDiscrete::new(model, scheme)?;
    let grid = model.grid().as_ref();
    let names = model.component_names();
    let tau_cap = sd.stabiliser.relaxation_time();
    if let (Stabiliser::Purge { tau, .. }, TimeStep::Fixed(dt)) = (&sd.stabiliser, cfg.time_step) {
        if dt > *tau {
            return Err(Error::Parameter(format!(
                "spectral purging needs dt <= tau, got dt={dt:e} > tau={tau:e}"
            )));
        }
    }

    let mut state = initial;
    let mut out = RunOutput {
        snapshots: Vec::new(),
        final_state: Vec::new(),
        t_final: 0.0,
        steps: 0,
        purges: 0,
        dt_initial: 0.0,
        failure: None,
    };
    if let Err(e) = check_threshold(&state, names, cfg.blowup_threshold, 0.0, 0) {
        out.failure = Some(e);
        out.final_state = state;
        return Ok(out);
    }
    let mut dt = choose_dt(model, &state, &cfg.time_step, tau_cap)?;
    out.dt_initial = dt;
    let adaptive = matches!(cfg.time_step, TimeStep::Cfl { adaptive: true, .. });

    let mut targets: Vec<(f64, bool)> = outputs
        .iter()
        .filter(|&&t| t > 0.0)
        .map(|&t| (t, true))
        .collect();
    if targets.last().map_or(true, |&(t, _)| t < cfg.t_end) {
        targets.push((cfg.t_end, false));
    }
    let mut t = 0.0;
    let mut step = 0usize;
    if outputs.first() == Some(&0.0) {
        record(&mut out, cfg, observers, t, step, &state, grid, names)?;
    }

    let mut rk = Rk4::new(state.len(), grid.len()).with_names(names);
    let mut next_purge = 1usize;
    let mut ti = 0usize;
    while ti < targets.len() {
        if adaptive && step > 0 {
            match choose_dt(model, &state, &cfg.time_step, tau_cap) {
                Ok(d) => dt = d,
                Err(e) if e.is_blowup() => {
                    out.failure = Some(e.at(t, step));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let (target, is_output) = targets[ti];
        let mut h = dt;
        let landing = t + h >= target - 1e-9 * dt;
        if landing {
            h = target - t;
        }
        if let Err(e) = rk.step(&mut state, h, |s, o| sd.tendency(s, o)) {
            if e.is_blowup() {
                out.failure = Some(e.at(t, step));
                break;
            }
            return Err(e);
        }
        step += 1;
        t = if landing { target } else { t + h };
        if let Err(e) = check_threshold(&state, names, cfg.blowup_threshold, t, step) {
            out.failure = Some(e);
            break;
        }
        let snap = SnapshotRef {
            t,
            step,
            state: &state,
            grid,
            names,
        };
        for o in observers.iter_mut() {
            o.on_step(&snap)?;
        }
        if landing {
            if is_output {
                record(&mut out, cfg, observers, t, step, &state, grid, names)?;
            }
            ti += 1;
        }
        if let Stabiliser::Purge { kernel, tau } = &sd.stabiliser {
            let due = |n: usize| t >= n as f64 * tau - 1e-9 * dt;
            if due(next_purge) {
                let before = state.clone();
                for u in state.iter_mut() {
                    apply_kernel_nodal(grid, u, kernel)?;
                }
                out.purges += 1;
                let b = SnapshotRef {
                    t,
                    step,
                    state: &before,
                    grid,
                    names,
                };
                let a = SnapshotRef {
                    t,
                    step,
                    state: &state,
                    grid,
                    names,
                };
                for o in observers.iter_mut() {
                    o.on_purge(&b, &a, out.purges)?;
                }
                while due(next_purge) {
                    next_purge += 1;
                }
            }
        }
    }
    out.t_final = t;
    out.steps = step;
    out.final_state = state;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn record(
    out: &mut RunOutput,
    cfg: &RunConfig,
    observers: &mut [&mut dyn Observer],
    t: f64,
    step: usize,
    state: &[Vec<f64>],
    grid: &Grid,
    names: &[&'static str],
) -> Result<()> {
    let snap = SnapshotRef {
        t,
        step,
        state,
        grid,
        names,
    };
    for o in observers.iter_mut() {
        o.on_output(&snap)?;
    }
    if cfg.keep_snapshots {
        out.snapshots.push(Snapshot {
            t,
            step,
            state: state.to_vec(),
        });
    }
    Ok(())
}
