//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! `cargo test --test acceptance -- 1 10 11` runs a subset. The full set takes
//! about half an hour on one core. Failing criteria are reported but only make
//! the process exit non-zero when `SPECRELAX_ACCEPTANCE_STRICT` is set.

use std::process::ExitCode;
use std::time::Instant;

use specrelax::analysis::{
    convergence_orders, extrapolate_t_star, select_fit_window, usable_fit_range, Extrapolation, FitQuality,
};
use specrelax::experiment::{execute, recipe, ExperimentConfig, ExperimentResult};
use specrelax::kernels::{real_space_profile, relaxation_params, svv_q_coeffs, KernelFamily, KernelSpec};
use specrelax::models::ic::{IcId, IcParams, Problem};
use specrelax::oracles::{DamBreak, ExactReference};
use specrelax::schemes::{run, RunConfig, SchemeConfig, TimeStep};
use specrelax::Error;

// Tolerances.
const PRE_SHOCK_L1_MAX: f64 = 1e-13;
const TABLE_REL_TOL: f64 = 0.25;
const ORDER_TOL: f64 = 0.08;
const ENERGY_DRIFT_MAX: f64 = 1e-10;
const BURGERS_T_STAR_TOL: f64 = 0.02;
const OVERSHOOT_FRACTION: f64 = 0.02;
/// Half-width (domain units) of the neighbourhood searched around each discontinuity.
const DISCONTINUITY_WINDOW: f64 = 0.1;
const DAMBREAK_ORDER_MIN: f64 = 0.4;
const FRONT_CELLS: f64 = 2.0;
const HL_DELTA_REL_TOL: f64 = 0.10;
const HL_T_STAR: f64 = 0.0035056;
const HL_T_STAR_TOL: f64 = 0.05;
const HL_RANGE_RATIO_MIN: f64 = 1.3;
const KERNEL_NEGATIVITY_MAX: f64 = 1e-10;
const REDUCTION_TOL: f64 = 1e-14;

type Check = Result<(bool, String), Error>;

fn config(name: &str) -> ExperimentConfig {
    let mut c = recipe(name)
        .and_then(|r| r.config())
        .unwrap_or_else(|e| panic!("{name}: {e}"))
        .unwrap_or_else(|| panic!("{name} has no config"));
    c.sweep = None;
    c.observers.snapshots = false;
    c
}

fn with(mut c: ExperimentConfig, nx: usize, t_end: f64, outputs: &[f64]) -> ExperimentConfig {
    c.nx = nx;
    c.t_end = t_end;
    c.output_times = outputs.to_vec();
    c
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn l1_at(res: &ExperimentResult, t: f64) -> Result<f64, Error> {
    res.error_at(t)
        .map(|r| r.norms.l1)
        .ok_or_else(|| Error::Usage(format!("no error row at t={t}")))
}

fn completed(res: &ExperimentResult) -> Result<(), Error> {
    match &res.output.failure {
        Some(e) => Err(e.clone()),
        None => Ok(()),
    }
}

/// Smallest density and pressure over every snapshot and the final state.
fn min_rho_p(res: &ExperimentResult) -> Result<(f64, f64), Error> {
    let mut m = (f64::INFINITY, f64::INFINITY);
    let states = res.output.snapshots.iter().map(|s| &s.state).chain([&res.output.final_state]);
    for s in states {
        let (_, names, f) = res.problem.output_fields(s)?;
        let col = |n: &str| &f[names.iter().position(|&c| c == n).expect("euler column")];
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        m.0 = m.0.min(min(col("rho")));
        m.1 = m.1.min(min(col("p")));
    }
    Ok(m)
}

fn pre_shock_accuracy() -> Check {
    let res = execute(&with(config("table2"), 615, 0.07, &[0.07]))?;
    completed(&res)?;
    let l1 = l1_at(&res, 0.07)?;
    Ok((l1 <= PRE_SHOCK_L1_MAX, format!("SR-DLVP Nx=615 t=0.07 L1={l1:.2e} (limit {PRE_SHOCK_L1_MAX:.0e}, target 5.0e-15)")))
}

fn table1() -> Check {
    const NX: [usize; 4] = [615, 1599, 2665, 7995];
    const TIMES: [f64; 3] = [0.07, 0.2, 2.0];
    const TARGET_L1: [[f64; 4]; 3] = [
        [1.5e-4, 4.5e-5, 2.4e-5, 5.8e-6],
        [4.6e-3, 2.0e-3, 1.3e-3, 4.6e-4],
        [6.5e-4, 2.8e-4, 1.8e-4, 6.5e-5],
    ];
    const TARGET_ORDER: [f64; 3] = [1.28, 0.91, 0.90];
    let base = config("table1");
    let mut l1 = [[0.0; 4]; 3];
    for (j, &nx) in NX.iter().enumerate() {
        let res = execute(&with(base.clone(), nx, 2.0, &TIMES))?;
        completed(&res)?;
        for (i, &t) in TIMES.iter().enumerate() {
            l1[i][j] = l1_at(&res, t)?;
        }
    }
    let mut pass = true;
    let mut detail = Vec::new();
    for i in 0..3 {
        let rows: Vec<(usize, f64)> = NX.iter().copied().zip(l1[i]).collect();
        let order = convergence_orders(&rows)[3].unwrap_or(f64::NAN);
        let worst = (0..4).map(|j| rel(l1[i][j], TARGET_L1[i][j])).fold(0.0, f64::max);
        let ok = worst <= TABLE_REL_TOL && (order - TARGET_ORDER[i]).abs() <= ORDER_TOL;
        pass &= ok;
        let errs: Vec<String> = l1[i].iter().map(|e| format!("{e:.2e}")).collect();
        detail.push(format!(
            "t={}: L1 [{}] worst rel dev {:.0}%, order {order:.2} (target {})",
            TIMES[i],
            errs.join(", "),
            100.0 * worst,
            TARGET_ORDER[i]
        ));
    }
    Ok((pass, detail.join("; ")))
}

fn energy_conservation() -> Check {
    let mut c = with(config("burgers-pps-tygers"), 615, 0.14, &[0.14]);
    c.scheme = specrelax::experiment::SchemeSection {
        kind: specrelax::schemes::SchemeKind::Pps,
        dealias: true,
        ..Default::default()
    };
    c.observers.energy = true;
    c.observers.energy_every_step = true;
    c.reference.kind = specrelax::experiment::ReferenceKind::None;
    let res = execute(&c)?;
    completed(&res)?;
    let drift = res
        .energy
        .as_ref()
        .and_then(|e| e.max_relative_drift())
        .ok_or_else(|| Error::Usage("no energy records".into()))?;
    Ok((drift < ENERGY_DRIFT_MAX, format!("dealiased PPS Nx=615 max |dE|/E0 over t<=0.14: {drift:.2e} (limit {ENERGY_DRIFT_MAX:.0e})")))
}

fn burgers_singularity_time() -> Check {
    let res = execute(&config("burgers-delta"))?;
    completed(&res)?;
    let target = 1.0 / (2.0 * std::f64::consts::PI);
    let ts = res
        .t_star_estimate()
        .ok_or_else(|| Error::Fit("no singularity-time estimate".into()))?;
    let dev = rel(ts, target);
    // The closed-form strip width of sin(2πx) data, put through the same extrapolation.
    let times = &res.config.output_times;
    let exact: Vec<f64> = times
        .iter()
        .map(|&t| {
            let a = 2.0 * std::f64::consts::PI * t;
            ((1.0 / a).acosh() - (1.0 - a * a).sqrt()) / (2.0 * std::f64::consts::PI)
        })
        .collect();
    let exact_ts = extrapolate_t_star(times, &exact, Extrapolation::Linear)?;
    Ok((
        dev <= BURGERS_T_STAR_TOL,
        format!(
            "t*={ts:.5} vs 1/(2pi)={target:.5}: {:.1}% (limit {:.0}%); exact delta(t) gives {exact_ts:.5} by the same fit",
            100.0 * dev,
            100.0 * BURGERS_T_STAR_TOL
        ),
    ))
}

fn ic1_dichotomy() -> Check {
    let unstable = execute(&with(config("burgers-ic1-unstable"), 615, 2.0, &[2.0]))?;
    let blew_up = match &unstable.output.failure {
        Some(Error::Blowup { t, .. }) => Some(*t),
        _ => None,
    };
    let mut pass = blew_up.is_some_and(|t| t < 2.0);
    let mut detail = vec![match blew_up {
        Some(t) => format!("plain (0.97,0.98) blew up at t={t:.3}"),
        None => "plain (0.97,0.98) did not blow up".to_string(),
    }];
    for (name, target) in [("table3", 1.3e-3), ("table4", 3.6e-3)] {
        let res = execute(&with(config(name), 615, 2.0, &[2.0]))?;
        match completed(&res).and_then(|_| l1_at(&res, 2.0)) {
            Ok(l1) => {
                let dev = rel(l1, target);
                pass &= dev <= TABLE_REL_TOL;
                detail.push(format!("{name} L1(t=2)={l1:.2e} vs {target:.1e} ({:.0}%)", 100.0 * dev));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("{name} failed: {e}"));
            }
        }
    }
    Ok((pass, detail.join("; ")))
}

/// Largest rise of `v` against a downward jump (left to right): the size of
/// any new extremum, whatever the width of the smeared layer.
fn excursion_against_drop(v: &[f64]) -> f64 {
    let mut lowest = f64::INFINITY;
    let mut worst = 0.0f64;
    for &x in v {
        lowest = lowest.min(x);
        worst = worst.max(x - lowest);
    }
    worst
}

fn sod() -> Check {
    let base = config("euler-sod-sr-feko");
    let times = [0.1, 0.2, 0.3, 0.4];
    let mut pass = true;
    let mut detail = Vec::new();
    let mut errs = Vec::new();
    for nx in [205, 615, 1599] {
        let res = execute(&with(base.clone(), nx, 0.4, &times))?;
        completed(&res)?;
        let (rho, p) = min_rho_p(&res)?;
        pass &= rho > 0.0 && p > 0.0;
        errs.push(l1_at(&res, 0.4)?);
        if nx == 615 {
            detail.push(format!("Nx=615 min rho {rho:.3}, min p {p:.3}"));
            let r = match ExactReference::for_ic(IcId::EulerSod, &IcParams::default())? {
                ExactReference::Euler(r) => r,
                _ => unreachable!(),
            };
            // Both discontinuities drop the density from left to right.
            let waves = [
                ("contact", r.u_star, r.rho_star_left() - r.rho_star_right()),
                ("shock", r.right_speed(), r.rho_star_right() - r.right.rho),
            ];
            for (name, speed, jump) in waves {
                let mut worst = (0.0f64, 0.0);
                for s in &res.output.snapshots {
                    let (x, f) = res.problem.physical_view(&s.state);
                    let at = speed * s.t;
                    let lo = x.partition_point(|&v| v < at - DISCONTINUITY_WINDOW);
                    let hi = x.partition_point(|&v| v <= at + DISCONTINUITY_WINDOW);
                    let frac = excursion_against_drop(&f[0][lo..hi]) / jump;
                    if frac > worst.0 {
                        worst = (frac, s.t);
                    }
                }
                pass &= worst.0 <= OVERSHOOT_FRACTION;
                detail.push(format!("{name} overshoot {:.2}% of its jump (t={})", 100.0 * worst.0, worst.1));
            }
        }
    }
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    pass &= monotone;
    let e: Vec<String> = errs.iter().map(|e| format!("{e:.2e}")).collect();
    detail.push(format!("L1(rho, t=0.4) over 205/615/1599: [{}]", e.join(", ")));
    Ok((pass, detail.join("; ")))
}

fn blast() -> Check {
    let mut dlvp = config("euler-blast-sr-dlvp");
    dlvp.output_times.clear();
    let res = execute(&dlvp)?;
    let lost = match &res.output.failure {
        Some(Error::PositivityLoss { t, .. }) => Some(*t),
        _ => None,
    };
    let mut pass = lost.is_some_and(|t| t < 0.01);
    let mut detail = vec![match (&res.output.failure, lost) {
        (_, Some(t)) => format!("SR-DLVP lost positivity at t={t:.4e}"),
        (Some(e), None) => format!("SR-DLVP failed otherwise: {e}"),
        (None, None) => "SR-DLVP reached t=0.01".to_string(),
    }];
    let mut feko = config("euler-blast-sr-feko");
    feko.reference.kind = specrelax::experiment::ReferenceKind::None;
    let res = execute(&feko)?;
    match completed(&res) {
        Ok(()) => {
            let (rho, p) = min_rho_p(&res)?;
            pass &= rho > 0.0 && p > 0.0 && res.output.t_final >= 0.032 - 1e-12;
            detail.push(format!("SR-FeKo reached t={:.4} with min rho {rho:.3e}, min p {p:.3e}", res.output.t_final));
        }
        Err(e) => {
            pass = false;
            detail.push(format!("SR-FeKo failed: {e}"));
        }
    }
    Ok((pass, detail.join("; ")))
}

/// First `x` (scanning in the given direction) where `h` crosses `level`, linearly interpolated.
fn crossing(x: &[f64], h: &[f64], level: f64, from_right: bool) -> Option<f64> {
    let idx: Vec<usize> = if from_right {
        (1..x.len()).rev().collect()
    } else {
        (1..x.len()).collect()
    };
    idx.into_iter().find_map(|i| {
        let (a, b) = (h[i - 1] - level, h[i] - level);
        (a * b <= 0.0 && a != b).then(|| x[i - 1] + (x[i] - x[i - 1]) * a / (a - b))
    })
}

fn dam_break() -> Check {
    let base = config("sw-dambreak-convergence");
    let params = base.ic_params();
    let nxs = [615, 1599, 2665];
    let mut errs = Vec::new();
    let mut last = None;
    for nx in nxs {
        let res = execute(&with(base.clone(), nx, 2.0, &[2.0]))?;
        completed(&res)?;
        errs.push((nx, l1_at(&res, 2.0)?));
        last = Some(res);
    }
    let orders: Vec<f64> = convergence_orders(&errs).into_iter().flatten().collect();
    let mut pass = orders.iter().all(|&o| o >= DAMBREAK_ORDER_MIN);
    let res = last.expect("three runs");
    let (x, f) = res.problem.physical_view(&res.output.final_state);
    let dx = x[1] - x[0];
    let d = DamBreak::solve(params.dam_left, params.dam_right, params.gravity)?;
    let (hl, hr, hs) = (d.h_left, d.h_right, d.h_star);
    let fine: Vec<f64> = (0..=200_000).map(|i| x[0] + (x[x.len() - 1] - x[0]) * i as f64 / 200_000.0).collect();
    let exact: Vec<f64> = fine.iter().map(|&x| d.sample_xt(x, 0.0, 2.0).0).collect();
    let mut detail = vec![format!(
        "L1(h) {:?}, orders {:?}",
        errs.iter().map(|e| format!("{:.2e}", e.1)).collect::<Vec<_>>(),
        orders.iter().map(|o| format!("{o:.2}")).collect::<Vec<_>>()
    )];
    // Each wave is located where the depth crosses the middle of its jump;
    // the rounded corner at the rarefaction head is reported but not judged.
    for (what, level, from_right, judged) in [
        ("shock", 0.5 * (hs + hr), true, true),
        ("rarefaction", 0.5 * (hl + hs), false, true),
        ("rarefaction head (5% level)", hl - 0.05 * (hl - hs), false, false),
    ] {
        let a = crossing(&x, &f[0], level, from_right);
        let e = crossing(&fine, &exact, level, from_right);
        match (a, e) {
            (Some(a), Some(e)) => {
                let cells = (a - e).abs() / dx;
                if judged {
                    pass &= cells <= FRONT_CELLS;
                }
                detail.push(format!("{what} off by {cells:.2} cells"));
            }
            _ => {
                pass = false;
                detail.push(format!("{what} not found"));
            }
        }
    }
    Ok((pass, detail.join("; ")))
}

fn hl() -> Check {
    let coarse = execute(&config("hl-sr-dlvp-2665"))?;
    let fine = execute(&config("hl-sr-dlvp-7995"))?;
    completed(&coarse)?;
    completed(&fine)?;
    let (dc, df) = (coarse.delta.as_ref().unwrap(), fine.delta.as_ref().unwrap());
    let mut worst = (0.0f64, f64::NAN);
    for p in dc.series.points.iter().filter(|p| p.t <= 0.0034 + 1e-12 && p.quality == FitQuality::Good) {
        if let Some(q) = df.series.points.iter().find(|q| (q.t - p.t).abs() < 1e-12 && q.quality == FitQuality::Good) {
            let r = rel(p.delta, q.delta);
            if r > worst.0 {
                worst = (r, p.t);
            }
        }
    }
    let mut pass = worst.0 <= HL_DELTA_REL_TOL;
    let mut detail = vec![format!(
        "delta 2665 vs 7995 worst rel diff {:.1}% at t={:.4}",
        100.0 * worst.0,
        worst.1
    )];
    match fine.t_star_estimate() {
        Some(ts) => {
            let dev = rel(ts, HL_T_STAR);
            pass &= dev <= HL_T_STAR_TOL;
            detail.push(format!("t*(7995)={ts:.6e} ({:.1}% from {HL_T_STAR})", 100.0 * dev));
        }
        None => {
            pass = false;
            detail.push("no t* estimate at 7995".into());
        }
    }

    let pps = execute(&with(config("hl-pps-2665"), 2665, 0.0034, &[0.0034]))?;
    completed(&pps)?;
    let spectrum_at = |r: &ExperimentResult| {
        r.spectra
            .as_ref()
            .and_then(|s| s.spectra.iter().find(|(t, _)| (t - 0.0034).abs() < 1e-12))
            .map(|(_, s)| s.clone())
            .ok_or_else(|| Error::Usage("no spectrum at t=0.0034".into()))
    };
    let n = coarse.problem.model.grid().bandwidth();
    let sr_window = select_fit_window(&coarse.config.scheme.scheme_config(n)?, n)?;
    let pps_window = select_fit_window(&pps.config.scheme.scheme_config(n)?, n)?;
    let k_min = sr_window.0.min(pps_window.0);
    let sr_range = usable_fit_range(&spectrum_at(&coarse)?, k_min, sr_window.1);
    let pps_range = usable_fit_range(&spectrum_at(&pps)?, k_min, pps_window.1);
    let ratio = sr_range as f64 / pps_range.max(1) as f64;
    pass &= ratio >= HL_RANGE_RATIO_MIN;
    detail.push(format!(
        "usable range from k={k_min}: SR {sr_range} vs PPS {pps_range} modes, ratio {ratio:.2}"
    ));
    Ok((pass, detail.join("; ")))
}

fn kernel_properties() -> Check {
    let mut pass = true;
    let mut worst_neg = 0.0f64;
    let mut detail = Vec::new();
    for n in [32, 307, 1332] {
        for gamma in [0.9, 0.99] {
            let m = relaxation_params(n, 0.7, gamma)?.m;
            let families = [
                KernelFamily::FejerKorovkin,
                KernelFamily::Jackson,
                KernelFamily::JacksonDlvp,
                KernelFamily::DeLaValleePoussin { plateau: 0.5 },
                KernelFamily::Tt05,
                KernelFamily::Mmo78 { beta: 2.5, p: 1.0 },
                KernelFamily::Rsk { order: 1.5 },
            ];
            for family in families {
                let c = KernelSpec::new(family, 0.7, gamma).coeffs(n)?;
                if c[0] != 1.0 {
                    pass = false;
                    detail.push(format!("{} N={n}: K(0)={}", family.name(), c[0]));
                }
                let edge = match family {
                    KernelFamily::FejerKorovkin => Some(m.floor() as usize),
                    KernelFamily::Jackson => Some(2 * ((m / 2.0).floor() as usize + 1) - 2),
                    KernelFamily::JacksonDlvp => Some(2 * (((m + 1.0) / 2.0).floor().max(1.0) as usize) - 1),
                    KernelFamily::DeLaValleePoussin { .. } => Some(m.ceil() as usize - 1),
                    _ => None,
                };
                if let Some(e) = edge {
                    let last = c.iter().rposition(|&v| v != 0.0);
                    if last != Some(e.min(n)) {
                        pass = false;
                        detail.push(format!("{} N={n}: support ends at {last:?}, expected {e}", family.name()));
                    }
                }
                if family.is_positive() {
                    let profile = real_space_profile(&c, 4096)?;
                    let min = profile.iter().copied().fold(f64::INFINITY, f64::min);
                    worst_neg = worst_neg.min(min);
                    if min < -KERNEL_NEGATIVITY_MAX {
                        pass = false;
                        detail.push(format!("{} N={n}: min {min:.2e}", family.name()));
                    }
                }
            }
            let cutoff = 2.0 * (n as f64).sqrt();
            let q = svv_q_coeffs(n, cutoff)?;
            if q[n] != 1.0 || q.iter().take(cutoff.floor() as usize + 1).any(|&v| v != 0.0) {
                pass = false;
                detail.push(format!("SVV N={n}: Q(N)={} or nonzero below M", q[n]));
            }
        }
    }
    detail.insert(0, format!("min positive-kernel value {worst_neg:.2e}"));
    Ok((pass, detail.join("; ")))
}

fn scheme_reductions() -> Check {
    let mut worst = 0.0f64;
    let cases = [(IcId::BurgersIc0, 1e-4), (IcId::SwHump, 1e-3), (IcId::EulerSod, 1e-5)];
    for (ic, dt) in cases {
        let p = Problem::new(ic, 129, &IcParams::default())?;
        let cfg = RunConfig {
            t_end: 100.0 * dt,
            time_step: TimeStep::Fixed(dt),
            ..Default::default()
        };
        let reference = run(p.model.as_ref(), &SchemeConfig::pps(false), p.initial.clone(), &cfg, &mut [])?.into_result()?;
        let mut schemes = vec![SchemeConfig::sr(KernelSpec::identity()), SchemeConfig::sp(KernelSpec::identity())];
        // SVV is defined on Fourier grids only.
        if !ic.is_chebyshev() {
            schemes.push(SchemeConfig::svv(0.0, 8.0));
        }
        for scheme in schemes {
            let out = run(p.model.as_ref(), &scheme, p.initial.clone(), &cfg, &mut [])?.into_result()?;
            if out.steps != reference.steps {
                return Ok((false, format!("{ic} {:?}: {} steps vs {}", scheme.kind, out.steps, reference.steps)));
            }
            for (a, b) in out.final_state.iter().zip(&reference.final_state) {
                let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                let d = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale;
                worst = worst.max(d);
            }
        }
    }
    Ok((worst <= REDUCTION_TOL, format!("SR(K=1), SVV(eps=0), SP(K=1) vs PPS, 100 steps: max diff {worst:.1e} (limit {REDUCTION_TOL:.0e})")))
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, fn() -> Check); 11] = [
        (1, "burgers pre-shock accuracy", pre_shock_accuracy),
        (2, "burgers SR-FeKo convergence table", table1),
        (3, "pre-shock energy conservation", energy_conservation),
        (4, "burgers singularity time", burgers_singularity_time),
        (5, "IC1 stability dichotomy", ic1_dichotomy),
        (6, "euler sod", sod),
        (7, "blast-wave dichotomy", blast),
        (8, "shallow-water dam break", dam_break),
        (9, "HL singularity tracking", hl),
        (10, "kernel properties", kernel_properties),
        (11, "scheme reductions", scheme_reductions),
    ];
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, check) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        ran += 1;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {id:>2} {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{ran} passed", ran - failed);
    if failed > 0 && std::env::var_os("SPECRELAX_ACCEPTANCE_STRICT").is_some() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
