//! Mirror-symmetrised dam break with SR-FeKo against the exact Riemann
//! solution: depth errors over resolution and the front positions.
//!
//! cargo run --release --example shallow_water_dam_break -- [nx,nx,...]

use specrelax::experiment::{execute, recipe};
use specrelax::models::ic::IcParams;
use specrelax::oracles::DamBreak;

fn main() -> specrelax::Result<()> {
    let list = std::env::args().nth(1).unwrap_or_else(|| "205,615".into());
    let base = recipe("sw-dambreak")?.config()?.expect("recipe has a config");
    let p = IcParams::default();
    let exact = DamBreak::solve(p.dam_left, p.dam_right, p.gravity)?;
    let t = 2.0;
    println!(
        "exact at t={t}: shock at x={:.4}, rarefaction head at x={:.4}",
        exact.front_speed() * t,
        exact.rarefaction_head() * t
    );
    for nx in list.split(',').map(|s| s.trim().parse::<usize>().expect("nx")) {
        let mut cfg = base.clone();
        cfg.nx = nx;
        cfg.output_times = vec![t];
        let res = execute(&cfg)?;
        let row = res.error_at(t).expect("error at t_end");
        let (x, fields) = res.problem.physical_view(&res.output.final_state);
        // Shock: steepest descent of h right of the dam.
        let h = &fields[0];
        let shock = (1..x.len())
            .filter(|&i| x[i] > 0.0)
            .min_by(|&i, &j| (h[i] - h[i - 1]).total_cmp(&(h[j] - h[j - 1])))
            .map_or(f64::NAN, |i| 0.5 * (x[i] + x[i - 1]));
        println!(
            "Nx={nx:5}: L1(h)={:.3e}  Linf(h)={:.3e}  shock near x={shock:.4}  (dx={:.4})",
            row.norms.l1,
            row.norms.linf,
            x[1] - x[0]
        );
    }
    Ok(())
}
