//! HL wall model with SR-DLVP: the analyticity-strip width as the
//! singularity approaches and its linear extrapolation to zero.
//!
//! cargo run --release --example hl_singularity -- [nx]

use specrelax::analysis::FitQuality;
use specrelax::experiment::{execute, recipe};
use specrelax::models::hl::HL_SINGULAR_TIME;

fn main() -> specrelax::Result<()> {
    let nx: usize = std::env::args().nth(1).map_or(2665, |s| s.parse().expect("nx"));
    let mut cfg = recipe("hl-sr-dlvp-2665")?.config()?.expect("recipe has a config");
    cfg.nx = nx;
    cfg.observers.snapshots = false;
    let res = execute(&cfg)?;
    if let Some(e) = &res.output.failure {
        println!("run stopped: {e}");
    }
    let d = res.delta.as_ref().expect("delta observer");
    for p in d.series.points.iter().filter(|p| p.quality == FitQuality::Good) {
        println!("t={:.5}  delta={:.4e}  modes {}..{}", p.t, p.delta, p.k_min, p.k_max);
    }
    match res.t_star_estimate() {
        Some(t) => println!(
            "extrapolated t* = {t:.6} (reference {HL_SINGULAR_TIME}, {:+.1}%)",
            100.0 * (t / HL_SINGULAR_TIME - 1.0)
        ),
        None => println!("no extrapolation: too few good fits"),
    }
    Ok(())
}
