//! Width of the analyticity strip from dealiased PPS spectra of Burgers IC0
//! and the singular time extrapolated from it, compared with 1/(2 pi).
//!
//! cargo run --release --example burgers_singularity_time -- [nx]

use specrelax::analysis::{extrapolate_t_star, Extrapolation, FitQuality};
use specrelax::experiment::{execute, recipe};
use specrelax::oracles::T_STAR;

fn main() -> specrelax::Result<()> {
    let mut cfg = recipe("burgers-delta")?.config()?.expect("recipe has a config");
    if let Some(nx) = std::env::args().nth(1) {
        cfg.nx = nx.parse().expect("nx");
    }
    let res = execute(&cfg)?;
    let series = &res.delta.as_ref().expect("delta observer").series;
    println!("{:>8} {:>12} {:>12}", "t", "delta", "window");
    let (mut t, mut d) = (Vec::new(), Vec::new());
    for p in &series.points {
        println!("{:8.4} {:12.5e} {:>5}..{:<5} {}", p.t, p.delta, p.k_min, p.k_max, p.quality.name());
        if p.quality == FitQuality::Good {
            t.push(p.t);
            d.push(p.delta);
        }
    }
    println!("exact t* = {T_STAR:.5}");
    let linear = extrapolate_t_star(&t, &d, Extrapolation::Linear)?;
    println!("linear intercept     t* = {linear:.5} ({:+.1}%)", 100.0 * (linear / T_STAR - 1.0));
    // Near a pre-shock the strip closes like (t* - t)^{3/2}.
    let power = extrapolate_t_star(&t, &d, Extrapolation::Power(1.5))?;
    println!("3/2-power intercept  t* = {power:.5} ({:+.1}%)", 100.0 * (power / T_STAR - 1.0));
    Ok(())
}
