//! The reference solutions: exact Burgers, the Euler and shallow-water
//! Riemann solvers, and the first-order finite-volume fallback.
//!
//! cargo run --release --example oracles

use specrelax::models::ic::{IcId, IcParams};
use specrelax::models::ic::{lax, sod};
use specrelax::oracles::{evaluate_reference, exact_burgers, BurgersIc, DamBreak, EulerRiemann, T_STAR};

fn main() -> specrelax::Result<()> {
    println!("Burgers IC0 singular time 1/(2 pi) = {T_STAR:.6}");
    for t in [0.07, 0.2, 2.0] {
        let u = exact_burgers(0.25, t, BurgersIc::Ic0)?;
        println!("  u(0.25, {t}) = {u:+.12}");
    }

    for (name, left, right) in [("Sod", sod(-1.0), sod(1.0)), ("Lax", lax(-1.0), lax(1.0))] {
        let r = EulerRiemann::solve(left, right, 1.4)?;
        println!(
            "{name}: p* = {:.6}  u* = {:.6}  rho*L = {:.6}  rho*R = {:.6}  residual {:.1e}",
            r.p_star,
            r.u_star,
            r.rho_star_left(),
            r.rho_star_right(),
            r.residual()
        );
    }

    let p = IcParams::default();
    let d = DamBreak::solve(p.dam_left, p.dam_right, p.gravity)?;
    println!(
        "dam break {}/{}: h* = {:.6}  u* = {:.6}  front speed {:.6}  rarefaction head {:.6}",
        p.dam_left,
        p.dam_right,
        d.h_star,
        d.u_star,
        d.front_speed(),
        d.rarefaction_head()
    );

    // Finite volume against the exact Sod solution at t = 0.2.
    let x: Vec<f64> = (0..201).map(|i| -1.0 + 2.0 * i as f64 / 200.0).collect();
    let exact = evaluate_reference(IcId::EulerSod, &p, &x, 0.2, None)?;
    for cells in [500, 2000, 8000] {
        let fv = evaluate_reference(IcId::EulerSod, &p, &x, 0.2, Some(cells))?;
        let l1 = exact[0].iter().zip(&fv[0]).map(|(a, b)| (a - b).abs()).sum::<f64>() * 2.0 / 201.0;
        println!("Rusanov Sod density, {cells:5} cells: L1 = {l1:.3e}");
    }
    Ok(())
}
