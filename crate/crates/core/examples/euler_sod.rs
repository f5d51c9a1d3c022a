//! Sod shock tube on a Kosloff-mapped Chebyshev grid with SR-FeKo:
//! density error against the exact Riemann solution and overshoot checks.
//!
//! cargo run --release --example euler_sod -- [nx,nx,...]

use specrelax::experiment::{execute, recipe};

fn main() -> specrelax::Result<()> {
    let list = std::env::args().nth(1).unwrap_or_else(|| "205,615".into());
    let base = recipe("euler-sod-sr-feko")?.config()?.expect("recipe has a config");
    for nx in list.split(',').map(|s| s.trim().parse::<usize>().expect("nx")) {
        let mut cfg = base.clone();
        cfg.nx = nx;
        let res = execute(&cfg)?;
        if let Some(e) = &res.output.failure {
            println!("Nx={nx}: {e}");
            continue;
        }
        let (_, names, fields) = res.problem.output_fields(&res.output.final_state)?;
        let col = |n: &str| &fields[names.iter().position(|m| *m == n).expect("column")];
        let (rho, p) = (col("rho"), col("p"));
        let min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "Nx={nx:5}: steps {:6}  rho in [{:.4}, {:.4}]  p in [{:.4}, {:.4}]",
            res.output.steps,
            min(rho),
            max(rho),
            min(p),
            max(p)
        );
        for r in &res.errors.rows {
            println!("    t={:.2}  L1(rho)={:.3e}", r.t, r.norms.l1);
        }
    }
    Ok(())
}
