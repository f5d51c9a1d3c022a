//! Error table of a relaxation scheme on the Burgers IC0 problem over a
//! resolution sweep, with L1 orders between neighbouring resolutions.
//!
//! cargo run --release --example burgers_convergence -- [kernel] [alpha] [gamma] [nx,nx,...]

use specrelax::analysis::Norm;
use specrelax::experiment::{run_sweep, ExperimentConfig};

fn main() -> specrelax::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let kernel = args.get(1).map_or("feko", String::as_str);
    let alpha: f64 = args.get(2).map_or(0.7, |s| s.parse().expect("alpha"));
    let gamma: f64 = args.get(3).map_or(0.99, |s| s.parse().expect("gamma"));
    let nx = args.get(4).map_or("123,205,615,1599".to_string(), |s| s.clone());
    let cfg = ExperimentConfig::from_toml(&format!(
        r#"
name = "burgers-{kernel}"
ic = "burgers-ic0"
nx = 123
t_end = 2.0
output_times = [0.07, 0.2, 2.0]

[scheme]
kind = "sr"
kernel = "{kernel}"
alpha = {alpha}
gamma = {gamma}

[observers]
snapshots = false

[reference]
kind = "exact"

[sweep]
axis = "nx"
values = [{nx}]
"#
    ))?;
    let dir = tempfile_dir();
    let report = run_sweep(&cfg, &dir, 1)?;
    println!("SR-{kernel} (alpha={alpha}, gamma={gamma}) on Burgers IC0");
    for t in [0.07, 0.2, 2.0] {
        println!("t = {t}");
        let rows = report.series(f64::NAN, t);
        let orders = report.orders(f64::NAN, t, Norm::L1);
        for ((nx, row), (_, order)) in rows.iter().zip(orders) {
            let order = order.map_or(String::from("   -"), |o| format!("{o:5.2}"));
            println!("  Nx={nx:5}  L1={:.2e}  order {order}  Linf={:.2e}", row.norms.l1, row.norms.linf);
        }
    }
    Ok(())
}

fn tempfile_dir() -> std::path::PathBuf {
    std::env::temp_dir().join(format!("specrelax-burgers-convergence-{}", std::process::id()))
}
