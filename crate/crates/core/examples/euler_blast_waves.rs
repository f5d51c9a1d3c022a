//! Interacting blast waves: SR-DLVP loses positivity early while SR-FeKo
//! stays positive. The FeKo run goes to `t_end` (default 0.005; the full
//! problem ends at 0.032 and takes several minutes).
//!
//! cargo run --release --example euler_blast_waves -- [t_end] [nx]

use specrelax::experiment::{execute, recipe, ReferenceKind};

fn main() -> specrelax::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let t_end: f64 = args.get(1).map_or(0.005, |s| s.parse().expect("t_end"));
    let nx: usize = args.get(2).map_or(1599, |s| s.parse().expect("nx"));
    for name in ["euler-blast-sr-dlvp", "euler-blast-sr-feko"] {
        let mut cfg = recipe(name)?.config()?.expect("recipe has a config");
        cfg.nx = nx;
        cfg.t_end = cfg.t_end.min(t_end);
        cfg.output_times = vec![cfg.t_end];
        cfg.reference.kind = ReferenceKind::None;
        let res = execute(&cfg)?;
        match &res.output.failure {
            Some(e) => println!("{name}: {e}"),
            None => {
                let (_, names, fields) = res.problem.output_fields(&res.output.final_state)?;
                let min = |n: &str| {
                    let i = names.iter().position(|m| *m == n).expect("column");
                    fields[i].iter().cloned().fold(f64::INFINITY, f64::min)
                };
                println!(
                    "{name}: reached t={:.4} in {} steps, min rho {:.3e}, min p {:.3e}",
                    res.output.t_final,
                    res.output.steps,
                    min("rho"),
                    min("p")
                );
            }
        }
    }
    Ok(())
}
