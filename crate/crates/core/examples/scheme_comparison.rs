//! PPS, SR, SP and SVV side by side on Burgers IC0: errors before and after
//! the shock, relaxation time, purges and step counts.
//!
//! cargo run --release --example scheme_comparison -- [nx]

use specrelax::experiment::{execute, ExperimentConfig};

fn main() -> specrelax::Result<()> {
    let nx: usize = std::env::args().nth(1).map_or(615, |s| s.parse().expect("nx"));
    let schemes = [
        ("pps", r#"kind = "pps""#),
        ("pps dealiased", "kind = \"pps\"\ndealias = true"),
        ("sr feko", "kind = \"sr\"\nkernel = \"feko\"\nalpha = 0.7\ngamma = 0.99"),
        ("sp feko", "kind = \"sp\"\nkernel = \"feko\"\nalpha = 0.65\ngamma = 0.99"),
        ("sr dlvp", "kind = \"sr\"\nkernel = \"dlvp\"\nalpha = 0.89\ngamma = 0.9"),
        ("svv", r#"kind = "svv""#),
    ];
    println!("Burgers IC0, Nx={nx}");
    println!("{:14} {:>10} {:>10} {:>10} {:>7} {:>7}", "scheme", "L1 t=0.07", "L1 t=0.2", "L1 t=2", "steps", "purges");
    for (label, scheme) in schemes {
        let cfg = ExperimentConfig::from_toml(&format!(
            "name = \"cmp\"\nic = \"burgers-ic0\"\nnx = {nx}\nt_end = 2.0\n\
             output_times = [0.07, 0.2, 2.0]\n[scheme]\n{scheme}\n[reference]\nkind = \"exact\"\n"
        ))?;
        let res = execute(&cfg)?;
        let l1 = |t: f64| res.error_at(t).map_or(f64::NAN, |r| r.norms.l1);
        println!(
            "{label:14} {:10.2e} {:10.2e} {:10.2e} {:7} {:7}",
            l1(0.07),
            l1(0.2),
            l1(2.0),
            res.output.steps,
            res.output.purges
        );
    }
    Ok(())
}
