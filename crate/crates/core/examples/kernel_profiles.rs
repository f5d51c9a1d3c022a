//! Multipliers of every kernel family at a chosen bandwidth, with the
//! real-space minimum that separates positive kernels from the rest.
//!
//! cargo run --release --example kernel_profiles -- [N] [out_dir]

use specrelax::experiment::recipes::{kernel_dump, profile_kernels};
use specrelax::kernels::{real_space_profile, svv_q_coeffs};

fn main() -> specrelax::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map_or(307, |s| s.parse().expect("N"));
    println!("{:8} {:>7} {:>7} {:>11} {:>11} {:>12}", "family", "alpha", "gamma", "K(N/4)", "K(N/2)", "min K(x)");
    for spec in profile_kernels() {
        let c = spec.coeffs(n)?;
        let profile = real_space_profile(&c, 4096.max(2 * n + 1))?;
        let min = profile.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{:8} {:>7} {:>7} {:>11.4e} {:>11.4e} {:>12.4e}",
            spec.family.name(),
            spec.alpha,
            spec.gamma,
            c[n / 4],
            c[n / 2],
            min
        );
    }
    let cutoff = 2.0 * (n as f64).sqrt();
    let q = svv_q_coeffs(n, cutoff)?;
    println!("svv      cutoff {cutoff:.1}: Q(M)={:.3e} Q(N)={:.3e}", q[cutoff as usize], q[n]);
    if let Some(dir) = args.get(2) {
        for f in kernel_dump(&profile_kernels(), n, std::path::Path::new(dir))? {
            println!("wrote {}", f.display());
        }
    }
    Ok(())
}
