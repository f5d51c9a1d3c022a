//! Running an experiment from a TOML config and writing its artifacts:
//! snapshots, error table and a manifest with content hashes.
//!
//! cargo run --release --example config_runs -- [config.toml] [out_dir]

use std::path::PathBuf;

use specrelax::experiment::{recipe, run_experiment, ExperimentConfig};

fn main() -> specrelax::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let cfg = match args.get(1) {
        Some(path) => ExperimentConfig::from_file(path.as_ref())?,
        None => recipe("burgers-sr-feko")?.config()?.expect("recipe has a config"),
    };
    let out = args
        .get(2)
        .map_or_else(|| std::env::temp_dir().join(format!("specrelax-{}", cfg.name)), PathBuf::from);
    let (_, manifest) = run_experiment(&cfg, &out)?;
    println!("{} -> {}", manifest.name, out.display());
    for f in &manifest.outputs {
        println!("  {}  {}", &f.sha256[..16], f.file);
    }
    println!("config as TOML:\n{}", cfg.to_toml());
    Ok(())
}
