//! Named experiment presets shipped with the crate.

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::analysis::csv_out::{fmt_f64, to_file};
use crate::error::{Error, Result};
use crate::experiment::config::ExperimentConfig;
use crate::kernels::{real_space_profile, KernelFamily, KernelSpec, DLVP_DEFAULT_PLATEAU};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recipe {
    pub name: &'static str,
    pub summary: &'static str,
    /// TOML config; `None` for recipes that write tables without time stepping.
    pub source: Option<&'static str>,
}

pub const KERNEL_PROFILES: &str = "kernel-profiles";

pub const RECIPES: &[Recipe] = &[
    Recipe {
        name: KERNEL_PROFILES,
        summary: "Multipliers and real-space profiles of every kernel family at N=307",
        source: None,
    },
    Recipe {
        name: "burgers-delta",
        summary: "Analyticity-strip width from dealiased PPS spectra on Burgers IC0 and the extrapolated singularity time",
        source: Some(include_str!("../../recipes/burgers-delta.toml")),
    },
    Recipe {
        name: "burgers-ic1-unstable",
        summary: "Non-dealiased SR-FeKo (0.97, 0.98) on Burgers IC1: aliasing blowup expected",
        source: Some(include_str!("../../recipes/burgers-ic1-unstable.toml")),
    },
    Recipe {
        name: "burgers-order-vs-alpha",
        summary: "Pre-shock (t=0.07) convergence order of SR-FeKo against alpha, gamma=0.99",
        source: Some(include_str!("../../recipes/burgers-order-vs-alpha.toml")),
    },
    Recipe {
        name: "burgers-pps-ic-aliasing",
        summary: "Plain PPS on Burgers IC1 just after the shock: aliasing instability",
        source: Some(include_str!("../../recipes/burgers-pps-ic-aliasing.toml")),
    },
    Recipe {
        name: "burgers-pps-tygers",
        summary: "Dealiased PPS on Burgers IC0: Gibbs oscillations, tygers and energy conservation before the shock",
        source: Some(include_str!("../../recipes/burgers-pps-tygers.toml")),
    },
    Recipe {
        name: "burgers-sp-alpha",
        summary: "SP-FeKo on Burgers IC0 at t=0.2 for several alpha (gamma=0.99)",
        source: Some(include_str!("../../recipes/burgers-sp-alpha.toml")),
    },
    Recipe {
        name: "burgers-sp-feko",
        summary: "SP-FeKo (0.65, 0.99) on Burgers IC0 at Nx=615",
        source: Some(include_str!("../../recipes/burgers-sp-feko.toml")),
    },
    Recipe {
        name: "burgers-sp-jackson",
        summary: "SP with the Jackson kernel (0.65, 0.99) on Burgers IC0",
        source: Some(include_str!("../../recipes/burgers-sp-jackson.toml")),
    },
    Recipe {
        name: "burgers-sp-jdlvp",
        summary: "SP with the Jackson-DLVP kernel (0.65, 0.99) on Burgers IC0",
        source: Some(include_str!("../../recipes/burgers-sp-jdlvp.toml")),
    },
    Recipe {
        name: "burgers-sr-alpha",
        summary: "SR-FeKo on Burgers IC0 at t=0.2 for several alpha (gamma=0.99)",
        source: Some(include_str!("../../recipes/burgers-sr-alpha.toml")),
    },
    Recipe {
        name: "burgers-sr-dlvp",
        summary: "SR-DLVP (0.89, 0.9) on Burgers IC0 at Nx=615",
        source: Some(include_str!("../../recipes/burgers-sr-dlvp.toml")),
    },
    Recipe {
        name: "burgers-sr-feko",
        summary: "SR-FeKo (0.7, 0.99) on Burgers IC0 at Nx=615",
        source: Some(include_str!("../../recipes/burgers-sr-feko.toml")),
    },
    Recipe {
        name: "burgers-sr-jackson",
        summary: "SR with the Jackson kernel (0.7, 0.99) on Burgers IC0",
        source: Some(include_str!("../../recipes/burgers-sr-jackson.toml")),
    },
    Recipe {
        name: "burgers-sr-jdlvp",
        summary: "SR with the Jackson-DLVP kernel (0.7, 0.99) on Burgers IC0",
        source: Some(include_str!("../../recipes/burgers-sr-jdlvp.toml")),
    },
    Recipe {
        name: "burgers-sr-mmo78",
        summary: "SR with the non-positive MMO78 filter (0.87, 0.87, beta 2.5, p 1)",
        source: Some(include_str!("../../recipes/burgers-sr-mmo78.toml")),
    },
    Recipe {
        name: "burgers-sr-rsk",
        summary: "SR with the Gaussian-regularised Shannon kernel (0.85, 0.6, r 1.5)",
        source: Some(include_str!("../../recipes/burgers-sr-rsk.toml")),
    },
    Recipe {
        name: "burgers-sr-tt05",
        summary: "SR with the non-positive TT05 filter (-0.95, 0.1) on Burgers IC0",
        source: Some(include_str!("../../recipes/burgers-sr-tt05.toml")),
    },
    Recipe {
        name: "burgers-svv",
        summary: "SVV (eps=1/N, M=2 sqrt N) on Burgers IC0 at Nx=615",
        source: Some(include_str!("../../recipes/burgers-svv.toml")),
    },
    Recipe {
        name: "burgers-svv-ic1",
        summary: "SVV (eps=0.25 N^-1/4, M=N^1/4) on Burgers IC1 at Nx=615",
        source: Some(include_str!("../../recipes/burgers-svv-ic1.toml")),
    },
    Recipe {
        name: "euler-blast-sr-dlvp",
        summary: "Interacting blast waves with SR-DLVP (0.94, 0.95) at Nx=1599: positivity loss expected",
        source: Some(include_str!("../../recipes/euler-blast-sr-dlvp.toml")),
    },
    Recipe {
        name: "euler-blast-sr-feko",
        summary: "Interacting blast waves with SR-FeKo (1.355, 0.99) at Nx=1599",
        source: Some(include_str!("../../recipes/euler-blast-sr-feko.toml")),
    },
    Recipe {
        name: "euler-lax-sr-dlvp",
        summary: "Lax shock tube with SR-DLVP (1.10, 0.98) at Nx=615",
        source: Some(include_str!("../../recipes/euler-lax-sr-dlvp.toml")),
    },
    Recipe {
        name: "euler-lax-sr-feko",
        summary: "Lax shock tube with SR-FeKo (0.91, 0.99) at Nx=615",
        source: Some(include_str!("../../recipes/euler-lax-sr-feko.toml")),
    },
    Recipe {
        name: "euler-shuosher-sr-dlvp",
        summary: "Shu-Osher problem with SR-DLVP (1.14, 0.95) at Nx=615",
        source: Some(include_str!("../../recipes/euler-shuosher-sr-dlvp.toml")),
    },
    Recipe {
        name: "euler-shuosher-sr-feko",
        summary: "Shu-Osher problem with SR-FeKo (0.95, 0.97) at Nx=615",
        source: Some(include_str!("../../recipes/euler-shuosher-sr-feko.toml")),
    },
    Recipe {
        name: "euler-sod-sr-dlvp",
        summary: "Sod shock tube with SR-DLVP (0.94, 0.95) at Nx=615",
        source: Some(include_str!("../../recipes/euler-sod-sr-dlvp.toml")),
    },
    Recipe {
        name: "euler-sod-sr-feko",
        summary: "Sod shock tube with SR-FeKo (0.785, 0.99) at Nx=615",
        source: Some(include_str!("../../recipes/euler-sod-sr-feko.toml")),
    },
    Recipe {
        name: "hl-pps-2665",
        summary: "HL wall model with dealiased PPS at Nx=2665 for comparison of spectra and fit ranges",
        source: Some(include_str!("../../recipes/hl-pps-2665.toml")),
    },
    Recipe {
        name: "hl-sr-dlvp-2665",
        summary: "HL wall model with SR-DLVP (1.6, 0.99, r=0.92) at Nx=2665: fields and analyticity-strip width",
        source: Some(include_str!("../../recipes/hl-sr-dlvp-2665.toml")),
    },
    Recipe {
        name: "hl-sr-dlvp-7995",
        summary: "HL wall model with SR-DLVP (1.6, 0.99, r=0.92) at Nx=7995: fields and analyticity-strip width",
        source: Some(include_str!("../../recipes/hl-sr-dlvp-7995.toml")),
    },
    Recipe {
        name: "sw-dambreak",
        summary: "Mirror-symmetrised dam break with SR-FeKo (0.55, 0.99) at Nx=2665 against the exact Riemann solution",
        source: Some(include_str!("../../recipes/sw-dambreak.toml")),
    },
    Recipe {
        name: "sw-dambreak-convergence",
        summary: "Dam-break depth error of SR-FeKo (0.55, 0.99) over Nx",
        source: Some(include_str!("../../recipes/sw-dambreak-convergence.toml")),
    },
    Recipe {
        name: "sw-dambreak-dlvp",
        summary: "Mirror-symmetrised dam break with SR-DLVP (0.7, 0.98) at Nx=2665",
        source: Some(include_str!("../../recipes/sw-dambreak-dlvp.toml")),
    },
    Recipe {
        name: "sw-hump",
        summary: "Shallow-water hump with SR-FeKo (0.5, 0.99) at Nx=2665 against a finite-volume reference",
        source: Some(include_str!("../../recipes/sw-hump.toml")),
    },
    Recipe {
        name: "sw-hump-dlvp",
        summary: "Shallow-water hump with SR-DLVP (0.8225, 0.98) at Nx=2665",
        source: Some(include_str!("../../recipes/sw-hump-dlvp.toml")),
    },
    Recipe {
        name: "table1",
        summary: "Burgers IC0 convergence of SR-FeKo (0.7, 0.99), no dealiasing",
        source: Some(include_str!("../../recipes/table1.toml")),
    },
    Recipe {
        name: "table2",
        summary: "Burgers IC0 convergence of SR-DLVP (0.89, 0.9), no dealiasing",
        source: Some(include_str!("../../recipes/table2.toml")),
    },
    Recipe {
        name: "table3",
        summary: "Burgers IC1 convergence of dealiased SR-FeKo (0.97, 0.98)",
        source: Some(include_str!("../../recipes/table3.toml")),
    },
    Recipe {
        name: "table4",
        summary: "Burgers IC1 convergence of SR-FeKo (1.18, 0.99), no dealiasing",
        source: Some(include_str!("../../recipes/table4.toml")),
    },
];

pub fn recipe(name: &str) -> Result<&'static Recipe> {
    RECIPES.iter().find(|r| r.name == name).ok_or_else(|| {
        Error::Usage(format!(
            "unknown recipe `{name}`; run `specrelax list-recipes` for the available names"
        ))
    })
}

impl Recipe {
    pub fn config(&self) -> Result<Option<ExperimentConfig>> {
        self.source.map(ExperimentConfig::from_toml).transpose()
    }
}

/// Presets for the kernel-profiles recipe, one per family.
pub fn profile_kernels() -> Vec<KernelSpec> {
    use KernelFamily::*;
    vec![
        KernelSpec::new(FejerKorovkin, 0.7, 0.99),
        KernelSpec::new(Jackson, 0.7, 0.99),
        KernelSpec::new(JacksonDlvp, 0.7, 0.99),
        KernelSpec::new(DeLaValleePoussin { plateau: DLVP_DEFAULT_PLATEAU }, 0.89, 0.9),
        KernelSpec::new(Tt05, -0.95, 0.1),
        KernelSpec::new(Mmo78 { beta: 2.5, p: 1.0 }, 0.87, 0.87),
        KernelSpec::new(Rsk { order: 1.5 }, 0.85, 0.6),
    ]
}

/// Write `<family>_multipliers.csv` (k, k/N, multiplier) and
/// `<family>_profile.csv` (theta, kernel) for each spec at bandwidth `n`.
pub fn kernel_dump(specs: &[KernelSpec], n: usize, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let points = 8 * (2 * n + 1);
    for spec in specs {
        let c = spec.coeffs(n)?;
        let name = spec.family.name();
        let path = dir.join(format!("{name}_multipliers.csv"));
        to_file(&path, |f| {
            let mut w = BufWriter::new(f);
            writeln!(w, "k,k_over_n,multiplier")?;
            for (k, v) in c.iter().enumerate() {
                writeln!(w, "{k},{},{}", fmt_f64(k as f64 / n as f64), fmt_f64(*v))?;
            }
            w.flush()?;
            Ok(())
        })?;
        written.push(path);
        let profile = real_space_profile(&c, points)?;
        let path = dir.join(format!("{name}_profile.csv"));
        to_file(&path, |f| {
            let mut w = BufWriter::new(f);
            writeln!(w, "theta,kernel")?;
            // Peak in the middle: theta runs over [-pi, pi).
            let half = points / 2;
            for i in 0..points {
                let j = (i + points - half) % points;
                let theta = (i as f64 - half as f64) * std::f64::consts::TAU / points as f64;
                writeln!(w, "{},{}", fmt_f64(theta), fmt_f64(profile[j]))?;
            }
            w.flush()?;
            Ok(())
        })?;
        written.push(path);
    }
    Ok(written)
}
