//! TOML experiment configuration.
//!
//! One experiment per file. Top-level keys name the problem; tables tune the
//! grid, physics, scheme, time stepping, observers, reference and an optional
//! sweep. Unknown keys are rejected.
//!
//! ```toml
//! name = "sod"
//! ic = "euler-sod"
//! nx = 615
//! t_end = 0.4
//! output_times = [0.1, 0.2, 0.4]
//!
//! [scheme]
//! kind = "sr"
//! kernel = "feko"
//! alpha = 0.785
//! gamma = 0.99
//!
//! [reference]
//! kind = "exact"
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{KernelFamily, KernelSpec, DLVP_DEFAULT_PLATEAU};
use crate::models::ic::{IcId, IcParams};
use crate::schemes::{RunConfig, SchemeConfig, SchemeKind, TimeStep, DEFAULT_CFL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(with = "ic_name")]
    pub ic: IcId,
    /// Optional consistency check against the model implied by `ic`.
    #[serde(default)]
    pub model: Option<String>,
    /// Node count (for the dam break, nodes of the mirrored domain).
    pub nx: usize,
    pub t_end: f64,
    /// Snapshot times; empty means the final state only.
    #[serde(default)]
    pub output_times: Vec<f64>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub physics: IcParams,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub observers: ObserverSection,
    #[serde(default)]
    pub reference: ReferenceSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

mod ic_name {
    use super::IcId;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(id: &IcId, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(id.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IcId, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// `fourier` or `chebyshev`; checked against the problem when given.
    pub basis: Option<String>,
    /// Overrides `physics.kosloff_beta`.
    pub kosloff_beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeSection {
    pub kind: SchemeKind,
    pub kernel: String,
    pub alpha: f64,
    pub gamma: f64,
    /// DLVP plateau fraction `r`.
    pub plateau: f64,
    pub mmo78_beta: f64,
    pub mmo78_p: f64,
    pub rsk_order: f64,
    pub dealias: bool,
    /// SVV amplitude; when absent, `svv_eps_coeff · N^svv_eps_power`.
    pub svv_eps: Option<f64>,
    pub svv_eps_coeff: f64,
    pub svv_eps_power: f64,
    /// SVV activation wavenumber; when absent, `svv_cutoff_coeff · N^svv_cutoff_power`.
    pub svv_cutoff: Option<f64>,
    pub svv_cutoff_coeff: f64,
    pub svv_cutoff_power: f64,
}

impl Default for SchemeSection {
    fn default() -> Self {
        SchemeSection {
            kind: SchemeKind::Pps,
            kernel: "feko".into(),
            alpha: 0.7,
            gamma: 0.99,
            plateau: DLVP_DEFAULT_PLATEAU,
            mmo78_beta: 2.5,
            mmo78_p: 1.0,
            rsk_order: 1.5,
            dealias: false,
            svv_eps: None,
            svv_eps_coeff: 1.0,
            svv_eps_power: -1.0,
            svv_cutoff: None,
            svv_cutoff_coeff: 2.0,
            svv_cutoff_power: 0.5,
        }
    }
}

impl SchemeSection {
    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        let family = match self.kernel.parse::<KernelFamily>().map_err(|e| cfg_err("scheme.kernel", e))? {
            KernelFamily::DeLaValleePoussin { .. } => KernelFamily::DeLaValleePoussin {
                plateau: self.plateau,
            },
            KernelFamily::Mmo78 { .. } => KernelFamily::Mmo78 {
                beta: self.mmo78_beta,
                p: self.mmo78_p,
            },
            KernelFamily::Rsk { .. } => KernelFamily::Rsk {
                order: self.rsk_order,
            },
            f => f,
        };
        let spec = KernelSpec::new(family, self.alpha, self.gamma);
        if self.kind != SchemeKind::Pps && self.kind != SchemeKind::Svv {
            spec.validate().map_err(|e| cfg_err("scheme", e))?;
        }
        Ok(spec)
    }

    /// Scheme for a grid of spectral bandwidth `n`.
    pub fn scheme_config(&self, n: usize) -> Result<SchemeConfig> {
        let nf = n as f64;
        let cfg = match self.kind {
            SchemeKind::Pps => SchemeConfig::pps(self.dealias),
            SchemeKind::Sr => SchemeConfig::sr(self.kernel_spec()?),
            SchemeKind::Sp => SchemeConfig::sp(self.kernel_spec()?),
            SchemeKind::Svv => SchemeConfig::svv(
                self.svv_eps.unwrap_or(self.svv_eps_coeff * nf.powf(self.svv_eps_power)),
                self.svv_cutoff
                    .unwrap_or(self.svv_cutoff_coeff * nf.powf(self.svv_cutoff_power)),
            ),
        };
        Ok(cfg.with_dealias(self.dealias))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub cfl: f64,
    /// Fixed step; overrides the CFL rule.
    pub dt: Option<f64>,
    /// Recompute the CFL step after every step.
    pub adaptive: bool,
    pub max_dt: Option<f64>,
    pub blowup_threshold: Option<f64>,
}

impl Default for TimeSection {
    fn default() -> Self {
        TimeSection {
            cfl: DEFAULT_CFL,
            dt: None,
            adaptive: false,
            max_dt: None,
            blowup_threshold: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObserverSection {
    pub snapshots: bool,
    pub spectra: bool,
    pub energy: bool,
    pub energy_every_step: bool,
    pub delta: bool,
    pub delta_algebraic: bool,
    /// `[k_min, k_max]`; chosen from the scheme when absent.
    pub delta_window: Option<[usize; 2]>,
    /// Times `[t0, t1]` used to extrapolate `t*`; all fitted times when absent.
    pub delta_fit_times: Option<[f64; 2]>,
    pub component: usize,
}

impl Default for ObserverSection {
    fn default() -> Self {
        ObserverSection {
            snapshots: true,
            spectra: false,
            energy: false,
            energy_every_step: false,
            delta: false,
            delta_algebraic: false,
            delta_window: None,
            delta_fit_times: None,
            component: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceKind {
    #[default]
    None,
    /// Closed-form solution (Burgers, Sod, Lax, dam break).
    Exact,
    /// First-order finite-volume solution on `cells` cells.
    Fv,
    /// Snapshot files of an earlier high-resolution run in `path`.
    #[serde(rename = "self")]
    SelfRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceSection {
    pub kind: ReferenceKind,
    pub cells: usize,
    pub path: Option<PathBuf>,
    /// Component compared against the reference.
    pub component: usize,
}

impl Default for ReferenceSection {
    fn default() -> Self {
        ReferenceSection {
            kind: ReferenceKind::None,
            cells: 8000,
            path: None,
            component: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Nx,
    Alpha,
    Gamma,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Nx => "nx",
            SweepAxis::Alpha => "alpha",
            SweepAxis::Gamma => "gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Resolutions run for each value of an `alpha` or `gamma` sweep.
    #[serde(default)]
    pub nx: Vec<usize>,
}

fn cfg_err(key: &str, e: impl std::fmt::Display) -> Error {
    Error::Config {
        key: key.into(),
        message: e.to_string(),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let value: toml::Value = toml::from_str(text).map_err(|e| cfg_err("<syntax>", e.message()))?;
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            let message = e.inner().to_string();
            let key = match message
                .strip_prefix("unknown field `")
                .and_then(|s| s.split('`').next())
            {
                Some(field) if path == "." => field.to_string(),
                Some(field) if path == field || path.ends_with(&format!(".{field}")) => path,
                Some(field) => format!("{path}.{field}"),
                None => path,
            };
            Error::Config { key, message }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn ic_params(&self) -> IcParams {
        let mut p = self.physics;
        if let Some(b) = self.grid.kosloff_beta {
            p.kosloff_beta = b;
        }
        p
    }

    pub fn run_config(&self) -> RunConfig {
        let time_step = match self.time.dt {
            Some(dt) => TimeStep::Fixed(dt),
            None => TimeStep::Cfl {
                cfl: self.time.cfl,
                adaptive: self.time.adaptive,
                max_dt: self.time.max_dt,
            },
        };
        let output_times = if self.output_times.is_empty() {
            vec![self.t_end]
        } else {
            self.output_times.clone()
        };
        RunConfig {
            t_end: self.t_end,
            time_step,
            output_times,
            blowup_threshold: self.time.blowup_threshold,
            keep_snapshots: true,
        }
    }

    /// Member configurations of the sweep, or just `self` without one.
    pub fn sweep_members(&self) -> Vec<(f64, ExperimentConfig)> {
        let Some(sweep) = &self.sweep else {
            return vec![(f64::NAN, self.clone())];
        };
        let mut out = Vec::new();
        for &v in &sweep.values {
            let nxs = match sweep.axis {
                SweepAxis::Nx => vec![v as usize],
                _ if sweep.nx.is_empty() => vec![self.nx],
                _ => sweep.nx.clone(),
            };
            for nx in nxs {
                let mut m = self.clone();
                m.sweep = None;
                m.nx = nx;
                match sweep.axis {
                    SweepAxis::Nx => {}
                    SweepAxis::Alpha => m.scheme.alpha = v,
                    SweepAxis::Gamma => m.scheme.gamma = v,
                }
                m.name = format!("{}_{}{}_nx{}", self.name, sweep.axis.name(), v, nx);
                out.push((v, m));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(cfg_err("name", "must not be empty"));
        }
        if let Some(m) = &self.model {
            if m != self.ic.model_name() {
                return Err(cfg_err(
                    "model",
                    format!("`{}` is a {} problem, not {m}", self.ic, self.ic.model_name()),
                ));
            }
        }
        if let Some(b) = &self.grid.basis {
            let want = if self.ic.is_chebyshev() { "chebyshev" } else { "fourier" };
            if b != want {
                return Err(cfg_err("grid.basis", format!("`{}` uses a {want} grid", self.ic)));
            }
        }
        check_nx(self.ic, self.nx).map_err(|m| cfg_err("nx", m))?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(cfg_err("t_end", format!("must be positive, got {}", self.t_end)));
        }
        if let Some(t) = self.output_times.iter().find(|&&t| !(0.0..=self.t_end).contains(&t)) {
            return Err(cfg_err("output_times", format!("{t} lies outside [0, t_end]")));
        }
        let p = self.ic_params();
        if !(p.kosloff_beta > 0.0 && p.kosloff_beta < 1.0) {
            return Err(cfg_err("grid.kosloff_beta", "must lie strictly inside (0,1)"));
        }
        if !(p.gravity > 0.0) {
            return Err(cfg_err("physics.gravity", "must be positive"));
        }
        if self.scheme.kind != SchemeKind::Pps && self.scheme.kind != SchemeKind::Svv {
            self.scheme.kernel_spec()?;
        } else {
            self.scheme.kernel.parse::<KernelFamily>().map_err(|e| cfg_err("scheme.kernel", e))?;
        }
        if self.scheme.kind == SchemeKind::Svv && self.ic.is_chebyshev() {
            return Err(cfg_err("scheme.kind", "SVV is implemented for Fourier grids only"));
        }
        if !(self.time.cfl > 0.0) {
            return Err(cfg_err("time.cfl", "must be positive"));
        }
        if matches!(self.time.dt, Some(dt) if !(dt > 0.0)) {
            return Err(cfg_err("time.dt", "must be positive"));
        }
        let ncomp = match self.ic.model_name() {
            "burgers" => 1,
            "shallow-water" | "hl" => 2,
            _ => 3,
        };
        if self.observers.component >= ncomp {
            return Err(cfg_err("observers.component", format!("model has {ncomp} components")));
        }
        if self.reference.component >= ncomp {
            return Err(cfg_err("reference.component", format!("model has {ncomp} components")));
        }
        if self.observers.delta && self.ic.is_chebyshev() {
            return Err(cfg_err("observers.delta", "analyticity-strip fits need a Fourier grid"));
        }
        if let Some([lo, hi]) = self.observers.delta_window {
            if lo >= hi {
                return Err(cfg_err("observers.delta_window", "needs k_min < k_max"));
            }
        }
        match self.reference.kind {
            ReferenceKind::Exact => {
                if !matches!(
                    self.ic,
                    IcId::BurgersIc0 | IcId::BurgersIc1 | IcId::EulerSod | IcId::EulerLax | IcId::SwDamBreak
                ) {
                    return Err(cfg_err(
                        "reference.kind",
                        format!("no closed-form solution for `{}`", self.ic),
                    ));
                }
            }
            ReferenceKind::Fv => {
                if self.ic == IcId::HlDefault {
                    return Err(cfg_err("reference.kind", "no finite-volume reference for the HL model"));
                }
                if self.reference.cells < 100 {
                    return Err(cfg_err("reference.cells", "needs at least 100 cells"));
                }
            }
            ReferenceKind::SelfRef if self.reference.path.is_none() => {
                return Err(cfg_err("reference.path", "required for a self reference"));
            }
            _ => {}
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(cfg_err("sweep.values", "must not be empty"));
            }
            for &v in &s.values {
                match s.axis {
                    SweepAxis::Nx => {
                        if v.fract() != 0.0 || v < 3.0 {
                            return Err(cfg_err("sweep.values", format!("{v} is not a node count")));
                        }
                        check_nx(self.ic, v as usize).map_err(|m| cfg_err("sweep.values", m))?;
                    }
                    SweepAxis::Gamma if !(v > 0.0 && v < 1.0) => {
                        return Err(cfg_err("sweep.values", format!("gamma {v} outside (0,1)")));
                    }
                    _ => {}
                }
            }
            for &nx in &s.nx {
                check_nx(self.ic, nx).map_err(|m| cfg_err("sweep.nx", m))?;
            }
        }
        Ok(())
    }
}

fn check_nx(ic: IcId, nx: usize) -> std::result::Result<(), String> {
    if nx < 5 {
        return Err(format!("need at least 5 nodes, got {nx}"));
    }
    if !ic.is_chebyshev() && nx % 2 == 0 {
        return Err(format!("Fourier grids need an odd node count, got {nx}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
ic = "burgers-ic0"
nx = 65
t_end = 0.1
"#;

    #[test]
    fn defaults() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.scheme.kind, SchemeKind::Pps);
        assert!(c.observers.snapshots);
        assert_eq!(c.run_config().output_times, vec![0.1]);
        assert_eq!(c.reference.kind, ReferenceKind::None);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = format!("{MINIMAL}\n[scheme]\nkind = \"sr\"\nalhpa = 0.7\n");
        match ExperimentConfig::from_toml(&text) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "scheme.alhpa"),
            other => panic!("{other:?}"),
        }
        match ExperimentConfig::from_toml(&format!("{MINIMAL}\nfoo = 1\n")) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "foo"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_values_name_their_key() {
        let cases = [
            (MINIMAL.replace("65", "64"), "nx"),
            (MINIMAL.replace("burgers-ic0", "burgers-ic7"), "ic"),
            (format!("{MINIMAL}\n[scheme]\nkind = \"sr\"\ngamma = 1.2\n"), "scheme"),
            (format!("{MINIMAL}\n[reference]\nkind = \"self\"\n"), "reference.path"),
            (format!("{MINIMAL}\n[sweep]\naxis = \"nx\"\nvalues = [64.0]\n"), "sweep.values"),
            (format!("{MINIMAL}\nmodel = \"euler\"\n"), "model"),
        ];
        for (text, want) in cases {
            match ExperimentConfig::from_toml(&text) {
                Err(Error::Config { key, .. }) => assert_eq!(key, want, "{text}"),
                other => panic!("{want}: {other:?}"),
            }
        }
    }

    #[test]
    fn roundtrip_and_sweep_members() {
        let text = format!(
            "{MINIMAL}\n[scheme]\nkind = \"sr\"\n[sweep]\naxis = \"alpha\"\nvalues = [0.7, 0.9]\nnx = [65, 129]\n"
        );
        let c = ExperimentConfig::from_toml(&text.replace("129", "131")).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
        let m = c.sweep_members();
        assert_eq!(m.len(), 4);
        assert_eq!((m[3].0, m[3].1.nx, m[3].1.scheme.alpha), (0.9, 131, 0.9));
        assert!(m.iter().all(|(_, m)| m.sweep.is_none()));
    }

    #[test]
    fn svv_law_defaults() {
        let c = ExperimentConfig::from_toml(&format!("{MINIMAL}\n[scheme]\nkind = \"svv\"\n")).unwrap();
        let s = c.scheme.scheme_config(100).unwrap();
        assert!((s.svv_eps - 0.01).abs() < 1e-15 && (s.svv_cutoff - 20.0).abs() < 1e-12);
    }
}
