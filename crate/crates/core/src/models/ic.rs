//! Named initial conditions with their domains, grids and boundary conditions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridSpec};
use crate::models::euler::{EulerBoundaries, Primitive, GAMMA_AIR};
use crate::models::hl::{HL_AMPLITUDE, HL_PERIOD};
use crate::models::shallow_water::{MirrorDomain, Parity, DEFAULT_GRAVITY};
use crate::models::{Burgers, Euler, HlModel, Model, ShallowWater};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IcId {
    BurgersIc0,
    BurgersIc1,
    SwHump,
    SwDamBreak,
    EulerSod,
    EulerLax,
    EulerShuOsher,
    EulerBlast,
    HlDefault,
}

impl IcId {
    pub const ALL: [IcId; 9] = [
        IcId::BurgersIc0,
        IcId::BurgersIc1,
        IcId::SwHump,
        IcId::SwDamBreak,
        IcId::EulerSod,
        IcId::EulerLax,
        IcId::EulerShuOsher,
        IcId::EulerBlast,
        IcId::HlDefault,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IcId::BurgersIc0 => "burgers-ic0",
            IcId::BurgersIc1 => "burgers-ic1",
            IcId::SwHump => "sw-hump",
            IcId::SwDamBreak => "sw-dambreak",
            IcId::EulerSod => "euler-sod",
            IcId::EulerLax => "euler-lax",
            IcId::EulerShuOsher => "euler-shuosher",
            IcId::EulerBlast => "euler-blast",
            IcId::HlDefault => "hl-default",
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            IcId::BurgersIc0 | IcId::BurgersIc1 => "burgers",
            IcId::SwHump | IcId::SwDamBreak => "shallow-water",
            IcId::EulerSod | IcId::EulerLax | IcId::EulerShuOsher | IcId::EulerBlast => "euler",
            IcId::HlDefault => "hl",
        }
    }

    pub fn is_chebyshev(&self) -> bool {
        self.model_name() == "euler"
    }
}

impl fmt::Display for IcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IcId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IcId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = IcId::ALL.iter().map(|i| i.name()).collect();
                Error::Parameter(format!(
                    "unknown initial condition `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Physical parameters that the named problems leave open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IcParams {
    pub gravity: f64,
    /// Decay rate of the shallow-water hump `1 + 0.4 e^{-βx²}`.
    pub hump_beta: f64,
    pub dam_left: f64,
    pub dam_right: f64,
    pub kosloff_beta: f64,
}

impl Default for IcParams {
    fn default() -> Self {
        IcParams {
            gravity: DEFAULT_GRAVITY,
            hump_beta: 5.0,
            dam_left: 3.0,
            dam_right: 1.0,
            kosloff_beta: 0.999,
        }
    }
}

/// A model together with its initial state.
pub struct Problem {
    pub ic: IcId,
    pub model: Box<dyn Model>,
    pub initial: Vec<Vec<f64>>,
    /// Set for the mirror-symmetrised dam break.
    pub mirror: Option<MirrorDomain>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("ic", &self.ic)
            .field("nodes", &self.model.grid().len())
            .finish()
    }
}

pub fn burgers_ic0(x: f64) -> f64 {
    (2.0 * PI * x).sin()
}

pub fn burgers_ic1(x: f64) -> f64 {
    (2.0 * PI * x - PI / 2.0).sin()
}

pub fn sod(x: f64) -> Primitive {
    if x <= 0.0 {
        Primitive::new(1.0, 0.0, 1.0)
    } else {
        Primitive::new(0.125, 0.0, 0.1)
    }
}

pub fn lax(x: f64) -> Primitive {
    if x <= 0.0 {
        Primitive::new(0.445, 0.311, 8.928)
    } else {
        Primitive::new(0.5, 0.0, 1.4275)
    }
}

pub fn shu_osher(x: f64) -> Primitive {
    if x <= -0.8 {
        Primitive::new(3.85714, 2.629369, 10.33333)
    } else {
        Primitive::new(1.0 + 0.2 * (5.0 * PI * x).sin(), 0.0, 1.0)
    }
}

pub fn blast(x: f64) -> Primitive {
    let p = if x <= 0.1 {
        1e3
    } else if x < 0.9 {
        1e-2
    } else {
        1e2
    };
    Primitive::new(1.0, 0.0, p)
}

impl Problem {
    /// Build a named problem on `nx` nodes (for the dam break: nodes of the doubled domain).
    pub fn new(ic: IcId, nx: usize, params: &IcParams) -> Result<Problem> {
        let fourier = |a: f64, b: f64| -> Result<Arc<Grid>> {
            Ok(Arc::new(Grid::new(GridSpec::fourier_nx(a, b, nx)?)?))
        };
        let chebyshev = |a: f64, b: f64| -> Result<Arc<Grid>> {
            Ok(Arc::new(Grid::new(GridSpec::chebyshev_nx(
                a,
                b,
                nx,
                Some(params.kosloff_beta),
            )?)?))
        };
        let sample = |g: &Grid, f: &dyn Fn(f64) -> f64| -> Vec<f64> {
            g.nodes().iter().map(|&x| f(x)).collect()
        };
        let (model, initial, mirror): (Box<dyn Model>, Vec<Vec<f64>>, Option<MirrorDomain>) =
            match ic {
                IcId::BurgersIc0 | IcId::BurgersIc1 => {
                    let g = fourier(0.0, 1.0)?;
                    let f = if ic == IcId::BurgersIc0 { burgers_ic0 } else { burgers_ic1 };
                    let u = sample(&g, &f);
                    (Box::new(Burgers::new(g)), vec![u], None)
                }
                IcId::SwHump => {
                    let g = fourier(-5.0, 5.0)?;
                    let beta = params.hump_beta;
                    let h = sample(&g, &|x| 1.0 + 0.4 * (-beta * x * x).exp());
                    let n = h.len();
                    (
                        Box::new(ShallowWater::new(g, params.gravity)?),
                        vec![h, vec![0.0; n]],
                        None,
                    )
                }
                IcId::SwDamBreak => {
                    if !(params.dam_left > 0.0 && params.dam_right > 0.0) {
                        return Err(Error::Parameter(
                            "the spectral dam break needs positive depths on both sides".into(),
                        ));
                    }
                    let d = MirrorDomain::new(-5.0, 5.0, nx)?;
                    let (hl, hr) = (params.dam_left, params.dam_right);
                    let h = d.extend_fn(|x| if x <= 0.0 { hl } else { hr }, Parity::Even);
                    let hu = d.extend_fn(|_| 0.0, Parity::Odd);
                    (
                        Box::new(ShallowWater::new(d.grid().clone(), params.gravity)?),
                        vec![h, hu],
                        Some(d),
                    )
                }
                IcId::EulerSod | IcId::EulerLax | IcId::EulerShuOsher | IcId::EulerBlast => {
                    let (a, b, bc, f): (f64, f64, EulerBoundaries, fn(f64) -> Primitive) = match ic {
                        IcId::EulerSod => (-1.0, 1.0, EulerBoundaries::walls(), sod),
                        IcId::EulerLax => (-1.0, 1.0, EulerBoundaries::walls(), lax),
                        IcId::EulerShuOsher => {
                            (-1.0, 1.0, EulerBoundaries::inflow_outflow(), shu_osher)
                        }
                        _ => (0.0, 1.0, EulerBoundaries::walls(), blast),
                    };
                    let m = Euler::new(chebyshev(a, b)?, GAMMA_AIR, bc)?;
                    let s = m.state_from_primitive(f);
                    (Box::new(m), s, None)
                }
                IcId::HlDefault => {
                    let g = fourier(0.0, HL_PERIOD)?;
                    let u = sample(&g, &|x| {
                        HL_AMPLITUDE * (2.0 * PI * x / HL_PERIOD).sin().powi(2)
                    });
                    let n = u.len();
                    (Box::new(HlModel::new(g)?), vec![u, vec![0.0; n]], None)
                }
            };
        Ok(Problem {
            ic,
            model,
            initial,
            mirror,
        })
    }

    /// Physical nodes, column names and values of the state plus derived fields.
    pub fn output_fields(&self, state: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<&'static str>, Vec<Vec<f64>>)> {
        let mut names: Vec<&'static str> = self.model.component_names().to_vec();
        let mut fields = state.to_vec();
        for (n, f) in self.model.derived_fields(state)? {
            names.push(n);
            fields.push(f);
        }
        let (x, fields) = self.physical_view(&fields);
        Ok((x, names, fields))
    }

    /// Quadrature weights matching [`Problem::physical_view`].
    pub fn physical_weights(&self) -> Vec<f64> {
        match &self.mirror {
            Some(d) => {
                let x = d.physical_nodes();
                let (a, b) = d.physical_domain();
                vec![(b - a) / x.len() as f64; x.len()]
            }
            None => self.model.grid().weights().to_vec(),
        }
    }

    /// Node coordinates and component values on the physical domain.
    pub fn physical_view(&self, state: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
        match &self.mirror {
            Some(d) => (
                d.physical_nodes(),
                state.iter().map(|u| d.restrict(u)).collect(),
            ),
            None => (self.model.grid().nodes().to_vec(), state.to_vec()),
        }
    }
}
