//! Exact entropic solution of `u_t + (u²/2)_x = 0` on the unit period.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time at which the sine initial data first steepens into a shock.
pub const T_STAR: f64 = 1.0 / (2.0 * PI);

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BurgersIc {
    /// `sin(2πx)`
    Ic0,
    /// `sin(2πx − π/2)`, the quarter-period shift of `Ic0`.
    Ic1,
}

impl BurgersIc {
    pub fn initial(&self, x: f64) -> f64 {
        (2.0 * PI * (x - self.shift())).sin()
    }

    fn shift(&self) -> f64 {
        match self {
            BurgersIc::Ic0 => 0.0,
            BurgersIc::Ic1 => 0.25,
        }
    }

    /// Position of the stationary shock once it has formed.
    pub fn shock_position(&self) -> f64 {
        0.5 + self.shift()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactBurgers {
    pub ic: BurgersIc,
}

impl ExactBurgers {
    pub fn new(ic: BurgersIc) -> Self {
        ExactBurgers { ic }
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        exact_burgers(x, t, self.ic)
    }

    pub fn eval_many(&self, xs: &[f64], t: f64) -> Result<Vec<f64>> {
        xs.iter().map(|&x| exact_burgers(x, t, self.ic)).collect()
    }
}

/// Exact solution at `(x, t)`.
///
/// The sine data is odd about `x = 1/2` (relative to its shift), so the shock
/// forms at `t = 1/(2π)` and stays at the centre. Left of the shock the foot
/// of the characteristic lies in `[0, x]`, where `ξ + t sin(2πξ) − x` has a
/// single root even after breaking; the right half follows by odd symmetry.
pub fn exact_burgers(x: f64, t: f64, ic: BurgersIc) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() || !x.is_finite() {
        return Err(Error::Oracle(format!("exact Burgers needs finite x and t >= 0, got x={x}, t={t}")));
    }
    let y = (x - ic.shift()).rem_euclid(1.0);
    if t == 0.0 {
        return Ok((2.0 * PI * y).sin());
    }
    if y == 0.0 || y == 0.5 {
        return Ok(0.0);
    }
    if y < 0.5 {
        left_half(y, t)
    } else {
        Ok(-left_half(1.0 - y, t)?)
    }
}

fn left_half(x: f64, t: f64) -> Result<f64> {
    let w = 2.0 * PI;
    let g = |xi: f64| xi + t * (w * xi).sin() - x;
    let dg = |xi: f64| 1.0 + t * w * (w * xi).cos();
    let (mut lo, mut hi) = (0.0, x);
    let mut xi = x;
    for _ in 0..NEWTON_MAX_ITER {
        let r = g(xi);
        if r == 0.0 {
            return Ok((w * xi).sin());
        }
        if r < 0.0 {
            lo = xi;
        } else {
            hi = xi;
        }
        let d = dg(xi);
        let mut next = xi - r / d;
        if !(d > 0.0) || !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - xi).abs() <= NEWTON_TOL * x.max(1e-3) || hi - lo <= NEWTON_TOL * x {
            return Ok((w * next).sin());
        }
        xi = next;
    }
    Err(Error::Oracle(format!(
        "characteristic root did not converge at x={x}, t={t}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if f(lo) * f(m) <= 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn initial_time_is_the_data() {
        for x in [0.0, 0.1, 0.3, 0.77] {
            assert_eq!(exact_burgers(x, 0.0, BurgersIc::Ic0).unwrap(), (2.0 * PI * x).sin());
        }
    }

    #[test]
    fn implicit_equation_at_quarter_point() {
        let u = exact_burgers(0.25, 0.07, BurgersIc::Ic0).unwrap();
        let want = bisect(|u| u - (2.0 * PI * (0.25 - 0.07 * u)).sin(), 0.0, 1.0);
        assert!((u - want).abs() < 1e-13, "{u} {want}");
    }

    #[test]
    fn shock_is_odd() {
        for t in [0.2, 0.5, 2.0] {
            let a = exact_burgers(0.5 - 1e-9, t, BurgersIc::Ic0).unwrap();
            let b = exact_burgers(0.5 + 1e-9, t, BurgersIc::Ic0).unwrap();
            assert!((a + b).abs() < 1e-12);
            assert!(a > 0.1, "post-shock jump should be finite, got {a}");
        }
    }

    #[test]
    fn ic1_shifts_ic0() {
        for t in [0.07, 0.2, 2.0] {
            for x in [0.05, 0.4, 0.74, 0.9] {
                let a = exact_burgers(x, t, BurgersIc::Ic1).unwrap();
                let b = exact_burgers(x - 0.25, t, BurgersIc::Ic0).unwrap();
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn energy_constant_before_shock_and_decreasing_after() {
        let energy = |t: f64| {
            let n = 20000;
            (0..n)
                .map(|j| exact_burgers((j as f64 + 0.5) / n as f64, t, BurgersIc::Ic0).unwrap().powi(2))
                .sum::<f64>()
                / n as f64
        };
        let e = [0.0, 0.07, 0.2, 0.5, 2.0].map(energy);
        assert!((e[0] - 0.5).abs() < 1e-10);
        assert!((e[1] - 0.5).abs() < 1e-8);
        assert!(e[2] < e[1] && e[3] < e[2] && e[4] < e[3]);
    }

    proptest! {
        #[test]
        fn characteristic_identity_holds(x in 0.001f64..0.999, t in 0.0f64..3.0) {
            let y = x;
            prop_assume!((y - 0.5).abs() > 1e-6);
            let u = exact_burgers(x, t, BurgersIc::Ic0).unwrap();
            let r = u - (2.0 * PI * (x - u * t)).sin();
            prop_assert!(r.abs() < 1e-12, "residual {r}");
        }
    }
}
