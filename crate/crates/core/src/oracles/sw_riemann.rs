//! Exact dam-break solution of the shallow-water equations with both sides at rest.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamBreak {
    pub h_left: f64,
    pub h_right: f64,
    pub gravity: f64,
    pub h_star: f64,
    pub u_star: f64,
    /// Shock speed; for a dry bed this is the wet front speed.
    pub shock_speed: f64,
    /// `true` when the deeper side is on the right and the solution is mirrored.
    mirrored: bool,
}

impl DamBreak {
    pub fn solve(h_left: f64, h_right: f64, gravity: f64) -> Result<Self> {
        if !(h_left >= 0.0 && h_right >= 0.0 && h_left.is_finite() && h_right.is_finite()) {
            return Err(Error::Oracle(format!(
                "depths must be non-negative, got h_l={h_left}, h_r={h_right}"
            )));
        }
        if !(gravity > 0.0) {
            return Err(Error::Oracle(format!("gravity must be positive, got {gravity}")));
        }
        if h_left == 0.0 && h_right == 0.0 {
            return Err(Error::Oracle("both sides are dry".into()));
        }
        let mirrored = h_right > h_left;
        let (hl, hr) = if mirrored { (h_right, h_left) } else { (h_left, h_right) };
        let g = gravity;
        let cl = (g * hl).sqrt();
        let (h_star, u_star, shock_speed) = if hr == 0.0 {
            (0.0, 2.0 * cl, 2.0 * cl)
        } else if hl == hr {
            (hl, 0.0, 0.0)
        } else {
            let h = star_depth(hl, hr, g)?;
            let u = 2.0 * (cl - (g * h).sqrt());
            (h, u, h * u / (h - hr))
        };
        Ok(DamBreak {
            h_left,
            h_right,
            gravity,
            h_star,
            u_star,
            shock_speed,
            mirrored,
        })
    }

    /// Residual of the depth equation at the computed star depth.
    pub fn residual(&self) -> f64 {
        let (hl, hr) = self.ordered();
        if hr == 0.0 || hl == hr {
            return 0.0;
        }
        depth_function(self.h_star, hl, hr, self.gravity)
    }

    fn ordered(&self) -> (f64, f64) {
        if self.mirrored {
            (self.h_right, self.h_left)
        } else {
            (self.h_left, self.h_right)
        }
    }

    /// Head of the rarefaction, which moves into the deep side.
    pub fn rarefaction_head(&self) -> f64 {
        let (hl, _) = self.ordered();
        let s = -(self.gravity * hl).sqrt();
        if self.mirrored { -s } else { s }
    }

    /// Front position speed on the shallow side (shock or dry front).
    pub fn front_speed(&self) -> f64 {
        if self.mirrored { -self.shock_speed } else { self.shock_speed }
    }

    /// `(h, u)` at similarity coordinate `s = x/t`.
    pub fn sample(&self, s: f64) -> (f64, f64) {
        if self.mirrored {
            let (h, u) = self.sample_ordered(-s);
            (h, -u)
        } else {
            self.sample_ordered(s)
        }
    }

    fn sample_ordered(&self, s: f64) -> (f64, f64) {
        let (hl, hr) = self.ordered();
        let g = self.gravity;
        let cl = (g * hl).sqrt();
        if hl == hr {
            return (hl, 0.0);
        }
        if s <= -cl {
            return (hl, 0.0);
        }
        let tail = self.u_star - (g * self.h_star).sqrt();
        if s < tail {
            let c = (2.0 * cl - s) / 3.0;
            return (c * c / g, 2.0 * (s + cl) / 3.0);
        }
        if hr == 0.0 {
            return (0.0, 0.0);
        }
        if s < self.shock_speed {
            (self.h_star, self.u_star)
        } else {
            (hr, 0.0)
        }
    }

    /// `(h, u)` at `x`, `t` for a dam initially at `x0`.
    pub fn sample_xt(&self, x: f64, x0: f64, t: f64) -> (f64, f64) {
        if t <= 0.0 {
            return if x <= x0 { (self.h_left, 0.0) } else { (self.h_right, 0.0) };
        }
        self.sample((x - x0) / t)
    }
}

/// Convenience wrapper returning `(h, u)` at `s = x/t`.
pub fn shallow_water_riemann(h_left: f64, h_right: f64, gravity: f64, s: f64) -> Result<(f64, f64)> {
    Ok(DamBreak::solve(h_left, h_right, gravity)?.sample(s))
}

/// Left rarefaction plus right shock: the star velocities from each side must agree.
fn depth_function(h: f64, hl: f64, hr: f64, g: f64) -> f64 {
    2.0 * ((g * h).sqrt() - (g * hl).sqrt())
        + (h - hr) * (0.5 * g * (h + hr) / (h * hr)).sqrt()
}

fn star_depth(hl: f64, hr: f64, g: f64) -> Result<f64> {
    let f = |h: f64| depth_function(h, hl, hr, g);
    let (mut lo, mut hi) = (hr, hl);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::Oracle("dam-break depth function is not bracketed".into()));
    }
    let mut h = 0.5 * (lo + hi);
    for _ in 0..200 {
        let r = f(h);
        if r == 0.0 {
            return Ok(h);
        }
        if r < 0.0 {
            lo = h;
        } else {
            hi = h;
        }
        let q = (0.5 * g * (h + hr) / (h * hr)).sqrt();
        let d = (g / h).sqrt() + q - 0.25 * g * (h - hr) / (q * h * h);
        let mut next = h - r / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 1e-15 * h || hi - lo <= 1e-15 * h {
            return Ok(next);
        }
        h = next;
    }
    Ok(h)
}
