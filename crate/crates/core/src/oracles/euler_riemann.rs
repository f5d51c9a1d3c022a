//! Exact solution of the Riemann problem for the ideal-gas Euler equations.

use crate::error::{Error, Result};
use crate::models::euler::Primitive;

const PRESSURE_TOL: f64 = 1e-14;
const MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    Shock,
    Rarefaction,
}

/// Solved Riemann problem. States are sampled in the similarity variable `s = x/t`.
#[derive(Debug, Clone, Copy)]
pub struct EulerRiemann {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
}

struct Side {
    rho: f64,
    p: f64,
    c: f64,
}

impl EulerRiemann {
    pub fn solve(left: Primitive, right: Primitive, gamma: f64) -> Result<Self> {
        for (name, s) in [("left", left), ("right", right)] {
            if !(s.rho > 0.0 && s.p > 0.0 && s.u.is_finite()) {
                return Err(Error::Oracle(format!(
                    "{name} state needs positive density and pressure, got rho={}, p={}",
                    s.rho, s.p
                )));
            }
        }
        if !(gamma > 1.0) {
            return Err(Error::Oracle(format!("gamma must exceed 1, got {gamma}")));
        }
        let cl = left.sound_speed(gamma);
        let cr = right.sound_speed(gamma);
        let du = right.u - left.u;
        if 2.0 / (gamma - 1.0) * (cl + cr) <= du {
            return Err(Error::Oracle("initial data generate vacuum".into()));
        }
        let l = Side { rho: left.rho, p: left.p, c: cl };
        let r = Side { rho: right.rho, p: right.p, c: cr };

        // Two-rarefaction guess, exact when both waves are rarefactions.
        let z = (gamma - 1.0) / (2.0 * gamma);
        let num = cl + cr - 0.5 * (gamma - 1.0) * du;
        let den = cl / left.p.powf(z) + cr / right.p.powf(z);
        let mut p = (num / den).powf(1.0 / z).max(1e-14 * left.p.min(right.p));
        let mut converged = false;
        for _ in 0..MAX_ITER {
            let (fl, dl) = pressure_function(p, &l, gamma);
            let (fr, dr) = pressure_function(p, &r, gamma);
            let f = fl + fr + du;
            let mut next = p - f / (dl + dr);
            if !(next > 0.0) {
                next = 0.5 * p;
            }
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < PRESSURE_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Oracle("star pressure iteration did not converge".into()));
        }
        let (fl, _) = pressure_function(p, &l, gamma);
        let (fr, _) = pressure_function(p, &r, gamma);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        let wave = |pk: f64| if p > pk { Wave::Shock } else { Wave::Rarefaction };
        Ok(EulerRiemann {
            left,
            right,
            gamma,
            p_star: p,
            u_star,
            left_wave: wave(left.p),
            right_wave: wave(right.p),
        })
    }

    /// Residual of the star-pressure equation.
    pub fn residual(&self) -> f64 {
        let g = self.gamma;
        let l = Side { rho: self.left.rho, p: self.left.p, c: self.left.sound_speed(g) };
        let r = Side { rho: self.right.rho, p: self.right.p, c: self.right.sound_speed(g) };
        pressure_function(self.p_star, &l, g).0
            + pressure_function(self.p_star, &r, g).0
            + self.right.u
            - self.left.u
    }

    pub fn rho_star_left(&self) -> f64 {
        star_density(self.p_star, &self.left, self.gamma)
    }

    pub fn rho_star_right(&self) -> f64 {
        star_density(self.p_star, &self.right, self.gamma)
    }

    /// Speed of the left shock or of the left rarefaction head.
    pub fn left_speed(&self) -> f64 {
        let g = self.gamma;
        let c = self.left.sound_speed(g);
        match self.left_wave {
            Wave::Shock => self.left.u - c * shock_factor(self.p_star / self.left.p, g),
            Wave::Rarefaction => self.left.u - c,
        }
    }

    /// Speed of the right shock or of the right rarefaction head.
    pub fn right_speed(&self) -> f64 {
        let g = self.gamma;
        let c = self.right.sound_speed(g);
        match self.right_wave {
            Wave::Shock => self.right.u + c * shock_factor(self.p_star / self.right.p, g),
            Wave::Rarefaction => self.right.u + c,
        }
    }

    /// State at similarity coordinate `s = x/t`.
    pub fn sample(&self, s: f64) -> Primitive {
        let g = self.gamma;
        let z = (g - 1.0) / (2.0 * g);
        let ps = self.p_star;
        if s <= self.u_star {
            let w = self.left;
            let c = w.sound_speed(g);
            match self.left_wave {
                Wave::Shock => {
                    if s <= self.left_speed() {
                        w
                    } else {
                        Primitive::new(self.rho_star_left(), self.u_star, ps)
                    }
                }
                Wave::Rarefaction => {
                    if s <= w.u - c {
                        return w;
                    }
                    let c_star = c * (ps / w.p).powf(z);
                    if s > self.u_star - c_star {
                        Primitive::new(self.rho_star_left(), self.u_star, ps)
                    } else {
                        let u = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * w.u + s);
                        let cf = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * (w.u - s));
                        fan_state(w, c, cf, u, g)
                    }
                }
            }
        } else {
            let w = self.right;
            let c = w.sound_speed(g);
            match self.right_wave {
                Wave::Shock => {
                    if s >= self.right_speed() {
                        w
                    } else {
                        Primitive::new(self.rho_star_right(), self.u_star, ps)
                    }
                }
                Wave::Rarefaction => {
                    if s >= w.u + c {
                        return w;
                    }
                    let c_star = c * (ps / w.p).powf(z);
                    if s <= self.u_star + c_star {
                        Primitive::new(self.rho_star_right(), self.u_star, ps)
                    } else {
                        let u = 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * w.u + s);
                        let cf = 2.0 / (g + 1.0) * (c - 0.5 * (g - 1.0) * (w.u - s));
                        fan_state(w, c, cf, u, g)
                    }
                }
            }
        }
    }

    /// State at `x` and time `t` for a discontinuity initially at `x0`.
    pub fn sample_xt(&self, x: f64, x0: f64, t: f64) -> Primitive {
        if t <= 0.0 {
            return if x <= x0 { self.left } else { self.right };
        }
        self.sample((x - x0) / t)
    }
}

/// Convenience wrapper returning `(ρ, u, p)` at `s = x/t`.
pub fn euler_riemann(left: Primitive, right: Primitive, gamma: f64, s: f64) -> Result<Primitive> {
    Ok(EulerRiemann::solve(left, right, gamma)?.sample(s))
}

fn shock_factor(ratio: f64, g: f64) -> f64 {
    ((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g)).sqrt()
}

fn star_density(ps: f64, w: &Primitive, g: f64) -> f64 {
    let ratio = ps / w.p;
    if ps > w.p {
        let g6 = (g - 1.0) / (g + 1.0);
        w.rho * (ratio + g6) / (g6 * ratio + 1.0)
    } else {
        w.rho * ratio.powf(1.0 / g)
    }
}

fn fan_state(w: Primitive, c: f64, cf: f64, u: f64, g: f64) -> Primitive {
    let ratio = cf / c;
    Primitive::new(
        w.rho * ratio.powf(2.0 / (g - 1.0)),
        u,
        w.p * ratio.powf(2.0 * g / (g - 1.0)),
    )
}

/// Velocity jump across the wave connecting a side state to pressure `p`, and its derivative.
fn pressure_function(p: f64, s: &Side, g: f64) -> (f64, f64) {
    if p > s.p {
        let a = 2.0 / ((g + 1.0) * s.rho);
        let b = (g - 1.0) / (g + 1.0) * s.p;
        let q = (a / (b + p)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (b + p)))
    } else {
        let z = (g - 1.0) / (2.0 * g);
        let ratio = p / s.p;
        (
            2.0 * s.c / (g - 1.0) * (ratio.powf(z) - 1.0),
            ratio.powf(-(g + 1.0) / (2.0 * g)) / (s.rho * s.c),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::euler::GAMMA_AIR;
    use proptest::prelude::*;

    fn sod() -> EulerRiemann {
        EulerRiemann::solve(
            Primitive::new(1.0, 0.0, 1.0),
            Primitive::new(0.125, 0.0, 0.1),
            GAMMA_AIR,
        )
        .unwrap()
    }

    fn flux(w: Primitive, g: f64) -> [f64; 3] {
        let e = w.p / (g - 1.0) + 0.5 * w.rho * w.u * w.u;
        [w.rho * w.u, w.rho * w.u * w.u + w.p, w.u * (e + w.p)]
    }

    fn cons(w: Primitive, g: f64) -> [f64; 3] {
        [w.rho, w.rho * w.u, w.p / (g - 1.0) + 0.5 * w.rho * w.u * w.u]
    }

    fn rh_residual(a: Primitive, b: Primitive, speed: f64, g: f64) -> f64 {
        let (fa, fb, qa, qb) = (flux(a, g), flux(b, g), cons(a, g), cons(b, g));
        (0..3)
            .map(|i| ((fb[i] - fa[i]) - speed * (qb[i] - qa[i])).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn sod_star_state() {
        let s = sod();
        assert!(s.residual().abs() < 1e-12);
        // Bisection on the pressure function as an independent check.
        let g = GAMMA_AIR;
        let l = Side { rho: 1.0, p: 1.0, c: (g * 1.0f64 / 1.0).sqrt() };
        let r = Side { rho: 0.125, p: 0.1, c: (g * 0.1f64 / 0.125).sqrt() };
        let f = |p: f64| pressure_function(p, &l, g).0 + pressure_function(p, &r, g).0;
        let (mut lo, mut hi) = (0.1, 1.0);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if f(m) > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        assert!((s.p_star - lo).abs() < 1e-12);
        assert!((s.p_star - 0.30313).abs() < 1e-5);
        assert!((s.u_star - 0.92745).abs() < 1e-5);
        assert_eq!(s.left_wave, Wave::Rarefaction);
        assert_eq!(s.right_wave, Wave::Shock);
    }

    #[test]
    fn sod_jump_conditions_and_invariants() {
        let s = sod();
        let g = GAMMA_AIR;
        let post = Primitive::new(s.rho_star_right(), s.u_star, s.p_star);
        assert!(rh_residual(post, s.right, s.right_speed(), g) < 1e-10);
        // Left Riemann invariant and entropy through the fan.
        let inv = |w: Primitive| w.u + 2.0 * w.sound_speed(g) / (g - 1.0);
        let ent = |w: Primitive| w.p / w.rho.powf(g);
        let head = s.left_speed();
        let tail = s.u_star - Primitive::new(s.rho_star_left(), s.u_star, s.p_star).sound_speed(g);
        for i in 0..=20 {
            let w = s.sample(head + (tail - head) * i as f64 / 20.0);
            assert!((inv(w) - inv(s.left)).abs() < 1e-10);
            assert!((ent(w) - ent(s.left)).abs() < 1e-10);
        }
        // Contact: pressure and velocity continuous.
        let a = s.sample(s.u_star - 1e-9);
        let b = s.sample(s.u_star + 1e-9);
        assert!((a.p - b.p).abs() < 1e-12 && (a.u - b.u).abs() < 1e-12);
    }

    #[test]
    fn lax_has_shock_on_the_right() {
        let s = EulerRiemann::solve(
            Primitive::new(0.445, 0.311, 8.928),
            Primitive::new(0.5, 0.0, 1.4275),
            GAMMA_AIR,
        )
        .unwrap();
        assert!(s.residual().abs() < 1e-11);
        let post = Primitive::new(s.rho_star_right(), s.u_star, s.p_star);
        assert!(rh_residual(post, s.right, s.right_speed(), GAMMA_AIR) < 1e-10);
    }

    #[test]
    fn uniform_state_is_preserved() {
        let w = Primitive::new(0.7, 0.2, 1.3);
        let s = EulerRiemann::solve(w, w, GAMMA_AIR).unwrap();
        for x in [-3.0, -0.1, 0.0, 0.2, 5.0] {
            let v = s.sample(x);
            assert!((v.rho - w.rho).abs() < 1e-12);
            assert!((v.u - w.u).abs() < 1e-12);
            assert!((v.p - w.p).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_is_rejected() {
        let e = EulerRiemann::solve(
            Primitive::new(1.0, -20.0, 0.4),
            Primitive::new(1.0, 20.0, 0.4),
            GAMMA_AIR,
        );
        assert!(matches!(e, Err(Error::Oracle(_))));
    }

    #[test]
    fn blast_shock_is_strong() {
        let s = EulerRiemann::solve(
            Primitive::new(1.0, 0.0, 1000.0),
            Primitive::new(1.0, 0.0, 0.01),
            GAMMA_AIR,
        )
        .unwrap();
        assert!(s.residual().abs() < 1e-9);
        let post = Primitive::new(s.rho_star_right(), s.u_star, s.p_star);
        let r = rh_residual(post, s.right, s.right_speed(), GAMMA_AIR);
        assert!(r < 1e-10 * s.p_star.max(1.0), "{r}");
    }

    proptest! {
        #[test]
        fn mirror_symmetry(
            rl in 0.1f64..5.0, ul in -1.0f64..1.0, pl in 0.1f64..5.0,
            rr in 0.1f64..5.0, ur in -1.0f64..1.0, pr in 0.1f64..5.0,
        ) {
            let a = EulerRiemann::solve(Primitive::new(rl, ul, pl), Primitive::new(rr, ur, pr), GAMMA_AIR).unwrap();
            let b = EulerRiemann::solve(Primitive::new(rr, -ur, pr), Primitive::new(rl, -ul, pl), GAMMA_AIR).unwrap();
            prop_assert!((a.p_star - b.p_star).abs() < 1e-10 * a.p_star);
            prop_assert!((a.u_star + b.u_star).abs() < 1e-10 * (1.0 + a.u_star.abs()));
            prop_assert!(a.residual().abs() < 1e-10);
        }
    }
}
