use crate::error::{Error, Result};

/// Classical fourth-order Runge–Kutta with reusable stage buffers.
pub struct Rk4 {
    k: [Vec<Vec<f64>>; 4],
    stage: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl Rk4 {
    pub fn new(components: usize, len: usize) -> Self {
        let zero = vec![vec![0.0; len]; components];
        Rk4 {
            k: [zero.clone(), zero.clone(), zero.clone(), zero.clone()],
            stage: zero,
            names: (0..components).map(|c| format!("component {c}")).collect(),
        }
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Advance `state` by `dt`. Non-finite stage tendencies abort with a blowup error.
    pub fn step<F>(&mut self, state: &mut [Vec<f64>], dt: f64, mut rhs: F) -> Result<()>
    where
        F: FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> Result<()>,
    {
        if !(dt > 0.0) {
            return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
        }
        const STAGE: [f64; 3] = [0.5, 0.5, 1.0];
        rhs(state, &mut self.k[0])?;
        check_finite(&self.k[0], state, &self.names)?;
        for s in 0..3 {
            let a = STAGE[s] * dt;
            for ((st, u), k) in self.stage.iter_mut().zip(state.iter()).zip(&self.k[s]) {
                for ((x, &u), &k) in st.iter_mut().zip(u).zip(k) {
                    *x = u + a * k;
                }
            }
            rhs(&self.stage, &mut self.k[s + 1])?;
            check_finite(&self.k[s + 1], &self.stage, &self.names)?;
        }
        let w = dt / 6.0;
        for (c, u) in state.iter_mut().enumerate() {
            let [k1, k2, k3, k4] = &self.k;
            for (j, x) in u.iter_mut().enumerate() {
                *x += w * (k1[c][j] + 2.0 * k2[c][j] + 2.0 * k3[c][j] + k4[c][j]);
            }
        }
        Ok(())
    }
}

fn check_finite(tendency: &[Vec<f64>], state: &[Vec<f64>], names: &[String]) -> Result<()> {
    for (c, k) in tendency.iter().enumerate() {
        if k.iter().any(|v| !v.is_finite()) {
            let max_abs = state[c].iter().fold(0.0f64, |m, v| {
                if v.is_finite() {
                    m.max(v.abs())
                } else {
                    f64::INFINITY
                }
            });
            return Err(Error::Blowup {
                t: 0.0,
                step: 0,
                field: names[c].clone(),
                max_abs,
            });
        }
    }
    Ok(())
}

/// One RK4 step of `du/dt = rhs(u)`.
pub fn rk4_step<F>(state: &mut [Vec<f64>], dt: f64, rhs: F) -> Result<()>
where
    F: FnMut(&[Vec<f64>], &mut [Vec<f64>]) -> Result<()>,
{
    let len = state.first().map_or(0, |s| s.len());
    Rk4::new(state.len(), len).step(state, dt, rhs)
}
