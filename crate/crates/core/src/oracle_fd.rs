//! Time-domain oracle for the coupled momentum / constitutive system
//!
//! ```text
//! du/dt = 1 + (1/r) d(r sigma)/dr
//! sigma + l^a D^a sigma = l^(b-1) D^(b-1) du/dr
//! ```
//!
//! with Grünwald–Letnikov operators in time. Velocity lives on the nodes
//! `r_j = j dr`, shear rate and stress on the midpoints `r_(j+1/2)`, so the
//! flux form of the momentum balance is second order and the axis row
//! follows from the balance over the central disc of radius `dr/2`. Each
//! step is fully implicit in the current stress and needs one tridiagonal
//! solve.

use crate::error::{Error, Result};
use crate::spectral::{FluidParams, Quantity, RadialField};

const BLOWUP_NORM: f64 = 1e6;

/// Discretization settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub radial_points: usize,
    pub time_step: f64,
    pub horizon: f64,
    /// Number of past steps kept in the memory sums; `None` keeps all.
    /// Truncating the memory is an approximation.
    pub history_window: Option<usize>,
}

impl FdConfig {
    pub fn new(radial_points: usize, time_step: f64, horizon: f64) -> Self {
        FdConfig {
            radial_points,
            time_step,
            horizon,
            history_window: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_points < 16 {
            return Err(Error::InvalidParameter(format!(
                "at least 16 radial points required, got {}",
                self.radial_points
            )));
        }
        if !(self.time_step > 0.0 && self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time step and horizon must be positive, got {} and {}",
                self.time_step, self.horizon
            )));
        }
        if self.time_step > self.horizon / 100.0 {
            return Err(Error::InvalidParameter(format!(
                "time step {} exceeds horizon/100 = {}",
                self.time_step,
                self.horizon / 100.0
            )));
        }
        if self.history_window == Some(0) {
            return Err(Error::InvalidParameter("history window must be at least one step".into()));
        }
        Ok(())
    }
}

/// Grünwald–Letnikov weights `w_0 = 1`, `w_k = w_(k-1) (1 - (order + 1) / k)`.
pub fn gl_weights(order: f64, count: usize) -> Result<Vec<f64>> {
    if !(order > -1.0 && order <= 2.0) {
        return Err(Error::InvalidParameter(format!("weight order must lie in (-1, 2], got {order}")));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("weight count must be at least 1".into()));
    }
    let mut w = Vec::with_capacity(count);
    w.push(1.0);
    for k in 1..count {
        let prev = w[k - 1];
        w.push(prev * (1.0 - (order + 1.0) / k as f64));
    }
    Ok(w)
}

/// Drop the trailing run of exact zeros (integer orders).
fn trim(mut w: Vec<f64>) -> Vec<f64> {
    while w.len() > 1 && *w.last().unwrap() == 0.0 {
        w.pop();
    }
    w
}

/// March the system from rest to `cfg.horizon`. The returned field holds
/// every time level, starting with `t = 0`.
pub fn simulate(params: &FluidParams, cfg: &FdConfig) -> Result<RadialField> {
    params.validate()?;
    cfg.validate()?;
    let FluidParams { alpha, beta, lambda } = *params;
    let n_nodes = cfg.radial_points;
    let n_half = n_nodes - 1;
    let dr = 1.0 / n_half as f64;
    let h = cfg.time_step;
    let steps = (cfg.horizon / h).round() as usize;

    let radii: Vec<f64> = (0..n_nodes).map(|j| j as f64 * dr).collect();
    let mid: Vec<f64> = (0..n_half).map(|j| (j as f64 + 0.5) * dr).collect();

    let w_sigma = trim(gl_weights(alpha, steps + 1)?);
    let w_rate = trim(gl_weights(beta - 1.0, steps + 1)?);
    let a_coef = lambda.powf(alpha) * h.powf(-alpha);
    let b_coef = lambda.powf(beta - 1.0) * h.powf(1.0 - beta);
    let denom = 1.0 + a_coef;
    let c_rate = b_coef / denom;

    // sigma^n = c_rate * g^n + memory^n
    let mut g_hist: Vec<Vec<f64>> = Vec::with_capacity(steps + 1);
    let mut s_hist: Vec<Vec<f64>> = Vec::with_capacity(steps + 1);
    g_hist.push(vec![0.0; n_half]);
    s_hist.push(vec![0.0; n_half]);

    // Discrete operator L(s)_j on node j from midpoint values s.
    let inv_dr2 = 1.0 / (dr * dr);
    let mut lower = vec![0.0; n_half];
    let mut diag = vec![0.0; n_half];
    let mut upper = vec![0.0; n_half];
    for j in 0..n_half {
        if j == 0 {
            // 4 s_(1/2) / dr with s = c (u1 - u0) / dr
            diag[0] = 1.0 + h * c_rate * 4.0 * inv_dr2;
            upper[0] = -h * c_rate * 4.0 * inv_dr2;
        } else {
            let rp = mid[j] / radii[j];
            let rm = mid[j - 1] / radii[j];
            lower[j] = -h * c_rate * rm * inv_dr2;
            diag[j] = 1.0 + h * c_rate * (rp + rm) * inv_dr2;
            // u_(n_half) = 0 drops the last upper entry
            upper[j] = if j + 1 < n_half { -h * c_rate * rp * inv_dr2 } else { 0.0 };
        }
    }

    let mut u = vec![0.0; n_nodes];
    let mut values = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    values.push(u.clone());
    times.push(0.0);
    let mut memory = vec![0.0; n_half];
    let mut rhs = vec![0.0; n_half];

    for n in 1..=steps {
        let window = cfg.history_window.unwrap_or(n).min(n);
        memory.iter_mut().for_each(|m| *m = 0.0);
        for k in 1..=window.min(w_rate.len() - 1) {
            let wk = b_coef * w_rate[k];
            for (m, g) in memory.iter_mut().zip(&g_hist[n - k]) {
                *m += wk * g;
            }
        }
        for k in 1..=window.min(w_sigma.len() - 1) {
            let wk = a_coef * w_sigma[k];
            for (m, s) in memory.iter_mut().zip(&s_hist[n - k]) {
                *m -= wk * s;
            }
        }
        memory.iter_mut().for_each(|m| *m /= denom);

        for j in 0..n_half {
            let flux = if j == 0 {
                4.0 * memory[0] / dr
            } else {
                (mid[j] * memory[j] - mid[j - 1] * memory[j - 1]) / (radii[j] * dr)
            };
            rhs[j] = u[j] + h * (1.0 + flux);
        }
        let solved = thomas(&lower, &diag, &upper, &rhs);
        u[..n_half].copy_from_slice(&solved);
        u[n_half] = 0.0;

        let g: Vec<f64> = (0..n_half).map(|j| (u[j + 1] - u[j]) / dr).collect();
        let s: Vec<f64> = g.iter().zip(&memory).map(|(g, m)| c_rate * g + m).collect();
        let norm = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if !(norm <= BLOWUP_NORM) {
            return Err(Error::Unstable { steps: n, norm });
        }
        g_hist.push(g);
        s_hist.push(s);
        values.push(u.clone());
        times.push(n as f64 * h);
    }

    Ok(RadialField {
        quantity: Quantity::Velocity,
        radii,
        times,
        values,
        metadata: vec![
            ("alpha".into(), alpha.to_string()),
            ("beta".into(), beta.to_string()),
            ("lambda".into(), lambda.to_string()),
            ("radial_points".into(), n_nodes.to_string()),
            ("time_step".into(), h.to_string()),
        ],
    })
}

fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
