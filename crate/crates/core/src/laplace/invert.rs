//! Numerical inversion on a vertical line: the Fourier-series (trapezoidal)
//! discretization of the Bromwich integral, accelerated with the
//! quotient-difference continued fraction of de Hoog, Knight and Stokes.
//!
//! For a block of times with largest value `t_max` the samples are taken at
//! `z_k = gamma + i k pi / T` with `T = 2 t_max` and `gamma = offset / t_max`,
//! so the aliasing error is of order `exp(-4 offset)` and the amplification
//! `exp(gamma t)` stays bounded by `exp(offset)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{eval_tf, principal_ln, PowerSum, TransferFn, EXPONENT_TOL};
use crate::error::{Error, Result};

/// Parameters of the vertical-line inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig {
    /// Abscissa of the contour in units of `1 / t_max`.
    pub abscissa_offset: f64,
    /// Number of Fourier samples of the transform per block.
    pub quadrature_terms: usize,
    /// Depth `M` of the quotient-difference table (uses `2M + 1` samples); 0 disables acceleration.
    pub acceleration_depth: usize,
    pub relative_tolerance: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            abscissa_offset: 6.0,
            quadrature_terms: 128,
            acceleration_depth: 20,
            relative_tolerance: 1e-8,
        }
    }
}

/// Largest ratio between the extreme times sharing one contour.
const BLOCK_RATIO: f64 = 2.0;
const PERIOD_SCALE: f64 = 2.0;
const EULER_ORDER: usize = 8;
const MAX_SAMPLES: usize = 1 << 17;
const NEGLIGIBLE_DECAY: f64 = -40.0;
const BAND_MARGIN: f64 = 1.25;
const BAND_WIDTHS: f64 = 8.0;
const NEWTON_STEPS: usize = 60;

impl InversionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abscissa_offset > 0.0 && self.abscissa_offset.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "abscissa offset must be positive, got {}",
                self.abscissa_offset
            )));
        }
        if self.quadrature_terms < 8 {
            return Err(Error::InvalidParameter(format!(
                "at least 8 quadrature terms required, got {}",
                self.quadrature_terms
            )));
        }
        if 2 * self.acceleration_depth + 1 > self.quadrature_terms {
            return Err(Error::InvalidParameter(format!(
                "acceleration depth {} needs {} samples but only {} quadrature terms are configured",
                self.acceleration_depth,
                2 * self.acceleration_depth + 1,
                self.quadrature_terms
            )));
        }
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance <= 1e-2) {
            return Err(Error::InvalidParameter(format!(
                "relative tolerance must lie in (0, 1e-2], got {}",
                self.relative_tolerance
            )));
        }
        Ok(())
    }
}

/// Inverse transform of `tf` at each of `times` (all strictly positive).
pub fn invert(tf: &TransferFn, times: &[f64], cfg: &InversionConfig) -> Result<Vec<f64>> {
    Ok(invert_with_estimate(tf, times, cfg)?.into_iter().map(|(v, _)| v).collect())
}

/// Inverse transform at a single time.
pub fn invert_one(tf: &TransferFn, t: f64, cfg: &InversionConfig) -> Result<f64> {
    Ok(invert(tf, &[t], cfg)?[0])
}

/// Values with their estimated relative errors.
pub fn invert_with_estimate(
    tf: &TransferFn,
    times: &[f64],
    cfg: &InversionConfig,
) -> Result<Vec<(f64, f64)>> {
    invert_checked(tf, times, cfg, -1.0)
}

/// Inversion of transforms decaying only like `|z|^(-b)` with `0 < b < 1`.
/// The trapezoidal series then converges conditionally, which the
/// summation-by-parts tail still handles away from `t = 0`.
pub(crate) fn invert_slowly_decaying(
    tf: &TransferFn,
    times: &[f64],
    cfg: &InversionConfig,
) -> Result<Vec<(f64, f64)>> {
    invert_checked(tf, times, cfg, -EXPONENT_TOL)
}

fn invert_checked(
    tf: &TransferFn,
    times: &[f64],
    cfg: &InversionConfig,
    max_degree: f64,
) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    for &t in times {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("inversion time must be positive, got {t}")));
        }
    }
    if tf.numerator().is_empty() {
        return Ok(vec![(0.0, 0.0); times.len()]);
    }
    let degree = tf.relative_degree();
    if degree > max_degree + EXPONENT_TOL {
        return Err(Error::Growth {
            numerator: tf.numerator().highest().map_or(0.0, |t| t.exponent),
            denominator: tf.denominator().highest().map_or(0.0, |t| t.exponent),
        });
    }

    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[b].total_cmp(&times[a]));
    let mut out = vec![(0.0, 0.0); times.len()];
    let mut start = 0;
    while start < order.len() {
        let t_max = times[order[start]];
        let mut end = start + 1;
        while end < order.len() && times[order[end]] * BLOCK_RATIO >= t_max {
            end += 1;
        }
        let block: Vec<f64> = order[start..end].iter().map(|&i| times[i]).collect();
        let values = invert_block(tf, &block, t_max, cfg)?;
        for (&i, v) in order[start..end].iter().zip(values) {
            out[i] = v;
        }
        start = end;
    }
    Ok(out)
}

fn invert_block(
    tf: &TransferFn,
    times: &[f64],
    t_max: f64,
    cfg: &InversionConfig,
) -> Result<Vec<(f64, f64)>> {
    let period = PERIOD_SCALE * t_max;
    let gamma = cfg.abscissa_offset / t_max;
    let sample = |k: usize| eval_tf(tf, Complex64::new(gamma, k as f64 * PI / period));
    let rotations: Vec<Complex64> = times
        .iter()
        .map(|&t| Complex64::from_polar(1.0, PI * t / period))
        .collect();
    let scales: Vec<f64> = times.iter().map(|&t| (gamma * t).exp() / period).collect();

    let t_min = times.iter().copied().fold(t_max, f64::min);
    let band = pole_bandwidth(tf, gamma, t_min);
    let needed = (band * period / PI).ceil() as usize;
    let dehoog_ok = cfg.acceleration_depth > 0 && needed <= 2 * cfg.acceleration_depth + 1;
    let initial = cfg.quadrature_terms.max(needed).min(MAX_SAMPLES);
    let mut samples = Vec::with_capacity(initial);
    for k in 0..initial {
        samples.push(sample(k)?);
    }
    samples[0] *= 0.5;

    let mut fourier: Vec<f64> = rotations
        .iter()
        .zip(&scales)
        .map(|(&w, &s)| s * euler_fourier_sum(&samples, w))
        .collect();

    if dehoog_ok {
        let d = qd_coefficients(&samples[..2 * cfg.acceleration_depth + 1]);
        let accelerated: Vec<f64> = rotations
            .iter()
            .zip(&scales)
            .map(|(&w, &s)| s * continued_fraction(&d, w).0.re)
            .collect();
        let magnitude = max_abs(&accelerated);
        let gap = max_abs_diff(&accelerated, &fourier);
        if accelerated.iter().all(|v| v.is_finite())
            && gap <= cfg.relative_tolerance * magnitude.max(f64::MIN_POSITIVE)
        {
            let rel = if magnitude > 0.0 { gap / magnitude } else { 0.0 };
            return Ok(accelerated.into_iter().map(|v| (v, rel)).collect());
        }
    }

    // Oscillatory or slowly converging case: extend the trapezoidal sum until
    // successive sample doublings agree.
    let mut estimate = f64::INFINITY;
    while samples.len() < MAX_SAMPLES {
        let n = samples.len();
        for k in n..2 * n {
            samples.push(sample(k)?);
        }
        let refined: Vec<f64> = rotations
            .iter()
            .zip(&scales)
            .map(|(&w, &s)| s * euler_fourier_sum(&samples, w))
            .collect();
        let magnitude = max_abs(&refined);
        estimate = max_abs_diff(&refined, &fourier) / magnitude.max(f64::MIN_POSITIVE);
        fourier = refined;
        if estimate <= cfg.relative_tolerance {
            return Ok(fourier.into_iter().map(|v| (v, estimate)).collect());
        }
    }
    Err(Error::NonConvergence {
        t: t_max,
        estimate,
        tolerance: cfg.relative_tolerance,
    })
}

/// Frequency up to which the contour must be sampled to resolve the poles
/// that still matter at `t_min`.
///
/// Pole positions are estimated from the Newton polygon of the denominator:
/// each edge between exponents `p < q` balances two terms, giving roots of
/// modulus `|c_p / c_q|^(1 / (q - p))` at angles fixed by the sign of the
/// ratio. Only roots on the principal sheet whose decay `exp(Re z t_min)`
/// is not negligible are kept.
fn pole_bandwidth(tf: &TransferFn, gamma: f64, t_min: f64) -> f64 {
    let pts: Vec<(f64, f64, f64)> = tf
        .denominator()
        .terms()
        .iter()
        .map(|t| (t.exponent, t.coeff.abs().ln(), t.coeff))
        .collect();
    // upper convex hull, exponents ascending
    let mut hull: Vec<(f64, f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let derivative = PowerSum::new(
        tf.denominator()
            .terms()
            .iter()
            .map(|t| (t.coeff * t.exponent, t.exponent - 1.0)),
    );
    let mut band: f64 = 0.0;
    for edge in hull.windows(2) {
        let (lo, hi) = (edge[0], edge[1]);
        let dp = hi.0 - lo.0;
        let modulus = ((lo.1 - hi.1) / dp).exp();
        let phase = if lo.2 / hi.2 > 0.0 { PI } else { 0.0 };
        let mut m = -((dp / 2.0).ceil() as i64) - 1;
        loop {
            let theta = (phase + 2.0 * PI * m as f64) / dp;
            if theta >= PI {
                break;
            }
            m += 1;
            if theta <= -PI {
                continue;
            }
            let guess = Complex64::from_polar(modulus, theta);
            let pole = refine_root(tf.denominator(), &derivative, guess)
                .filter(|p| (p - guess).norm() <= 0.5 * modulus)
                .unwrap_or(guess);
            let re = pole.re;
            if re * t_min < NEGLIGIBLE_DECAY {
                continue;
            }
            let im = pole.im.abs();
            band = band.max(BAND_MARGIN * im + BAND_WIDTHS * (gamma + re.abs()));
        }
    }
    band
}

/// Newton iteration for a zero of `den` on the principal sheet.
fn refine_root(den: &PowerSum, derivative: &PowerSum, start: Complex64) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..NEWTON_STEPS {
        let ln_z = principal_ln(z);
        let (d, _) = den.eval_with_log(ln_z);
        let (dd, _) = derivative.eval_with_log(ln_z);
        let step = d / dd;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if z.norm() == 0.0 {
            return None;
        }
        if step.norm() <= 1e-12 * z.norm() {
            return (z.arg().abs() < PI).then_some(z);
        }
    }
    None
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |m, (x, y)| if (x - y).is_nan() { f64::INFINITY } else { m.max((x - y).abs()) })
}

/// `Re sum_k a_k w^k` with the tail beyond the available samples estimated by
/// repeated summation by parts (Euler transformation of the oscillating tail).
fn euler_fourier_sum(a: &[Complex64], w: Complex64) -> f64 {
    let order = EULER_ORDER.min(a.len() / 2);
    let head = a.len() - order - 1;
    let mut wk = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for ak in &a[..head] {
        sum += ak * wk;
        wk *= w;
    }
    let one = Complex64::new(1.0, 0.0);
    let q = w / (one - w);
    let mut diffs: Vec<Complex64> = a[head..].to_vec();
    let mut tail = Complex64::new(0.0, 0.0);
    let mut qj = one;
    for j in 0..=order {
        tail += qj * diffs[0];
        qj *= q;
        if j < order {
            for i in 0..diffs.len() - 1 {
                diffs[i] = diffs[i + 1] - diffs[i];
            }
            diffs.pop();
        }
    }
    (sum + wk / (one - w) * tail).re
}

/// Continued-fraction coefficients `d_0 .. d_{2M}` from `2M + 1` power-series coefficients
/// by the quotient-difference algorithm.
fn qd_coefficients(a: &[Complex64]) -> Vec<Complex64> {
    let m = (a.len() - 1) / 2;
    let zero = Complex64::new(0.0, 0.0);
    let mut d = vec![zero; 2 * m + 1];
    d[0] = a[0];
    if m == 0 {
        return d;
    }
    // q^{(1)}_i = a_{i+1} / a_i, i = 0 .. 2M-1
    let mut q: Vec<Complex64> = (0..2 * m).map(|i| a[i + 1] / a[i]).collect();
    let mut e: Vec<Complex64> = vec![zero; 2 * m + 1];
    for r in 1..=m {
        // e^{(r)}_i, i = 0 ..= 2M - 2r
        let len = 2 * (m - r) + 1;
        let new_e: Vec<Complex64> = (0..len).map(|i| q[i + 1] - q[i] + e[i + 1]).collect();
        d[2 * r - 1] = -q[0];
        d[2 * r] = -new_e[0];
        if r < m {
            let qlen = 2 * (m - r);
            q = (0..qlen).map(|i| q[i + 1] * new_e[i + 1] / new_e[i]).collect();
        }
        e = new_e;
    }
    d
}

/// Evaluate the continued fraction at `w` with the de Hoog remainder correction.
/// Returns the full approximant and one two levels shallower.
fn continued_fraction(d: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let n = d.len() - 1;
    let one = Complex64::new(1.0, 0.0);
    if n == 0 {
        return (d[0], d[0]);
    }
    let remainder = |k: usize| {
        let h = 0.5 * (one + (d[k - 1] - d[k]) * w);
        -h * (one - (one + d[k] * w / (h * h)).sqrt())
    };
    // (A_{k-2}, A_{k-1}) and (B_{k-2}, B_{k-1})
    let (mut a2, mut a1) = (Complex64::new(0.0, 0.0), d[0]);
    let (mut b2, mut b1) = (one, one);
    let mut lower = d[0];
    for k in 1..=n {
        if n >= 4 && k == n - 2 {
            let r = remainder(k);
            lower = (a1 + r * a2) / (b1 + r * b2);
        }
        let coef = if k == n { remainder(k) } else { d[k] * w };
        let a0 = a1 + coef * a2;
        let b0 = b1 + coef * b2;
        a2 = a1;
        a1 = a0;
        b2 = b1;
        b1 = b0;
        let s = b1.norm();
        if s > 1e100 || (s < 1e-100 && s > 0.0) {
            a1 /= s;
            a2 /= s;
            b1 /= s;
            b2 /= s;
        }
    }
    let full = a1 / b1;
    if n < 4 {
        lower = a2 / b2;
    }
    (full, lower)
}
