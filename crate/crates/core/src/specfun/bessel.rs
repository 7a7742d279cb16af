//! Bessel functions of the first kind of orders zero and one, and the zeros of `J0`.
//!
//! Three regimes:
//! - `|x| <= SERIES_MAX`: ascending power series,
//! - `SERIES_MAX < |x| <= HANKEL_MIN`: Miller backward recurrence normalized by
//!   `J0 + 2 (J2 + J4 + ...) = 1`,
//! - `|x| > HANKEL_MIN`: Hankel asymptotic expansion.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

pub(crate) const SERIES_MAX: f64 = 4.0;
pub(crate) const HANKEL_MIN: f64 = 25.0;

/// Zeroth-order Bessel function of the first kind.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(j0(x))
}

/// First-order Bessel function of the first kind.
pub fn bessel_j1(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(j1(x))
}

/// `J0(x)` for finite `x`.
pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_MAX {
        series(0, ax)
    } else if ax <= HANKEL_MIN {
        miller(ax).0
    } else {
        hankel(0, ax)
    }
}

/// `J1(x)` for finite `x`.
pub(crate) fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_MAX {
        series(1, ax)
    } else if ax <= HANKEL_MIN {
        miller(ax).1
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

pub(crate) fn series(order: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let nu = order as f64;
    for k in 1..200 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(J0(x), J1(x))` by backward recurrence, for `x > 0`.
pub(crate) fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x as usize + 40) / 2);
    let mut next = 0.0; // J_{n+1}
    let mut cur = 1e-300; // J_n
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for n in (1..=start).rev() {
        let prev = 2.0 * n as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds J_{n-1}
        if (n - 1) % 2 == 0 && n - 1 > 0 {
            norm += 2.0 * cur;
        }
        if n - 1 == 1 {
            j1 = cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            j1 *= s;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

/// Hankel asymptotic expansion for order 0 or 1, `x` large and positive.
pub(crate) fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * x);
        if a.abs() >= last || a == 0.0 {
            break;
        }
        last = a.abs();
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // cos and sin of (x - pi/4) or (x - 3 pi/4) without subtracting in the argument
    let (cos_chi, sin_chi) = if order == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// The first `count` positive zeros of `J0`, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable {
    roots: Vec<f64>,
}

impl RootTable {
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// Root `k_m` with 1-based index `m`.
    pub fn get(&self, m: usize) -> Option<f64> {
        m.checked_sub(1).and_then(|i| self.roots.get(i).copied())
    }

    /// CSV rendering with header `m,k_m`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,k_m\n");
        for (i, k) in self.roots.iter().enumerate() {
            out.push_str(&format!("{},{:.15}\n", i + 1, k));
        }
        out
    }
}

/// McMahon's asymptotic estimate of the `m`-th zero of `J0`.
pub(crate) fn mcmahon(m: usize) -> f64 {
    let b = (m as f64 - 0.25) * PI;
    let e = 1.0 / (8.0 * b);
    b + e - 124.0 / 3.0 * e.powi(3) + 120_928.0 / 15.0 * e.powi(5)
}

pub(crate) const ROOT_RESIDUAL: f64 = 1e-12;

fn polish_root(m: usize) -> Result<f64> {
    let lo = (m as f64 - 1.0) * PI + 2.0;
    let hi = m as f64 * PI + 2.0;
    let mut k = mcmahon(m);
    for _ in 0..50 {
        let f = j0(k);
        let step = f / j1(k); // J0' = -J1
        let next = k + step;
        if !(lo..=hi).contains(&next) {
            return bisect_root(m, lo, hi);
        }
        k = next;
        if step.abs() <= 4.0 * f64::EPSILON * k {
            break;
        }
    }
    if j0(k).abs() < ROOT_RESIDUAL {
        Ok(k)
    } else {
        bisect_root(m, lo, hi)
    }
}

fn bisect_root(m: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = j0(lo);
    if flo * j0(hi) > 0.0 {
        return Err(Error::RootFinding { index: m });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = j0(mid);
        if fm == 0.0 || hi - lo <= 2.0 * f64::EPSILON * mid {
            break;
        }
        if fm * flo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    let k = 0.5 * (lo + hi);
    if j0(k).abs() < ROOT_RESIDUAL {
        Ok(k)
    } else {
        Err(Error::RootFinding { index: m })
    }
}

/// First `count` positive zeros of `J0`, each Newton-polished from McMahon's estimate.
pub fn j0_roots(count: usize) -> Result<RootTable> {
    if count == 0 {
        return Err(Error::InvalidParameter("root count must be at least 1".into()));
    }
    let roots = (1..=count).map(polish_root).collect::<Result<Vec<_>>>()?;
    Ok(RootTable { roots })
}
