use num_complex::Complex64;

use super::gamma::{ln_gamma, recip_gamma};
use crate::error::{Error, Result};
use crate::laplace::{invert_slowly_decaying, InversionConfig, PowerSum, TransferFn};

/// Largest ratio between the biggest series term and the sum before the
/// cancellation is considered too severe.
const SERIES_CANCELLATION: f64 = 1e5;
const SERIES_MAX_TERMS: usize = 2000;
/// The asymptotic expansion is accepted when its smallest term is below this
/// fraction of the result.
const ASYMPTOTIC_ACCURACY: f64 = 1e-9;
const ASYMPTOTIC_MAX_TERMS: usize = 60;

/// Two-parameter Mittag-Leffler function `E_{a,b}(x)` for `a` in `(0, 2]`,
/// `b > 0` and `x <= 0`.
pub fn mittag_leffler(a: f64, b: f64, x: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite(if a.is_finite() { b } else { a }));
    }
    if !(a > 0.0 && a <= 2.0) {
        return Err(Error::InvalidParameter(format!("Mittag-Leffler order a must lie in (0, 2], got {a}")));
    }
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!("Mittag-Leffler parameter b must be positive, got {b}")));
    }
    if x.is_nan() {
        return Err(Error::NonFinite(x));
    }
    if x > 0.0 {
        return Err(Error::Domain(format!("Mittag-Leffler argument must be non-positive, got {x}")));
    }
    let z = -x;
    if z == 0.0 {
        return Ok(recip_gamma(b));
    }
    if a == 1.0 && b == 1.0 {
        return Ok((-z).exp());
    }
    if a == 1.0 && b == 2.0 {
        return Ok(-(-z).exp_m1() / z);
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    if let Some(v) = series(a, b, z) {
        return Ok(v);
    }
    if let Some(v) = asymptotic(a, b, z) {
        return Ok(v);
    }
    laplace_gap(a, b, z)
}

/// `sum_n (-z)^n / Gamma(a n + b)`, or `None` when cancellation would cost
/// too many digits.
fn series(a: f64, b: f64, z: f64) -> Option<f64> {
    let ln_z = z.ln();
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    for n in 0..SERIES_MAX_TERMS {
        let arg = a * n as f64 + b;
        let mag = (n as f64 * ln_z - ln_gamma(arg)).exp();
        let term = if n % 2 == 0 { mag } else { -mag };
        sum += term;
        largest = largest.max(mag);
        if largest > SERIES_CANCELLATION * 1e3 {
            return None;
        }
        // terms decrease once a n + b grows past z^(1/a); stop when negligible
        if n > 2 && mag <= 1e-17 * sum.abs() && arg > z.powf(1.0 / a) {
            return if largest <= SERIES_CANCELLATION * sum.abs() { Some(sum) } else { None };
        }
    }
    None
}

/// Large-argument expansion, including the oscillating pole contribution for `a > 1`.
fn asymptotic(a: f64, b: f64, z: f64) -> Option<f64> {
    let mut algebraic = 0.0;
    let mut zk = 1.0;
    let mut smallest = f64::INFINITY;
    let mut previous = f64::INFINITY;
    for k in 1..=ASYMPTOTIC_MAX_TERMS {
        zk /= z;
        let arg = b - a * k as f64;
        let term = zk * recip_gamma(arg);
        // For negative arguments bound |1/Gamma| by Gamma(1 - arg)/pi so that
        // a term landing near a pole does not fake convergence.
        let size = if arg < 0.0 {
            (-(k as f64) * z.ln() + ln_gamma(1.0 - arg)).exp() / std::f64::consts::PI
        } else {
            term.abs()
        };
        if size == 0.0 {
            continue;
        }
        if size > previous && size > smallest {
            break;
        }
        smallest = smallest.min(size);
        previous = size;
        algebraic += if k % 2 == 1 { term } else { -term };
        if size < 1e-17 * algebraic.abs() {
            break;
        }
    }
    if smallest.is_infinite() {
        smallest = 0.0;
    }
    let mut poles = 0.0;
    if a > 1.0 {
        let zeta = Complex64::from_polar(z.powf(1.0 / a), std::f64::consts::PI / a);
        poles = 2.0 / a * (zeta.powf(1.0 - b) * zeta.exp()).re;
    }
    let value = algebraic + poles;
    let scale = value.abs().max(algebraic.abs());
    if smallest <= ASYMPTOTIC_ACCURACY * scale {
        Some(value)
    } else {
        None
    }
}

/// `E_{a,b}(-z)` as the inverse of `s^(a-b) / (s^a + z)` at unit time.
fn laplace_gap(a: f64, b: f64, z: f64) -> Result<f64> {
    let tf = TransferFn::new(
        PowerSum::monomial(1.0, a - b),
        PowerSum::new([(z, 0.0), (1.0, a)]),
    )?;
    let cfg = InversionConfig {
        abscissa_offset: 8.0,
        quadrature_terms: 128,
        acceleration_depth: 20,
        relative_tolerance: 1e-9,
    };
    Ok(invert_slowly_decaying(&tf, &[1.0], &cfg)?[0].0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn exponential_and_trivial_cases() {
        for &x in &[0.0f64, -0.5, -1.0, -7.0, -30.0] {
            assert!(rel(mittag_leffler(1.0, 1.0, x).unwrap(), f64::exp(x)) < 1e-14);
        }
        assert!((mittag_leffler(1.0, 1.0, -1.0).unwrap() - 0.367_879_441_17).abs() < 1e-11);
        for &b in &[0.3, 1.0, 1.7, 2.0, 3.5] {
            assert!(rel(mittag_leffler(0.8, b, 0.0).unwrap(), recip_gamma(b)) < 1e-15);
        }
    }

    #[test]
    fn order_two_is_sinc_of_root() {
        for &x in &[0.01f64, 0.5, 1.0, 4.0, 9.0, 25.0, 60.0, 400.0, 2500.0] {
            let want = x.sqrt().sin() / x.sqrt();
            let got = mittag_leffler(2.0, 2.0, -x).unwrap();
            assert!((got - want).abs() < 1e-9 * want.abs().max(1.0 / x.sqrt()), "x={x} {got} {want}");
        }
        assert!((mittag_leffler(2.0, 2.0, -1.0).unwrap() - 0.841_470_984_8).abs() < 1e-10);
    }

    #[test]
    fn order_two_one_is_cosine_of_root() {
        for &x in &[0.3f64, 3.0, 30.0, 300.0] {
            let got = mittag_leffler(2.0, 1.0, -x).unwrap();
            assert!((got - x.sqrt().cos()).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn half_order_matches_erfc_form() {
        // E_{1/2,1}(-z) = exp(z^2) erfc(z)
        fn erfcx(z: f64) -> f64 {
            if z < 3.0 {
                let mut sum = 0.0f64;
                let mut term = z;
                let mut n = 0.0;
                while term.abs() > 1e-18 * sum.abs().max(1e-300) || n < 3.0 {
                    sum += term / (2.0 * n + 1.0);
                    n += 1.0;
                    term *= -z * z / n;
                }
                (z * z).exp() * (1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum)
            } else {
                let mut f = 0.0;
                for k in (1..200).rev() {
                    f = (k as f64 / 2.0) / (z + f);
                }
                1.0 / (std::f64::consts::PI.sqrt() * (z + f))
            }
        }
        for &z in &[0.1, 0.7, 2.0, 5.0, 12.0, 40.0, 200.0] {
            let got = mittag_leffler(0.5, 1.0, -z).unwrap();
            assert!(rel(got, erfcx(z)) < 1e-9, "z={z}: {got} vs {}", erfcx(z));
        }
    }

    #[test]
    fn regimes_agree_at_their_seams() {
        for &(a, b) in &[(0.4, 1.0), (0.9, 1.6), (1.4, 2.0), (1.8, 1.2), (1.2, 0.5)] {
            let mut z = 0.5;
            while z < 400.0 {
                let s = series(a, b, z);
                let g = laplace_gap(a, b, z).ok();
                let asy = asymptotic(a, b, z);
                if let (Some(s), Some(g)) = (s, g) {
                    assert!((s - g).abs() < 1e-8 * s.abs().max(1e-3), "series/gap a={a} b={b} z={z}");
                }
                if let (Some(x), Some(g)) = (asy, g) {
                    assert!((x - g).abs() < 1e-8 * x.abs().max(1e-3), "asym/gap a={a} b={b} z={z}");
                }
                z *= 1.3;
            }
        }
    }

    #[test]
    fn rejects_unsupported_parameters() {
        assert!(mittag_leffler(0.0, 1.0, -1.0).is_err());
        assert!(mittag_leffler(2.5, 1.0, -1.0).is_err());
        assert!(mittag_leffler(1.0, 0.0, -1.0).is_err());
        assert!(mittag_leffler(1.0, 1.0, 0.5).is_err());
        assert!(mittag_leffler(1.0, 1.0, f64::NAN).is_err());
    }
}
