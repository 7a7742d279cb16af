use fracpipe::laplace::{
    eval_tf, final_value, invert, invert_one, FinalValue, InversionConfig, PowerSum, TransferFn,
};
use fracpipe::specfun::{ln_gamma, mittag_leffler};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tf(num: &[(f64, f64)], den: &[(f64, f64)]) -> TransferFn {
    TransferFn::new(PowerSum::new(num.iter().copied()), PowerSum::new(den.iter().copied())).unwrap()
}

/// `t^(b-1) E_{a,b}(-c t^a)` summed directly in extended form.
fn ml_series_pair(a: f64, b: f64, c: f64, t: f64) -> f64 {
    let x = c * t.powf(a);
    let mut sum = 0.0;
    for n in 0..400 {
        let mag = (n as f64 * x.ln() - ln_gamma(a * n as f64 + b)).exp();
        sum += if n % 2 == 0 { mag } else { -mag };
        if mag < 1e-18 && n > 10 {
            break;
        }
    }
    t.powf(b - 1.0) * sum
}

#[test]
fn elementary_pairs() {
    let cfg = InversionConfig::default();
    let step = invert(&tf(&[(1.0, 0.0)], &[(1.0, 1.0)]), &[0.5, 1.0, 2.0], &cfg).unwrap();
    for v in step {
        assert!((v - 1.0).abs() < 1e-8);
    }
    let decay = invert_one(&tf(&[(1.0, 0.0)], &[(1.0, 0.0), (1.0, 1.0)]), 1.0, &cfg).unwrap();
    assert!((decay - (-1.0f64).exp()).abs() < 1e-8);

    let times: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
    let ramp = invert(&tf(&[(1.0, 0.0)], &[(1.0, 2.0)]), &times, &cfg).unwrap();
    let sine = invert(&tf(&[(1.0, 0.0)], &[(1.0, 0.0), (1.0, 2.0)]), &times, &cfg).unwrap();
    for (i, &t) in times.iter().enumerate() {
        assert!((ramp[i] - t).abs() < 1e-8 * t, "ramp at {t}");
        assert!((sine[i] - t.sin()).abs() < 1e-8, "sine at {t}");
    }
}

#[test]
fn mittag_leffler_pair() {
    let cfg = InversionConfig::default();
    let pair = tf(&[(1.0, -0.6)], &[(1.0, 0.0), (1.0, 1.4)]);
    let at_one = invert_one(&pair, 1.0, &cfg).unwrap();
    assert!((at_one - ml_series_pair(1.4, 2.0, 1.0, 1.0)).abs() < 1e-8);

    let times: Vec<f64> = (0..=20).map(|i| 0.1 * 100f64.powf(i as f64 / 20.0)).collect();
    let values = invert(&pair, &times, &cfg).unwrap();
    for (&t, &v) in times.iter().zip(&values) {
        let series = ml_series_pair(1.4, 2.0, 1.0, t);
        let library = t * mittag_leffler(1.4, 2.0, -t.powf(1.4)).unwrap();
        assert!((v - series).abs() < 1e-6, "t={t}: {v} vs series {series}");
        assert!((v - library).abs() < 1e-6, "t={t}: {v} vs library {library}");
    }
}

#[test]
fn conjugate_symmetry() {
    let f = tf(&[(1.0, 0.0), (0.7, 0.6)], &[(3.5, 0.8), (1.0, 2.0), (0.7, 2.6)]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..50.0));
        let up = eval_tf(&f, z).unwrap();
        let down = eval_tf(&f, z.conj()).unwrap();
        assert!((up.conj() - down).norm() <= 1e-14 * up.norm(), "z={z}");
    }
}

#[test]
fn rejects_bad_input() {
    let cfg = InversionConfig::default();
    let f = tf(&[(1.0, 0.0)], &[(1.0, 1.0)]);
    assert!(invert(&f, &[0.0], &cfg).is_err());
    assert!(invert(&f, &[-1.0], &cfg).is_err());
    // decays only like 1/sqrt(z)
    assert!(invert(&tf(&[(1.0, 0.0)], &[(1.0, 0.5)]), &[1.0], &cfg).is_err());
    let bad = InversionConfig { quadrature_terms: 4, ..cfg };
    assert!(invert(&f, &[1.0], &bad).is_err());
    let bad = InversionConfig { relative_tolerance: 0.5, ..cfg };
    assert!(invert(&f, &[1.0], &bad).is_err());
}

/// Exponents in [0, 2] with positive coefficients and at least one
/// fractional exponent keep every zero of the denominator off the closed
/// right half-plane of the principal sheet.
fn random_stable(rng: &mut ChaCha8Rng, finite: bool) -> TransferFn {
    let mut den = Vec::new();
    // The approach to the limit is algebraic: t^(p0 - 1) in the zero class,
    // t^(1 - p1) from the next exponent in the finite class. Ranges are
    // chosen so that both corrections are below 1e-2 by t = 1e3.
    if finite {
        den.push((rng.gen_range(1.0..2.0), 1.0));
        den.push((rng.gen_range(0.2..1.0), rng.gen_range(1.8..2.0)));
    } else {
        den.push((rng.gen_range(1.0..2.0), rng.gen_range(0.0..0.3)));
        den.push((rng.gen_range(0.2..2.0), rng.gen_range(1.1..1.9)));
    }
    let low = if finite { 1.8 } else { 1.2 };
    for _ in 0..rng.gen_range(0..2) {
        den.push((rng.gen_range(0.1..1.0), rng.gen_range(low..2.0)));
    }
    TransferFn::new(PowerSum::constant(rng.gen_range(0.5..2.0)), PowerSum::new(den)).unwrap()
}

#[test]
fn final_value_matches_long_time_inversion() {
    let cfg = InversionConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..20 {
        let f = random_stable(&mut rng, i % 2 == 0);
        let late = invert_one(&f, 1e3, &cfg).unwrap();
        let limit = match final_value(&f) {
            FinalValue::ZeroLimit => 0.0,
            FinalValue::FiniteLimit(c) => c,
            FinalValue::Divergent => panic!("stable catalog entry {f} classified divergent"),
        };
        assert!((late - limit).abs() < 1e-2, "{f}: f(1e3) = {late}, limit {limit}");
    }
}

fn small_transform() -> impl Strategy<Value = TransferFn> {
    (0.2f64..3.0, 0.0f64..0.9, 0.2f64..3.0, 1.1f64..2.0, 0.3f64..2.0).prop_map(|(c0, p0, c1, p1, n)| {
        TransferFn::new(PowerSum::constant(n), PowerSum::new([(c0, p0), (c1, p1)])).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inversion_is_linear(f in small_transform(), g in small_transform(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let cfg = InversionConfig::default();
        let times = [0.3, 1.0, 2.7, 8.0];
        let combined = f.scale(a).add(&g.scale(b));
        let lhs = invert(&combined, &times, &cfg).unwrap();
        let fv = invert(&f, &times, &cfg).unwrap();
        let gv = invert(&g, &times, &cfg).unwrap();
        for i in 0..times.len() {
            let rhs = a * fv[i] + b * gv[i];
            let scale = (a * fv[i]).abs() + (b * gv[i]).abs();
            prop_assert!((lhs[i] - rhs).abs() <= 2.0 * cfg.relative_tolerance * scale.max(1e-12),
                "t={} lhs={} rhs={}", times[i], lhs[i], rhs);
        }
    }

    #[test]
    fn conjugate_points_give_conjugate_values(f in small_transform(), re in -4.0f64..4.0, im in 0.01f64..30.0) {
        let z = Complex64::new(re, im);
        let up = eval_tf(&f, z).unwrap();
        let down = eval_tf(&f, z.conj()).unwrap();
        prop_assert!((up.conj() - down).norm() <= 1e-14 * up.norm());
    }
}
