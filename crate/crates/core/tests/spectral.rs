use fracpipe::laplace::{invert, InversionConfig};
use fracpipe::specfun::{bessel_j0, j0_roots};
use fracpipe::spectral::*;

fn p(alpha: f64, beta: f64) -> FluidParams {
    FluidParams::new(alpha, beta, 1.0).unwrap()
}

fn fixed(modes: usize) -> SeriesConfig {
    SeriesConfig {
        modes,
        max_modes: modes,
        tail_tolerance: 1.0,
        ..Default::default()
    }
}

fn sup_dist(row: &[f64], radii: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    row.iter().zip(radii).map(|(v, &r)| (v - f(r)).abs()).fold(0.0, f64::max)
}

#[test]
fn partial_sums_of_unit_expansion() {
    let modes = mode_table(&p(0.3, 0.7), 200).unwrap();
    assert_eq!(modes.len(), 200);
    assert!((modes[0].coefficient - 1.60197).abs() < 1e-5);
    let s: f64 = modes.iter().map(|m| m.coefficient * bessel_j0(m.root * 0.5).unwrap()).sum();
    assert!((s - 1.0).abs() < 5e-3, "partial sum {s}");
    assert!(mode_table(&p(0.3, 0.7), 0).is_err());
}

#[test]
fn newtonian_transform_reduces() {
    let k = 2.5;
    let tf = velocity_transform(&p(0.0, 1.0), k).unwrap();
    for z in [0.3, 1.0, 4.0] {
        let z = num_complex::Complex64::new(z, 0.7);
        let want = 2.0 / (2.0 * z * z + k * k * z);
        assert!((tf.eval(z).unwrap() - want).norm() < 1e-14);
    }
}

#[test]
fn newtonian_profile_at_t10() {
    let radii = uniform_radii(21).unwrap();
    let inv = InversionConfig::default();
    let f = velocity(&p(0.0, 1.0), &radii, &[10.0], 200, &inv).unwrap();
    assert!(sup_dist(&f.values[0], &radii, |r| 0.5 * (1.0 - r * r)) < 1e-3);
    let closed = velocity_newtonian(&radii, &[10.0], 200).unwrap();
    // the closed form carries the exact steady part, the series a truncated one
    assert!(sup_dist(&f.values[0], &radii, |r| closed.values[0][(r * 20.0).round() as usize]) < 1e-6);
}

#[test]
fn wall_is_no_slip() {
    let inv = InversionConfig::default();
    for (a, b) in [(0.0, 1.0), (0.6, 1.0), (0.6, 0.6), (0.3, 0.9), (1.0, 1.0)] {
        let f = velocity(&p(a, b), &[1.0], &[0.5, 2.0, 8.0], 200, &inv).unwrap();
        for v in f.column(0) {
            assert!(v.abs() < 1e-8, "({a},{b}) u(1) = {v}");
        }
    }
}

#[test]
fn fluid_like_center_at_t100() {
    // independent high-precision reference for this parameter set
    let f = velocity(&p(0.6, 1.0), &[0.0], &[100.0], 200, &InversionConfig::default()).unwrap();
    assert!((f.values[0][0] - 0.257127).abs() < 1e-5, "u(0,100) = {}", f.values[0][0]);
}

#[test]
fn stress_vanishes_on_axis_and_balances_pressure() {
    let radii = uniform_radii(11).unwrap();
    let inv = InversionConfig::default();
    let f = stress(&p(0.0, 1.0), &radii, &[10.0], 200, &inv).unwrap();
    assert_eq!(f.quantity, Quantity::Stress);
    assert_eq!(f.values[0][0], 0.0);
    assert!(sup_dist(&f.values[0], &radii, |r| -0.5 * r) < 2e-3);
    let f = stress(&p(0.6, 1.0), &radii, &[100.0], 200, &inv).unwrap();
    assert!(sup_dist(&f.values[0], &radii, |r| -0.5 * r) < 5e-3);
}

#[test]
fn scott_blair_matches_inversion() {
    let radii = [0.0, 0.2, 0.4, 0.6, 0.8];
    let times = [0.5, 1.0, 2.0, 4.0, 8.0];
    for beta in [0.4, 0.8] {
        let a = velocity_with(&p(0.0, beta), &radii, &times, &fixed(200)).unwrap();
        let b = velocity_scott_blair_with(beta, 1.0, &radii, &times, &fixed(200)).unwrap();
        for (ra, rb) in a.values.iter().zip(&b.values) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() <= 1e-4 * y.abs(), "beta={beta}: {x} vs {y}");
            }
        }
    }
    let a = velocity(&p(0.0, 0.8), &[0.0], &[1.0], 200, &InversionConfig::default()).unwrap();
    let b = velocity_scott_blair(0.8, 1.0, &[0.0], &[1.0], 200).unwrap();
    assert!((a.values[0][0] - b.values[0][0]).abs() < 1e-5);
}

#[test]
fn scott_blair_limits() {
    // 1e-8 needs enough modes for the truncated steady part to settle
    let f = velocity_scott_blair(1.0, 1.0, &[0.0], &[2.0, 40.0], 1000).unwrap();
    let n = velocity_newtonian(&[0.0], &[2.0], 1000).unwrap();
    assert!((f.values[0][0] - n.values[0][0]).abs() < 1e-8);
    assert!((f.values[1][0] - 0.5).abs() < 1e-6);
    let f = velocity_scott_blair(0.4, 1.0, &[0.0], &[5.0, 50.0], 200).unwrap();
    assert!(f.values[1][0].abs() < f.values[0][0].abs());
    assert!(f.values[1][0].abs() < 0.05);
    assert!(velocity_scott_blair(0.0, 1.0, &[0.0], &[1.0], 10).is_err());
}

#[test]
fn newtonian_closed_form_ends() {
    let radii = uniform_radii(11).unwrap();
    let f = velocity_newtonian(&radii, &[0.0, 1e3], 200).unwrap();
    assert!(f.values[0].iter().all(|v| v.abs() < 1e-6));
    assert!(sup_dist(&f.values[1], &radii, |r| 0.5 * (1.0 - r * r)) < 1e-14);
}

#[test]
fn steady_profiles() {
    let radii = uniform_radii(11).unwrap();
    let s = steady_profile(&p(0.6, 0.6), &radii).unwrap();
    assert!(s.values[0].iter().all(|&v| v == 0.0));
    let s = steady_profile(&p(0.6, 1.0), &radii).unwrap();
    assert!((s.values[0][0] - 0.25).abs() < 1e-12);
    assert!(sup_dist(&s.values[0], &radii, |r| 0.25 * (1.0 - r * r)) < 1e-12);
    let s = steady_profile(&p(0.0, 1.0), &radii).unwrap();
    assert!((s.values[0][0] - 0.5).abs() < 1e-12);
    assert!(s.times[0].is_infinite());
}

/// `T'' + T' + k^2 T = 1` from rest, with the unit initial acceleration kick
/// that the transform carries: `T(0) = 0`, `T'(0) = 1`.
fn maxwell_closed(k: f64, t: f64) -> f64 {
    let w = (4.0 * k * k - 1.0).sqrt() / 2.0;
    let c1 = -1.0 / (k * k);
    let c2 = (1.0 + c1 / 2.0) / w;
    1.0 / (k * k) + (-t / 2.0).exp() * (c1 * (w * t).cos() + c2 * (w * t).sin())
}

#[test]
fn ordinary_maxwell_modes() {
    let modes = mode_table(&p(1.0, 1.0), 5).unwrap();
    let times: Vec<f64> = (1..=200).map(|i| 0.1 * i as f64).collect();
    for m in &modes {
        let got = invert(&m.response, &times, &InversionConfig::default()).unwrap();
        for (&t, g) in times.iter().zip(got) {
            assert!((g - maxwell_closed(m.root, t)).abs() < 1e-6, "m={} t={t}", m.index);
        }
    }
}

#[test]
fn mode_contributions_decay() {
    let inv = InversionConfig::default();
    for (a, b) in [(0.0, 1.0), (0.3, 0.8), (0.6, 0.6)] {
        for t in [0.1, 1.0, 10.0] {
            let modes = mode_table(&p(a, b), 200).unwrap();
            let sizes: Vec<f64> = modes
                .iter()
                .map(|m| (m.coefficient * invert(&m.response, &[t], &inv).unwrap()[0]).abs())
                .collect();
            // block maxima over the upper part of the table shrink
            let blocks: Vec<f64> = sizes[40..].chunks(20).map(|c| c.iter().fold(0.0, |x: f64, &y| x.max(y))).collect();
            for w in blocks.windows(2) {
                assert!(w[1] < w[0], "({a},{b}) t={t}: {blocks:?}");
            }
        }
    }
}

#[test]
fn early_times_start_from_rest() {
    let radii = uniform_radii(11).unwrap();
    for (a, b) in [(0.0, 1.0), (0.6, 0.8), (1.0, 1.0)] {
        let f = velocity_with(&p(a, b), &radii, &[1e-3], &fixed(200)).unwrap();
        assert!(f.values[0].iter().all(|v| v.abs() < 5e-3));
    }
}

#[test]
fn output_is_deterministic_csv() {
    let radii = uniform_radii(3).unwrap();
    let run = || velocity_with(&p(0.3, 0.8), &radii, &[0.0, 1.0], &fixed(50)).unwrap().to_csv();
    let a = run();
    assert_eq!(a, run());
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "# quantity=velocity");
    assert!(lines.contains(&"t,r,value"));
    assert!(lines.contains(&"# alpha=0.3"));
    assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 1 + 6);
}

#[test]
fn invalid_inputs() {
    let inv = InversionConfig::default();
    assert!(velocity(&p(0.3, 0.8), &[1.5], &[1.0], 10, &inv).is_err());
    assert!(velocity(&p(0.3, 0.8), &[0.5], &[-1.0], 10, &inv).is_err());
    assert!(velocity(&p(0.3, 0.8), &[0.5], &[1.0], 0, &inv).is_err());
    assert!(FluidParams::new(0.9, 0.5, 1.0).is_err());
    assert_eq!(j0_roots(3).unwrap().count(), 3);
}
