use fracpipe::analysis::*;
use fracpipe::laplace::InversionConfig;
use fracpipe::spectral::{FluidParams, SeriesConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn p(alpha: f64, beta: f64) -> FluidParams {
    FluidParams::new(alpha, beta, 1.0).unwrap()
}

fn grid(t_max: f64) -> Vec<f64> {
    let n = (t_max / 0.05).round() as usize;
    (1..=n).map(|i| 0.05 * i as f64).collect()
}

fn fixed() -> SeriesConfig {
    SeriesConfig {
        max_modes: 200,
        tail_tolerance: 1.0,
        ..Default::default()
    }
}

fn net(s: &str) -> MechNetwork {
    s.parse().unwrap()
}

#[test]
fn center_values() {
    let inv = InversionConfig::default();
    let s = center_series(&p(0.0, 1.0), &[10.0], 200, &inv).unwrap();
    assert!((s.values()[0] - 0.5).abs() < 1e-3);
    let s = center_series(&p(0.6, 1.0), &[100.0], 200, &inv).unwrap();
    assert!((s.values()[0] - 0.25).abs() < 1e-2);
    let s = center_series(&p(0.6, 0.6), &[200.0], 200, &inv).unwrap();
    assert!(s.values()[0].abs() < 0.05);
    assert!(s.to_csv().starts_with("t,u0\n200,"));
}

#[test]
fn oscillation_counts() {
    let s = center_series_with(&p(0.0, 1.0), &grid(10.0), &fixed()).unwrap();
    assert_eq!(count_oscillations(&s, 1e-3).unwrap(), 0);
    let s = center_series_with(&p(0.6, 0.6), &grid(20.0), &fixed()).unwrap();
    assert!(count_oscillations(&s, 1e-3).unwrap() >= 1);
    let ramp = CenterSeries::new(vec![1.0, 2.0, 3.0, 4.0], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    assert_eq!(count_oscillations(&ramp, 1e-3).unwrap(), 0);
}

#[test]
fn undershoot_grows_with_alpha() {
    let depth: Vec<f64> = [0.2, 0.4, 0.6]
        .iter()
        .map(|&a| {
            let s = center_series_with(&p(a, 0.6), &grid(10.0), &fixed()).unwrap();
            first_undershoot(&s, DEFAULT_NOISE_TOL).unwrap().expect("series turns")
        })
        .collect();
    assert!(depth.windows(2).all(|w| w[1] >= w[0]), "{depth:?}");
}

#[test]
fn long_time_classes() {
    assert_eq!(classify_longtime(&p(0.6, 0.8)).unwrap(), BehaviorClass::SolidLike);
    assert_eq!(classify_longtime(&p(0.6, 1.0)).unwrap(), BehaviorClass::FluidLike);
    assert_eq!(classify_longtime(&p(0.0, 1.0)).unwrap(), BehaviorClass::FluidLike);
}

#[test]
fn serial_springpots_modulus() {
    let (g1, g2) = (0.4, 0.6);
    let g = network_modulus(&MechNetwork::Serial(vec![
        MechNetwork::springpot(1.0, 1.0, g1),
        MechNetwork::springpot(1.0, 1.0, g2),
    ]))
    .unwrap();
    for z in [Complex64::new(0.3, 0.0), Complex64::new(1.0, 2.0), Complex64::new(5.0, -1.0)] {
        let want = z.powf(g1 + g2) / (z.powf(g1) + z.powf(g2));
        assert!((g.eval(z).unwrap() - want).norm() < 1e-12 * want.norm());
    }
    let g = network_modulus(&MechNetwork::spring(2.5)).unwrap();
    assert!((g.eval(Complex64::new(3.0, 1.0)).unwrap() - 2.5).norm() < 1e-15);
    let g = network_modulus(&net("parallel(spring(1),dashpot(1))")).unwrap();
    let z = Complex64::new(0.7, -0.2);
    assert!((g.eval(z).unwrap() - (1.0 + z)).norm() < 1e-15);
}

#[test]
fn network_classes_and_paths() {
    let cases = [
        ("serial(springpot(1,1,0.4),springpot(1,1,0.6))", BehaviorClass::SolidLike, true),
        ("serial(springpot(1,1,0.6),dashpot(1))", BehaviorClass::FluidLike, false),
        ("spring(1)", BehaviorClass::SolidLike, true),
        ("serial(spring(1),dashpot(1))", BehaviorClass::FluidLike, false),
        ("parallel(spring(1),dashpot(1))", BehaviorClass::SolidLike, true),
        ("parallel(spring(1),serial(spring(1),dashpot(1)))", BehaviorClass::SolidLike, true),
    ];
    for (text, class, path) in cases {
        let n = net(text);
        assert_eq!(classify_network(&n).unwrap(), class, "{text}");
        assert_eq!(spring_path(&n), path, "{text}");
        assert!(check_conjecture(&n).unwrap(), "{text}");
    }
}

#[test]
fn builtin_catalog_is_consistent() {
    let cat = builtin_catalog();
    assert!(cat.len() >= 10);
    for (name, n) in &cat {
        let r = conjecture_report(n).unwrap();
        assert!(r.consistent(), "{name}: {r:?}");
    }
}

#[test]
fn catalog_text_and_malformed_trees() {
    assert_eq!(parse_catalog("# note\na = spring(1)\n\nb = dashpot(2) # tail\n").unwrap().len(), 2);
    assert!(parse_catalog("ok = spring(1)\nbad = serial(spring(1))\n").is_err());
    assert!(parse_catalog("x = spring(1").is_err());
    assert!(parse_catalog("x = wheel(1)").is_err());
    assert!(classify_network(&net("serial(spring(1),spring(2))")).is_ok());
    assert!(classify_network(&MechNetwork::Serial(vec![MechNetwork::spring(1.0)])).is_err());
    assert!(classify_network(&MechNetwork::springpot(1.0, 1.0, 1.5)).is_err());
}

#[test]
fn fluid_classes_match_two_springpot_realization() {
    for beta in [0.3, 0.6, 0.9, 1.0] {
        for i in 0..=10 {
            let alpha = beta * i as f64 / 10.0;
            let params = p(alpha, beta);
            let realized = maxwell_realization(&params).unwrap();
            assert_eq!(
                classify_longtime(&params).unwrap(),
                classify_network(&realized).unwrap(),
                "alpha={alpha} beta={beta}"
            );
        }
    }
}

/// Small-z exponent of the modulus: a serial group follows its largest
/// exponent, a parallel group its smallest.
fn low_exponent(n: &MechNetwork) -> f64 {
    match n {
        MechNetwork::Spring { .. } => 0.0,
        MechNetwork::Dashpot { .. } => 1.0,
        MechNetwork::Springpot { order, .. } => *order,
        MechNetwork::Serial(c) => c.iter().map(low_exponent).fold(f64::MIN, f64::max),
        MechNetwork::Parallel(c) => c.iter().map(low_exponent).fold(f64::MAX, f64::min),
    }
}

fn tree() -> impl Strategy<Value = MechNetwork> {
    let leaf = prop_oneof![
        (0.1f64..10.0).prop_map(MechNetwork::spring),
        (0.1f64..10.0).prop_map(MechNetwork::dashpot),
        (0.1f64..10.0, 0.1f64..10.0, prop_oneof![Just(0.0), Just(1.0), 0.0f64..1.0])
            .prop_map(|(e, l, g)| MechNetwork::springpot(e, l, g)),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(MechNetwork::Serial),
            prop::collection::vec(inner, 2..4).prop_map(MechNetwork::Parallel),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjecture_holds_on_finite_trees(n in tree()) {
        let solid = low_exponent(&n) < 1.0;
        prop_assert_eq!(classify_network(&n).unwrap() == BehaviorClass::SolidLike, solid);
        prop_assert!(check_conjecture(&n).unwrap());
    }

    #[test]
    fn class_ignores_rescaling(n in tree(), factor in 0.01f64..100.0) {
        prop_assert_eq!(classify_network(&n).unwrap(), classify_network(&n.rescaled(factor)).unwrap());
    }

    #[test]
    fn text_form_round_trips(n in tree()) {
        let back: MechNetwork = n.to_string().parse().unwrap();
        prop_assert_eq!(back, n);
    }
}
