//! Property-based invariants over randomly generated series, maps, and
//! reports.  Each block states a law the crate promises unconditionally;
//! proptest hunts for counterexamples in the parameter space.

use num::BigRational;
use proptest::prelude::*;
use schlicht::catalog::{affine_sigma, koebe_root, sigma_root_map};
use schlicht::functional::FunctionalSpec;
use schlicht::grunsky::{grunsky_matrix, grunsky_norm};
use schlicht::maps::{circle_inversion, disk_map_from_inversion, Provenance, SClassMap};
use schlicht::num::{cexact, cint, rat, Angle, Mode, PolarParam, Value};
use schlicht::report::{config_digest, PointRecord, Status, VerificationReport};
use schlicht::scan::ScanConfig;
use schlicht::schwarzian::{homotopy_dilatation_bound, metric_from_dilatation, MetricValue};
use schlicht::series::TruncatedSeries as TS;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn exact_value() -> impl Strategy<Value = Value> {
    (small_rational(), small_rational()).prop_map(|(re, im)| Value::Exact(cexact(re, im)))
}

/// Exact polynomial with the given valuation and a handful of higher terms.
fn poly_from(valuation: i64, coeffs: Vec<Value>) -> TS {
    let mut terms: Vec<(i64, Value)> = vec![(valuation, Value::Exact(cint(1, 0)))];
    for (i, c) in coeffs.into_iter().enumerate() {
        terms.push((valuation + 1 + i as i64, c));
    }
    TS::polynomial(Mode::Exact, &terms).unwrap()
}

fn unit_poly() -> impl Strategy<Value = TS> {
    proptest::collection::vec(exact_value(), 1..5).prop_map(|cs| poly_from(0, cs))
}

fn map_poly() -> impl Strategy<Value = TS> {
    proptest::collection::vec(exact_value(), 1..5).prop_map(|cs| poly_from(1, cs))
}

fn prefix_map() -> impl Strategy<Value = SClassMap> {
    proptest::collection::vec(exact_value(), 1..8).prop_map(|cs| {
        let order = 1 + cs.len() as i64;
        let f = poly_from(1, cs).extend_top_to(order).unwrap().as_up_jet();
        SClassMap::new(f, "prefix", Provenance::Synthetic).unwrap()
    })
}

fn polar_param() -> impl Strategy<Value = PolarParam> {
    (0i64..=8, 1i64..=8, 0i64..=15).prop_map(|(n, d, ph)| {
        let modulus = if n >= d { rat(1, 1) } else { rat(n, d) };
        PolarParam::new(modulus, Angle::turns_fraction(ph, 16)).unwrap()
    })
}

fn statuses() -> impl Strategy<Value = Status> {
    prop_oneof![
        Just(Status::Pass),
        Just(Status::Sharp),
        Just(Status::Violation),
        Just(Status::Unconfirmed),
        Just(Status::Skipped),
    ]
}

fn point_record() -> impl Strategy<Value = PointRecord> {
    (
        "[a-z]{3,8}",
        "[a-z_]{3,10}",
        statuses(),
        0.0f64..10.0,
        0.0f64..10.0,
        -1.0f64..1.0,
        0.0f64..0.1,
    )
        .prop_map(|(family, functional, status, value_abs, bound, margin, tail)| {
            PointRecord {
                family,
                functional,
                status,
                value_abs,
                bound,
                margin,
                tail,
                note: String::new(),
                exact: None,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_multiplication_commutes(f in unit_poly(), g in unit_poly()) {
        let fg = f.mul(&g).unwrap();
        let gf = g.mul(&f).unwrap();
        prop_assert_eq!(fg, gf);
    }

    #[test]
    fn series_multiplication_distributes(f in unit_poly(), g in unit_poly(), h in unit_poly()) {
        let lhs = f.add(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&h).unwrap().add(&g.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reflection_is_an_involution(f in map_poly()) {
        prop_assert_eq!(f.reflect().reflect(), f);
    }

    #[test]
    fn inverse_multiplies_back_to_one(f in unit_poly()) {
        let jet = f.extend_top_to(8).unwrap().as_up_jet();
        let prod = jet.inverse().unwrap().mul(&jet).unwrap();
        for k in prod.valuation()..=prod.top() {
            let expect = if k == 0 { cint(1, 0) } else { cint(0, 0) };
            prop_assert_eq!(prod.coeff(k).unwrap(), Value::Exact(expect));
        }
    }

    #[test]
    fn inversion_round_trips(f in prefix_map()) {
        let back = disk_map_from_inversion(&circle_inversion(&f).unwrap()).unwrap();
        for n in 1..=f.order() as u32 {
            prop_assert_eq!(back.a(n).unwrap(), f.a(n).unwrap());
        }
    }

    #[test]
    fn derivative_of_product_obeys_leibniz(f in unit_poly(), g in unit_poly()) {
        let lhs = f.mul(&g).unwrap().derivative().unwrap();
        let rhs = f
            .derivative()
            .unwrap()
            .mul(&g)
            .unwrap()
            .add(&f.mul(&g.derivative().unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn difference_functional_depends_only_on_modulus(
        m in 1u32..=4,
        c in polar_param(),
        n in 3u32..=6,
    ) {
        let base = koebe_root(m, &PolarParam::real(c.modulus.clone()), 24, Mode::Approx).unwrap();
        let turned = koebe_root(m, &c, 24, Mode::Approx).unwrap();
        let spec = FunctionalSpec::Zalcman { n };
        let a = spec.eval_on(&base).unwrap().abs();
        let b = spec.eval_on(&turned).unwrap().abs();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn root_family_coefficients_stay_under_their_index(
        m in 1u32..=6,
        c in polar_param(),
        n in 2u32..=12,
    ) {
        let map = koebe_root(m, &c, 14, Mode::Approx).unwrap();
        prop_assert!(map.a(n).unwrap().abs() <= n as f64 + 1e-9);
    }

    #[test]
    fn pair_matrix_is_symmetric(m in 1u32..=4, c in polar_param()) {
        let map = sigma_root_map(m, &c, 20, Mode::Approx).unwrap();
        let matrix = grunsky_matrix(&map, 6).unwrap();
        for p in 1..=6 {
            for q in 1..=6 {
                let d = (matrix.alpha(p, q).approx() - matrix.alpha(q, p).approx()).norm();
                prop_assert!(d <= 1e-12);
            }
        }
    }

    #[test]
    fn affine_norm_matches_its_coefficient(re in -7i64..=7, im in -7i64..=7) {
        let b1 = cexact(rat(re, 10), rat(im, 10));
        prop_assume!(b1.re.clone() * b1.re.clone() + b1.im.clone() * b1.im.clone() < rat(1, 1));
        let map = affine_sigma(&Value::Exact(cint(0, 0)), &Value::Exact(b1.clone())).unwrap();
        let norm = grunsky_norm(&map, 8).unwrap().value;
        let want = Value::Exact(b1).abs();
        prop_assert!((norm - want).abs() <= 1e-7);
    }

    #[test]
    fn homotopy_cap_never_exceeds_the_parameter(m in 1u32..=5, t in polar_param()) {
        let map = sigma_root_map(m, &PolarParam::real(rat(1, 2)), 20, Mode::Approx).unwrap();
        let hb = homotopy_dilatation_bound(&map, &t).unwrap();
        prop_assert!(hb.cap <= t.abs() + 1e-12);
        prop_assert!(hb.leading <= hb.leading_coefficient * hb.cap + 1e-12);
    }

    #[test]
    fn dilatation_metrics_are_consistent(k in 0.0f64..0.999) {
        let m = metric_from_dilatation(k).unwrap();
        prop_assert!(m.tau >= 0.0);
        prop_assert!(m.g <= 0.0);
        if k > 0.0 {
            prop_assert!((m.g - m.tau.tanh().ln()).abs() <= 1e-12);
        }
        let json = serde_json::to_string(&m).unwrap();
        let back: MetricValue = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.k, m.k);
        prop_assert!(back.g == m.g || (back.g.is_infinite() && m.g.is_infinite()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summary_counts_add_up(records in proptest::collection::vec(point_record(), 0..40)) {
        let summary = VerificationReport::summarize(&records);
        prop_assert_eq!(summary.total, records.len());
        let by_hand = records.iter().filter(|r| {
            matches!(r.status, Status::Pass | Status::Sharp)
        }).count();
        prop_assert_eq!(summary.passed, by_hand);
        prop_assert_eq!(
            summary.sharp,
            records.iter().filter(|r| r.status == Status::Sharp).count()
        );
        prop_assert_eq!(
            summary.total,
            summary.passed + summary.violations + summary.unconfirmed + summary.skipped
        );
    }

    #[test]
    fn report_json_round_trips(records in proptest::collection::vec(point_record(), 0..20)) {
        let report = VerificationReport {
            config_digest: "d".repeat(64),
            mode: Mode::Approx,
            order: 32,
            summary: VerificationReport::summarize(&records),
            records,
        };
        let back = VerificationReport::from_json(&report.to_json()).unwrap();
        prop_assert_eq!(back, report);
    }

    #[test]
    fn config_digest_tracks_content(order in 2i64..=128) {
        let a = ScanConfig { order, ..ScanConfig::default() };
        let b = ScanConfig { order, ..ScanConfig::default() };
        let c = ScanConfig { order: order + 1, ..ScanConfig::default() };
        prop_assert_eq!(config_digest(&a), config_digest(&b));
        prop_assert_ne!(config_digest(&a), config_digest(&c));
    }

    #[test]
    fn exact_units_live_on_the_circle(num in 0i64..=31, den in 1i64..=32) {
        let angle = Angle::turns_fraction(num, den);
        if let Some(u) = angle.exact_unit() {
            prop_assert_eq!(
                u.re.clone() * u.re.clone() + u.im.clone() * u.im.clone(),
                rat(1, 1)
            );
        }
        let approx = angle.approx_unit();
        prop_assert!((approx.norm() - 1.0).abs() <= 1e-12);
    }
}
