use geocorr::*;
use proptest::prelude::*;

fn domain() -> impl Strategy<Value = SymmetricDomain> {
    prop_oneof![
        (0.2f64..3.0).prop_map(|l| SymmetricDomain::Square { l }),
        (0.2f64..3.0).prop_map(|r| SymmetricDomain::Disk { r }),
    ]
}

fn field() -> impl Strategy<Value = LinearField> {
    (
        -1.0f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
        domain(),
    )
        .prop_map(|(a, b, c, d, dom)| LinearField::new(a, b, c, d, dom).unwrap())
}

fn well_conditioned() -> impl Strategy<Value = LinearField> {
    field().prop_filter("weights within a factor 10", |v| {
        let d = v.decompose();
        let (n1, n2) = (d.saddle_weight(), d.source_vortex_weight());
        n1 > 1e-3 && n2 > 1e-3 && n1.max(n2) / n1.min(n2) < 10.0
    })
}

proptest! {
    #[test]
    fn saddle_and_source_vortex_parts_do_not_mix(v in field(), w in field()) {
        let w = LinearField { domain: v.domain, ..w };
        let c = correlate_linear(&v.saddle_part(), &w.source_vortex_part()).unwrap();
        prop_assert!(c.value.magnitude() <= 1e-12);
    }

    #[test]
    fn vector_fields_correlate_to_spinors(v in field(), alpha in -3.0f64..3.0) {
        let c = correlate_linear(&v.inner_rotate(alpha), &v).unwrap().value;
        prop_assert_eq!(c.x, 0.0);
        prop_assert_eq!(c.y, 0.0);
    }

    #[test]
    fn total_rotation_composes(v in field(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let twice = v.total_rotate(a).total_rotate(b);
        prop_assert!(twice.coefficient_distance(&v.total_rotate(a + b)) <= 1e-12);
    }

    #[test]
    fn total_rotation_preserves_the_weights(v in field(), alpha in -3.0f64..3.0) {
        let (d, r) = (v.decompose(), v.total_rotate(alpha).decompose());
        prop_assert!((d.saddle_weight() - r.saddle_weight()).abs() <= 1e-12);
        prop_assert!((d.c - r.c).abs() <= 1e-12 && (d.d - r.d).abs() <= 1e-12);
    }

    #[test]
    fn detection_recovers_the_angle(v in well_conditioned(), alpha in -3.1f64..3.1) {
        let cfg = DetectorConfig::new(1e-10).unwrap();
        let r = detect(&v, &v.total_rotate(alpha), &cfg).unwrap();
        prop_assert_eq!(r.status, Status::Converged);
        prop_assert!(wrap_half_turn(r.alpha - alpha).abs() <= 1e-8);
        prop_assert!(r.corrected.coefficient_distance(&v) <= 1e-7);
    }

    #[test]
    fn known_pattern_is_one_shot(v in well_conditioned(), alpha in -1.5f64..1.5) {
        let got = detect_known_pattern(&v, &v.total_rotate(alpha)).unwrap();
        prop_assert!(wrap_half_turn(got - alpha).abs() <= 1e-9);
    }

    #[test]
    fn oracle_matches_ground_truth(v in well_conditioned(), alpha in -1.5f64..1.5) {
        let got = oracle_detect(&v, &v.total_rotate(alpha), 2001);
        prop_assert!(wrap_half_turn(got - alpha).abs() <= 1e-7);
    }

    #[test]
    fn phase_is_opposite_and_bounded(v in well_conditioned(), alpha in -1.57f64..1.57) {
        let phi = phi_of_alpha(&v, alpha).unwrap();
        prop_assert!(phi == 0.0 || phi.signum() == -alpha.signum());
        prop_assert!(phi.abs() <= 2.0 * alpha.abs() + 1e-15);
    }

    #[test]
    fn json_round_trip(v in field()) {
        let text = serde_json::to_string(&v).unwrap();
        let back: LinearField = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, v);
    }
}
