use mulgame::measure::{Domain, Interval};
use mulgame::solver::v_y_set;
use mulgame::IntervalUnion;
use proptest::prelude::*;

fn raw_parts() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((1.0f64..10.0, 0.0f64..1.0), 0..6)
        .prop_map(|v| v.into_iter().map(|(a, f)| (a, a + f * (10.0 - a))).filter(|(a, b)| b - a > 1e-6).collect())
}

fn union_of(parts: &[(f64, f64)]) -> IntervalUnion {
    IntervalUnion::canonicalize(parts.iter().map(|&(a, b)| Interval::new(a, b)), Domain::Mantissa).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_is_stable(parts in raw_parts()) {
        let w = union_of(&parts);
        let again = IntervalUnion::canonicalize(w.parts().iter().copied(), Domain::Mantissa).unwrap();
        prop_assert_eq!(&again, &w);
        for p in w.parts().windows(2) {
            prop_assert!(p[0].hi < p[1].lo);
        }
    }

    #[test]
    fn complement_fills_the_rest(parts in raw_parts()) {
        let w = union_of(&parts);
        let c = w.complement();
        prop_assert!((w.benford_measure().unwrap() + c.benford_measure().unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(w.intersect(&c).unwrap().benford_measure().unwrap() < 1e-12);
        prop_assert_eq!(w.union(&c).unwrap(), IntervalUnion::full(Domain::Mantissa));
    }

    #[test]
    fn log_map_preserves_measure(parts in raw_parts()) {
        let w = union_of(&parts);
        let l = w.to_log().unwrap();
        prop_assert!((l.lebesgue_measure().unwrap() - w.benford_measure().unwrap()).abs() < 1e-12);
        let back = l.to_mantissa().unwrap();
        prop_assert_eq!(back.parts().len(), w.parts().len());
        for (a, b) in back.parts().iter().zip(w.parts()) {
            prop_assert!((a.lo - b.lo).abs() < 1e-12 && (a.hi - b.hi).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_and_scaling_keep_measure(parts in raw_parts(), y in 1.0f64..10.0) {
        let w = union_of(&parts);
        let beta = w.benford_measure().unwrap();
        let vy = v_y_set(&w, y).unwrap();
        prop_assert!((vy.benford_measure().unwrap() - beta).abs() <= 1e-10);
        // V_y in log coordinates is W shifted by -log10 y
        let shifted = w.to_log().unwrap().translate_mod1((1.0 - y.log10()) % 1.0).unwrap();
        prop_assert!((shifted.lebesgue_measure().unwrap() - beta).abs() <= 1e-10);
    }

    #[test]
    fn membership_agrees_with_log_route(parts in raw_parts(), y in 1.0f64..10.0, x in 1.0f64..10.0) {
        let w = union_of(&parts);
        let vy = v_y_set(&w, y).unwrap();
        let mut p = x * y;
        if p >= 10.0 {
            p /= 10.0;
        }
        let near_edge = w.parts().iter().any(|i| (i.lo - p).abs() < 1e-9 || (i.hi - p).abs() < 1e-9);
        prop_assume!(!near_edge);
        prop_assert_eq!(vy.contains(x), w.contains(p));
    }
}

#[test]
fn pulled_back_set_on_a_fine_grid() {
    let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
    for y in [1.0, 2.0, 3.7, 9.99] {
        let vy = v_y_set(&w, y).unwrap();
        let log = w.to_log().unwrap().translate_mod1((1.0 - y.log10()) % 1.0).unwrap();
        let mut disagreements = 0;
        for k in 0..100_000 {
            let a = (k as f64 + 0.5) / 100_000.0;
            if vy.contains(10f64.powf(a)) != log.contains(a) {
                disagreements += 1;
            }
        }
        assert!(disagreements <= 2, "y = {y}: {disagreements}");
    }
}

#[test]
fn domain_errors() {
    let w = IntervalUnion::from_digits(&[1]).unwrap();
    assert!(w.lebesgue_measure().is_err());
    assert!(w.to_log().unwrap().benford_measure().is_err());
    assert!(v_y_set(&w, 10.0).is_err());
    assert!(IntervalUnion::canonicalize([Interval::new(3.0, 2.0)], Domain::Mantissa).is_err());
    assert!(IntervalUnion::canonicalize([Interval::new(0.5, 2.0)], Domain::Mantissa).is_err());
    assert!(w.union(&IntervalUnion::full(Domain::Log)).is_err());
}
