mod common;

use std::collections::BTreeSet;

use common::{corpus_maps, eval_word, homeomorphisms, unit_rational, word};
use pcdyn_core::corpus;
use pcdyn_core::models::sided;
use pcdyn_core::partial_action::indeterminacy_set;
use pcdyn_core::piecewise::compose;
use pcdyn_core::scalar::{int, ratio};
use pcdyn_core::structure::{pullback, smoothness_report, smoothness_test, JetValue, StructureFunction};
use pcdyn_core::{CirclePoint, PiecewiseMap, SidedPoint};
use proptest::prelude::*;

#[test]
fn pullback_examples() {
    let nu = StructureFunction::new(1, [(SidedPoint::plus(ratio(1, 2)), (int(2), int(0)))], []).unwrap();
    let p = pullback(&corpus::rotation(ratio(1, 4)), &nu);
    assert_eq!(p.value(&SidedPoint::plus(ratio(1, 4))), Some((int(2), int(0))));
    assert_eq!(p.support_points(), [CirclePoint::new(ratio(1, 4))].into());

    // slope 2 near 1/32 and 1/16: only the u coordinate is rescaled
    let u = ratio(-5, 3);
    let nu = StructureFunction::new(2, [(SidedPoint::plus(ratio(1, 16)), (int(1), u.clone()))], []).unwrap();
    let p = pullback(&corpus::pl_map2(), &nu);
    assert_eq!(p.value(&SidedPoint::plus(ratio(1, 32))), Some((int(1), int(2) * &u)));

    let p = pullback(&corpus::pl_map(), &StructureFunction::trivial(2));
    assert_eq!(p.support_points(), [CirclePoint::new(int(0)), CirclePoint::new(ratio(1, 2))].into());
    assert_eq!(p.support().count(), 4);
    assert_eq!(p.value(&SidedPoint::plus(int(0))).unwrap().0, int(3));
}

#[test]
fn smoothness_examples() {
    assert!(smoothness_test(&corpus::rotation(ratio(1, 3))));
    assert!(!smoothness_test(&corpus::pl_map()));
    assert!(smoothness_test(&corpus::rotation(ratio(2, 5))));
    // one germ, but its lift does not commute with x -> x+1, so the seam at 0 breaks
    assert!(!smoothness_test(&corpus::proj_map()));
}

/// Support plus undefined set of the pulled-back trivial structure against the C2-singular set.
fn check_singular_support(f: &PiecewiseMap) {
    let p = pullback(f, &StructureFunction::trivial(2));
    let mut seen: BTreeSet<CirclePoint> = p.support_points();
    seen.extend(p.undefined_set().iter().cloned());
    assert_eq!(seen, indeterminacy_set(f, f.tag().with_order(2)), "{f:?}");
    // at defined singular points both sides carry a value
    for x in p.support_points() {
        let plus = SidedPoint::new(x.clone(), pcdyn_core::Side::Plus);
        assert!(p.value(&plus).is_some() && p.value(&plus.hat()).is_some());
    }
}

#[test]
fn trivial_pullback_support_is_the_singular_set() {
    for f in corpus_maps() {
        check_singular_support(&f);
    }
}

fn value(level: u8) -> impl Strategy<Value = JetValue> {
    (1i64..=9, 1i64..=9, -9i64..=9, 1i64..=9)
        .prop_map(move |(a, b, c, d)| (ratio(a, b), if level == 1 { int(0) } else { ratio(c, d) }))
}

fn structure() -> impl Strategy<Value = StructureFunction> {
    (1u8..=2).prop_flat_map(|level| {
        prop::collection::btree_map(unit_rational(), (any::<bool>(), value(level)), 0..4).prop_map(move |m| {
            StructureFunction::new(level, m.into_iter().map(|(x, (s, v))| (sided(x, s), v)), []).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pullback_is_contravariant(a in word(5, 2), b in word(5, 2), nu in structure()) {
        let pool = homeomorphisms();
        let (f, g) = (eval_word(&pool, &a), eval_word(&pool, &b));
        let lhs = pullback(&compose(&g, &f), &nu);
        let rhs = pullback(&f, &pullback(&g, &nu));
        prop_assert!(lhs.is_total());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_keeps_symmetry_off_undefined(a in word(10, 2), b in word(10, 2), nu in structure()) {
        let pool = corpus_maps();
        let (f, g) = (eval_word(&pool, &a), eval_word(&pool, &b));
        let p = pullback(&f, &nu);
        prop_assert!(p.is_tau_symmetric());
        prop_assert!(pullback(&compose(&g, &f), &nu).agrees_off_undefined(&pullback(&f, &pullback(&g, &nu))));
    }

    #[test]
    fn identity_pullback(nu in structure()) {
        prop_assert_eq!(pullback(&PiecewiseMap::identity(pcdyn_core::PseudogroupTag::proj()), &nu), nu);
    }

    #[test]
    fn singular_support_on_words(a in word(10, 3)) {
        check_singular_support(&eval_word(&corpus_maps(), &a));
    }

    #[test]
    fn smoothness_characterizations_agree(a in word(10, 3)) {
        prop_assert!(smoothness_report(&eval_word(&corpus_maps(), &a)).agree());
    }

    #[test]
    fn json_roundtrip(nu in structure()) {
        let s = serde_json::to_string(&nu).unwrap();
        let back: StructureFunction = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, nu);
    }
}
