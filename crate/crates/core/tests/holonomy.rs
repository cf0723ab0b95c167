//! Reference structures reproduced from explicit charts, then classified.

use pcdyn_core::circle::SidedPoint;
use pcdyn_core::corpus;
use pcdyn_core::holonomy::{classify, classify_from, seam_transition, HolonomyKind};
use pcdyn_core::scalar::{int, ratio, Rational};
use pcdyn_core::structure::{pullback, StructureFunction};
use pcdyn_core::{CirclePoint, QuadraticNumber};

/// (value, first, second derivative) of (a x + b)/(c x + d), by hand.
fn jet(m: [Rational; 4], x: &Rational) -> (Rational, Rational) {
    let [a, b, c, d] = m;
    let den = &c * x + &d;
    let det = &a * &d - &b * &c;
    let _ = b;
    (&det / (&den * &den), -int(2) * &c * &det / (&den * &den * &den))
}

/// Structure value at x+ seen through a chart that is `left` before x and `right` after.
fn chart_value(left: [Rational; 4], right: [Rational; 4], x: &Rational) -> (Rational, Rational) {
    let (l1, l2) = jet(left, x);
    let (r1, r2) = jet(right, x);
    let t = &l1 / &r1;
    let u = -(&r2 / (int(2) * &r1)) + &l2 * &r1 / (int(2) * &l1 * &l1);
    (t, u)
}

fn m(a: i64, b: Rational, c: i64, d: Rational) -> [Rational; 4] {
    [int(a), b, int(c), d]
}

fn theta2() -> StructureFunction {
    // charts 1/(1-x) left of 0 and 2/(2-x) right of 0
    let v = chart_value(m(0, int(1), -1, int(1)), m(0, int(2), -1, int(2)), &int(0));
    assert_eq!(v, (int(2), int(0)));
    StructureFunction::new(2, [(SidedPoint::plus(int(0)), v)], []).unwrap()
}

fn xi1() -> StructureFunction {
    // x/(x+1/2) left of 0, 2x/(1-2x) right of 0
    let v0 = chart_value(m(1, int(0), 1, ratio(1, 2)), m(2, int(0), -2, int(1)), &int(0));
    // at 1/2 in the chart -1/z: (2x-1)/(2x) left, (1/2-x)/(x-1) right
    let v1 = chart_value(m(2, int(-1), 2, int(0)), m(-1, ratio(1, 2), 1, int(-1)), &ratio(1, 2));
    assert_eq!(v0, (int(1), int(-4)));
    assert_eq!(v1, (int(1), int(-4)));
    StructureFunction::new(2, [(SidedPoint::plus(int(0)), v0), (SidedPoint::plus(ratio(1, 2)), v1)], []).unwrap()
}

#[test]
fn round_circle() {
    let c = classify(&StructureFunction::trivial(2)).unwrap();
    assert_eq!(c.kind, HolonomyKind::Theta1);
    assert_eq!(c.winding, 0);
}

#[test]
fn affine_circle_with_multiplier_two() {
    let c = classify(&theta2()).unwrap();
    assert_eq!(c.kind, HolonomyKind::Theta { t: QuadraticNumber::rational(int(2)) });
}

#[test]
fn double_chart_projective_line() {
    let c = classify(&xi1()).unwrap();
    assert_eq!(c.kind, HolonomyKind::XiN { n: 1 });
}

#[test]
fn seams_reproduce_their_values() {
    for (x, t, u) in [(ratio(1, 3), int(2), int(5)), (int(0), ratio(3, 7), ratio(-1, 2)), (ratio(5, 6), int(1), int(-4))] {
        let g = seam_transition(&CirclePoint::new(x.clone()), &t, &u).germ;
        let [a, b, c, d] = g.entries_vec();
        let v = chart_value([int(1), int(0), int(0), int(1)], [a, b, c, d], &x);
        assert_eq!(v, (t, u));
    }
}

#[test]
fn classes_are_invariant() {
    for nu in [StructureFunction::trivial(2), theta2(), xi1()] {
        let c = classify(&nu).unwrap();
        for (name, h) in corpus::homeomorphisms() {
            let d = classify(&pullback(&h, &nu)).unwrap();
            assert!(c.same_class(&d), "{name}: {c} vs {d}");
        }
        for b in [ratio(1, 7), ratio(1, 2), ratio(5, 9)] {
            let d = classify_from(&nu, &b).unwrap();
            assert!(c.same_class(&d), "basepoint {b}: {c} vs {d}");
        }
    }
}

mod properties {
    use super::*;
    use pcdyn_core::holonomy::HolonomyKind;
    use pcdyn_core::Moebius;
    use proptest::prelude::*;

    #[test]
    fn seam_examples() {
        let p = CirclePoint::new(ratio(2, 7));
        assert_eq!(seam_transition(&p, &int(1), &int(0)).germ, Moebius::identity());
        let z = CirclePoint::new(int(0));
        assert_eq!(seam_transition(&z, &int(2), &int(0)).germ, Moebius::from_ints(1, 0, 0, 2));
        assert_eq!(seam_transition(&z, &int(1), &int(3)).germ, Moebius::from_ints(1, 0, 3, 1));
    }

    fn structure() -> impl Strategy<Value = StructureFunction> {
        prop::collection::btree_map((0i64..24).prop_map(|k| ratio(k, 24)), (1i64..=6, 1i64..=6, -12i64..=12, 1i64..=4), 0..4)
            .prop_map(|m| {
                let entries = m.into_iter().map(|(x, (a, b, c, d))| (SidedPoint::plus(x), (ratio(a, b), ratio(c, d))));
                StructureFunction::new(2, entries, []).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn total_structures_classify(nu in structure()) {
            let c = classify(&nu).unwrap();
            prop_assert!(c.winding >= 0);
            match &c.kind {
                HolonomyKind::Theta1 | HolonomyKind::Theta { .. } => prop_assert_eq!(c.winding, 0),
                // the winding of an elliptic class is the integer part of r, which may be 0
                HolonomyKind::XiR { rotation } => prop_assert_eq!(rotation.winding, c.winding),
                _ => prop_assert!(c.winding >= 1),
            }
        }

        #[test]
        fn basepoint_does_not_matter(nu in structure(), b in (1i64..24).prop_map(|k| ratio(k, 24))) {
            let c = classify(&nu).unwrap();
            let d = classify_from(&nu, &b).unwrap();
            prop_assert!(c.same_class(&d), "{} vs {}", c, d);
        }

        #[test]
        fn homeomorphisms_preserve_the_class(nu in structure(), i in 0usize..4) {
            let (_, h) = corpus::homeomorphisms().swap_remove(i);
            let c = classify(&nu).unwrap();
            let d = classify(&pullback(&h, &nu)).unwrap();
            prop_assert!(c.same_class(&d), "{} vs {}", c, d);
        }
    }
}
