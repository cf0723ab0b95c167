mod common;

use common::{moebius, nonzero_rational, rational};
use num_bigint::BigInt;
use pcdyn_core::moebius::{deck_align, mob_apply, mob_compose, mob_invert, mob_jet};
use pcdyn_core::scalar::{int, ratio};
use pcdyn_core::{Moebius, QuadraticNumber};
use proptest::prelude::*;

fn quadratic(d: u32) -> impl Strategy<Value = QuadraticNumber> {
    (rational(), rational()).prop_map(move |(a, b)| QuadraticNumber::new(a, b, BigInt::from(d)))
}

fn nonzero_quadratic(d: u32) -> impl Strategy<Value = QuadraticNumber> {
    quadratic(d).prop_filter("nonzero", |q| !num_traits::Zero::is_zero(q))
}

#[test]
fn inverse_and_deck_examples() {
    assert_eq!(mob_invert(&Moebius::from_ints(2, 0, 0, 1)), Moebius::from_ints(1, 0, 0, 2));
    let m = Moebius::from_ints(1, 1, 1, 2);
    assert_eq!(mob_compose(&m, &mob_invert(&m)), Moebius::identity());
    assert_eq!(mob_compose(&Moebius::identity(), &m), m);
    assert_eq!(deck_align(&Moebius::identity(), 1), Moebius::from_ints(1, 1, 0, 1));
    assert_eq!(deck_align(&m, 0), m);
    assert_eq!(deck_align(&deck_align(&m, 1), -1), m);
    assert_eq!(mob_jet(&Moebius::from_ints(2, 0, 0, 1), &ratio(1, 3)).unwrap(), (ratio(2, 3), int(2), int(0)));
}

proptest! {
    #[test]
    fn jet_chain_rule(m1 in moebius(), m2 in moebius(), x in rational()) {
        let Ok((y, g1, g2)) = mob_jet(&m2, &x) else { return Ok(()) };
        let Ok((z, f1, f2)) = mob_jet(&m1, &y) else { return Ok(()) };
        let (v, d1, d2) = mob_jet(&mob_compose(&m1, &m2), &x).unwrap();
        prop_assert_eq!(v, z);
        prop_assert_eq!(d1, &f1 * &g1);
        // second order Faa di Bruno
        prop_assert_eq!(d2, &f2 * &g1 * &g1 + &f1 * &g2);
    }

    #[test]
    fn apply_follows_composition(m1 in moebius(), m2 in moebius(), x in rational()) {
        if let Ok(y) = mob_apply(&m2, &x) {
            if let Ok(z) = mob_apply(&m1, &y) {
                prop_assert_eq!(mob_apply(&mob_compose(&m1, &m2), &x).unwrap(), z);
            }
        }
    }

    #[test]
    fn scalar_rescaling_changes_nothing(m in moebius(), l in nonzero_rational(), x in rational()) {
        let [a, b, c, d] = m.entries_vec();
        let scaled = Moebius::new(&a * &l, &b * &l, &c * &l, &d * &l);
        prop_assert_eq!(&scaled, &m);
        prop_assert_eq!(mob_apply(&scaled, &x).ok(), mob_apply(&m, &x).ok());
        prop_assert_eq!(mob_jet(&scaled, &x).ok(), mob_jet(&m, &x).ok());
    }

    #[test]
    fn canonical_representative_has_content_one(m in moebius()) {
        let e = m.entries_vec();
        prop_assert!(e.iter().all(|q| q.is_integer()));
        let g = e.iter().fold(BigInt::from(0), |g, q| num_integer::Integer::gcd(&g, q.numer()));
        prop_assert_eq!(g, BigInt::from(1));
        let lead = if e[0] != int(0) { &e[0] } else { &e[2] };
        prop_assert!(*lead > int(0));
    }

    #[test]
    fn quadratic_field_axioms(a in quadratic(2), b in quadratic(2), c in quadratic(2), n in nonzero_quadratic(2)) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() - a.clone(), QuadraticNumber::rational(int(0)));
        prop_assert_eq!(n.clone() / n.clone(), QuadraticNumber::rational(int(1)));
        prop_assert_eq!((a.clone() / n.clone()) * n.clone(), a.clone());
        prop_assert_eq!(n.clone() * n.conjugate(), QuadraticNumber::rational(n.norm()));
    }

    #[test]
    fn quadratic_order_matches_sign(a in quadratic(3), b in quadratic(3)) {
        let diff = a.clone() - b.clone();
        prop_assert_eq!(a.cmp(&b) as i32, diff.signum());
    }
}
