use pcdyn_core::corpus;
use pcdyn_core::piecewise::invert;
use pcdyn_core::scalar::ratio;
use pcdyn_core::solver::{contains, solve_invariant, SolveStatus};
use pcdyn_core::structure::{pullback, StructureFunction};

#[test]
fn rotation_has_only_the_trivial_structure_on_an_empty_active_set() {
    let r = solve_invariant(&[corpus::rotation(ratio(1, 3))], 2, 64).unwrap();
    assert_eq!(r.status, SolveStatus::Unique);
    assert!(r.witness.unwrap().is_trivial());
}

#[test]
fn conjugated_rotations_contain_the_pullback_certificate() {
    let rot = corpus::rotation(ratio(1, 3));
    for (name, h) in corpus::homeomorphisms() {
        let g = corpus::conjugate(&h, &rot);
        let cert = pullback(&invert(&h), &StructureFunction::trivial(2));
        for level in [1u8, 2] {
            let r = solve_invariant(std::slice::from_ref(&g), level, 64).unwrap();
            assert!(matches!(r.status, SolveStatus::Unique | SolveStatus::Family(_)), "{name} {level}: {:?}", r.status);
            assert!(contains(std::slice::from_ref(&g), &r, &cert.with_level(level)), "{name} level {level}");
        }
    }
}

#[test]
fn linear_growth_leaves_no_structure() {
    let r = solve_invariant(&[corpus::pl_map()], 2, 64).unwrap();
    assert_eq!(r.status, SolveStatus::None);
}

mod transfix {
    use super::*;
    use pcdyn_core::partial_action::{transfix_scan, Certificate, TransfixVerdict};
    use pcdyn_core::PseudogroupTag;

    #[test]
    fn rotation_is_transfixed_by_the_trivial_structure() {
        let r = transfix_scan(&[corpus::rotation(ratio(1, 3))], PseudogroupTag::isom(), 4).unwrap();
        assert_eq!(r.verdict, TransfixVerdict::TransfixedCertified);
        assert_eq!(r.max_ell, 0);
    }

    #[test]
    fn conjugated_rotation_is_transfixed() {
        let g = corpus::conjugate(&corpus::pl_map(), &corpus::rotation(ratio(1, 3)));
        let r = transfix_scan(&[g], PseudogroupTag::aff(), 4).unwrap();
        assert_eq!(r.verdict, TransfixVerdict::TransfixedCertified);
        match r.certificate {
            Some(Certificate::Structure(nu)) => assert!(r.max_ell <= 2 * nu.support_points().len()),
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn pl_map_is_not_transfixed() {
        let r = transfix_scan(&[corpus::pl_map()], PseudogroupTag::aff(), 4).unwrap();
        assert_eq!(r.verdict, TransfixVerdict::NotTransfixedCertified);
    }

    #[test]
    fn iet_generates_a_finite_group() {
        let r = transfix_scan(&[corpus::iet3()], PseudogroupTag::isom(), 8).unwrap();
        assert_eq!(r.verdict, TransfixVerdict::TransfixedCertified);
        assert_eq!(r.certificate, Some(Certificate::FiniteGroup { order: 6 }));
    }
}
