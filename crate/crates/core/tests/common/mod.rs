//! Strategies shared by the property suites.
#![allow(dead_code)]

use proptest::prelude::*;

use pcdyn_core::corpus;
use pcdyn_core::piecewise::{compose, invert};
use pcdyn_core::scalar::ratio;
use pcdyn_core::{Moebius, PiecewiseMap, Rational};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

pub fn unit_rational() -> impl Strategy<Value = Rational> {
    (1i64..=60).prop_flat_map(|d| (0..d).prop_map(move |n| ratio(n, d)))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != ratio(0, 1))
}

pub fn moebius() -> impl Strategy<Value = Moebius> {
    prop::array::uniform4(-6i64..=6)
        .prop_filter("invertible", |[a, b, c, d]| a * d - b * c != 0)
        .prop_map(|[a, b, c, d]| Moebius::from_ints(a, b, c, d))
}

/// Word over the pool and its inverses, as (index, inverted) letters.
pub fn word(pool: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0..pool, any::<bool>()), 1..=max_len)
}

pub fn eval_word(pool: &[PiecewiseMap], w: &[(usize, bool)]) -> PiecewiseMap {
    let mut acc = PiecewiseMap::identity(pool[0].tag());
    for &(i, inv) in w {
        let g = if inv { invert(&pool[i]) } else { pool[i].clone() };
        acc = compose(&g, &acc);
    }
    acc
}

pub fn corpus_maps() -> Vec<PiecewiseMap> {
    corpus::full_corpus().into_iter().map(|(_, f)| f).collect()
}

pub fn homeomorphisms() -> Vec<PiecewiseMap> {
    let mut v: Vec<PiecewiseMap> = corpus::homeomorphisms().into_iter().map(|(_, f)| f).collect();
    v.push(corpus::rotation(ratio(1, 3)));
    v
}
