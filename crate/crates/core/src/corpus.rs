//! Named fixture maps shared by tests, the acceptance harness and `pcdyn selftest`.

use crate::circle::Arc;
use crate::moebius::Moebius;
use crate::piecewise::algebra::{compose, invert};
use crate::piecewise::{Piece, PiecewiseMap, PseudogroupTag};
use crate::scalar::{int, ratio, Rational};

fn piece(left: Rational, len: Rational, germ: Moebius) -> Piece {
    Piece::new(Arc::new(left, len).expect("fixture arc"), germ)
}

fn shift(q: Rational) -> Moebius {
    Moebius::translation(q)
}

fn build(pieces: Vec<Piece>, tag: PseudogroupTag) -> PiecewiseMap {
    PiecewiseMap::new(pieces, tag).expect("fixture map validates")
}

pub fn rotation(q: Rational) -> PiecewiseMap {
    build(vec![piece(int(0), int(1), shift(q))], PseudogroupTag::isom())
}

/// (0,1/2) -> +1/2, (1/2,5/6) -> -1/3, (5/6,1) -> -5/6.
pub fn iet3() -> PiecewiseMap {
    build(
        vec![
            piece(int(0), ratio(1, 2), shift(ratio(1, 2))),
            piece(ratio(1, 2), ratio(1, 3), shift(ratio(-1, 3))),
            piece(ratio(5, 6), ratio(1, 6), shift(ratio(-5, 6))),
        ],
        PseudogroupTag::isom(),
    )
}

/// Lengths 1/4, 1/3, 1/6, 1/4 placed in reversed order.
pub fn iet4() -> PiecewiseMap {
    build(
        vec![
            piece(int(0), ratio(1, 4), shift(ratio(3, 4))),
            piece(ratio(1, 4), ratio(1, 3), shift(ratio(1, 6))),
            piece(ratio(7, 12), ratio(1, 6), shift(ratio(-1, 3))),
            piece(ratio(3, 4), ratio(1, 4), shift(ratio(-3, 4))),
        ],
        PseudogroupTag::isom(),
    )
}

/// The 3-IET with its last piece reversed.
pub fn iet3_flipped() -> PiecewiseMap {
    build(
        vec![
            piece(int(0), ratio(1, 2), shift(ratio(1, 2))),
            piece(ratio(1, 2), ratio(1, 3), shift(ratio(-1, 3))),
            piece(ratio(5, 6), ratio(1, 6), Moebius::affine(int(-1), int(1))),
        ],
        PseudogroupTag::isom(),
    )
}

/// x -> -x.
pub fn flip() -> PiecewiseMap {
    build(vec![piece(int(0), int(1), Moebius::affine(int(-1), int(1)))], PseudogroupTag::isom())
}

/// Slope 1/2 on (0,1/2), slope 3/2 on (1/2,1); fixes 0.
pub fn pl_map() -> PiecewiseMap {
    build(
        vec![
            piece(int(0), ratio(1, 2), Moebius::affine(ratio(1, 2), int(0))),
            piece(ratio(1, 2), ratio(1, 2), Moebius::affine(ratio(3, 2), ratio(-1, 2))),
        ],
        PseudogroupTag::aff(),
    )
}

/// 2x on (0,1/8), slope 2/3 on (1/8,1/2), identity on (1/2,1).
pub fn pl_map2() -> PiecewiseMap {
    build(
        vec![
            piece(int(0), ratio(1, 8), Moebius::affine(int(2), int(0))),
            piece(ratio(1, 8), ratio(3, 8), Moebius::affine(ratio(2, 3), ratio(1, 6))),
            piece(ratio(1, 2), ratio(1, 2), Moebius::identity()),
        ],
        PseudogroupTag::aff(),
    )
}

/// 2x/(1+x) on the whole circle cut at 0.
pub fn proj_map() -> PiecewiseMap {
    build(vec![piece(int(0), int(1), Moebius::from_ints(2, 0, 1, 1))], PseudogroupTag::proj())
}

/// x/(1+x) on (0,1/2), then the affine map onto (1/3,1).
pub fn proj_map2() -> PiecewiseMap {
    build(
        vec![
            piece(int(0), ratio(1, 2), Moebius::from_ints(1, 0, 1, 1)),
            piece(ratio(1, 2), ratio(1, 2), Moebius::affine(ratio(4, 3), ratio(-1, 3))),
        ],
        PseudogroupTag::proj(),
    )
}

/// The growth corpus: two maps of each kind.
pub fn growth_corpus() -> Vec<(&'static str, PiecewiseMap)> {
    vec![
        ("iet3", iet3()),
        ("iet4", iet4()),
        ("pl", pl_map()),
        ("pl2", pl_map2()),
        ("proj", proj_map()),
        ("proj2", proj_map2()),
    ]
}

/// Every fixture map, including rotations and maps with flips.
pub fn full_corpus() -> Vec<(&'static str, PiecewiseMap)> {
    let mut v = growth_corpus();
    v.push(("rot13", rotation(ratio(1, 3))));
    v.push(("rot14", rotation(ratio(1, 4))));
    v.push(("flip", flip()));
    v.push(("iet3flip", iet3_flipped()));
    v
}

/// Piecewise affine and projective homeomorphisms.
pub fn homeomorphisms() -> Vec<(&'static str, PiecewiseMap)> {
    vec![("pl", pl_map()), ("pl2", pl_map2()), ("proj", proj_map()), ("proj2", proj_map2())]
}

/// h r h^{-1}.
pub fn conjugate(h: &PiecewiseMap, r: &PiecewiseMap) -> PiecewiseMap {
    compose(&compose(h, r), &invert(h))
}

/// Tags to analyse a map under: its own tag with every admissible match order.
pub fn tags_for(f: &PiecewiseMap) -> Vec<PseudogroupTag> {
    let t = f.tag();
    (0..=2).map(|o| t.with_order(o)).collect()
}
