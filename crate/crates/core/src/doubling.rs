//! The orientation double cover X^+- and the embedding of PC(X) into the
//! orientation-preserving maps of X^+- commuting with the swap.
//!
//! X^+- is drawn on a single circle R/Z: (x, +) sits at x/2 in (0, 1/2) and
//! (x, -) at 1 - x/2 in (1/2, 1), so the second copy runs backwards. In JSON the
//! doubled circle is written in length-2 coordinates (multiplied by 2), i.e.
//! (x, -) at 2 - x, with the marker "doubled": true.

use num_traits::{One, Zero};

use crate::circle::Arc;
use crate::moebius::Moebius;
use crate::piecewise::algebra::{canonicalize, compose};
use crate::piecewise::{Piece, PiecewiseMap, PseudogroupTag};
use crate::scalar::{floor_int, int, Rational};

/// Orientation sign of f on the piece containing x; None at a cut.
pub fn reduced_derivative(f: &PiecewiseMap, x: &Rational) -> Option<i32> {
    f.locate(x).map(|(i, _)| f.pieces()[i].germ.orientation())
}

/// (x, eps) -> (x, -eps): z -> 1 - z.
pub fn swap() -> PiecewiseMap {
    let p = Piece::new(Arc::full(), Moebius::affine(int(-1), int(1)));
    PiecewiseMap::new(vec![p], PseudogroupTag::isom()).expect("swap is valid")
}

/// Pieces with lifted domain inside [0, 1] and lifted image inside [k, k+1].
fn split_pieces(f: &PiecewiseMap) -> Vec<(Rational, Rational, Moebius)> {
    let one = Rational::one();
    let mut dom = Vec::new();
    for p in f.pieces() {
        let (l, r) = (p.arc.left().clone(), p.arc.right());
        if r > one {
            dom.push((l, one.clone(), p.germ.clone()));
            dom.push((Rational::zero(), &r - &one, p.germ.shift_domain(&num_bigint::BigInt::one())));
        } else {
            dom.push((l, r, p.germ.clone()));
        }
    }
    let mut out = Vec::new();
    for (l, r, g) in dom {
        let inv = g.invert();
        let (y0, y1) = (g.apply(&l).expect("pole-free"), g.apply(&r).expect("pole-free"));
        let (lo, hi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
        let mut cuts = vec![l.clone(), r.clone()];
        let mut k = floor_int(&lo) + num_bigint::BigInt::one();
        while Rational::from_integer(k.clone()) < hi {
            cuts.push(inv.apply(&Rational::from_integer(k.clone())).expect("pole-free inverse"));
            k += 1;
        }
        cuts.sort();
        for w in cuts.windows(2) {
            let mid = (&w[0] + &w[1]) / int(2);
            let k = floor_int(&g.apply(&mid).expect("pole-free"));
            out.push((w[0].clone(), w[1].clone(), g.deck_align(&-k)));
        }
    }
    out
}

/// Phi(f)(x, eps) = (f(x), f'(x) sign * eps) on the doubled circle, oriented tag.
pub fn double_embed(f: &PiecewiseMap) -> PiecewiseMap {
    let s_inv = Moebius::from_ints(1, 0, 0, 2); // x -> x/2
    let s = Moebius::from_ints(2, 0, 0, 1); // z -> 2z
    let r = Moebius::from_ints(-1, 2, 0, 2); // x -> 1 - x/2
    let q = Moebius::from_ints(-2, 2, 0, 1); // z -> 2 - 2z
    let mut pieces = Vec::new();
    for (l, rr, f0) in split_pieces(f) {
        let len = &rr - &l;
        let plus_out = if f0.orientation() > 0 { &s_inv } else { &r };
        let minus_out = if f0.orientation() > 0 { &r } else { &s_inv };
        let plus_arc = Arc::new(&l / int(2), &len / int(2)).expect("upper copy arc");
        pieces.push(Piece::new(plus_arc, plus_out.compose(&f0).compose(&s)).normalized());
        let minus_left = Rational::one() - &rr / int(2);
        let minus_arc = Arc::new(minus_left, &len / int(2)).expect("lower copy arc");
        pieces.push(Piece::new(minus_arc, minus_out.compose(&f0).compose(&q)).normalized());
    }
    let raw = PiecewiseMap::new(pieces, f.tag().oriented()).expect("doubled map validates under the oriented tag");
    canonicalize(&raw, raw.tag())
}

/// A map of the doubled circle, serialized in length-2 coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledMap(pub PiecewiseMap);

impl DoubledMap {
    pub fn of(f: &PiecewiseMap) -> Self {
        DoubledMap(double_embed(f))
    }
}

/// Phi(f) o s == s o Phi(f), checked as canonical elements.
pub fn commutes_with_swap(phi: &PiecewiseMap) -> bool {
    let s = swap();
    compose(phi, &s).same_element(&compose(&s, phi))
}
