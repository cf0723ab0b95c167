//! Canonical forms, composition, inversion and germ matching.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::circle::{Arc, CirclePoint, Side, SidedPoint};
use crate::moebius::Moebius;
use crate::piecewise::map::{Piece, PiecewiseMap};
use crate::piecewise::tag::PseudogroupTag;
use crate::scalar::{floor_int, frac, is_integer, midpoint, Rational};

/// Highest jet order at which the two one-sided germs at a point agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatchOrder {
    None,
    Order0,
    Order1,
    Order2,
    Full,
}

impl MatchOrder {
    /// Whether the seam glues for a tag requiring jet agreement up to `order`.
    pub fn glues_at(self, order: u8) -> bool {
        let need = match order {
            0 => MatchOrder::Order0,
            1 => MatchOrder::Order1,
            _ => MatchOrder::Order2,
        };
        self >= need
    }

    pub fn name(self) -> &'static str {
        match self {
            MatchOrder::None => "none",
            MatchOrder::Order0 => "0",
            MatchOrder::Order1 => "1",
            MatchOrder::Order2 => "2",
            MatchOrder::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermMatch {
    pub point: CirclePoint,
    pub order_matched: MatchOrder,
}

/// Jet comparison of the germs on the two sides of `x` (deck alignment is implicit:
/// values are compared mod 1, derivatives do not see integer shifts).
pub fn germ_match(f: &PiecewiseMap, x: &CirclePoint, _tag: PseudogroupTag) -> GermMatch {
    let order_matched = match_at(f, x.position());
    GermMatch { point: x.clone(), order_matched }
}

pub(crate) fn match_at(f: &PiecewiseMap, x: &Rational) -> MatchOrder {
    let (vl, l1, l2) = f.sided_jet(&SidedPoint::minus(x.clone()));
    let (vr, r1, r2) = f.sided_jet(&SidedPoint::plus(x.clone()));
    if !is_integer(&(&vl - &vr)) {
        return MatchOrder::None;
    }
    debug_assert_eq!(
        l1 > Rational::zero(),
        r1 > Rational::zero(),
        "value-continuous seam with opposite orientations at {x:?}"
    );
    if l1 != r1 {
        return MatchOrder::Order0;
    }
    if l2 != r2 {
        return MatchOrder::Order1;
    }
    // a homography is determined by its 2-jet
    MatchOrder::Full
}

/// `right` re-expressed so that it continues `left` across the seam, if the two
/// germs coincide up to deck translations.
fn continues(left: &Piece, right: &Piece) -> bool {
    let xl = left.arc.right();
    let e = floor_int(&(&xl - right.arc.left()));
    let relifted = right.germ.shift_domain(&-e);
    let vl = left.germ.apply(&xl).expect("pole-free");
    let vr = relifted.apply(&xl).expect("pole-free");
    let k = &vl - &vr;
    if !is_integer(&k) {
        return false;
    }
    relifted.deck_align(&k.to_integer()) == left.germ
}

fn merge(left: &Piece, right: &Piece) -> Piece {
    let len = left.arc.len() + right.arc.len();
    Piece::new(Arc::new(left.arc.left().clone(), len).expect("merged arc"), left.germ.clone())
}

/// Germ-maximal representative: adjacent pieces are merged exactly when their
/// germs agree up to deck alignment; a circle with no breakpoint is cut at 0.
pub(crate) fn canonical_pieces(f: &PiecewiseMap) -> Vec<Piece> {
    let mut ps: Vec<Piece> = f.pieces().to_vec();
    let mut changed = true;
    while changed && ps.len() > 1 {
        changed = false;
        let mut i = 0;
        while i < ps.len() && ps.len() > 1 {
            let j = (i + 1) % ps.len();
            if continues(&ps[i], &ps[j]) {
                let m = merge(&ps[i], &ps[j]);
                ps[i] = m;
                ps.remove(j);
                if j < i {
                    i -= 1;
                }
                changed = true;
            } else {
                i += 1;
            }
        }
    }
    if ps.len() == 1 && ps[0].arc.is_full() && !ps[0].arc.left().is_zero() && continues(&ps[0], &ps[0]) {
        // seamless single germ (necessarily affine): move the cut to 0
        debug_assert!(ps[0].germ.is_affine());
        ps[0] = Piece::new(Arc::full(), ps[0].germ.clone());
    }
    let mut out: Vec<Piece> = ps.into_iter().map(Piece::normalized).collect();
    out.sort_by(|a, b| a.arc.left().cmp(b.arc.left()));
    out
}

/// Canonical form under `tag`: germ-maximal pieces, tagged with `tag`. Every
/// germ of `f` must belong to `tag`; retag through `with_tag` to check.
pub fn canonicalize(f: &PiecewiseMap, tag: PseudogroupTag) -> PiecewiseMap {
    PiecewiseMap::from_trusted(canonical_pieces(f), tag)
}

impl PiecewiseMap {
    pub fn canonical(&self) -> PiecewiseMap {
        canonicalize(self, self.tag())
    }

    /// Equality of the underlying elements of PC (germ-maximal forms agree).
    pub fn same_element(&self, other: &PiecewiseMap) -> bool {
        canonical_pieces(self) == canonical_pieces(other)
    }

    pub fn is_identity(&self) -> bool {
        let c = canonical_pieces(self);
        c.len() == 1 && c[0].arc.is_full() && c[0].germ == Moebius::identity()
    }

    /// Breakpoints of the canonical form where left and right germs differ.
    pub fn germ_breakpoints(&self) -> Vec<(Rational, MatchOrder)> {
        let c = PiecewiseMap::from_trusted(canonical_pieces(self), self.tag());
        c.cut_points()
            .into_iter()
            .filter_map(|x| {
                let m = match_at(&c, &x);
                if m == MatchOrder::Full {
                    None
                } else {
                    Some((x, m))
                }
            })
            .collect()
    }
}

/// Cuts of `g` together with `g`-preimages of the cuts of `f`.
pub(crate) fn composition_cuts(f: &PiecewiseMap, g: &PiecewiseMap) -> Vec<Rational> {
    let mut cuts = g.cut_points();
    let fends = f.cut_points();
    for p in g.pieces() {
        let (lo, hi) = p.image_interval();
        let inv = p.germ.invert();
        for e in &fends {
            let mut k = floor_int(&(&lo - e));
            loop {
                let y = e + Rational::from_integer(k.clone());
                if y >= hi {
                    break;
                }
                if y > lo {
                    cuts.push(frac(&inv.apply(&y).expect("pole-free inverse on image")));
                }
                k += BigInt::one();
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts
}

/// f after g, on the cofinite set where both are defined; canonical.
pub fn compose(f: &PiecewiseMap, g: &PiecewiseMap) -> PiecewiseMap {
    let cuts = composition_cuts(f, g);
    let n = cuts.len();
    let mut pieces = Vec::with_capacity(n);
    for i in 0..n {
        let a = cuts[i].clone();
        let b = if i + 1 < n { cuts[i + 1].clone() } else { &cuts[0] + Rational::one() };
        let mid = midpoint(&a, &b);
        let (gi, gl) = g.locate(&mid).expect("arc between cuts lies in a piece");
        let gs = g.pieces()[gi].germ.shift_domain(&(&gl - &mid).to_integer());
        let y = gs.apply(&mid).expect("pole-free");
        let (fi, fl) = f.locate(&y).expect("image of a cut-free arc lies in a piece");
        let fs = f.pieces()[fi].germ.shift_domain(&(&fl - &y).to_integer());
        let arc = Arc::new(a.clone(), &b - &a).expect("composition arc");
        pieces.push(Piece::new(arc, fs.compose(&gs)));
    }
    let raw = PiecewiseMap::from_trusted(pieces, f.tag().join(g.tag()));
    canonicalize(&raw, raw.tag())
}

/// Inverse partial bijection; canonical.
pub fn invert(f: &PiecewiseMap) -> PiecewiseMap {
    let pieces = f.pieces().iter().map(Piece::inverted).collect();
    let raw = PiecewiseMap::from_trusted(pieces, f.tag());
    canonicalize(&raw, raw.tag())
}

/// f^n for any integer n, by repeated canonical composition.
pub fn power(f: &PiecewiseMap, n: i64) -> PiecewiseMap {
    let base = if n < 0 { invert(f) } else { f.canonical() };
    let mut acc = PiecewiseMap::identity(f.tag());
    for _ in 0..n.unsigned_abs() {
        acc = compose(&base, &acc);
    }
    acc
}

/// Germ on the side of a point, as (germ, lift of the point).
pub fn sided_germ(f: &PiecewiseMap, p: &SidedPoint) -> (Moebius, Rational) {
    let (i, l) = f.locate_sided(p.point.position(), p.side);
    (f.pieces()[i].germ.clone(), l)
}

pub fn side_of(orientation: i32) -> Side {
    Side::from_sign(orientation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn arc(l: Rational, len: Rational) -> Arc {
        Arc::new(l, len).unwrap()
    }

    fn rot(q: Rational) -> PiecewiseMap {
        PiecewiseMap::new(vec![Piece::new(Arc::full(), Moebius::translation(q))], PseudogroupTag::isom()).unwrap()
    }

    fn pl_map() -> PiecewiseMap {
        PiecewiseMap::new(
            vec![
                Piece::new(arc(int(0), ratio(1, 2)), Moebius::affine(ratio(1, 2), int(0))),
                Piece::new(arc(ratio(1, 2), ratio(1, 2)), Moebius::affine(ratio(3, 2), ratio(-1, 2))),
            ],
            PseudogroupTag::aff(),
        )
        .unwrap()
    }

    fn iet3() -> PiecewiseMap {
        PiecewiseMap::new(
            vec![
                Piece::new(arc(int(0), ratio(1, 2)), Moebius::translation(ratio(1, 2))),
                Piece::new(arc(ratio(1, 2), ratio(1, 3)), Moebius::translation(ratio(-1, 3))),
                Piece::new(arc(ratio(5, 6), ratio(1, 6)), Moebius::translation(ratio(-5, 6))),
            ],
            PseudogroupTag::isom(),
        )
        .unwrap()
    }

    #[test]
    fn artificial_cut_is_merged() {
        let two = PiecewiseMap::new(
            vec![
                Piece::new(arc(int(0), ratio(2, 3)), Moebius::translation(ratio(1, 3))),
                Piece::new(arc(ratio(2, 3), ratio(1, 3)), Moebius::translation(ratio(-2, 3))),
            ],
            PseudogroupTag::isom(),
        )
        .unwrap();
        let c = two.canonical();
        assert_eq!(c.pieces().len(), 1);
        assert_eq!(c.pieces()[0], Piece::new(Arc::full(), Moebius::translation(ratio(1, 3))));
        assert_eq!(match_at(&two, &ratio(2, 3)), MatchOrder::Full);
    }

    #[test]
    fn identity_in_halves() {
        let id = PiecewiseMap::new(
            vec![Piece::new(arc(int(0), ratio(1, 2)), Moebius::identity()), Piece::new(arc(ratio(1, 2), ratio(1, 2)), Moebius::identity())],
            PseudogroupTag::isom(),
        )
        .unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn group_law_examples() {
        let r = rot(ratio(1, 3));
        assert!(compose(&r, &r).same_element(&rot(ratio(2, 3))));
        let f = pl_map();
        assert!(compose(&f, &invert(&f)).is_identity());
        assert!(compose(&invert(&f), &f).is_identity());
        let t = iet3();
        let order = (1..=12).find(|&n| power(&t, n).is_identity());
        assert_eq!(order, Some(6));
    }

    #[test]
    fn match_orders() {
        let f = pl_map();
        assert_eq!(match_at(&f, &ratio(1, 2)), MatchOrder::Order0);
        assert_eq!(match_at(&f, &int(0)), MatchOrder::Order0);
        assert_eq!(match_at(&iet3(), &ratio(1, 2)), MatchOrder::None);
    }

    #[test]
    fn off_circle_seam_moves_cut_to_zero() {
        let r = PiecewiseMap::new(vec![Piece::new(arc(ratio(1, 4), int(1)), Moebius::translation(ratio(1, 3)))], PseudogroupTag::isom()).unwrap();
        let c = r.canonical();
        assert_eq!(c.pieces()[0].arc, Arc::full());
        assert!(c.same_element(&rot(ratio(1, 3))));
    }
}
