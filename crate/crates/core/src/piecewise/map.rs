//! Cofinite partial bijections of the circle given by finitely many Moebius pieces.

use num_traits::{One, Zero};

use crate::circle::{Arc, CirclePoint, Side, SidedPoint};
use crate::moebius::Moebius;
use crate::piecewise::tag::PseudogroupTag;
use crate::scalar::{floor_int, fmt_rational, frac, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("overlap: {0}")]
    Overlap(String),
    #[error("pole of piece {piece} inside its closed arc")]
    PoleInArc { piece: usize },
    #[error("piece {piece} is outside the {tag} class")]
    TagViolation { piece: usize, tag: String },
    #[error("not cofinite: {0}")]
    NotCofinite(String),
    #[error("malformed arc: {0}")]
    BadArc(String),
}

/// An arc of the circle with the germ acting on its standard lift.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub arc: Arc,
    pub germ: Moebius,
}

impl Piece {
    pub fn new(arc: Arc, germ: Moebius) -> Self {
        Piece { arc, germ }
    }

    /// Closed image interval [lo, hi] of the lifted arc.
    pub fn image_interval(&self) -> (Rational, Rational) {
        let y0 = self.germ.apply(self.arc.left()).expect("pole at arc end");
        let y1 = self.germ.apply(&self.arc.right()).expect("pole at arc end");
        if y0 <= y1 {
            (y0, y1)
        } else {
            (y1, y0)
        }
    }

    fn pole_in_closed_arc(&self) -> bool {
        match self.germ.pole() {
            Some(p) => &p >= self.arc.left() && p <= self.arc.right(),
            None => false,
        }
    }

    /// Image arc together with the inverse germ on its standard lift.
    pub fn inverted(&self) -> Piece {
        let (lo, hi) = self.image_interval();
        let k = floor_int(&lo);
        let left = &lo - Rational::from_integer(k.clone());
        let arc = Arc::new(left, hi - lo).expect("image arc");
        Piece { arc, germ: self.germ.invert().shift_domain(&k) }
    }

    /// Same piece with the germ post-composed by a deck translation so the
    /// image lift starts in [0, 1).
    pub fn normalized(self) -> Piece {
        let (lo, _) = self.image_interval();
        let k = floor_int(&lo);
        if k.is_zero() {
            self
        } else {
            Piece { germ: self.germ.deck_align(&-k), arc: self.arc }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseMap {
    pieces: Vec<Piece>,
    tag: PseudogroupTag,
}

fn check_cyclic_disjoint(arcs: &mut [(Rational, Rational)], what: &str) -> Result<(), MapError> {
    arcs.sort();
    let n = arcs.len();
    let mut total = Rational::zero();
    for i in 0..n {
        let (l, len) = &arcs[i];
        total += len;
        let r = l + len;
        let next_left = if i + 1 < n { arcs[i + 1].0.clone() } else { &arcs[0].0 + Rational::one() };
        if r > next_left {
            return Err(MapError::Overlap(format!("{what} arcs starting at {} and {}", fmt_rational(l), fmt_rational(&frac(&next_left)))));
        }
    }
    if !total.is_one() {
        return Err(MapError::NotCofinite(format!("{what} arcs cover total length {}", fmt_rational(&total))));
    }
    Ok(())
}

impl PiecewiseMap {
    /// Builds and validates.
    pub fn new(pieces: Vec<Piece>, tag: PseudogroupTag) -> Result<Self, MapError> {
        PiecewiseMap { pieces, tag }.validate()
    }

    /// Trusted constructor for pieces produced by the algebra; sorts by left end.
    pub(crate) fn from_trusted(mut pieces: Vec<Piece>, tag: PseudogroupTag) -> Self {
        pieces.sort_by(|a, b| a.arc.left().cmp(b.arc.left()));
        let m = PiecewiseMap { pieces, tag };
        debug_assert!(m.clone().validate().is_ok(), "algebra produced invalid map {m:?}");
        m
    }

    pub fn validate(mut self) -> Result<Self, MapError> {
        if self.pieces.is_empty() {
            return Err(MapError::NotCofinite("no pieces".into()));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if p.pole_in_closed_arc() {
                return Err(MapError::PoleInArc { piece: i });
            }
            if !self.tag.admits(&p.germ) {
                return Err(MapError::TagViolation { piece: i, tag: self.tag.to_string() });
            }
        }
        let mut dom: Vec<_> = self.pieces.iter().map(|p| (p.arc.left().clone(), p.arc.len().clone())).collect();
        check_cyclic_disjoint(&mut dom, "domain")?;
        let mut img = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let (lo, hi) = p.image_interval();
            let len = &hi - &lo;
            if len > Rational::one() {
                return Err(MapError::Overlap("an image wraps more than once".into()));
            }
            img.push((frac(&lo), len));
        }
        check_cyclic_disjoint(&mut img, "image")?;
        self.pieces.sort_by(|a, b| a.arc.left().cmp(b.arc.left()));
        Ok(self)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn tag(&self) -> PseudogroupTag {
        self.tag
    }

    pub fn with_tag(&self, tag: PseudogroupTag) -> Result<Self, MapError> {
        PiecewiseMap { pieces: self.pieces.clone(), tag }.validate()
    }

    pub fn identity(tag: PseudogroupTag) -> Self {
        PiecewiseMap { pieces: vec![Piece::new(Arc::full(), Moebius::identity())], tag }
    }

    /// Index of the last piece whose left end satisfies `pred`, falling back to the
    /// wrapping (last) piece.
    fn candidate(&self, x: &Rational, strict: bool) -> usize {
        let n = self.pieces.len();
        let idx = self.pieces.partition_point(|p| if strict { p.arc.left() < x } else { p.arc.left() <= x });
        if idx == 0 {
            n - 1
        } else {
            idx - 1
        }
    }

    /// Piece containing `x` in its open arc, with the lift of `x` there.
    pub fn locate(&self, x: &Rational) -> Option<(usize, Rational)> {
        let x0 = frac(x);
        let i = self.candidate(&x0, false);
        if let Some(l) = self.pieces[i].arc.lift_of(&x0) {
            return Some((i, l));
        }
        let last = self.pieces.len() - 1;
        self.pieces[last].arc.lift_of(&x0).map(|l| (last, l))
    }

    /// Piece carrying the germ on the given side of `x`, with the lift of `x`.
    pub fn locate_sided(&self, x: &Rational, side: Side) -> (usize, Rational) {
        let x0 = frac(x);
        let i = self.candidate(&x0, side == Side::Minus);
        if let Some(l) = self.pieces[i].arc.sided_lift_of(&x0, side) {
            return (i, l);
        }
        let last = self.pieces.len() - 1;
        let l = self.pieces[last].arc.sided_lift_of(&x0, side).expect("valid cofinite map covers every side");
        (last, l)
    }

    /// Value at an interior point of a piece, reduced mod 1.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let (i, l) = self.locate(x)?;
        Some(frac(&self.pieces[i].germ.apply(&l).expect("pole-free piece")))
    }

    /// One-sided limit and its side.
    pub fn evaluate_sided(&self, p: &SidedPoint) -> SidedPoint {
        let (i, l) = self.locate_sided(p.point.position(), p.side);
        let g = &self.pieces[i].germ;
        let v = g.apply(&l).expect("pole-free piece");
        SidedPoint::new(CirclePoint::new(v), p.side.times(g.orientation()))
    }

    /// One-sided jet: lifted value, first and second derivative.
    pub fn sided_jet(&self, p: &SidedPoint) -> (Rational, Rational, Rational) {
        let (i, l) = self.locate_sided(p.point.position(), p.side);
        self.pieces[i].germ.jet(&l).expect("pole-free piece")
    }

    /// Sign of the germ on the given side.
    pub fn sided_orientation(&self, p: &SidedPoint) -> i32 {
        let (i, _) = self.locate_sided(p.point.position(), p.side);
        self.pieces[i].germ.orientation()
    }

    /// End points of the pieces, as circle points in [0,1), sorted.
    pub fn cut_points(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.pieces.iter().flat_map(|p| [p.arc.left().clone(), frac(&p.arc.right())]).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Increasing on every piece.
    pub fn is_orientation_preserving(&self) -> bool {
        self.pieces.iter().all(|p| p.germ.orientation() > 0)
    }

    /// All germ values continuous across every cut.
    pub fn is_homeomorphism(&self) -> bool {
        self.cut_points().iter().all(|x| {
            let l = self.evaluate_sided(&SidedPoint::minus(x.clone()));
            let r = self.evaluate_sided(&SidedPoint::plus(x.clone()));
            l.point == r.point
        })
    }
}
