//! Points, arcs and sided points of the circle R/Z.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{fmt_rational, frac, Rational};

/// A point of R/Z, stored by its representative in [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    /// Reduces any real representative mod 1.
    pub fn new(x: Rational) -> Self {
        CirclePoint(frac(&x))
    }

    pub fn zero() -> Self {
        CirclePoint(Rational::zero())
    }

    pub fn position(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn from_sign(s: i32) -> Side {
        if s >= 0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }

    pub fn times(self, orientation: i32) -> Side {
        Side::from_sign(self.sign() * orientation)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Minus => "-",
        }
    }
}

/// Element of X^+- : a point together with the side from which it is approached.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SidedPoint {
    pub point: CirclePoint,
    pub side: Side,
}

impl SidedPoint {
    pub fn new(point: CirclePoint, side: Side) -> Self {
        SidedPoint { point, side }
    }

    pub fn plus(x: Rational) -> Self {
        SidedPoint::new(CirclePoint::new(x), Side::Plus)
    }

    pub fn minus(x: Rational) -> Self {
        SidedPoint::new(CirclePoint::new(x), Side::Minus)
    }

    /// The involution x -> x^ flipping the side.
    pub fn hat(&self) -> Self {
        SidedPoint { point: self.point.clone(), side: self.side.flip() }
    }
}

impl fmt::Debug for SidedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.point, self.side.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArcError {
    #[error("arc left end {0} outside [0,1)")]
    LeftOutOfRange(String),
    #[error("arc length {0} outside (0,1]")]
    LengthOutOfRange(String),
}

/// The open lifted interval (left, left + len), with left in [0,1) and 0 < len <= 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    left: Rational,
    len: Rational,
}

impl Arc {
    pub fn new(left: Rational, len: Rational) -> Result<Self, ArcError> {
        if left.is_negative() || left >= Rational::one() {
            return Err(ArcError::LeftOutOfRange(fmt_rational(&left)));
        }
        if !len.is_positive() || len > Rational::one() {
            return Err(ArcError::LengthOutOfRange(fmt_rational(&len)));
        }
        Ok(Arc { left, len })
    }

    pub fn full() -> Self {
        Arc { left: Rational::zero(), len: Rational::one() }
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn len(&self) -> &Rational {
        &self.len
    }

    /// Right end of the lift, in (0, 2).
    pub fn right(&self) -> Rational {
        &self.left + &self.len
    }

    pub fn is_full(&self) -> bool {
        self.len.is_one()
    }

    /// The lift of `x` lying in the open lifted interval, if any.
    pub fn lift_of(&self, x: &Rational) -> Option<Rational> {
        let base = frac(x);
        let r = self.right();
        [base.clone(), base + Rational::one()].into_iter().find(|c| *c > self.left && *c < r)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lift_of(x).is_some()
    }

    /// Lift of `x` such that the germ on the given side of `x` lives in this arc:
    /// for `Plus`, x is in [left, right); for `Minus`, x is in (left, right].
    pub fn sided_lift_of(&self, x: &Rational, side: Side) -> Option<Rational> {
        let base = frac(x);
        let r = self.right();
        for cand in [base.clone(), base + Rational::one()] {
            let ok = match side {
                Side::Plus => cand >= self.left && cand < r,
                Side::Minus => cand > self.left && cand <= r,
            };
            if ok {
                return Some(cand);
            }
        }
        None
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, +{})", fmt_rational(&self.left), fmt_rational(&self.len))
    }
}
