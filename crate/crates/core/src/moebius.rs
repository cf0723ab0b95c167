//! Homographies x -> (ax+b)/(cx+d) acting on a real lift of the circle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::quadratic::QuadraticNumber;
use crate::scalar::{ExactField, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("evaluation at a pole of the homography")]
pub struct PoleError;

/// 2x2 invertible matrix acting projectively. Over the rationals the
/// representative is kept canonical, so `==` is equality in PGL2(Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoebiusOf<F> {
    a: F,
    b: F,
    c: F,
    d: F,
}

pub type Moebius = MoebiusOf<Rational>;

impl<F: ExactField> MoebiusOf<F> {
    /// Raw constructor; no normalisation. Panics on a singular matrix.
    pub fn from_entries(a: F, b: F, c: F, d: F) -> Self {
        let m = MoebiusOf { a, b, c, d };
        assert!(!m.det().is_zero(), "singular matrix");
        m
    }

    pub fn a(&self) -> &F {
        &self.a
    }
    pub fn b(&self) -> &F {
        &self.b
    }
    pub fn c(&self) -> &F {
        &self.c
    }
    pub fn d(&self) -> &F {
        &self.d
    }

    pub fn det(&self) -> F {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> F {
        self.a.clone() + self.d.clone()
    }

    fn denominator(&self, x: &F) -> F {
        self.c.clone() * x.clone() + self.d.clone()
    }

    pub fn apply(&self, x: &F) -> Result<F, PoleError> {
        let den = self.denominator(x);
        if den.is_zero() {
            return Err(PoleError);
        }
        Ok((self.a.clone() * x.clone() + self.b.clone()) / den)
    }

    /// Value, first and second derivative at `x`.
    pub fn jet(&self, x: &F) -> Result<(F, F, F), PoleError> {
        let den = self.denominator(x);
        if den.is_zero() {
            return Err(PoleError);
        }
        let det = self.det();
        let value = (self.a.clone() * x.clone() + self.b.clone()) / den.clone();
        let d1 = det.clone() / (den.clone() * den.clone());
        let two = F::one() + F::one();
        let d2 = -(two * self.c.clone() * det) / (den.clone() * den.clone() * den);
        Ok((value, d1, d2))
    }

    /// Matrix product, acting as `self` after `other`.
    pub fn mul_raw(&self, o: &Self) -> Self {
        MoebiusOf {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        }
    }

    pub fn adjugate(&self) -> Self {
        MoebiusOf { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, o: &Self) -> bool {
        let p = [&self.a, &self.b, &self.c, &self.d];
        let q = [&o.a, &o.b, &o.c, &o.d];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if p[i].clone() * q[j].clone() != p[j].clone() * q[i].clone() {
                    return false;
                }
            }
        }
        true
    }

    pub fn map_entries<G: ExactField>(&self, f: impl Fn(&F) -> G) -> MoebiusOf<G> {
        MoebiusOf { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }
}

impl Moebius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self::from_entries(a, b, c, d).canonical()
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let q = |n: i64| Rational::from_integer(BigInt::from(n));
        Self::new(q(a), q(b), q(c), q(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn translation(n: Rational) -> Self {
        Self::new(Rational::one(), n, Rational::zero(), Rational::one())
    }

    /// x -> slope*x + offset
    pub fn affine(slope: Rational, offset: Rational) -> Self {
        Self::new(slope, offset, Rational::zero(), Rational::one())
    }

    /// Integer entries with content 1, first nonzero entry of (a, c) positive.
    fn canonical(self) -> Self {
        let entries = [&self.a, &self.b, &self.c, &self.d];
        let mut l = BigInt::one();
        for e in entries {
            l = l.lcm(e.denom());
        }
        let ints: Vec<BigInt> = entries.iter().map(|e| (*e * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
        }
        let lead_negative = if !ints[0].is_zero() { ints[0].is_negative() } else { ints[2].is_negative() };
        if lead_negative {
            g = -g;
        }
        let r = |n: &BigInt| Rational::from_integer(n / &g);
        MoebiusOf { a: r(&ints[0]), b: r(&ints[1]), c: r(&ints[2]), d: r(&ints[3]) }
    }

    pub fn compose(&self, o: &Self) -> Self {
        self.mul_raw(o).canonical()
    }

    pub fn invert(&self) -> Self {
        self.adjugate().canonical()
    }

    /// Post-composition with the deck translation x -> x + n.
    pub fn deck_align(&self, n: &BigInt) -> Self {
        Self::translation(Rational::from_integer(n.clone())).compose(self)
    }

    /// `self` precomposed with x -> x + n.
    pub fn shift_domain(&self, n: &BigInt) -> Self {
        self.compose(&Self::translation(Rational::from_integer(n.clone())))
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    /// +1 when increasing away from the pole, -1 when decreasing.
    pub fn orientation(&self) -> i32 {
        if self.det().is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn pole(&self) -> Option<Rational> {
        if self.c.is_zero() {
            None
        } else {
            Some(-self.d.clone() / self.c.clone())
        }
    }

    /// Affine slope, when the germ is affine.
    pub fn slope(&self) -> Option<Rational> {
        if self.c.is_zero() {
            Some(self.a.clone() / self.d.clone())
        } else {
            None
        }
    }

    pub fn to_quadratic(&self) -> MoebiusOf<QuadraticNumber> {
        self.map_entries(|q| QuadraticNumber::rational(q.clone()))
    }

    pub fn entries_vec(&self) -> [Rational; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

pub fn mob_apply(m: &Moebius, x: &Rational) -> Result<Rational, PoleError> {
    m.apply(x)
}

pub fn mob_jet(m: &Moebius, x: &Rational) -> Result<(Rational, Rational, Rational), PoleError> {
    m.jet(x)
}

pub fn mob_compose(m1: &Moebius, m2: &Moebius) -> Moebius {
    m1.compose(m2)
}

pub fn mob_invert(m: &Moebius) -> Moebius {
    m.invert()
}

pub fn deck_align(m: &Moebius, n: i64) -> Moebius {
    m.deck_align(&BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn apply_examples() {
        assert_eq!(mob_apply(&Moebius::identity(), &ratio(7, 3)), Ok(ratio(7, 3)));
        assert_eq!(mob_apply(&Moebius::from_ints(0, 1, 1, 0), &int(2)), Ok(ratio(1, 2)));
        assert_eq!(mob_apply(&Moebius::from_ints(1, 1, 1, 2), &int(0)), Ok(ratio(1, 2)));
        assert_eq!(mob_apply(&Moebius::from_ints(1, 1, 1, 2), &int(-2)), Err(PoleError));
    }

    #[test]
    fn jet_examples() {
        assert_eq!(mob_jet(&Moebius::identity(), &int(5)), Ok((int(5), int(1), int(0))));
        assert_eq!(
            mob_jet(&Moebius::from_ints(1, 1, 1, 2), &int(0)),
            Ok((ratio(1, 2), ratio(1, 4), ratio(-1, 4)))
        );
        assert_eq!(mob_jet(&Moebius::from_ints(2, 0, 0, 1), &ratio(1, 3)), Ok((ratio(2, 3), int(2), int(0))));
    }

    #[test]
    fn compose_invert_deck() {
        let m = Moebius::from_ints(1, 1, 1, 2);
        assert_eq!(mob_compose(&Moebius::identity(), &m), m);
        assert_eq!(mob_invert(&Moebius::from_ints(2, 0, 0, 1)), Moebius::from_ints(1, 0, 0, 2));
        assert_eq!(mob_compose(&m, &mob_invert(&m)), Moebius::identity());
        assert_eq!(deck_align(&Moebius::identity(), 1), Moebius::from_ints(1, 1, 0, 1));
        assert_eq!(deck_align(&m, 0), m);
        assert_eq!(deck_align(&deck_align(&m, 1), -1), m);
    }

    #[test]
    fn canonical_representative() {
        let m = Moebius::new(ratio(-1, 2), int(0), int(0), ratio(-3, 4));
        assert_eq!(m.entries_vec(), [int(2), int(0), int(0), int(3)]);
        let flip = Moebius::from_ints(0, 1, -1, 0);
        assert_eq!(flip.entries_vec(), [int(0), int(-1), int(1), int(0)]);
    }
}
