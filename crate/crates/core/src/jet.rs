//! Two-jets s -> d1*s + d2*s^2/2 of germs fixing a point, under composition.

use num_traits::{One, Zero};

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Jet2 {
    pub d1: Rational,
    pub d2: Rational,
}

impl Jet2 {
    pub fn new(d1: Rational, d2: Rational) -> Self {
        assert!(!d1.is_zero(), "jet with vanishing derivative");
        Jet2 { d1, d2 }
    }

    pub fn identity() -> Self {
        Jet2 { d1: Rational::one(), d2: Rational::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.d1.is_one() && self.d2.is_zero()
    }

    /// self after other
    pub fn then_after(&self, other: &Jet2) -> Jet2 {
        Jet2 {
            d1: &self.d1 * &other.d1,
            d2: &self.d1 * &other.d2 + &self.d2 * &other.d1 * &other.d1,
        }
    }

    pub fn inverse(&self) -> Jet2 {
        let a3 = &self.d1 * &self.d1 * &self.d1;
        Jet2 { d1: Rational::one() / &self.d1, d2: -(&self.d2) / a3 }
    }
}
