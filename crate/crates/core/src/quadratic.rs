//! Numbers a + b*sqrt(d) with rational a, b and square-free d.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::{fmt_rational, Rational};

/// Exact element of Q(sqrt d). `d == 1` encodes plain rationals and forces `b == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadraticNumber {
    /// `d` must be positive; its square part is moved into `b`.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        assert!(d.is_positive(), "radicand must be positive");
        let (s, core) = square_free_split(&d);
        Self::normalized(a, b * Rational::from_integer(s), core)
    }

    fn normalized(a: Rational, b: Rational, d: BigInt) -> Self {
        if d.is_one() {
            QuadraticNumber { a: a + b, b: Rational::zero(), d }
        } else if b.is_zero() {
            QuadraticNumber { a, b, d: BigInt::one() }
        } else {
            QuadraticNumber { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        QuadraticNumber { a, b: Rational::zero(), d: BigInt::one() }
    }

    /// The non-negative square root of a non-negative rational.
    pub fn sqrt_of(q: &Rational) -> Self {
        assert!(!q.is_negative(), "square root of a negative rational");
        // sqrt(p/q) = sqrt(p*q)/q
        let pq = q.numer() * q.denom();
        if pq.is_zero() {
            return Self::zero();
        }
        let (s, core) = square_free_split(&pq);
        let coeff = Rational::new(s, q.denom().clone());
        Self::normalized(Rational::zero(), coeff, core)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::normalized(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// a^2 - d b^2
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rational::from_integer(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    fn common_d(&self, other: &Self) -> BigInt {
        if self.d.is_one() {
            other.d.clone()
        } else if other.d.is_one() || self.d == other.d {
            self.d.clone()
        } else {
            panic!("quadratic numbers from different fields: d = {} and d = {}", self.d, other.d)
        }
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// n = s^2 * core with core square-free (exact below the trial bound squared;
/// beyond it the remaining cofactor is only tested for being a perfect square).
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive());
    let mut m = n.clone();
    let mut s = BigInt::one();
    let mut core = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            s *= bp.pow(e / 2);
            if e % 2 == 1 {
                core *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        match crate::scalar::perfect_sqrt(&m) {
            Some(r) => s *= r,
            None => core *= m,
        }
    }
    (s, core)
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl Zero for QuadraticNumber {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadraticNumber {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Neg for QuadraticNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::normalized(-self.a, -self.b, self.d)
    }
}

impl Add for QuadraticNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.common_d(&o);
        Self::normalized(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for QuadraticNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for QuadraticNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.common_d(&o);
        let dq = Rational::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dq;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::normalized(a, b, d)
    }
}

impl Div for QuadraticNumber {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero quadratic number");
        let num = self * o.conjugate();
        let d = num.d.clone();
        Self::normalized(num.a / &n, num.b / n, d)
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", fmt_rational(&self.a), fmt_rational(&self.b), self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn qn(a: Rational, b: Rational, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(a, b, BigInt::from(d))
    }

    #[test]
    fn square_parts_move_out() {
        let x = qn(int(0), int(1), 12);
        assert_eq!(x, qn(int(0), int(2), 3));
        assert_eq!(qn(int(1), int(1), 4), QuadraticNumber::rational(int(3)));
        assert_eq!(QuadraticNumber::sqrt_of(&ratio(1, 2)), qn(int(0), ratio(1, 2), 2));
    }

    #[test]
    fn golden_ratio_identity() {
        let phi = qn(ratio(1, 2), ratio(1, 2), 5);
        assert_eq!(phi.clone() * phi.clone(), phi.clone() + QuadraticNumber::one());
        assert!(phi > QuadraticNumber::rational(ratio(161, 100)));
        assert!(phi < QuadraticNumber::rational(ratio(162, 100)));
    }

    #[test]
    fn signum_of_mixed_terms() {
        assert_eq!(qn(int(3), int(-2), 2).signum(), 1); // 3 - 2.83
        assert_eq!(qn(int(2), int(-2), 2).signum(), -1);
        assert_eq!(qn(int(-3), int(2), 2).signum(), -1);
    }
}
