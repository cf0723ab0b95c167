//! Explicit commensurating actions on sided pairs, sided pairs with a ratio,
//! and sided points with a 2-jet, together with their commensurated subsets.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::circle::SidedPoint;
use crate::partial_action::SingularityProfile;
use crate::piecewise::algebra::invert;
use crate::piecewise::PiecewiseMap;
use crate::scalar::{frac, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct L0Point {
    pub p: SidedPoint,
    pub q: SidedPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct L1Point {
    pub p: SidedPoint,
    pub q: SidedPoint,
    #[serde(with = "crate::json::rational")]
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct L2Point {
    pub p: SidedPoint,
    #[serde(with = "crate::json::rational")]
    pub t: Rational,
    #[serde(with = "crate::json::rational")]
    pub u: Rational,
}

impl L2Point {
    pub fn new(p: SidedPoint, t: Rational, u: Rational) -> Self {
        assert!(t.is_positive(), "L2 ratio must be positive");
        L2Point { p, t, u }
    }

    /// The base point of the commensurated subset over `p`.
    pub fn trivial(p: SidedPoint) -> Self {
        L2Point { p, t: int(1), u: int(0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    /// The 2-jet action is only natural where the map is continuous.
    #[error("map is discontinuous at the base point")]
    Discontinuous,
}

pub fn act_l0(f: &PiecewiseMap, x: &L0Point) -> L0Point {
    L0Point { p: f.evaluate_sided(&x.p), q: f.evaluate_sided(&x.q) }
}

/// Multiplies the ratio by |f'(p)| / |f'(q)|.
pub fn act_l1(f: &PiecewiseMap, x: &L1Point) -> L1Point {
    let (_, dp, _) = f.sided_jet(&x.p);
    let (_, dq, _) = f.sided_jet(&x.q);
    L1Point { p: f.evaluate_sided(&x.p), q: f.evaluate_sided(&x.q), t: &x.t * dp.abs() / dq.abs() }
}

fn continuous_at(f: &PiecewiseMap, p: &SidedPoint) -> bool {
    let a = f.evaluate_sided(p);
    let b = f.evaluate_sided(&p.hat());
    a.point == b.point
}

/// (x,t,u) -> (f(x), f'(x)/f'(x^) t, u/f'(x) + f''(x)/(2f'(x)^2) - f''(x^)/(2 f'(x) f'(x^) t)),
/// all jets one-sided.
pub fn act_l2(f: &PiecewiseMap, x: &L2Point) -> Result<L2Point, ModelError> {
    if !continuous_at(f, &x.p) {
        return Err(ModelError::Discontinuous);
    }
    let (_, d1, d2) = f.sided_jet(&x.p);
    let (_, e1, e2) = f.sided_jet(&x.p.hat());
    let two = int(2);
    let t = &d1 / &e1 * &x.t;
    let u = &x.u / &d1 + &d2 / (&two * &d1 * &d1) - &e2 / (&two * &d1 * &e1 * &x.t);
    Ok(L2Point { p: f.evaluate_sided(&x.p), t, u })
}

/// (x,t,u) -> (x^, 1/t, -t u).
pub fn tau(x: &L2Point) -> L2Point {
    L2Point { p: x.p.hat(), t: x.t.recip(), u: -(&x.t * &x.u) }
}

/// An element of one of the three models.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelPoint {
    L0(L0Point),
    L1(L1Point),
    L2(L2Point),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDiff {
    pub level: u8,
    /// M minus f^{-1} M: elements that f moves out of M.
    pub leaving: BTreeSet<ModelPoint>,
    /// M minus f M.
    pub entering: BTreeSet<ModelPoint>,
}

impl ModelDiff {
    /// |leaving| = 2 k_{<=i} under the ordered-pair convention.
    pub fn matches_profile(&self, profile: &SingularityProfile) -> bool {
        self.leaving.len() == 2 * profile.cumulative(self.level as usize)
    }
}

/// Sided points over the cuts of the canonical form; off these, every model
/// point of M stays in M.
fn sided_cut_points(f: &PiecewiseMap) -> Vec<SidedPoint> {
    f.cut_points()
        .into_iter()
        .flat_map(|x| [SidedPoint::minus(x.clone()), SidedPoint::plus(x)])
        .collect()
}

fn leaving_set(f: &PiecewiseMap, level: u8) -> BTreeSet<ModelPoint> {
    let c = f.canonical();
    let mut out = BTreeSet::new();
    for y in sided_cut_points(&c) {
        let fy = c.evaluate_sided(&y);
        let fh = c.evaluate_sided(&y.hat());
        let pair_stays = fh == fy.hat();
        match level {
            0 => {
                if !pair_stays {
                    out.insert(ModelPoint::L0(L0Point { p: y.clone(), q: y.hat() }));
                }
            }
            1 => {
                let x = L1Point { p: y.clone(), q: y.hat(), t: Rational::one() };
                let fx = act_l1(&c, &x);
                if !pair_stays || !fx.t.is_one() {
                    out.insert(ModelPoint::L1(x));
                }
            }
            _ => {
                let x = L2Point::trivial(y.clone());
                let stays = match act_l2(&c, &x) {
                    Ok(fx) => fx.t.is_one() && fx.u.is_zero(),
                    // both sides of a discontinuity are counted as leaving
                    Err(ModelError::Discontinuous) => false,
                };
                if !stays {
                    out.insert(ModelPoint::L2(x));
                }
            }
        }
    }
    out
}

/// Difference sets of the commensurated subset at `level` (0, 1 or 2).
pub fn model_diff(f: &PiecewiseMap, level: u8) -> ModelDiff {
    assert!(level <= 2, "model level above 2");
    ModelDiff { level, leaving: leaving_set(f, level), entering: leaving_set(&invert(f), level) }
}

/// Base point lift in [0,1); convenience for fuzzers.
pub fn sided(x: Rational, plus: bool) -> SidedPoint {
    let x = frac(&x);
    if plus {
        SidedPoint::plus(x)
    } else {
        SidedPoint::minus(x)
    }
}
