//! Finitely supported, tau-symmetric structure functions on sided points, and
//! their pullbacks by piecewise projective maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circle::{CirclePoint, Side, SidedPoint};
use crate::piecewise::algebra::invert;
use crate::piecewise::PiecewiseMap;
use crate::scalar::{fmt_rational, int, parse_rational, Rational};

/// A value (t, u); level-1 structures keep u = 0.
pub type JetValue = (Rational, Rational);

pub fn trivial_value() -> JetValue {
    (Rational::one(), Rational::zero())
}

/// tau(t, u) = (1/t, -t u).
pub fn tau_value(v: &JetValue) -> JetValue {
    (v.0.recip(), -(&v.0 * &v.1))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("structure level must be 1 or 2, got {0}")]
    BadLevel(u8),
    #[error("non-positive ratio at {0}")]
    NonPositive(String),
    #[error("level-1 structure carries a second coordinate at {0}")]
    LevelOneJet(String),
    #[error("values at {0} and its hat are not tau-related")]
    NotSymmetric(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StructureFunction {
    level: u8,
    values: BTreeMap<SidedPoint, JetValue>,
    undefined: BTreeSet<CirclePoint>,
}

impl StructureFunction {
    /// The constant function (1) or (1, 0).
    pub fn trivial(level: u8) -> Self {
        assert!(level == 1 || level == 2, "structure level must be 1 or 2");
        StructureFunction { level, values: BTreeMap::new(), undefined: BTreeSet::new() }
    }

    /// Builds a structure from explicit values. A point listed without its hat
    /// gets the tau-partner filled in; listing both requires them to agree.
    pub fn new(
        level: u8,
        entries: impl IntoIterator<Item = (SidedPoint, JetValue)>,
        undefined: impl IntoIterator<Item = CirclePoint>,
    ) -> Result<Self, StructureError> {
        if level != 1 && level != 2 {
            return Err(StructureError::BadLevel(level));
        }
        let undefined: BTreeSet<CirclePoint> = undefined.into_iter().collect();
        let mut given: BTreeMap<SidedPoint, JetValue> = BTreeMap::new();
        for (p, v) in entries {
            if !v.0.is_positive() {
                return Err(StructureError::NonPositive(format!("{p:?}")));
            }
            if level == 1 && !v.1.is_zero() {
                return Err(StructureError::LevelOneJet(format!("{p:?}")));
            }
            if undefined.contains(&p.point) {
                continue;
            }
            given.insert(p, v);
        }
        let mut values = BTreeMap::new();
        for (p, v) in &given {
            let partner = tau_value(v);
            if let Some(w) = given.get(&p.hat()) {
                if *w != partner {
                    return Err(StructureError::NotSymmetric(format!("{p:?}")));
                }
            }
            if *v != trivial_value() {
                values.insert(p.clone(), v.clone());
                values.insert(p.hat(), partner);
            }
        }
        Ok(StructureFunction { level, values, undefined })
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    /// Value at a sided point; None where undefined.
    pub fn value(&self, p: &SidedPoint) -> Option<JetValue> {
        if self.undefined.contains(&p.point) {
            return None;
        }
        Some(self.values.get(p).cloned().unwrap_or_else(trivial_value))
    }

    /// Sided points with a non-trivial value.
    pub fn support(&self) -> impl Iterator<Item = (&SidedPoint, &JetValue)> {
        self.values.iter()
    }

    pub fn support_points(&self) -> BTreeSet<CirclePoint> {
        self.values.keys().map(|p| p.point.clone()).collect()
    }

    pub fn undefined_set(&self) -> &BTreeSet<CirclePoint> {
        &self.undefined
    }

    pub fn is_total(&self) -> bool {
        self.undefined.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.is_empty() && self.undefined.is_empty()
    }

    /// tau-symmetry off the undefined set; holds by construction, re-checked here.
    pub fn is_tau_symmetric(&self) -> bool {
        self.values.iter().all(|(p, v)| self.values.get(&p.hat()) == Some(&tau_value(v)))
    }

    /// Agreement at every sided point where both are defined.
    pub fn agrees_off_undefined(&self, other: &StructureFunction) -> bool {
        let keys: BTreeSet<&SidedPoint> = self.values.keys().chain(other.values.keys()).collect();
        keys.into_iter().all(|p| match (self.value(p), other.value(p)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        })
    }

    /// Same level, with level-2 data dropped or zero-extended.
    pub fn with_level(&self, level: u8) -> StructureFunction {
        let entries = self.values.iter().map(|(p, v)| (p.clone(), (v.0.clone(), if level == 1 { int(0) } else { v.1.clone() })));
        StructureFunction::new(level, entries, self.undefined.iter().cloned()).expect("level change keeps symmetry")
    }
}

impl fmt::Debug for StructureFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu{}{{", self.level)?;
        for (i, (p, (t, u))) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p:?}: ({}, {})", fmt_rational(t), fmt_rational(u))?;
        }
        if !self.undefined.is_empty() {
            write!(f, "; undefined {:?}", self.undefined)?;
        }
        write!(f, "}}")
    }
}

/// Values of f^* nu at x, or None where x must be left undefined.
fn pullback_at(f: &PiecewiseMap, nu: &StructureFunction, x: &SidedPoint) -> Option<JetValue> {
    let fx = f.evaluate_sided(x);
    let fh = f.evaluate_sided(&x.hat());
    if fx.point != fh.point {
        // outer discontinuity: the two sides see unrelated values of nu
        return None;
    }
    let (t, u) = nu.value(&fx)?;
    let (_, d1, d2) = f.sided_jet(x);
    let (_, e1, e2) = f.sided_jet(&x.hat());
    let t_new = &e1 / &d1 * &t;
    if nu.level == 1 {
        return Some((t_new, int(0)));
    }
    let two = int(2);
    let u_new = &d1 * &u - &d2 / (&two * &d1) + &e2 * &d1 / (&two * &e1 * &e1 * &t);
    Some((t_new, u_new))
}

/// (f^* nu)(x) = f'(x^)/f'(x) nu_1(f x) and, at level 2,
/// f'(x) nu_2(f x) - f''(x)/(2 f'(x)) + f''(x^) f'(x) / (2 f'(x^)^2 nu_1(f x)).
/// Points where f is discontinuous, or lands where nu is undefined, become undefined.
pub fn pullback(f: &PiecewiseMap, nu: &StructureFunction) -> StructureFunction {
    let c = f.canonical();
    let finv = invert(&c);
    let mut candidates: BTreeSet<SidedPoint> = BTreeSet::new();
    for x in c.cut_points() {
        candidates.insert(SidedPoint::minus(x.clone()));
        candidates.insert(SidedPoint::plus(x));
    }
    for (y, _) in nu.support() {
        let x = finv.evaluate_sided(y);
        candidates.insert(x.hat());
        candidates.insert(x);
    }
    for y in nu.undefined_set() {
        let x = finv.evaluate_sided(&SidedPoint::new(y.clone(), Side::Plus));
        candidates.insert(x.hat());
        candidates.insert(x);
    }
    let mut values = Vec::new();
    let mut undefined = BTreeSet::new();
    for x in candidates {
        match pullback_at(&c, nu, &x) {
            Some(v) => values.push((x, v)),
            None => {
                undefined.insert(x.point.clone());
            }
        }
    }
    StructureFunction::new(nu.level, values, undefined).expect("pullback preserves tau-symmetry")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothnessReport {
    /// f^* nu_0 = nu_0.
    pub by_pullback: bool,
    /// No breakpoint of the canonical form survives at match order 2.
    pub by_breakpoints: bool,
}

impl SmoothnessReport {
    pub fn agree(&self) -> bool {
        self.by_pullback == self.by_breakpoints
    }
}

pub fn smoothness_report(f: &PiecewiseMap) -> SmoothnessReport {
    let by_pullback = pullback(f, &StructureFunction::trivial(2)).is_trivial();
    let by_breakpoints = f.germ_breakpoints().is_empty();
    SmoothnessReport { by_pullback, by_breakpoints }
}

/// Whether f is projective, i.e. preserves the trivial structure. Both
/// characterizations are computed; a disagreement is a bug and panics.
pub fn smoothness_test(f: &PiecewiseMap) -> bool {
    let r = smoothness_report(f);
    assert!(r.agree(), "smoothness characterizations disagree: {r:?}");
    r.by_pullback
}

#[derive(Serialize, Deserialize)]
struct ValueJson {
    point: CirclePoint,
    side: Side,
    #[serde(with = "crate::json::rational")]
    t: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    level: u8,
    values: Vec<ValueJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    undefined: Vec<CirclePoint>,
}

impl Serialize for StructureFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let values = self
            .values
            .iter()
            .map(|(p, (t, u))| ValueJson {
                point: p.point.clone(),
                side: p.side,
                t: t.clone(),
                u: (self.level == 2).then(|| fmt_rational(u)),
            })
            .collect();
        StructureJson { level: self.level, values, undefined: self.undefined.iter().cloned().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructureFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = StructureJson::deserialize(d)?;
        let mut entries = Vec::new();
        for v in j.values {
            let u = match v.u {
                Some(s) => parse_rational(&s).map_err(D::Error::custom)?,
                None => int(0),
            };
            entries.push((SidedPoint::new(v.point, v.side), (v.t, u)));
        }
        StructureFunction::new(j.level, entries, j.undefined).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::ratio;

    fn nu1(x: Rational, t: Rational) -> StructureFunction {
        StructureFunction::new(1, [(SidedPoint::plus(x), (t, int(0)))], []).unwrap()
    }

    #[test]
    fn rotation_moves_support() {
        let nu = nu1(ratio(1, 2), int(2));
        let p = pullback(&corpus::rotation(ratio(1, 4)), &nu);
        assert_eq!(p, nu1(ratio(1, 4), int(2)));
    }

    #[test]
    fn pl_map_pulls_back_trivial_to_breakpoints() {
        let p = pullback(&corpus::pl_map(), &StructureFunction::trivial(2));
        let pts: Vec<CirclePoint> = p.support_points().into_iter().collect();
        assert_eq!(pts, vec![CirclePoint::new(int(0)), CirclePoint::new(ratio(1, 2))]);
        assert_eq!(p.value(&SidedPoint::plus(int(0))).unwrap().0, int(3));
        assert!(p.is_tau_symmetric());
    }

    #[test]
    fn iet_pullback_marks_discontinuities() {
        let p = pullback(&corpus::iet3(), &StructureFunction::trivial(2));
        assert!(p.support().next().is_none());
        assert_eq!(p.undefined_set().len(), 3);
    }

    #[test]
    fn one_sided_entries_are_completed() {
        let nu = StructureFunction::new(2, [(SidedPoint::plus(int(0)), (int(2), int(3)))], []).unwrap();
        assert_eq!(nu.value(&SidedPoint::minus(int(0))), Some((ratio(1, 2), int(-6))));
        let bad = StructureFunction::new(
            2,
            [(SidedPoint::plus(int(0)), (int(2), int(3))), (SidedPoint::minus(int(0)), (int(2), int(3)))],
            [],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn json_round_trip() {
        let nu = StructureFunction::new(2, [(SidedPoint::plus(ratio(1, 2)), (int(1), int(-4)))], []).unwrap();
        let s = serde_json::to_string(&nu).unwrap();
        let back: StructureFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(nu, back);
    }
}
