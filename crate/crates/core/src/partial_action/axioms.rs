//! Check of the partial-action axiom a(f) o a(g) contained in a(f o g).

use std::collections::BTreeSet;

use crate::circle::{CirclePoint, SidedPoint};
use crate::partial_action::singularity::indeterminacy_set;
use crate::piecewise::algebra::{composition_cuts, compose};
use crate::piecewise::{PiecewiseMap, PseudogroupTag};
use crate::scalar::{midpoint, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    /// The composed canonical forms are a restriction of the canonical form of the composition.
    pub holds: bool,
    /// The inclusion of domains is proper.
    pub strict: bool,
    /// Points of the domain of a(f o g) outside the domain of a(f) o a(g).
    pub gained: BTreeSet<CirclePoint>,
}

/// Value of the canonical partial action at a point outside its indeterminacy set.
fn value_at(f: &PiecewiseMap, x: &Rational) -> CirclePoint {
    f.evaluate_sided(&SidedPoint::plus(x.clone())).point
}

/// Compares a(f) o a(g) with a(f o g) on all breakpoints and on one interior
/// point of every arc between them.
pub fn axioms_check(f: &PiecewiseMap, g: &PiecewiseMap, tag: PseudogroupTag) -> AxiomReport {
    let fc = f.canonical();
    let gc = g.canonical();
    let fg = compose(&fc, &gc);
    let ind_f = indeterminacy_set(&fc, tag);
    let ind_g = indeterminacy_set(&gc, tag);
    let ind_fg = indeterminacy_set(&fg, tag);

    let mut pts = composition_cuts(&fc, &gc);
    pts.extend(fg.cut_points());
    pts.sort();
    pts.dedup();

    let mut holds = true;
    let mut gained = BTreeSet::new();
    for x in &pts {
        let cx = CirclePoint::new(x.clone());
        let lhs = if ind_g.contains(&cx) {
            None
        } else {
            let y = value_at(&gc, x);
            if ind_f.contains(&y) {
                None
            } else {
                Some(value_at(&fc, y.position()))
            }
        };
        match lhs {
            Some(v) => {
                if ind_fg.contains(&cx) || value_at(&fg, x) != v {
                    holds = false;
                }
            }
            None => {
                if !ind_fg.contains(&cx) {
                    gained.insert(cx);
                }
            }
        }
    }
    let n = pts.len();
    for i in 0..n {
        let b = if i + 1 < n { pts[i + 1].clone() } else { &pts[0] + Rational::from_integer(1.into()) };
        let mid = midpoint(&pts[i], &b);
        let via = gc.eval(&mid).and_then(|y| fc.eval(&y));
        if via.is_none() || via != fg.eval(&mid) {
            holds = false;
        }
    }
    AxiomReport { holds, strict: !gained.is_empty(), gained }
}
