//! Indeterminacy sets, singularity profiles and semi-index functions.

use std::collections::BTreeSet;

use crate::circle::CirclePoint;
use crate::piecewise::algebra::invert;
use crate::piecewise::{MatchOrder, PiecewiseMap, PseudogroupTag};

/// Breakpoints of the canonical form at which the germs do not glue under `tag`.
pub fn indeterminacy_set(f: &PiecewiseMap, tag: PseudogroupTag) -> BTreeSet<CirclePoint> {
    f.germ_breakpoints()
        .into_iter()
        .filter(|(_, m)| !m.glues_at(tag.order))
        .map(|(x, _)| CirclePoint::new(x))
        .collect()
}

/// (l-, l+): indeterminacy counts of f and of its inverse.
pub fn semi_index(f: &PiecewiseMap, tag: PseudogroupTag) -> (usize, usize) {
    (indeterminacy_set(f, tag).len(), indeterminacy_set(&invert(f), tag).len())
}

pub fn index_character(f: &PiecewiseMap, tag: PseudogroupTag) -> i64 {
    let (lm, lp) = semi_index(f, tag);
    lp as i64 - lm as i64
}

/// K0: discontinuities, K1: continuous but C1-singular, K2: C1 but C2-singular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityProfile {
    pub k: [BTreeSet<CirclePoint>; 3],
}

impl SingularityProfile {
    pub fn of(f: &PiecewiseMap) -> Self {
        let mut k: [BTreeSet<CirclePoint>; 3] = Default::default();
        for (x, m) in f.germ_breakpoints() {
            let slot = match m {
                MatchOrder::None => 0,
                MatchOrder::Order0 => 1,
                MatchOrder::Order1 | MatchOrder::Order2 => 2,
                MatchOrder::Full => continue,
            };
            k[slot].insert(CirclePoint::new(x));
        }
        SingularityProfile { k }
    }

    pub fn count(&self, i: usize) -> usize {
        self.k[i].len()
    }

    /// k_{<=i}
    pub fn cumulative(&self, i: usize) -> usize {
        (0..=i).map(|j| self.count(j)).sum()
    }
}
