//! Graph metrics of finite truncations of pseudogroup actions, and the
//! comparison d_{T'} <= 3 d_T for T' = K T K^{-1}.

use std::collections::VecDeque;

use crate::circle::Arc;
use crate::moebius::Moebius;
use crate::scalar::{frac, Rational};

/// A germ restricted to an open arc; not required to be cofinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialGerm {
    pub arc: Arc,
    pub germ: Moebius,
}

impl PartialGerm {
    pub fn new(arc: Arc, germ: Moebius) -> Self {
        PartialGerm { arc, germ }
    }

    pub fn apply(&self, x: &Rational) -> Option<Rational> {
        let l = self.arc.lift_of(x)?;
        self.germ.apply(&l).ok().map(|v| frac(&v))
    }
}

/// Partial map on indices of a finite point set.
type IndexMap = Vec<Option<usize>>;

fn restrict(points: &[Rational], g: &PartialGerm) -> IndexMap {
    points
        .iter()
        .map(|p| g.apply(p).and_then(|v| points.iter().position(|q| *q == v)))
        .collect()
}

fn then(first: &IndexMap, second: &IndexMap) -> IndexMap {
    first.iter().map(|a| a.and_then(|i| second[i])).collect()
}

fn inverse(m: &IndexMap) -> IndexMap {
    let mut inv = vec![None; m.len()];
    for (i, j) in m.iter().enumerate() {
        if let Some(j) = j {
            inv[*j] = Some(i);
        }
    }
    inv
}

/// All-pairs distances in the graph with edges (x, gx); None is infinite.
pub fn graph_distances(n: usize, maps: &[IndexMap]) -> Vec<Vec<Option<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for m in maps {
        for (i, j) in m.iter().enumerate() {
            if let Some(j) = *j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    (0..n)
        .map(|s| {
            let mut d = vec![None; n];
            d[s] = Some(0);
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                let dv = d[v].expect("visited");
                for &w in &adj[v] {
                    if d[w].is_none() {
                        d[w] = Some(dv + 1);
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathBoundReport {
    pub pairs_checked: usize,
    /// Pairs (y, y', d_T, d_T') violating the bound.
    pub violations: Vec<(Rational, Rational, usize, Option<usize>)>,
    /// Every point of the set lies in the domain of some member of K.
    pub k_covers: bool,
    /// Every member of K maps into Y.
    pub k_lands_in_y: bool,
    pub holds: bool,
}

/// Checks d_{T'}(y,y') <= 3 d_T(y,y') for all y, y' in `y` with finite d_T,
/// where T' = K T K^{-1} acts on the finite set `points`.
pub fn path_bound_check(points: &[Rational], t: &[PartialGerm], k: &[PartialGerm], y: &[Rational]) -> PathBoundReport {
    let n = points.len();
    let tm: Vec<IndexMap> = t.iter().map(|g| restrict(points, g)).collect();
    let km: Vec<IndexMap> = k.iter().map(|g| restrict(points, g)).collect();
    let in_y: Vec<bool> = points.iter().map(|p| y.contains(p)).collect();
    let k_covers = (0..n).all(|i| km.iter().any(|m| m[i].is_some()));
    let k_lands_in_y = km.iter().all(|m| m.iter().flatten().all(|&j| in_y[j]));

    let mut tprime = Vec::new();
    for ka in &km {
        for tt in &tm {
            for kb in &km {
                tprime.push(then(&then(&inverse(kb), tt), ka));
            }
        }
    }
    let dt = graph_distances(n, &tm);
    let dtp = graph_distances(n, &tprime);
    let ys: Vec<usize> = (0..n).filter(|&i| in_y[i]).collect();
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for &a in &ys {
        for &b in &ys {
            if let Some(d) = dt[a][b] {
                pairs_checked += 1;
                let ok = matches!(dtp[a][b], Some(e) if e <= 3 * d);
                if !ok {
                    violations.push((points[a].clone(), points[b].clone(), d, dtp[a][b]));
                }
            }
        }
    }
    let holds = violations.is_empty() && k_covers && k_lands_in_y;
    PathBoundReport { pairs_checked, violations, k_covers, k_lands_in_y, holds }
}
