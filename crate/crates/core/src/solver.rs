//! Invariant structure functions for a finite set of generators.
//!
//! A value (t, u) at a sided point is encoded as the 2-jet psi = (1/t, -2u/t) of
//! the seam germ s -> (s/t)/(1 + u s). In these coordinates tau is jet inversion
//! and invariance under g reads psi_x = L^{-1} psi_{g x} R, with L and R the
//! 2-jets of g on the hat side and on the side of x. The solver spans each
//! connected component of the active set by a tree, writes every psi_x as
//! A_x phi^{+-1} B_x in terms of the root value phi, and solves the loop
//! constraints phi = C phi^{+-1} D exactly.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::budget::{Budget, BudgetExceeded};
use crate::circle::SidedPoint;
use crate::jet::Jet2;
use crate::partial_action::{power_growth_with, GrowthVerdict};
use crate::piecewise::algebra::invert;
use crate::piecewise::PiecewiseMap;
use crate::scalar::{int, rational_sqrt, Rational};
use crate::structure::{pullback, JetValue, StructureFunction};

pub const DEFAULT_DEPTH: usize = 64;
/// Powers used when a non-closing orbit is tested for linear growth.
const GROWTH_PROBE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Unique,
    Family(usize),
    None,
    /// Closure of the active set did not stabilize within this depth, or the
    /// equations need irrational values.
    Undecided(usize),
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Unique => write!(f, "UNIQUE"),
            SolveStatus::Family(d) => write!(f, "FAMILY({d})"),
            SolveStatus::None => write!(f, "NONE"),
            SolveStatus::Undecided(d) => write!(f, "UNDECIDED({d})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub level: u8,
    pub status: SolveStatus,
    pub witness: Option<StructureFunction>,
    pub active: BTreeSet<SidedPoint>,
    /// Short explanation of NONE / UNDECIDED verdicts.
    pub reason: Option<String>,
}

impl SolveReport {
    fn verdict(level: u8, status: SolveStatus, active: BTreeSet<SidedPoint>, reason: impl Into<String>) -> Self {
        SolveReport { level, status, witness: None, active, reason: Some(reason.into()) }
    }
}

fn from_jet(j: &Jet2) -> JetValue {
    (j.d1.recip(), -&j.d2 / (int(2) * &j.d1))
}

fn jet_of(g: &PiecewiseMap, x: &SidedPoint, level: u8) -> Jet2 {
    let (_, d1, d2) = g.sided_jet(x);
    Jet2::new(d1, if level == 1 { Rational::zero() } else { d2 })
}

/// psi_x = p * psi_y^eps * q
#[derive(Debug, Clone)]
struct Relation {
    x: usize,
    y: usize,
    inverted: bool,
    p: Jet2,
    q: Jet2,
}

impl Relation {
    fn reversed(&self) -> Relation {
        if self.inverted {
            Relation { x: self.y, y: self.x, inverted: true, p: self.q.clone(), q: self.p.clone() }
        } else {
            Relation { x: self.y, y: self.x, inverted: false, p: self.p.inverse(), q: self.q.inverse() }
        }
    }
}

fn mul(a: &Jet2, b: &Jet2) -> Jet2 {
    a.then_after(b)
}

/// psi = a phi^{sign} b
#[derive(Debug, Clone)]
struct Expr {
    a: Jet2,
    plus: bool,
    b: Jet2,
}

impl Expr {
    fn through(&self, r: &Relation) -> Expr {
        if r.inverted {
            Expr { a: mul(&r.p, &self.b.inverse()), plus: !self.plus, b: mul(&self.a.inverse(), &r.q) }
        } else {
            Expr { a: mul(&r.p, &self.a), plus: self.plus, b: mul(&self.b, &r.q) }
        }
    }

    fn eval(&self, phi: &Jet2) -> Jet2 {
        let p = if self.plus { phi.clone() } else { phi.inverse() };
        mul(&mul(&self.a, &p), &self.b)
    }
}

/// phi = c phi^{+-1} d
struct Loop {
    c: Jet2,
    plus: bool,
    d: Jet2,
}

fn loop_of(ex: &Expr, via: &Expr) -> Loop {
    // ex.a phi^{sx} ex.b = via.a phi^{sv} via.b
    let m = mul(&ex.a.inverse(), &via.a);
    let n = mul(&via.b, &ex.b.inverse());
    let plus = ex.plus == via.plus;
    if ex.plus {
        Loop { c: m, plus, d: n }
    } else {
        Loop { c: n.inverse(), plus, d: m.inverse() }
    }
}

enum Outcome {
    Solved { phi: Jet2, free: usize },
    None(String),
    Irrational,
}

/// Coefficients of k b = r at a given a.
fn b_equation(l: &Loop, a: &Rational) -> (Rational, Rational) {
    let (ac, bc, ad, bd) = (&l.c.d1, &l.c.d2, &l.d.d1, &l.d.d2);
    if l.plus {
        let k = Rational::one() - ac * ad * ad;
        let r = ac * a * bd + bc * a * a * ad * ad;
        (k, r)
    } else {
        let a3 = a * a * a;
        let k = Rational::one() + ac * ad * ad / a3;
        let r = ac * bd / a + bc * ad * ad / (a * a);
        (k, r)
    }
}

fn solve_loops(loops: &[Loop], level: u8, positive: impl Fn(&Rational) -> bool) -> Outcome {
    // level-1 part
    let mut a_pin: Option<Rational> = None;
    for l in loops {
        let prod = &l.c.d1 * &l.d.d1;
        if l.plus {
            if !prod.is_one() {
                return Outcome::None("multiplicative cocycle is inconsistent".into());
            }
        } else {
            if !prod.is_positive() {
                return Outcome::None("ratio equation has no positive solution".into());
            }
            let Some(a) = rational_sqrt(&prod) else { return Outcome::Irrational };
            match &a_pin {
                Some(p) if *p != a => return Outcome::None("ratio equations disagree".into()),
                _ => a_pin = Some(a),
            }
        }
    }
    if level == 1 {
        let free = usize::from(a_pin.is_none());
        let a = a_pin.unwrap_or_else(Rational::one);
        if !positive(&a) {
            return Outcome::None("no positive ratios".into());
        }
        return Outcome::Solved { phi: Jet2::new(a, Rational::zero()), free };
    }
    // with a free, only plus-loops remain: k b = p a + q a^2, k = 1 - a_D (a_C a_D = 1)
    if a_pin.is_none() {
        let mut curves: Vec<(Rational, Rational)> = Vec::new();
        for l in loops {
            let (ac, bc, ad, bd) = (&l.c.d1, &l.c.d2, &l.d.d1, &l.d.d2);
            let k = Rational::one() - ac * ad * ad;
            let p = ac * bd;
            let q = bc * ad * ad;
            if k.is_zero() {
                if q.is_zero() {
                    if !p.is_zero() {
                        return Outcome::None("second-order cocycle is inconsistent".into());
                    }
                } else {
                    let a = -(&p / &q);
                    if !a.is_positive() {
                        return Outcome::None("second-order equation forces a non-positive ratio".into());
                    }
                    a_pin = Some(a);
                    break;
                }
            } else {
                curves.push((&p / &k, &q / &k));
            }
        }
        if a_pin.is_none() {
            if let Some((p0, q0)) = curves.first().cloned() {
                for (p, q) in &curves[1..] {
                    let dp = p - &p0;
                    let dq = q - &q0;
                    if dp.is_zero() && dq.is_zero() {
                        continue;
                    }
                    if dq.is_zero() {
                        return Outcome::None("second-order equations disagree".into());
                    }
                    let a = -(dp / dq);
                    if !a.is_positive() {
                        return Outcome::None("second-order equations force a non-positive ratio".into());
                    }
                    a_pin = Some(a);
                    break;
                }
            }
            if a_pin.is_none() {
                let a = Rational::one();
                if !positive(&a) {
                    return Outcome::None("no positive ratios".into());
                }
                let (b, free) = match curves.first() {
                    Some((p, q)) => (p * &a + q * &a * &a, 1),
                    None => (Rational::zero(), 2),
                };
                return Outcome::Solved { phi: Jet2::new(a, b), free };
            }
        }
    }
    let a = a_pin.expect("pinned");
    if !positive(&a) {
        return Outcome::None("no positive ratios".into());
    }
    let mut b_pin: Option<Rational> = None;
    for l in loops {
        let (k, r) = b_equation(l, &a);
        if k.is_zero() {
            if !r.is_zero() {
                return Outcome::None("second-order cocycle is inconsistent".into());
            }
        } else {
            let b = r / k;
            match &b_pin {
                Some(p) if *p != b => return Outcome::None("second-order equations disagree".into()),
                _ => b_pin = Some(b),
            }
        }
    }
    let free = usize::from(b_pin.is_none());
    Outcome::Solved { phi: Jet2::new(a, b_pin.unwrap_or_else(Rational::zero)), free }
}

fn with_inverses(gens: &[PiecewiseMap]) -> Vec<PiecewiseMap> {
    let mut all: Vec<PiecewiseMap> = gens.iter().map(PiecewiseMap::canonical).collect();
    all.extend(gens.iter().map(invert));
    all
}

/// Sided points where some generator or inverse is not projective.
pub fn seed_points(gens: &[PiecewiseMap]) -> BTreeSet<SidedPoint> {
    let mut seeds = BTreeSet::new();
    for g in with_inverses(gens) {
        for (x, _) in g.germ_breakpoints() {
            seeds.insert(SidedPoint::minus(x.clone()));
            seeds.insert(SidedPoint::plus(x));
        }
    }
    seeds
}

/// Closure of the seeds under the generators, their inverses and the hat map,
/// or None if some point first appears beyond `depth` steps.
pub fn active_set(gens: &[PiecewiseMap], depth: usize, budget: Budget) -> Result<Option<BTreeSet<SidedPoint>>, BudgetExceeded> {
    let all = with_inverses(gens);
    let mut seen: BTreeMap<SidedPoint, usize> = seed_points(gens).into_iter().map(|p| (p, 0)).collect();
    let mut queue: VecDeque<SidedPoint> = seen.keys().cloned().collect();
    while let Some(x) = queue.pop_front() {
        let d = seen[&x];
        let mut next: Vec<SidedPoint> = all.iter().map(|g| g.evaluate_sided(&x)).collect();
        next.push(x.hat());
        for y in next {
            if seen.contains_key(&y) {
                continue;
            }
            if d + 1 > depth {
                return Ok(None);
            }
            seen.insert(y.clone(), d + 1);
            budget.check(seen.len())?;
            queue.push_back(y);
        }
    }
    Ok(Some(seen.into_keys().collect()))
}

fn continuous_at(g: &PiecewiseMap, x: &SidedPoint) -> bool {
    g.evaluate_sided(x).point == g.evaluate_sided(&x.hat()).point
}

pub fn solve_invariant(gens: &[PiecewiseMap], level: u8, depth: usize) -> Result<SolveReport, BudgetExceeded> {
    solve_invariant_with(gens, level, depth, Budget::from_env())
}

pub fn solve_invariant_with(
    gens: &[PiecewiseMap],
    level: u8,
    depth: usize,
    budget: Budget,
) -> Result<SolveReport, BudgetExceeded> {
    assert!(level == 1 || level == 2, "structure level must be 1 or 2");
    let Some(active) = active_set(gens, depth, budget)? else {
        let tag_order = if level == 1 { 1 } else { 2 };
        for g in gens {
            let r = power_growth_with(g, g.tag().with_order(tag_order), GROWTH_PROBE, budget)?;
            if r.verdict == GrowthVerdict::Linear {
                return Ok(SolveReport::verdict(
                    level,
                    SolveStatus::None,
                    BTreeSet::new(),
                    "a generator has linearly growing singularities",
                ));
            }
        }
        return Ok(SolveReport::verdict(level, SolveStatus::Undecided(depth), BTreeSet::new(), "active set did not close"));
    };
    let nodes: Vec<SidedPoint> = active.iter().cloned().collect();
    let index: BTreeMap<&SidedPoint, usize> = nodes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut adj: Vec<Vec<Relation>> = vec![Vec::new(); nodes.len()];
    let push = |r: Relation, adj: &mut Vec<Vec<Relation>>| {
        let back = r.reversed();
        adj[r.x].push(r);
        adj[back.x].push(back);
    };
    let cgens: Vec<PiecewiseMap> = gens.iter().map(PiecewiseMap::canonical).collect();
    for (i, x) in nodes.iter().enumerate() {
        let h = index[&x.hat()];
        if i < h {
            push(Relation { x: i, y: h, inverted: true, p: Jet2::identity(), q: Jet2::identity() }, &mut adj);
        }
        for g in &cgens {
            if !continuous_at(g, x) {
                continue;
            }
            let y = index[&g.evaluate_sided(x)];
            let l = jet_of(g, &x.hat(), level);
            let r = jet_of(g, x, level);
            push(Relation { x: i, y, inverted: false, p: l.inverse(), q: r }, &mut adj);
        }
    }

    let mut expr: Vec<Option<Expr>> = vec![None; nodes.len()];
    let mut psi: Vec<Option<Jet2>> = vec![None; nodes.len()];
    let mut free = 0usize;
    for root in 0..nodes.len() {
        if expr[root].is_some() {
            continue;
        }
        expr[root] = Some(Expr { a: Jet2::identity(), plus: true, b: Jet2::identity() });
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        let mut loops = Vec::new();
        while let Some(y) = queue.pop_front() {
            let ey = expr[y].clone().expect("visited");
            for rel in &adj[y] {
                // rel: psi_y = p psi_x^eps q; walk it backwards to express psi_x
                let back = rel.reversed();
                let ex = ey.through(&back);
                match &expr[rel.y] {
                    None => {
                        expr[rel.y] = Some(ex);
                        comp.push(rel.y);
                        queue.push_back(rel.y);
                    }
                    Some(known) => loops.push(loop_of(known, &ex)),
                }
            }
        }
        let exprs: Vec<Expr> = comp.iter().map(|&i| expr[i].clone().expect("spanned")).collect();
        let positive = |a: &Rational| {
            exprs.iter().all(|e| {
                let v = e.eval(&Jet2::new(a.clone(), Rational::zero()));
                v.d1.is_positive()
            })
        };
        match solve_loops(&loops, level, positive) {
            Outcome::Solved { phi, free: f } => {
                free += f;
                for &i in &comp {
                    psi[i] = Some(expr[i].as_ref().expect("spanned").eval(&phi));
                }
            }
            Outcome::None(why) => return Ok(SolveReport::verdict(level, SolveStatus::None, active, why)),
            Outcome::Irrational => {
                return Ok(SolveReport::verdict(
                    level,
                    SolveStatus::Undecided(depth),
                    active,
                    "invariant ratios would be irrational",
                ))
            }
        }
    }
    let entries = nodes.iter().zip(&psi).map(|(x, j)| {
        let (t, u) = from_jet(j.as_ref().expect("solved"));
        (x.clone(), (t, if level == 1 { Rational::zero() } else { u }))
    });
    let witness = StructureFunction::new(level, entries, []).expect("hat relations force tau-symmetry");
    let status = if free == 0 { SolveStatus::Unique } else { SolveStatus::Family(free) };
    let report = SolveReport { level, status, witness: Some(witness), active, reason: None };
    assert!(
        contains(gens, &report, report.witness.as_ref().expect("witness")),
        "solver witness failed exact re-verification"
    );
    Ok(report)
}

/// g^* nu = nu for every generator, exactly, on the common domain of definition.
pub fn is_invariant(gens: &[PiecewiseMap], nu: &StructureFunction) -> bool {
    gens.iter().all(|g| pullback(g, nu).agrees_off_undefined(nu))
}

/// Whether nu lies in the solution space described by the report: supported in
/// the active set, total, tau-symmetric and invariant.
pub fn contains(gens: &[PiecewiseMap], report: &SolveReport, nu: &StructureFunction) -> bool {
    if !matches!(report.status, SolveStatus::Unique | SolveStatus::Family(_)) {
        return false;
    }
    nu.level() == report.level
        && nu.is_total()
        && nu.is_tau_symmetric()
        && nu.support().all(|(p, _)| report.active.contains(p))
        && is_invariant(gens, nu)
}
