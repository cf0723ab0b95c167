//! Word-ball scans for bounded indeterminacy, with certified verdicts.

use std::collections::HashMap;
use std::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::partial_action::growth::{power_growth_with, GrowthReport, GrowthVerdict};
use crate::partial_action::singularity::indeterminacy_set;
use crate::piecewise::algebra::{compose, invert};
use crate::piecewise::{Piece, PiecewiseMap, PseudogroupTag};
use crate::solver::{solve_invariant_with, SolveStatus, DEFAULT_DEPTH};
use crate::structure::StructureFunction;

/// Powers examined when a ball element is tested for linear growth.
const PROBE_POWERS: usize = 16;
/// At most this many ball elements are probed.
const MAX_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransfixVerdict {
    TransfixedCertified,
    NotTransfixedCertified,
    Undecided,
}

impl TransfixVerdict {
    pub fn name(self) -> &'static str {
        match self {
            TransfixVerdict::TransfixedCertified => "TRANSFIXED_CERTIFIED",
            TransfixVerdict::NotTransfixedCertified => "NOT_TRANSFIXED_CERTIFIED",
            TransfixVerdict::Undecided => "UNDECIDED",
        }
    }
}

impl fmt::Display for TransfixVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Letters of a word: generator index and exponent sign.
pub type Word = Vec<(usize, bool)>;

pub fn word_string(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|(i, inv)| if *inv { format!("g{i}^-1") } else { format!("g{i}") }).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// An invariant structure; every element's indeterminacy is at most twice its support.
    Structure(StructureFunction),
    /// The generated group is finite and was enumerated completely.
    FiniteGroup { order: usize },
    /// A group element whose indeterminacy grows linearly along its powers.
    Escaping { word: Word, element: PiecewiseMap, growth: GrowthReport },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransfixReport {
    pub radius: usize,
    pub ball_size: usize,
    pub max_ell: usize,
    /// No new element appeared before the radius was reached.
    pub closed: bool,
    pub verdict: TransfixVerdict,
    pub certificate: Option<Certificate>,
}

struct Ball {
    elements: Vec<(PiecewiseMap, Word, usize)>,
    closed: bool,
}

fn key(f: &PiecewiseMap) -> Vec<Piece> {
    f.canonical().pieces().to_vec()
}

/// Group elements of word length at most `radius`, deduplicated by canonical form.
fn enumerate_ball(gens: &[PiecewiseMap], tag: PseudogroupTag, radius: usize, budget: Budget) -> Result<Ball, BudgetExceeded> {
    let mut letters: Vec<(PiecewiseMap, (usize, bool))> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        letters.push((g.canonical(), (i, false)));
        letters.push((invert(g), (i, true)));
    }
    let tag0 = gens.iter().fold(PiecewiseMap::identity(tag).tag(), |t, g| t.join(g.tag()));
    let id = PiecewiseMap::identity(tag0);
    let mut seen: HashMap<Vec<Piece>, usize> = HashMap::new();
    seen.insert(key(&id), 0);
    let mut elements = vec![(id, Vec::new(), 0)];
    let mut frontier = vec![0usize];
    let mut closed = false;
    for _ in 0..radius {
        let mut next = Vec::new();
        for &e in &frontier {
            for (l, letter) in &letters {
                let m = compose(l, &elements[e].0);
                budget.check(m.piece_count())?;
                let k = key(&m);
                if seen.contains_key(&k) {
                    continue;
                }
                let mut w = elements[e].1.clone();
                w.push(*letter);
                let ell = indeterminacy_set(&m, tag).len();
                seen.insert(k, elements.len());
                next.push(elements.len());
                elements.push((m, w, ell));
            }
        }
        if next.is_empty() {
            closed = true;
            break;
        }
        frontier = next;
    }
    Ok(Ball { elements, closed })
}

pub fn transfix_scan(gens: &[PiecewiseMap], tag: PseudogroupTag, radius: usize) -> Result<TransfixReport, BudgetExceeded> {
    transfix_scan_with(gens, tag, radius, Budget::from_env())
}

pub fn transfix_scan_with(
    gens: &[PiecewiseMap],
    tag: PseudogroupTag,
    radius: usize,
    budget: Budget,
) -> Result<TransfixReport, BudgetExceeded> {
    let ball = enumerate_ball(gens, tag, radius, budget)?;
    let max_ell = ball.elements.iter().map(|e| e.2).max().unwrap_or(0);
    let mut report = TransfixReport {
        radius,
        ball_size: ball.elements.len(),
        max_ell,
        closed: ball.closed,
        verdict: TransfixVerdict::Undecided,
        certificate: None,
    };

    if gens.iter().all(PiecewiseMap::is_homeomorphism) {
        let level = if tag.order <= 1 { 1 } else { 2 };
        // an exhausted budget here still leaves the other certificates to try
        let solved = solve_invariant_with(gens, level, DEFAULT_DEPTH, budget).ok();
        if let Some(solved) = solved.filter(|s| matches!(s.status, SolveStatus::Unique | SolveStatus::Family(_))) {
            let nu = solved.witness.expect("solved reports carry a witness");
            let bound = 2 * nu.support_points().len();
            assert!(max_ell <= bound, "invariant structure does not bound the ball: {max_ell} > {bound}");
            report.verdict = TransfixVerdict::TransfixedCertified;
            report.certificate = Some(Certificate::Structure(nu));
            return Ok(report);
        }
    }

    if ball.closed {
        report.verdict = TransfixVerdict::TransfixedCertified;
        report.certificate = Some(Certificate::FiniteGroup { order: ball.elements.len() });
        return Ok(report);
    }

    let mut ells: Vec<usize> = ball.elements.iter().map(|e| e.2).collect();
    ells.sort_unstable();
    let median = ells[ells.len() / 2];
    let mut probes: Vec<&(PiecewiseMap, Word, usize)> = ball.elements.iter().filter(|e| e.2 > median).collect();
    if probes.is_empty() {
        probes = ball.elements.iter().filter(|e| e.2 == max_ell && e.2 > 0).collect();
    }
    probes.sort_by(|a, b| b.2.cmp(&a.2).then(a.1.len().cmp(&b.1.len())));
    for (el, word, _) in probes.into_iter().take(MAX_PROBES) {
        let growth = power_growth_with(el, tag, PROBE_POWERS, budget)?;
        if growth.verdict == GrowthVerdict::Linear && growth.slope >= 1 {
            report.verdict = TransfixVerdict::NotTransfixedCertified;
            report.certificate = Some(Certificate::Escaping { word: word.clone(), element: el.clone(), growth });
            return Ok(report);
        }
    }
    Ok(report)
}
