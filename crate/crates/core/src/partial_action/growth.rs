//! Growth of indeterminacy counts along cyclic subgroups.

use std::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::partial_action::singularity::indeterminacy_set;
use crate::piecewise::algebra::{compose, invert};
use crate::piecewise::{PiecewiseMap, PseudogroupTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthVerdict {
    Bounded,
    Linear,
    Undecided,
}

impl GrowthVerdict {
    pub fn name(self) -> &'static str {
        match self {
            GrowthVerdict::Bounded => "BOUNDED",
            GrowthVerdict::Linear => "LINEAR",
            GrowthVerdict::Undecided => "UNDECIDED",
        }
    }
}

impl fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub n_max: usize,
    /// l(n) for n = -N..=N, stored at index n + N.
    pub ell: Vec<usize>,
    pub slope: u64,
    pub bound: u64,
    pub verdict: GrowthVerdict,
}

impl GrowthReport {
    pub fn ell_at(&self, n: i64) -> usize {
        self.ell[(n + self.n_max as i64) as usize]
    }

    /// l(n) - m|n|; may be negative when the verdict is UNDECIDED.
    pub fn residual(&self, n: i64) -> i64 {
        self.ell_at(n) as i64 - self.slope as i64 * n.abs()
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_max as i64)..=self.n_max as i64
    }
}

/// l^-(f^n) for |n| <= n_max. Negative powers are built from f^{-1} directly
/// rather than by inverting positive powers, so the two halves are independent.
pub fn growth_sequence(
    f: &PiecewiseMap,
    tag: PseudogroupTag,
    n_max: usize,
    budget: Budget,
) -> Result<Vec<usize>, BudgetExceeded> {
    let mut ell = vec![0usize; 2 * n_max + 1];
    let fwd = f.canonical();
    let bwd = invert(f);
    for (base, sign) in [(&fwd, 1i64), (&bwd, -1i64)] {
        let mut acc = PiecewiseMap::identity(f.tag());
        for n in 1..=n_max {
            acc = compose(base, &acc);
            budget.check(acc.piece_count())?;
            ell[(sign * n as i64 + n_max as i64) as usize] = indeterminacy_set(&acc, tag).len();
        }
    }
    Ok(ell)
}

fn strictly_monotone(xs: &[i64]) -> bool {
    xs.len() >= 2 && (xs.windows(2).all(|w| w[0] < w[1]) || xs.windows(2).all(|w| w[0] > w[1]))
}

/// Fits l(n) = m|n| + b(n) from the two-window difference and tests the residuals.
pub fn fit_growth(ell: Vec<usize>, n_max: usize) -> GrowthReport {
    let nm = n_max as i64;
    let half = nm / 2;
    let get = |n: i64| ell[(n + nm) as usize] as i64;
    // nearest integer to (l(N) - l(N/2)) / (N - N/2), ties upward
    let num = get(nm) - get(half);
    let den = nm - half;
    let m = (2 * num + den).div_euclid(2 * den);
    let mut report = GrowthReport { n_max, ell: ell.clone(), slope: m.max(0) as u64, bound: 0, verdict: GrowthVerdict::Undecided };
    if m < 0 {
        return report;
    }
    let res: Vec<i64> = (-nm..=nm).map(|n| get(n) - m * n.abs()).collect();
    let b = |n: i64| res[(n + nm) as usize];
    if res.iter().any(|&r| r < 0) || (1..=nm).any(|n| b(n) != b(-n)) {
        return report;
    }
    let q = nm - nm / 4;
    let tail_pos: Vec<i64> = (q..=nm).map(b).collect();
    let tail_neg: Vec<i64> = (q..=nm).map(|n| b(-n)).collect();
    if strictly_monotone(&tail_pos) || strictly_monotone(&tail_neg) {
        return report;
    }
    report.bound = *res.iter().max().expect("nonempty") as u64;
    report.verdict = if m >= 1 { GrowthVerdict::Linear } else { GrowthVerdict::Bounded };
    report
}

pub fn power_growth_with(
    f: &PiecewiseMap,
    tag: PseudogroupTag,
    n_max: usize,
    budget: Budget,
) -> Result<GrowthReport, BudgetExceeded> {
    assert!(n_max >= 8, "power_growth needs N >= 8");
    Ok(fit_growth(growth_sequence(f, tag, n_max, budget)?, n_max))
}

/// Growth report under the budget taken from the environment.
pub fn power_growth(f: &PiecewiseMap, tag: PseudogroupTag, n_max: usize) -> Result<GrowthReport, BudgetExceeded> {
    power_growth_with(f, tag, n_max, Budget::from_env())
}
