//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Each line combines the library check with an oracle computed here from raw
//! piece data, without going through the library's evaluation or matching code.

use std::process::ExitCode;
use std::time::Instant;

use pcdyn_core::corpus;
use pcdyn_core::doubling::double_embed;
use pcdyn_core::partial_action::{axioms_check, indeterminacy_set, path_bound_check, power_growth};
use pcdyn_core::piecewise::invert;
use pcdyn_core::scalar::{frac, int, ratio, Rational};
use pcdyn_core::selftest::{self, path_bound_fixture, reference_structures, Context, GROWTH_N};
use pcdyn_core::partial_action::SingularityProfile;
use pcdyn_core::{PiecewiseMap, SidedPoint};

type Check = Result<String, String>;

/// Entries of a piece germ.
fn entries(f: &PiecewiseMap, i: usize) -> [Rational; 4] {
    f.pieces()[i].germ.entries_vec()
}

/// (value, first, second derivative) of (a x + b)/(c x + d), by hand.
fn hand_jet(m: &[Rational; 4], x: &Rational) -> (Rational, Rational, Rational) {
    let [a, b, c, d] = m;
    let den = c * x + d;
    let det = a * d - b * c;
    ((a * x + b) / &den, &det / (&den * &den), -int(2) * c * &det / (&den * &den * &den))
}

/// Jet of f just left (`plus = false`) or right of x, found by scanning the arcs.
fn side_jet(f: &PiecewiseMap, x: &Rational, plus: bool) -> (Rational, Rational, Rational) {
    for (i, p) in f.pieces().iter().enumerate() {
        let l = p.arc.left();
        let r = l + p.arc.len();
        for k in [0, 1] {
            let lift = x + int(k);
            let inside = if plus { &lift >= l && lift < r } else { &lift > l && lift <= r };
            if inside {
                let (v, d1, d2) = hand_jet(&entries(f, i), &lift);
                return (frac(&v), d1, d2);
            }
        }
    }
    panic!("no piece on that side of {x}");
}

fn arc_ends(f: &PiecewiseMap) -> Vec<Rational> {
    let mut v: Vec<Rational> = f.pieces().iter().flat_map(|p| [frac(p.arc.left()), frac(&(p.arc.left() + p.arc.len()))]).collect();
    v.sort();
    v.dedup();
    v
}

/// Number of points where the one-sided jets disagree up to order i.
fn hand_profile(f: &PiecewiseMap) -> [usize; 3] {
    let mut k = [0; 3];
    for x in arc_ends(f) {
        let (a, b) = (side_jet(f, &x, false), side_jet(f, &x, true));
        let order = if a.0 != b.0 {
            0
        } else if a.1 != b.1 {
            1
        } else if a.2 != b.2 {
            2
        } else {
            continue;
        };
        for slot in k.iter_mut().skip(order) {
            *slot += 1;
        }
    }
    k
}

/// l(f^n) at order 1 for a piecewise affine homeomorphism: points x where the
/// product of slope jumps of f along x, f x, ..., f^{n-1} x is not 1.
fn hand_pl_growth(f: &PiecewiseMap, n: usize) -> usize {
    let finv = invert(f);
    let breaks: Vec<Rational> = arc_ends(f).into_iter().filter(|x| side_jet(f, x, false).1 != side_jet(f, x, true).1).collect();
    // candidates: f^{-k} of breakpoints, k < n
    let mut cands = Vec::new();
    for b in &breaks {
        let mut y = b.clone();
        for _ in 0..n {
            cands.push(y.clone());
            y = side_jet(&finv, &y, true).0;
        }
    }
    cands.sort();
    cands.dedup();
    cands
        .iter()
        .filter(|x| {
            let (mut l, mut r) = ((*x).clone(), (*x).clone());
            let mut jump = int(1);
            for _ in 0..n {
                let (lv, l1, _) = side_jet(f, &l, false);
                let (rv, r1, _) = side_jet(f, &r, true);
                jump = jump * r1 / l1;
                l = lv;
                r = rv;
            }
            jump != int(1)
        })
        .count()
}

fn growth_oracle() -> Check {
    let mut checked = 0;
    for f in [corpus::pl_map(), corpus::pl_map2()] {
        let r = power_growth(&f, f.tag().with_order(1), GROWTH_N).map_err(|e| e.to_string())?;
        for n in 1..=GROWTH_N {
            let want = hand_pl_growth(&f, n);
            if r.ell_at(n as i64) != want {
                return Err(format!("l(f^{n}) = {} but the slope-product oracle gives {want}", r.ell_at(n as i64)));
            }
            checked += 1;
        }
    }
    Ok(format!("slope-product oracle agrees on {checked} powers"))
}

fn model_oracle() -> Check {
    for (name, f) in corpus::full_corpus() {
        let c = f.canonical();
        let lib = SingularityProfile::of(&c);
        let hand = hand_profile(&c);
        let got = [lib.cumulative(0), lib.cumulative(1), lib.cumulative(2)];
        if got != hand {
            return Err(format!("{name}: profile {got:?}, jet oracle {hand:?}"));
        }
    }
    Ok("jet-comparison oracle agrees on every profile".into())
}

fn chart_value(left: [Rational; 4], right: [Rational; 4], x: &Rational) -> (Rational, Rational) {
    let (_, l1, l2) = hand_jet(&left, x);
    let (_, r1, r2) = hand_jet(&right, x);
    (&l1 / &r1, -(&r2 / (int(2) * &r1)) + &l2 * &r1 / (int(2) * &l1 * &l1))
}

fn classifier_oracle() -> Check {
    let m = |a: i64, b: Rational, c: i64, d: Rational| [int(a), b, int(c), d];
    let want = [
        vec![],
        vec![(SidedPoint::plus(int(0)), chart_value(m(0, int(1), -1, int(1)), m(0, int(2), -1, int(2)), &int(0)))],
        vec![
            (SidedPoint::plus(int(0)), chart_value(m(1, int(0), 1, ratio(1, 2)), m(2, int(0), -2, int(1)), &int(0))),
            (SidedPoint::plus(ratio(1, 2)), chart_value(m(2, int(-1), 2, int(0)), m(-1, ratio(1, 2), 1, int(-1)), &ratio(1, 2))),
        ],
    ];
    let expect_values = [vec![], vec![(int(2), int(0))], vec![(int(1), int(-4)), (int(1), int(-4))]];
    for ((name, nu, _), (w, ev)) in reference_structures().into_iter().zip(want.iter().zip(&expect_values)) {
        for ((p, v), e) in w.iter().zip(ev) {
            if v != e {
                return Err(format!("{name}: chart oracle gives {v:?}, expected {e:?}"));
            }
            if nu.value(p).as_ref() != Some(v) {
                return Err(format!("{name}: reference value at {p:?} differs from the chart oracle"));
            }
        }
        if nu.support().count() != 2 * w.len() {
            return Err(format!("{name}: unexpected support"));
        }
    }
    Ok("reference values reproduced by hand charts".into())
}

fn doubling_oracle() -> Check {
    let mut checked = 0;
    for f in [corpus::flip(), corpus::iet3_flipped(), corpus::rotation(ratio(1, 3))] {
        let phi = double_embed(&f);
        for k in 0..60 {
            let x = ratio(2 * k + 1, 120);
            if arc_ends(&f).contains(&x) {
                continue;
            }
            let (y, d1, _) = side_jet(&f, &x, true);
            let half = ratio(1, 2);
            let (up, down) = if d1 > int(0) { (&y * &half, int(1) - &y * &half) } else { (int(1) - &y * &half, &y * &half) };
            let (pu, ..) = side_jet(&phi, &(&x * &half), true);
            let (pd, ..) = side_jet(&phi, &(int(1) - &x * &half), true);
            if pu != up || pd != down {
                return Err(format!("image at {x} is ({pu}, {pd}), formula gives ({up}, {down})"));
            }
            checked += 1;
        }
    }
    Ok(format!("pointwise formula on {checked} samples"))
}

fn axiom_oracle() -> Check {
    // a(f) a(f^-1) loses exactly the indeterminacy of f^-1 against the identity
    let f = corpus::pl_map();
    let fi = invert(&f);
    let tag = f.tag();
    let r = axioms_check(&f, &fi, tag);
    let ind = indeterminacy_set(&fi, tag);
    if !r.strict || r.gained != ind {
        return Err(format!("pl . pl^-1: gained {:?}, indeterminacy of the inverse {:?}", r.gained, ind));
    }
    Ok(format!("pl . pl^-1 gains exactly {} points", ind.len()))
}

fn path_oracle() -> Check {
    let (points, t, k, y) = path_bound_fixture();
    let r = path_bound_check(&points, &t, &k, &y);
    // T joins 0, 1/12, ..., 6/12 in a path, so all 36 ordered pairs of Y are at finite distance
    if r.pairs_checked != 36 {
        return Err(format!("{} pairs checked, expected 36", r.pairs_checked));
    }
    Ok("36 finite pairs as counted by hand".into())
}

fn oracle(id: u8) -> Option<Check> {
    match id {
        1 => Some(growth_oracle()),
        4 => Some(model_oracle()),
        8 => Some(classifier_oracle()),
        9 => Some(doubling_oracle()),
        10 => Some(axiom_oracle()),
        11 => Some(path_oracle()),
        _ => None,
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = Context::new();
    let mut failed = 0;
    for id in 1..=11u8 {
        let t = Instant::now();
        let mut o = selftest::run_one(&ctx, id);
        if let Some(r) = oracle(id) {
            match r {
                Ok(d) => o.detail = format!("{}; {d}", o.detail),
                Err(d) => {
                    o.passed = false;
                    o.detail = format!("{}; oracle: {d}", o.detail);
                }
            }
        }
        failed += !o.passed as usize;
        println!("{o} ({:.1}s)", t.elapsed().as_secs_f64());
    }
    println!("{} of 11 criteria passed in {:.1}s", 11 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
