//! The invariant suite: eleven checks over the fixture corpus and seeded fuzz
//! samples, each with exact pass/fail. Shared by the acceptance target and the
//! `selftest` command.

use std::cell::OnceCell;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{Arc, SidedPoint};
use crate::corpus;
use crate::doubling::{commutes_with_swap, double_embed};
use crate::holonomy::{classify, HolonomyClass, HolonomyKind};
use crate::models::{act_l2, model_diff, sided, tau, L2Point};
use crate::moebius::Moebius;
use crate::partial_action::{
    axioms_check, path_bound_check, power_growth, semi_index, transfix_scan, Certificate, GrowthReport, GrowthVerdict,
    PartialGerm, SingularityProfile, TransfixVerdict,
};
use crate::piecewise::{compose, invert, PiecewiseMap};
use crate::quadratic::QuadraticNumber;
use crate::scalar::{int, ratio, Rational};
use crate::solver::{contains, is_invariant, solve_invariant, SolveStatus, DEFAULT_DEPTH};
use crate::structure::{pullback, smoothness_report, JetValue, StructureFunction};

pub const SEED: u64 = 0x5eed_c1c1e;
pub const GROWTH_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2} {}: {}", self.id, self.title, self.detail)
    }
}

type Check = Result<String, String>;

/// Growth reports of the full corpus at orders 0, 1, 2, computed once.
type GrowthTable = Vec<(&'static str, [GrowthReport; 3])>;

#[derive(Default)]
pub struct Context {
    growth: OnceCell<Result<GrowthTable, String>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    fn growth(&self) -> Result<&[(&'static str, [GrowthReport; 3])], String> {
        self.growth
            .get_or_init(|| {
                corpus::full_corpus()
                    .into_iter()
                    .map(|(name, f)| {
                        let mut rs = Vec::new();
                        for tag in corpus::tags_for(&f) {
                            rs.push(power_growth(&f, tag, GROWTH_N).map_err(|e| format!("{name}: {e}"))?);
                        }
                        Ok((name, rs.try_into().expect("three orders")))
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }
}

pub const TITLES: [&str; 11] = [
    "growth law",
    "slope monotonicity",
    "inverse symmetry",
    "model consistency",
    "2-jet functoriality and tau",
    "smoothness criterion",
    "invariant-structure roundtrip",
    "classifier invariance",
    "doubling",
    "partial-action axiom",
    "path bound",
];

/// Runs criterion `id` (1 to 11).
pub fn run_one(ctx: &Context, id: u8) -> Outcome {
    let r = match id {
        1 => growth_law(ctx),
        2 => slope_monotonicity(ctx),
        3 => inverse_symmetry(ctx),
        4 => model_consistency(),
        5 => jet_functoriality(),
        6 => smoothness_criterion(),
        7 => structure_roundtrip(),
        8 => classifier_invariance(),
        9 => doubling_check(),
        10 => partial_action_axiom(),
        11 => path_bound(),
        _ => panic!("no criterion {id}"),
    };
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome { id, title: TITLES[id as usize - 1], passed, detail }
}

pub fn run_all() -> Vec<Outcome> {
    let ctx = Context::new();
    (1..=11).map(|i| run_one(&ctx, i)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn residuals_ok(r: &GrowthReport) -> Option<i64> {
    r.range().find(|&n| r.residual(n) < 0 || r.residual(n) != r.residual(-n))
}

fn growth_law(ctx: &Context) -> Check {
    let table = ctx.growth()?;
    let growth_names: Vec<&str> = corpus::growth_corpus().into_iter().map(|(n, _)| n).collect();
    let mut summary = Vec::new();
    for (name, rs) in table.iter().filter(|(n, _)| growth_names.contains(n)) {
        for (order, r) in rs.iter().enumerate() {
            ensure(r.verdict != GrowthVerdict::Undecided, || format!("{name} order {order}: UNDECIDED"))?;
            if let Some(n) = residuals_ok(r) {
                return Err(format!("{name} order {order}: b({n}) = {}, b({}) = {}", r.residual(n), -n, r.residual(-n)));
            }
        }
        summary.push(format!("{name} m={}/{}/{}", rs[0].slope, rs[1].slope, rs[2].slope));
    }
    Ok(format!("{} maps, N = {GROWTH_N}; {}", summary.len(), summary.join(", ")))
}

fn slope_monotonicity(ctx: &Context) -> Check {
    let table = ctx.growth()?;
    for (name, rs) in table {
        let m: Vec<u64> = rs.iter().map(|r| r.slope).collect();
        ensure(m[0] <= m[1] && m[1] <= m[2], || format!("{name}: slopes {m:?}"))?;
    }
    Ok(format!("{} maps", table.len()))
}

fn inverse_symmetry(ctx: &Context) -> Check {
    let mut checked = 0;
    for (name, f) in corpus::full_corpus() {
        let fi = invert(&f);
        for tag in corpus::tags_for(&f) {
            let a = semi_index(&f, tag);
            let b = semi_index(&fi, tag);
            ensure(a.0 == b.0 && a.0 == a.1, || format!("{name} {tag}: l-(f) = {}, l-(f^-1) = {}, l+(f) = {}", a.0, b.0, a.1))?;
            checked += 1;
        }
    }
    for (name, rs) in ctx.growth()? {
        for r in rs {
            if let Some(n) = r.range().find(|&n| r.ell_at(n) != r.ell_at(-n)) {
                return Err(format!("{name}: l(f^{n}) = {} but l(f^-{n}) = {}", r.ell_at(n), r.ell_at(-n)));
            }
        }
    }
    Ok(format!("{checked} (map, tag) pairs and all powers up to {GROWTH_N}"))
}

fn model_consistency() -> Check {
    let mut checked = 0;
    for (name, f) in corpus::full_corpus() {
        let profile = SingularityProfile::of(&f);
        for level in 0..=2u8 {
            let d = model_diff(&f, level);
            ensure(d.matches_profile(&profile), || {
                format!("{name} level {level}: |leaving| = {}, 2 k = {}", d.leaving.len(), 2 * profile.cumulative(level as usize))
            })?;
            ensure(d.leaving.len() == d.entering.len(), || format!("{name} level {level}: leaving and entering differ"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (map, level) pairs"))
}

fn random_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    ratio(rng.gen_range(0..d), d)
}

fn random_value(rng: &mut ChaCha8Rng, level: u8) -> JetValue {
    let t = ratio(rng.gen_range(1..=9), rng.gen_range(1..=9));
    let u = if level == 1 { int(0) } else { ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)) };
    (t, u)
}

/// A word of length 1 to `max_len` over the pool and its inverses.
pub fn fuzz_map(rng: &mut ChaCha8Rng, pool: &[PiecewiseMap], max_len: usize) -> PiecewiseMap {
    let len = rng.gen_range(1..=max_len);
    let mut acc: Option<PiecewiseMap> = None;
    for _ in 0..len {
        let g = pool.choose(rng).expect("nonempty pool");
        let g = if rng.gen_bool(0.5) { invert(g) } else { g.clone() };
        acc = Some(match acc {
            None => g,
            Some(a) => compose(&g, &a),
        });
    }
    acc.expect("len >= 1")
}

fn random_structure(rng: &mut ChaCha8Rng, level: u8) -> StructureFunction {
    let mut entries = Vec::new();
    let mut used = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let x = random_rational(rng, 24);
        if used.contains(&x) {
            continue;
        }
        used.push(x.clone());
        entries.push((sided(x, rng.gen_bool(0.5)), random_value(rng, level)));
    }
    StructureFunction::new(level, entries, []).expect("distinct base points")
}

fn pool_maps(v: Vec<(&'static str, PiecewiseMap)>) -> Vec<PiecewiseMap> {
    v.into_iter().map(|(_, f)| f).collect()
}

const FUZZ_TRIPLES: usize = 200;

fn jet_functoriality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool = pool_maps(corpus::full_corpus());
    let (mut done, mut attempts) = (0, 0);
    while done < FUZZ_TRIPLES {
        attempts += 1;
        ensure(attempts < 100 * FUZZ_TRIPLES, || format!("only {done} continuous triples found"))?;
        let f = fuzz_map(&mut rng, &pool, 2);
        let g = fuzz_map(&mut rng, &pool, 2);
        let (t, u) = random_value(&mut rng, 2);
        let x = L2Point::new(sided(random_rational(&mut rng, 48), rng.gen_bool(0.5)), t, u);
        let Ok(fx) = act_l2(&f, &x) else { continue };
        let Ok(gfx) = act_l2(&g, &fx) else { continue };
        let gf = compose(&g, &f);
        let direct = act_l2(&gf, &x).map_err(|_| format!("g f discontinuous at {:?} though f and g are not", x.p))?;
        ensure(direct == gfx, || format!("(g f)_(2) != g_(2) f_(2) at {x:?}"))?;
        let tx = act_l2(&f, &tau(&x)).map_err(|_| format!("f discontinuous at the hat of {:?}", x.p))?;
        ensure(tx == tau(&fx), || format!("tau does not commute with f_(2) at {x:?}"))?;
        done += 1;
    }

    let homeos = {
        let mut v = pool_maps(corpus::homeomorphisms());
        v.push(corpus::rotation(ratio(1, 3)));
        v
    };
    let mut total = 0;
    for i in 0..FUZZ_TRIPLES {
        // homeomorphisms keep both sides total; other corpus maps test the undefined set
        let src = if i % 2 == 0 { &homeos } else { &pool };
        let f = fuzz_map(&mut rng, src, 2);
        let g = fuzz_map(&mut rng, src, 2);
        let nu = random_structure(&mut rng, if i % 5 == 0 { 1 } else { 2 });
        let lhs = pullback(&compose(&g, &f), &nu);
        let rhs = pullback(&f, &pullback(&g, &nu));
        ensure(lhs.is_tau_symmetric() && rhs.is_tau_symmetric(), || "pullback broke tau-symmetry".into())?;
        ensure(lhs.agrees_off_undefined(&rhs), || format!("(g f)^* {nu:?} = {lhs:?} but f^* g^* = {rhs:?}"))?;
        if lhs.is_total() && rhs.is_total() {
            ensure(lhs == rhs, || format!("total pullbacks differ for {nu:?}"))?;
            total += 1;
        }
        ensure(pullback(&PiecewiseMap::identity(f.tag()), &nu) == nu, || format!("identity pullback moved {nu:?}"))?;
    }
    Ok(format!("{FUZZ_TRIPLES} jet triples ({attempts} drawn), {FUZZ_TRIPLES} pullback triples ({total} total)"))
}

fn smoothness_criterion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let pool = pool_maps(corpus::full_corpus());
    let mut maps: Vec<(String, PiecewiseMap)> = corpus::full_corpus().into_iter().map(|(n, f)| (n.to_string(), f)).collect();
    for i in 0..50 {
        maps.push((format!("fuzz{i}"), fuzz_map(&mut rng, &pool, 3)));
    }
    let mut smooth = 0;
    for (name, f) in &maps {
        let r = smoothness_report(f);
        ensure(r.agree(), || format!("{name}: {r:?}"))?;
        smooth += r.by_pullback as usize;
    }
    Ok(format!("{} maps, {smooth} preserve the trivial structure", maps.len()))
}

fn structure_roundtrip() -> Check {
    let rot = corpus::rotation(ratio(1, 3));
    let mut notes = Vec::new();
    for (name, h) in corpus::homeomorphisms().into_iter().take(3) {
        let g = corpus::conjugate(&h, &rot);
        let gens = [g.clone()];
        let cert = pullback(&invert(&h), &StructureFunction::trivial(2));
        ensure(is_invariant(&gens, &cert), || format!("{name}: certificate is not invariant"))?;
        let r = solve_invariant(&gens, 2, DEFAULT_DEPTH).map_err(|e| format!("{name}: {e}"))?;
        ensure(matches!(r.status, SolveStatus::Unique | SolveStatus::Family(_)), || format!("{name}: status {}", r.status))?;
        ensure(contains(&gens, &r, &cert), || format!("{name}: certificate outside the solution family"))?;
        let t = transfix_scan(&gens, g.tag(), 4).map_err(|e| format!("{name}: {e}"))?;
        ensure(t.verdict == TransfixVerdict::TransfixedCertified, || format!("{name}: transfix {}", t.verdict))?;
        let supp = match &t.certificate {
            Some(Certificate::Structure(nu)) => nu.support_points().len(),
            other => return Err(format!("{name}: certificate {other:?} is not a structure")),
        };
        ensure(t.max_ell <= 2 * supp, || format!("{name}: max l = {} > 2 * {supp}", t.max_ell))?;
        notes.push(format!("{name} {} max l {} <= {}", r.status, t.max_ell, 2 * supp));
    }
    Ok(notes.join(", "))
}

/// Value at x+ of the structure whose chart is `left` before x and `right` after.
fn chart_value(left: &Moebius, right: &Moebius, x: &Rational) -> JetValue {
    let (_, l1, l2) = left.jet(x).expect("chart regular at x");
    let (_, r1, r2) = right.jet(x).expect("chart regular at x");
    let t = &l1 / &r1;
    let u = -(&r2 / (int(2) * &r1)) + &l2 * &r1 / (int(2) * &l1 * &l1);
    (t, u)
}

/// The trivial structure, the (2,0) seam and the two-seam (1,-4) structure,
/// each built from charts, with the class it must reach.
pub fn reference_structures() -> Vec<(&'static str, StructureFunction, HolonomyKind)> {
    let m = |a: Rational, b: Rational, c: Rational, d: Rational| Moebius::new(a, b, c, d);
    let seam = chart_value(&m(int(0), int(1), int(-1), int(1)), &m(int(0), int(2), int(-1), int(2)), &int(0));
    let theta2 = StructureFunction::new(2, [(SidedPoint::plus(int(0)), seam)], []).expect("theta2");
    let v0 = chart_value(&m(int(1), int(0), int(1), ratio(1, 2)), &m(int(2), int(0), int(-2), int(1)), &int(0));
    let v1 = chart_value(&m(int(2), int(-1), int(2), int(0)), &m(int(-1), ratio(1, 2), int(1), int(-1)), &ratio(1, 2));
    let xi1 = StructureFunction::new(2, [(SidedPoint::plus(int(0)), v0), (SidedPoint::plus(ratio(1, 2)), v1)], [])
        .expect("xi1");
    vec![
        ("nu0", StructureFunction::trivial(2), HolonomyKind::Theta1),
        ("theta2", theta2, HolonomyKind::Theta { t: QuadraticNumber::rational(int(2)) }),
        ("xi1", xi1, HolonomyKind::XiN { n: 1 }),
    ]
}

fn classifier_invariance() -> Check {
    let mut checked = 0;
    for (name, nu, kind) in reference_structures() {
        let base: HolonomyClass = classify(&nu).map_err(|e| format!("{name}: {e}"))?;
        ensure(base.kind == kind, || format!("{name}: classified as {}", base.kind.name()))?;
        for (hname, h) in corpus::homeomorphisms() {
            let c = classify(&pullback(&h, &nu)).map_err(|e| format!("{name} by {hname}: {e}"))?;
            ensure(c.same_class(&base), || format!("{name} by {hname}: {c} vs {base}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (structure, homeomorphism) pairs"))
}

fn doubling_check() -> Check {
    let gens = [corpus::flip(), corpus::iet3_flipped(), corpus::rotation(ratio(1, 3))];
    let letters: Vec<PiecewiseMap> = gens.iter().flat_map(|g| [g.clone(), invert(g)]).collect();
    let phis: Vec<PiecewiseMap> = letters.iter().map(double_embed).collect();
    // (word as a map, product of the letters' images)
    let id = PiecewiseMap::identity(gens[0].tag());
    let mut layer = vec![(id.clone(), double_embed(&id))];
    let mut words = 0;
    for _ in 0..=4 {
        let mut next = Vec::new();
        for (w, prod) in &layer {
            let phi = double_embed(w);
            ensure(phi.same_element(prod), || format!("image of a word differs from the product of images: {w:?}"))?;
            ensure(commutes_with_swap(&phi), || format!("image does not commute with the swap: {w:?}"))?;
            ensure(phi.with_tag(w.tag().oriented()).is_ok(), || format!("image fails the oriented tag: {w:?}"))?;
            words += 1;
            for (l, pl) in letters.iter().zip(&phis) {
                next.push((compose(l, w), compose(pl, prod)));
            }
        }
        layer = next;
    }
    Ok(format!("{words} words of length <= 4"))
}

fn partial_action_axiom() -> Check {
    let maps = corpus::full_corpus();
    let mut strict = Vec::new();
    for (a, f) in &maps {
        for (b, g) in &maps {
            let r = axioms_check(f, g, f.tag().join(g.tag()));
            ensure(r.holds, || format!("a({a}) a({b}) is not contained in a({a} {b})"))?;
            if r.strict {
                strict.push(format!("{a}.{b}"));
            }
        }
    }
    ensure(!strict.is_empty(), || "no pair with strict inclusion".into())?;
    Ok(format!("{} pairs, {} strict (e.g. {})", maps.len() * maps.len(), strict.len(), strict[0]))
}

/// Twelve points j/12, T the partial rotation by 1/12 on 0..6/12, Y = 0..5/12,
/// K the identity on Y and the half-turn from the other half onto Y.
pub fn path_bound_fixture() -> (Vec<Rational>, Vec<PartialGerm>, Vec<PartialGerm>, Vec<Rational>) {
    let points: Vec<Rational> = (0..12).map(|j| ratio(j, 12)).collect();
    let arc = |l, len| Arc::new(l, len).expect("fixture arc");
    let t = vec![PartialGerm::new(arc(ratio(23, 24), ratio(13, 24)), Moebius::translation(ratio(1, 12)))];
    let k = vec![
        PartialGerm::new(arc(ratio(23, 24), ratio(1, 2)), Moebius::identity()),
        PartialGerm::new(arc(ratio(11, 24), ratio(1, 2)), Moebius::translation(ratio(-1, 2))),
    ];
    let y = points[..6].to_vec();
    (points, t, k, y)
}

fn path_bound() -> Check {
    let (points, t, k, y) = path_bound_fixture();
    let r = path_bound_check(&points, &t, &k, &y);
    ensure(r.k_covers && r.k_lands_in_y, || format!("fixture malformed: {r:?}"))?;
    ensure(r.holds, || format!("violations {:?}", r.violations))?;
    Ok(format!("{} pairs with finite d_T", r.pairs_checked))
}
