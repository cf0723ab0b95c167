//! Developing a projective structure around the circle, and classifying it by
//! its lifted holonomy.
//!
//! Points of the universal cover of P^1 are pairs (x, m) with x in ]-inf, +inf]
//! and sheet m, ordered lexicographically; +inf is the top of each sheet. A lift
//! of a Moebius map M is recorded as (M, j), where it sends (inf, 0) to (M inf, j).

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::circle::{CirclePoint, SidedPoint};
use crate::moebius::Moebius;
use crate::quadratic::QuadraticNumber;
use crate::scalar::{fmt_rational, int, Rational};
use crate::structure::{pullback, StructureFunction};

/// Germ fixing `point` whose 2-jet there is (1/t, -2u/t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeamTransition {
    pub point: CirclePoint,
    pub germ: Moebius,
}

/// s -> (s/t)/(1 + u s) in the coordinate s = x - point.
pub fn seam_transition(x: &CirclePoint, t: &Rational, u: &Rational) -> SeamTransition {
    assert!(t.is_positive(), "seam ratio must be positive");
    let centered = Moebius::new(t.recip(), Rational::zero(), u.clone(), Rational::one());
    let p = x.position().clone();
    let germ = Moebius::translation(p.clone()).compose(&centered).compose(&Moebius::translation(-p));
    SeamTransition { point: x.clone(), germ }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HolonomyError {
    #[error("structure is undefined at {0} points")]
    NotTotal(usize),
    #[error("developed chart degenerated")]
    Degenerate,
}

/// Image of infinity; None is infinity itself.
fn at_infinity(m: &Moebius) -> Option<Rational> {
    if m.c().is_zero() {
        None
    } else {
        Some(m.a() / m.c())
    }
}

fn apply_ext(m: &Moebius, x: &Option<Rational>) -> Option<Rational> {
    match x {
        None => at_infinity(m),
        Some(x) => {
            let den = m.c() * x + m.d();
            if den.is_zero() {
                None
            } else {
                Some((m.a() * x + m.b()) / den)
            }
        }
    }
}

/// x >= y in ]-inf, +inf].
fn ge(x: &Option<Rational>, y: &Option<Rational>) -> bool {
    match (x, y) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a >= b,
    }
}

/// A lifted Moebius map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub m: Moebius,
    pub j: i64,
}

impl Lifted {
    /// The lift fixing (x, 0) for a finite fixed point x of m.
    pub fn fixing(m: Moebius, x: &Rational) -> Lifted {
        debug_assert_eq!(m.apply(x).ok().as_ref(), Some(x));
        let j = i64::from(ge(&Some(x.clone()), &at_infinity(&m)));
        Lifted { m, j }
    }

    /// The lift of x -> x + 1 fixing the sheet of infinity.
    pub fn unit_translation() -> Lifted {
        Lifted { m: Moebius::translation(int(1)), j: 0 }
    }

    pub fn identity() -> Lifted {
        Lifted { m: Moebius::identity(), j: 0 }
    }

    /// self after other
    pub fn then_after(&self, other: &Lifted) -> Lifted {
        let m = self.m.compose(&other.m);
        let inf2 = at_infinity(&other.m);
        let j = match inf2 {
            None => self.j + other.j,
            Some(_) => {
                let img = apply_ext(&self.m, &inf2);
                self.j + other.j - 1 + i64::from(ge(&at_infinity(&self.m), &img))
            }
        };
        Lifted { m, j }
    }

    /// Sheet index of the image of the finite point (x, 0).
    pub fn sheet_of(&self, x: &Rational) -> i64 {
        match at_infinity(&self.m) {
            None => self.j,
            Some(_) => {
                let mx = apply_ext(&self.m, &Some(x.clone()));
                self.j - i64::from(ge(&mx, &at_infinity(&self.m)))
            }
        }
    }
}

/// Holonomy of nu developed from the basepoint 0+, as a lifted Moebius map.
pub fn develop_lifted(nu: &StructureFunction) -> Result<Lifted, HolonomyError> {
    if !nu.is_total() {
        return Err(HolonomyError::NotTotal(nu.undefined_set().len()));
    }
    let mut points: Vec<CirclePoint> = nu.support_points().into_iter().collect();
    points.sort();
    let seam = |p: &CirclePoint| {
        let (t, u) = nu.value(&SidedPoint::new(p.clone(), crate::circle::Side::Plus)).expect("total");
        let u = if nu.level() == 1 { Rational::zero() } else { u };
        seam_transition(p, &t, &u).germ
    };
    let mut h = Lifted::identity();
    for p in points.iter().filter(|p| !p.position().is_zero()) {
        h = h.then_after(&Lifted::fixing(seam(p), p.position()));
    }
    h = h.then_after(&Lifted::unit_translation());
    if let Some(z) = points.iter().find(|p| p.position().is_zero()) {
        h = h.then_after(&Lifted::fixing(seam(z), z.position()));
    }
    if h.m.det().is_zero() {
        return Err(HolonomyError::Degenerate);
    }
    Ok(h)
}

/// Holonomy matrix and winding number.
pub fn develop_holonomy(nu: &StructureFunction) -> Result<(Moebius, i64), HolonomyError> {
    let h = develop_lifted(nu)?;
    let n = winding(&h);
    Ok((h.m, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Conjugacy {
    Identity,
    Parabolic,
    Hyperbolic,
    Elliptic,
}

fn conjugacy(m: &Moebius) -> Conjugacy {
    if *m == Moebius::identity() {
        return Conjugacy::Identity;
    }
    let tr = m.trace();
    let disc = &tr * &tr - int(4) * m.det();
    if disc.is_zero() {
        Conjugacy::Parabolic
    } else if disc.is_positive() {
        Conjugacy::Hyperbolic
    } else {
        Conjugacy::Elliptic
    }
}

/// A fixed point of a non-elliptic map, quadratic in general; None is infinity.
fn fixed_point(m: &Moebius) -> Option<QuadraticNumber> {
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    if c.is_zero() {
        return None;
    }
    // c x^2 + (d - a) x - b = 0
    let disc = (a - d) * (a - d) + int(4) * b * c;
    let root = QuadraticNumber::sqrt_of(&disc);
    let two_c = QuadraticNumber::rational(int(2) * c);
    Some((QuadraticNumber::rational(a - d) + root) / two_c)
}

/// Sheet displacement of fixed points, or floor of the rotation number.
fn winding(h: &Lifted) -> i64 {
    match conjugacy(&h.m) {
        Conjugacy::Identity => h.j,
        Conjugacy::Elliptic => h.j - 1,
        _ => match (fixed_point(&h.m), at_infinity(&h.m)) {
            (None, _) => h.j,
            (Some(_), None) => h.j,
            (Some(p), Some(hinf)) => h.j - 1 + i64::from(QuadraticNumber::rational(hinf) >= p),
        },
    }
}

/// Rotation data of an elliptic holonomy: r = winding + rho with rho in (0,1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rotation {
    pub winding: i64,
    /// Order in PSL2 and the exact rho, when the holonomy has finite order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_order: Option<(u32, RationalString)>,
    /// Certified enclosure lo < r < hi (degenerate lo = hi = r when exact).
    pub interval: (RationalString, RationalString),
}

/// A rational serialized as "p/q".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalString(pub Rational);

impl Serialize for RationalString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

/// Number of squarings used to enclose an irrational rotation number.
pub const ROTATION_SQUARINGS: u32 = 10;

fn rotation_data(h: &Lifted) -> Rotation {
    let n = h.j - 1;
    let m = &h.m;
    // sign chosen so that c < 0; then trace / sqrt(det) = 2 cos(pi rho)
    let (tr, det) = if m.c().is_negative() { (m.trace(), m.det()) } else { (-m.trace(), m.det()) };
    let q = &tr * &tr / &det;
    let exact = |k: u32, num: i64, den: i64| {
        let rho = Rational::new(num.into(), den.into());
        let r = Rational::from_integer(n.into()) + &rho;
        Rotation {
            winding: n,
            finite_order: Some((k, RationalString(rho))),
            interval: (RationalString(r.clone()), RationalString(r)),
        }
    };
    let pos = tr.is_positive();
    if q.is_zero() {
        return exact(2, 1, 2);
    }
    if q == int(1) {
        return if pos { exact(3, 1, 3) } else { exact(3, 2, 3) };
    }
    if q == int(2) {
        return if pos { exact(4, 1, 4) } else { exact(4, 3, 4) };
    }
    if q == int(3) {
        return if pos { exact(6, 1, 6) } else { exact(6, 5, 6) };
    }
    // iterated squaring: the N-th power moves (inf, 0) to sheet j_N and N r lies in (j_N - 1, j_N)
    let mut g = h.clone();
    let mut big_n: i64 = 1;
    for _ in 0..ROTATION_SQUARINGS {
        g = g.then_after(&g);
        big_n *= 2;
    }
    let lo = Rational::new((g.j - 1).into(), big_n.into());
    let hi = Rational::new(g.j.into(), big_n.into());
    Rotation { winding: n, finite_order: None, interval: (RationalString(lo), RationalString(hi)) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HolonomyKind {
    Theta1,
    Theta { t: QuadraticNumber },
    XiN { n: i64 },
    XiR { rotation: Rotation },
    XiNT { n: i64, t: QuadraticNumber },
    XiNPm { n: i64, plus: bool },
}

impl HolonomyKind {
    pub fn name(&self) -> &'static str {
        match self {
            HolonomyKind::Theta1 => "Theta1",
            HolonomyKind::Theta { .. } => "Theta",
            HolonomyKind::XiN { .. } => "Xi_n",
            HolonomyKind::XiR { .. } => "Xi_r",
            HolonomyKind::XiNT { .. } => "Xi_nt",
            HolonomyKind::XiNPm { .. } => "Xi_npm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyClass {
    pub kind: HolonomyKind,
    pub matrix: Moebius,
    pub winding: i64,
}

impl HolonomyClass {
    /// Equality of isomorphism classes (the matrix is only defined up to conjugacy).
    pub fn same_class(&self, other: &HolonomyClass) -> bool {
        self.kind == other.kind && self.winding == other.winding
    }
}

impl fmt::Display for HolonomyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            HolonomyKind::Theta1 => write!(f, "Theta1"),
            HolonomyKind::Theta { t } => write!(f, "Theta({t})"),
            HolonomyKind::XiN { n } => write!(f, "Xi_n({n})"),
            HolonomyKind::XiR { rotation } => {
                let (lo, hi) = &rotation.interval;
                if lo == hi {
                    write!(f, "Xi_r({})", fmt_rational(&lo.0))
                } else {
                    write!(f, "Xi_r({} < r < {})", fmt_rational(&lo.0), fmt_rational(&hi.0))
                }
            }
            HolonomyKind::XiNT { n, t } => write!(f, "Xi_nt({n}, {t})"),
            HolonomyKind::XiNPm { n, plus } => write!(f, "Xi_npm({n}, {})", if *plus { "+" } else { "-" }),
        }
    }
}

/// Eigenvalue ratio t > 1 of a hyperbolic matrix: t + 1/t = tr^2/det - 2.
fn multiplier(m: &Moebius) -> QuadraticNumber {
    let tr = m.trace();
    let det = m.det();
    let disc = &tr * &tr - int(4) * &det;
    let two_det = int(2) * &det;
    let a = (&tr * &tr - &two_det) / &two_det;
    // |tr| sqrt(disc) / (2 det)
    let root = QuadraticNumber::sqrt_of(&disc) * QuadraticNumber::rational(tr.abs() / &two_det);
    QuadraticNumber::rational(a) + root
}

/// Forward cyclic arc (from, to) of ]-inf, +inf], endpoints excluded.
fn in_forward_arc(w: &Option<Rational>, from: &Option<Rational>, to: &Option<Rational>) -> bool {
    let lt = |x: &Option<Rational>, y: &Option<Rational>| !ge(x, y);
    if lt(from, to) {
        lt(from, w) && lt(w, to)
    } else {
        lt(from, w) || lt(w, to)
    }
}

/// Sign of a parabolic map: whether it pushes points forward toward its fixed point.
fn parabolic_sign(m: &Moebius) -> bool {
    let p = if m.c().is_zero() { None } else { Some((m.a() - m.d()) / (int(2) * m.c())) };
    let z = match &p {
        None => Some(Rational::zero()),
        Some(p) => Some(p + int(1)),
    };
    in_forward_arc(&apply_ext(m, &z), &z, &p)
}

pub fn classify_lifted(h: &Lifted) -> HolonomyClass {
    let n = winding(h);
    let kind = match (conjugacy(&h.m), n) {
        (Conjugacy::Elliptic, _) => HolonomyKind::XiR { rotation: rotation_data(h) },
        (Conjugacy::Parabolic, 0) => HolonomyKind::Theta1,
        (Conjugacy::Hyperbolic, 0) => HolonomyKind::Theta { t: multiplier(&h.m) },
        (Conjugacy::Identity, n) => HolonomyKind::XiN { n },
        (Conjugacy::Hyperbolic, n) => HolonomyKind::XiNT { n, t: multiplier(&h.m) },
        (Conjugacy::Parabolic, n) => HolonomyKind::XiNPm { n, plus: parabolic_sign(&h.m) },
    };
    assert!(n >= 0, "developing map runs backwards: winding {n}");
    HolonomyClass { kind, matrix: h.m.clone(), winding: n }
}

pub fn classify(nu: &StructureFunction) -> Result<HolonomyClass, HolonomyError> {
    Ok(classify_lifted(&develop_lifted(nu)?))
}

/// Classification of nu developed from basepoint b (nu pulled back by the rotation by b).
pub fn classify_from(nu: &StructureFunction, b: &Rational) -> Result<HolonomyClass, HolonomyError> {
    let r = crate::corpus::rotation(b.clone());
    classify(&pullback(&r, nu))
}

#[derive(Serialize)]
struct ClassJson<'a> {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<&'a QuadraticNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation: Option<&'a Rotation>,
    winding: i64,
    matrix: &'a Moebius,
}

impl Serialize for HolonomyClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut j = ClassJson { kind: self.kind.name(), t: None, n: None, sign: None, rotation: None, winding: self.winding, matrix: &self.matrix };
        match &self.kind {
            HolonomyKind::Theta1 => {}
            HolonomyKind::Theta { t } => j.t = Some(t),
            HolonomyKind::XiN { n } => j.n = Some(*n),
            HolonomyKind::XiR { rotation } => j.rotation = Some(rotation),
            HolonomyKind::XiNT { n, t } => {
                j.n = Some(*n);
                j.t = Some(t);
            }
            HolonomyKind::XiNPm { n, plus } => {
                j.n = Some(*n);
                j.sign = Some(if *plus { "+" } else { "-" });
            }
        }
        j.serialize(s)
    }
}
