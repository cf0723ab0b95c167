//! JSON encodings. Rationals are strings "p/q" or "p", matrices 2x2 arrays of them.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circle::{Arc, CirclePoint, Side, SidedPoint};
use crate::doubling::DoubledMap;
use crate::moebius::Moebius;
use crate::piecewise::{Family, Piece, PiecewiseMap, PseudogroupTag};
use crate::quadratic::QuadraticNumber;
use crate::scalar::{fmt_rational, parse_rational, Rational};

/// `#[serde(with = "crate::json::rational")]` for Rational fields.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Q(#[serde(with = "rational")] Rational);

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational::serialize(self.position(), s)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(CirclePoint::new(rational::deserialize(d)?))
    }
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Side {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "+" => Ok(Side::Plus),
            "-" => Ok(Side::Minus),
            other => Err(D::Error::custom(format!("side must be \"+\" or \"-\", got {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SidedJson {
    point: CirclePoint,
    side: Side,
}

impl Serialize for SidedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SidedJson { point: self.point.clone(), side: self.side }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SidedPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SidedJson::deserialize(d)?;
        Ok(SidedPoint::new(j.point, j.side))
    }
}

#[derive(Serialize, Deserialize)]
struct ArcJson {
    left: Q,
    len: Q,
}

impl Serialize for Arc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ArcJson { left: Q(self.left().clone()), len: Q(self.len().clone()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Arc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ArcJson::deserialize(d)?;
        Arc::new(j.left.0, j.len.0).map_err(D::Error::custom)
    }
}

pub(crate) fn matrix_rows(m: &Moebius) -> [[String; 2]; 2] {
    let [a, b, c, d] = m.entries_vec();
    [[fmt_rational(&a), fmt_rational(&b)], [fmt_rational(&c), fmt_rational(&d)]]
}

impl Serialize for Moebius {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        matrix_rows(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Moebius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [c, e]] = <[[Q; 2]; 2]>::deserialize(d)?;
        let m = Moebius::from_entries(a.0, b.0, c.0, e.0);
        if num_traits::Zero::is_zero(&m.det()) {
            return Err(D::Error::custom("singular matrix"));
        }
        Ok(Moebius::new(m.a().clone(), m.b().clone(), m.c().clone(), m.d().clone()))
    }
}

#[derive(Serialize, Deserialize)]
struct TagJson {
    family: String,
    oriented: bool,
    order: u8,
}

impl Serialize for PseudogroupTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TagJson { family: self.family.name().to_string(), oriented: self.oriented, order: self.order }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PseudogroupTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TagJson::deserialize(d)?;
        let family = Family::parse(&j.family).ok_or_else(|| D::Error::custom(format!("unknown family {:?}", j.family)))?;
        if j.order > 2 {
            return Err(D::Error::custom("match order above 2"));
        }
        Ok(PseudogroupTag::new(family, j.oriented, j.order))
    }
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    arc: Arc,
    matrix: Moebius,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MapJson {
    tag: PseudogroupTag,
    pieces: Vec<PieceJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    doubled: bool,
}

impl MapJson {
    pub(crate) fn new(tag: PseudogroupTag, pieces: &[Piece], doubled: bool) -> Self {
        MapJson {
            tag,
            pieces: pieces.iter().map(|p| PieceJson { arc: p.arc.clone(), matrix: p.germ.clone() }).collect(),
            doubled,
        }
    }

    pub(crate) fn is_doubled(&self) -> bool {
        self.doubled
    }

    pub(crate) fn tag(&self) -> PseudogroupTag {
        self.tag
    }

    pub(crate) fn into_pieces(self) -> Vec<Piece> {
        self.pieces.into_iter().map(|p| Piece::new(p.arc, p.matrix)).collect()
    }
}

impl Serialize for PiecewiseMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapJson::new(self.tag(), self.pieces(), false).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MapJson::deserialize(d)?;
        if j.is_doubled() {
            return Err(D::Error::custom("doubled map where a circle map was expected"));
        }
        let tag = j.tag();
        PiecewiseMap::new(j.into_pieces(), tag).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct WideArcJson {
    left: Q,
    len: Q,
}

#[derive(Serialize, Deserialize)]
struct WidePieceJson {
    arc: WideArcJson,
    matrix: Moebius,
}

#[derive(Serialize, Deserialize)]
struct DoubledJson {
    tag: PseudogroupTag,
    pieces: Vec<WidePieceJson>,
    doubled: bool,
}

// length-2 coordinate z = 2x on the doubled circle
fn widen() -> Moebius {
    Moebius::from_ints(2, 0, 0, 1)
}

impl Serialize for DoubledMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (up, down) = (widen(), widen().invert());
        let two = Rational::from_integer(2.into());
        let pieces = self
            .0
            .pieces()
            .iter()
            .map(|p| WidePieceJson {
                arc: WideArcJson { left: Q(p.arc.left() * &two), len: Q(p.arc.len() * &two) },
                matrix: up.compose(&p.germ).compose(&down),
            })
            .collect();
        DoubledJson { tag: self.0.tag(), pieces, doubled: true }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DoubledMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = DoubledJson::deserialize(d)?;
        if !j.doubled {
            return Err(D::Error::custom("expected \"doubled\": true"));
        }
        let (up, down) = (widen(), widen().invert());
        let half = Rational::new(1.into(), 2.into());
        let mut pieces = Vec::new();
        for p in j.pieces {
            let arc = Arc::new(p.arc.left.0 * &half, p.arc.len.0 * &half).map_err(D::Error::custom)?;
            pieces.push(Piece::new(arc, down.compose(&p.matrix).compose(&up)));
        }
        PiecewiseMap::new(pieces, j.tag).map(DoubledMap).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadJson {
    a: Q,
    b: Q,
    d: u64,
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let d: u64 = self.d().try_into().map_err(|_| serde::ser::Error::custom("radicand too large"))?;
        QuadJson { a: Q(self.a().clone()), b: Q(self.b().clone()), d }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = QuadJson::deserialize(d)?;
        if j.d == 0 {
            return Err(D::Error::custom("radicand must be positive"));
        }
        Ok(QuadraticNumber::new(j.a.0, j.b.0, j.d.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn maps_round_trip() {
        for (name, f) in corpus::full_corpus() {
            let s = serde_json::to_string(&f).unwrap();
            let g: PiecewiseMap = serde_json::from_str(&s).unwrap();
            assert_eq!(f, g, "{name}");
        }
    }

    #[test]
    fn reads_the_documented_format() {
        let s = r#"{"tag":{"family":"Aff","oriented":true,"order":1},
            "pieces":[{"arc":{"left":"0","len":"1/2"},"matrix":[["1","0"],["0","2"]]},
                      {"arc":{"left":"1/2","len":"1/2"},"matrix":[["3","-1"],["0","2"]]}]}"#;
        let f: PiecewiseMap = serde_json::from_str(s).unwrap();
        assert_eq!(f, corpus::pl_map().with_tag(PseudogroupTag::aff().oriented()).unwrap());
    }

    #[test]
    fn rejects_overlaps() {
        let s = r#"{"tag":{"family":"Isom","oriented":false,"order":0},
            "pieces":[{"arc":{"left":"0","len":"1/2"},"matrix":[["1","0"],["0","1"]]},
                      {"arc":{"left":"1/2","len":"1/2"},"matrix":[["1","-1/2"],["0","1"]]}]}"#;
        assert!(serde_json::from_str::<PiecewiseMap>(s).is_err());
    }
}
