//! Pseudogroup tags: germ class plus the jet order at which germs must glue.

use std::fmt;

use num_traits::{One, Signed};

use crate::moebius::Moebius;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Isom,
    Aff,
    Proj,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Isom => "Isom",
            Family::Aff => "Aff",
            Family::Proj => "Proj",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "isom" => Some(Family::Isom),
            "aff" => Some(Family::Aff),
            "proj" => Some(Family::Proj),
            _ => None,
        }
    }

    /// Match order that is equivalent to germ equality inside the family.
    pub fn natural_order(self) -> u8 {
        match self {
            Family::Isom => 0,
            Family::Aff => 1,
            Family::Proj => 2,
        }
    }
}

/// `order` is the jet order 0/1/2 at which left and right germs must agree;
/// C0, C1, C2 are Proj with order 0, 1, 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PseudogroupTag {
    pub family: Family,
    pub oriented: bool,
    pub order: u8,
}

impl PseudogroupTag {
    pub fn new(family: Family, oriented: bool, order: u8) -> Self {
        assert!(order <= 2, "match order above 2");
        PseudogroupTag { family, oriented, order }
    }

    pub fn isom() -> Self {
        Self::new(Family::Isom, false, 0)
    }
    pub fn aff() -> Self {
        Self::new(Family::Aff, false, 1)
    }
    pub fn proj() -> Self {
        Self::new(Family::Proj, false, 2)
    }
    pub fn c(order: u8) -> Self {
        Self::new(Family::Proj, false, order)
    }

    pub fn oriented(self) -> Self {
        PseudogroupTag { oriented: true, ..self }
    }

    pub fn with_order(self, order: u8) -> Self {
        Self::new(self.family, self.oriented, order)
    }

    /// Whether a germ belongs to the tag's class.
    pub fn admits(&self, germ: &Moebius) -> bool {
        if self.oriented && germ.orientation() < 0 {
            return false;
        }
        match self.family {
            Family::Proj => true,
            Family::Aff => germ.is_affine(),
            Family::Isom => germ.slope().map(|s| s.abs().is_one()).unwrap_or(false),
        }
    }

    /// Tag of a composite: the larger germ class, oriented only if both are,
    /// and the finer (higher) match order.
    pub fn join(self, other: Self) -> Self {
        PseudogroupTag {
            family: self.family.max(other.family),
            oriented: self.oriented && other.oriented,
            order: self.order.max(other.order),
        }
    }

    /// Short CLI names: isom, aff, proj, c0, c1, c2, with an optional "+" suffix for oriented.
    pub fn parse(s: &str) -> Option<Self> {
        let (body, oriented) = match s.strip_suffix('+') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let tag = match body.to_ascii_lowercase().as_str() {
            "c0" => Self::c(0),
            "c1" => Self::c(1),
            "c2" => Self::c(2),
            other => {
                let f = Family::parse(other)?;
                Self::new(f, false, f.natural_order())
            }
        };
        Some(if oriented { tag.oriented() } else { tag })
    }
}

impl fmt::Display for PseudogroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}{}", self.family.name(), self.order, if self.oriented { "+" } else { "" })
    }
}
