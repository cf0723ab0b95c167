pub mod algebra;
pub mod map;
pub mod tag;

pub use algebra::{canonicalize, compose, germ_match, invert, power, GermMatch, MatchOrder};
pub use map::{MapError, Piece, PiecewiseMap};
pub use tag::{Family, PseudogroupTag};
