//! Exact computations with piecewise isometric, affine and projective maps of the circle R/Z.

pub mod budget;
pub mod circle;
pub mod corpus;
pub mod doubling;
pub mod holonomy;
pub mod jet;
pub mod json;
pub mod models;
pub mod moebius;
pub mod partial_action;
pub mod piecewise;
pub mod quadratic;
pub mod scalar;
pub mod selftest;
pub mod solver;
pub mod structure;

pub use circle::{Arc, CirclePoint, Side, SidedPoint};
pub use moebius::{Moebius, MoebiusOf, PoleError};
pub use piecewise::{Family, Piece, PiecewiseMap, PseudogroupTag};
pub use quadratic::QuadraticNumber;
pub use scalar::{ExactField, Rational};
