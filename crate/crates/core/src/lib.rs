//! Holomorphic foliations on Hirzebruch surfaces in exact arithmetic.
//!
//! Sections of `Θ ⊗ L*` on `S_δ` are carried either as bi-homogeneous vector
//! fields in the Cox coordinates `X0, X1, Y0, Y1` or as bi-homogeneous 1-forms.
//! From there the crate computes singular schemes chart by chart, applies the
//! global endomorphisms of the tangent bundle, and checks that the sections
//! sharing a singular scheme are exactly the endomorphism orbit.

pub mod bipoly;
pub mod chartpoly;
pub mod cli;
pub mod endomorph;
pub mod error;
pub mod foliation;
pub mod grobner;
pub mod linalg;
pub mod linebundle;
mod modular;
pub mod rng;
pub mod samesing;
pub mod singscheme;
mod text;

pub use bipoly::{BiDegree, BiMonomial, BiPoly, ChartId, Var};
pub use chartpoly::ChartPoly;
pub use error::{Error, Result};

/// Exact rational coefficient type used throughout.
pub type Rat = num_rational::BigRational;

/// Builds a rational from a small integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
