//! Exact arithmetic in characteristic-2 field towers.
//!
//! A [`FieldTower`] starts from GF(2), GF(4), GF(8) or GF(16) and adds
//! rational, Artin-Schreier, odd-degree separable and inseparable quadratic
//! layers. Besides field arithmetic it provides the monomial 2-basis and the
//! Frobenius decomposition `x = sum c_j^2 b_j`, which turns every
//! `F^2`-linear question into an `F`-linear one.

mod base;
mod descriptor;
mod element;
pub(crate) mod poly;
mod tower;

pub use base::BaseField;
pub use element::{FieldElement, RationalFunction};
pub use descriptor::parse_layer;
pub use tower::{FieldTower, Layer};
