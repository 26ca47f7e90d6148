// Negated float comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod classifier;
pub mod curvegeom;
pub mod dataset;
pub mod detrep;
pub mod dirichlet;
pub mod error;
pub mod fourier;
pub mod poly2;
pub mod stability;
pub mod univariate;

pub use error::{Error, Result};
pub use poly2::{Axis, MobiusParams, Poly2, UnimodularMatch};
pub use univariate::UniPoly;
