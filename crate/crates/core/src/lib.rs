//! Hyperbolic isometries, equivariant Lipschitz maps and the numerical
//! examples around them, in dimensions 2 and 3.

pub mod delaunay;
pub mod error;
pub mod frechet;
pub mod hgeom;
pub mod moebius;
pub mod scenarios;
pub mod stretch;
pub mod words;

pub use error::{Error, Result};
pub use num_complex;
