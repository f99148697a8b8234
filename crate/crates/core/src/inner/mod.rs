//! Finite Blaschke products, polynomials and rational functions on the disk.

mod blaschke;
mod poly;
mod rational;

pub use blaschke::{BlaschkeProduct, Zero, BOUNDARY_MARGIN, TAU_ZERO, UNIMODULAR_TOL};
pub use poly::{Poly, Root};
pub use rational::{inner_outer, is_inner_rational, InnerOuterPair, RationalFunction, INNER_GRID, SUP_GRID};
