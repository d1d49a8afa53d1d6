//! Laurent polynomials with parameter coefficients, lattice polytopes, Minkowski data and mutations.

pub mod param;
pub mod poly;
pub mod parse;
pub mod polytope;
pub mod minkowski;
pub mod mutation;
pub mod lg;
