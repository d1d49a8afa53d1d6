//! Exact lattice, pencil and Laurent-polynomial tools for Landau–Ginzburg / K3 duality checks.

pub mod duality;
pub mod embedding;
pub mod error;
pub mod fano;
pub mod fixture;
pub mod form;
pub mod genus;
pub mod harness;
pub mod lattice;
pub mod laurent;
pub mod matrix;
pub mod pencil;
pub mod period_map;
pub mod scalar;

pub use error::{Error, Result};
pub use form::{forms_equivalent, FiniteQuadraticForm, DEFAULT_BOUND};
pub use genus::{genus_equal, GenusSymbol};
pub use lattice::{IntegralLattice, Parity, RootType, Signature};
pub use matrix::Matrix;
pub use scalar::{Int, Rational};

pub type Lattice = IntegralLattice<num_bigint::BigInt>;
pub type IntMatrix = Matrix<num_bigint::BigInt>;
