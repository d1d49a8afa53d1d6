//! Genus-level comparison key: rank, signature, parity and discriminant form.

use crate::error::Result;
use crate::form::{forms_equivalent, FiniteQuadraticForm};
use crate::lattice::{IntegralLattice, Parity, Signature};
use crate::scalar::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusSymbol {
    pub rank: usize,
    pub signature: Signature,
    pub parity: Parity,
    pub disc_form: FiniteQuadraticForm,
}

impl GenusSymbol {
    pub fn of<T: Int>(l: &IntegralLattice<T>) -> Result<Self> {
        Ok(GenusSymbol {
            rank: l.rank(),
            signature: l.signature(),
            parity: l.parity(),
            disc_form: l.discriminant_group()?,
        })
    }

    pub fn equivalent(&self, other: &Self, bound: u64) -> Result<bool> {
        if self.rank != other.rank || self.signature != other.signature || self.parity != other.parity {
            return Ok(false);
        }
        forms_equivalent(&self.disc_form, &other.disc_form, bound)
    }
}

/// Whether two nondegenerate lattices share rank, signature, parity and discriminant form.
pub fn genus_equal<T: Int>(a: &IntegralLattice<T>, b: &IntegralLattice<T>, bound: u64) -> Result<bool> {
    if a.rank() != b.rank() || a.signature() != b.signature() || a.parity() != b.parity() {
        return Ok(false);
    }
    GenusSymbol::of(a)?.equivalent(&GenusSymbol::of(b)?, bound)
}
