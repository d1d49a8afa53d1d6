//! Sufficient criteria for primitive embeddings into even unimodular lattices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{IntegralLattice, Signature};
use crate::scalar::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingVerdict {
    ExistsUnique,
    Exists,
    Inconclusive,
}

/// Inequalities as configuration: with `r = rank(L)`, `R = rank(target)`,
/// uniqueness needs strict signature dominance and `ℓ(A) ≤ R − r − unique_slack`,
/// existence needs weak dominance and `ℓ(A) ≤ R − r − exists_slack`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingConfig {
    pub unique_slack: usize,
    pub exists_slack: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig { unique_slack: 2, exists_slack: 1 }
    }
}

pub const K3_SIGNATURE: (usize, usize) = (3, 19);

pub fn embedding_criteria<T: Int>(l: &IntegralLattice<T>, target: (usize, usize)) -> Result<EmbeddingVerdict> {
    embedding_criteria_with(l, target, EmbeddingConfig::default())
}

pub fn embedding_criteria_with<T: Int>(
    l: &IntegralLattice<T>,
    target: (usize, usize),
    cfg: EmbeddingConfig,
) -> Result<EmbeddingVerdict> {
    if !l.is_even() {
        return Err(Error::OddLattice);
    }
    if !l.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let (tp, tn) = target;
    if (tp as i64 - tn as i64).rem_euclid(8) != 0 {
        return Err(Error::Invalid(format!("no even unimodular lattice of signature ({tp},{tn})")));
    }
    let Signature { pos, neg, .. } = l.signature();
    let ell = l.discriminant_group()?.length();
    let room = (tp + tn) as i64 - l.rank() as i64;
    if pos < tp && neg < tn && (ell as i64) <= room - cfg.unique_slack as i64 {
        return Ok(EmbeddingVerdict::ExistsUnique);
    }
    if pos <= tp && neg <= tn && (ell as i64) <= room - cfg.exists_slack as i64 {
        return Ok(EmbeddingVerdict::Exists);
    }
    Ok(EmbeddingVerdict::Inconclusive)
}
