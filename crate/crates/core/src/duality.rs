//! Dolgachev–Nikulin duality check between `L_S` and `Pic(X)`.

use serde::Serialize;

use crate::embedding::{embedding_criteria, EmbeddingVerdict, K3_SIGNATURE};
use crate::error::{Error, Result};
use crate::form::forms_equivalent;
use crate::lattice::{IntegralLattice, Signature};
use crate::scalar::Int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub checks: Vec<Check>,
    pub embedding: Option<EmbeddingVerdict>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

pub fn dn_dual_verify<T: Int>(
    ls: &IntegralLattice<T>,
    pic: &IntegralLattice<T>,
    bound: u64,
) -> Result<DualityReport> {
    if !ls.is_nondegenerate() || !pic.is_nondegenerate() {
        return Err(Error::Degenerate);
    }
    let mut checks = Vec::new();
    let (r, rho) = (ls.rank(), pic.rank());
    checks.push(Check::new("rank_sum", r + rho == 20, format!("{r} + {rho}")));
    let sig = ls.signature();
    let want = Signature { pos: 1, neg: r.saturating_sub(1), zero: 0 };
    checks.push(Check::new("signature_ls", r > 0 && sig == want, sig.to_string()));
    let hp = IntegralLattice::<T>::hyperbolic().direct_sum(pic);
    let sig_hp = hp.signature();
    let want_hp = Signature { pos: 2, neg: rho, zero: 0 };
    checks.push(Check::new("signature_h_pic", sig_hp == want_hp, sig_hp.to_string()));
    checks.push(Check::new("even", ls.is_even() && pic.is_even(), ""));
    let q_hp = hp.discriminant_group()?;
    let q_ls = ls.discriminant_group()?;
    let dual = forms_equivalent(&q_hp, &q_ls.negate(), bound)?;
    checks.push(Check::new("form_duality", dual, format!("|A| = {} vs {}", q_hp.order(), q_ls.order())));
    let embedding = if ls.is_even() { Some(embedding_criteria(ls, K3_SIGNATURE)?) } else { None };
    checks.push(Check::new(
        "embedding",
        matches!(embedding, Some(v) if v != EmbeddingVerdict::Inconclusive),
        format!("{embedding:?}"),
    ));
    Ok(DualityReport { checks, embedding })
}
