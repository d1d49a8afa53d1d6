//! Mutations, monomial changes of variables and main periods.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::param::Coeff;
use crate::laurent::polytope::{dot, LatticePolytope};
use crate::laurent::poly::{Exponent, Laurent};
use crate::matrix::Matrix;

fn check_unimodular(rows: &[Exponent], n: usize, what: &str) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("{what} must be {n}x{n}")));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let d = Matrix::<i64>::from_i64_rows(&refs).det();
    if d.abs() != 1 {
        return Err(Error::Invalid(format!("{what} has determinant {d}, expected +-1")));
    }
    Ok(())
}

/// Split `p` by the weight `<m, e>` of its exponents.
pub fn graded_pieces<C: Coeff>(p: &Laurent<C>, m: &[i64]) -> BTreeMap<i64, Laurent<C>> {
    let mut out: BTreeMap<i64, Vec<(Exponent, C)>> = BTreeMap::new();
    for (e, c) in p.terms() {
        out.entry(dot(m, e)).or_default().push((e.clone(), c.clone()));
    }
    out.into_iter()
        .map(|(w, ts)| (w, Laurent::from_terms(p.nvars(), ts).expect("same arity")))
        .collect()
}

/// mu_{m,g}(p): the weight-i piece of p (weight <m,.>) is multiplied by g^i.
///
/// `g` must be supported on the hyperplane m^perp, so the pieces q_i x_m^i are
/// read off directly and no basis completion is needed.
pub fn mutate<C: Coeff>(p: &Laurent<C>, m: &[i64], g: &Laurent<C>) -> Result<Laurent<C>> {
    let n = p.nvars().max(g.nvars());
    if m.len() != n {
        return Err(Error::Dimension(format!("direction has {} entries, polynomial has {n} variables", m.len())));
    }
    let g = g.with_nvars(n)?;
    let p = p.with_nvars(n)?;
    let content = m.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
    if content != 1 {
        return Err(Error::Invalid(format!("direction {m:?} is not primitive")));
    }
    if g.is_zero() {
        return Err(Error::Invalid("mutation factor is zero".into()));
    }
    if let Some(e) = g.support().into_iter().find(|e| dot(m, e) != 0) {
        return Err(Error::Invalid(format!("factor term {e:?} is not orthogonal to {m:?}")));
    }
    let mut out = Laurent::zero(n);
    for (w, q) in graded_pieces(&p, m) {
        let piece = if w >= 0 {
            &q * &g.pow(w as u32)
        } else {
            q.div_exact(&g.pow((-w) as u32))?.ok_or(Error::NotMutable(w))?
        };
        out = &out + &piece;
    }
    Ok(out)
}

/// Substitute x_j -> x^{rows[j]}: row j is the exponent vector of the image of x_j.
pub fn change_of_variables<C: Coeff>(p: &Laurent<C>, rows: &[Exponent]) -> Result<Laurent<C>> {
    check_unimodular(rows, p.nvars(), "change of variables")?;
    p.substitute_monomials(rows, &vec![C::one(); rows.len()])
}

/// x_j -> scalings_j * prod_i x_i^{a[i][j]}; column j of `a` is the image exponent of x_j.
pub fn monomial_transform<C: Coeff>(p: &Laurent<C>, a: &[Exponent], scalings: &[C]) -> Result<Laurent<C>> {
    check_unimodular(a, p.nvars(), "transform")?;
    let n = a.len();
    let cols: Vec<Exponent> = (0..n).map(|j| (0..n).map(|i| a[i][j]).collect()).collect();
    if scalings.len() != n {
        return Err(Error::Dimension("one scaling per variable required".into()));
    }
    if let Some(s) = scalings.iter().find(|s| s.try_inverse().is_none()) {
        return Err(Error::Invalid(format!("scaling {s} is not an invertible monomial")));
    }
    p.substitute_monomials(&cols, scalings)
}

/// A mutation written as `(x,y,z) -> (x,y,z)^(M, f, N)`.
///
/// Decoding: change variables by the rows of `m`, mutate in the direction of the
/// last coordinate along `f` (which must not involve it), change variables by the
/// rows of `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutationTriple<F> {
    pub m: Vec<Exponent>,
    pub f: F,
    pub n: Vec<Exponent>,
}

impl<C: Coeff> MutationTriple<Laurent<C>> {
    pub fn new(m: Vec<Exponent>, f: Laurent<C>, n: Vec<Exponent>) -> Result<Self> {
        let d = m.len();
        check_unimodular(&m, d, "M")?;
        check_unimodular(&n, d, "N")?;
        if f.nvars() > d {
            return Err(Error::Dimension("factor has too many variables".into()));
        }
        Ok(MutationTriple { m, f, n })
    }

    pub fn identity(d: usize) -> Self {
        let id: Vec<Exponent> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        MutationTriple { m: id.clone(), f: Laurent::one(d), n: id }
    }

    pub fn apply(&self, p: &Laurent<C>) -> Result<Laurent<C>> {
        mutate_triple(p, self)
    }
}

pub fn mutate_triple<C: Coeff>(p: &Laurent<C>, t: &MutationTriple<Laurent<C>>) -> Result<Laurent<C>> {
    let d = t.m.len();
    let p = p.with_nvars(d)?;
    let q = change_of_variables(&p, &t.m)?;
    let mut dir = vec![0i64; d];
    dir[d - 1] = 1;
    let q = mutate(&q, &dir, &t.f).map_err(|e| match e {
        Error::NotMutable(w) => Error::NotLaurent(format!("mutation step leaves a pole at weight {w}")),
        other => other,
    })?;
    change_of_variables(&q, &t.n)
}

/// phi[p^0], ..., phi[p^n]: constant terms of powers of p.
///
/// Terms of p^j that cannot return to the origin in the remaining n-j factors
/// are dropped; the test is conservative (Newton polytope inequalities, or a
/// bounding box when the polytope is not full-dimensional).
pub fn main_period<C: Coeff>(p: &Laurent<C>, n: usize) -> Vec<C> {
    let mut out = vec![C::one()];
    if n == 0 {
        return out;
    }
    if p.is_zero() {
        out.extend((0..n).map(|_| C::zero()));
        return out;
    }
    let nv = p.nvars();
    let newt = LatticePolytope::from_points(&p.support()).expect("nonempty support");
    let bbox = p.bounding_box();
    let reachable = |e: &[i64], k: i64| -> bool {
        let back: Vec<i64> = e.iter().map(|x| -x).collect();
        if bbox.iter().zip(&back).any(|((lo, hi), x)| *x < k * lo || *x > k * hi) {
            return false;
        }
        if newt.is_full_dimensional() {
            return newt.facets().iter().all(|f| dot(&f.normal, &back) >= k * f.offset);
        }
        true
    };
    let mut acc = Laurent::one(nv);
    for j in 1..=n {
        acc = &acc * p;
        let left = (n - j) as i64;
        let kept: Vec<(Exponent, C)> = acc
            .terms()
            .filter(|(e, _)| reachable(e, left))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        acc = Laurent::from_terms(nv, kept).expect("same arity");
        out.push(acc.constant_term());
    }
    out
}
