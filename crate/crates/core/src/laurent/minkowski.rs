//! Newton polytopes, face polynomials and lattice Minkowski decompositions of faces.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::laurent::param::Coeff;
use crate::laurent::polytope::{convex_ring, LatticePolytope, Point};
use crate::laurent::poly::Laurent;

pub fn newton_polytope<C: Coeff>(p: &Laurent<C>) -> Result<LatticePolytope> {
    if p.is_zero() {
        return Err(Error::Invalid("zero polynomial has no Newton polytope".into()));
    }
    LatticePolytope::from_points(&p.support())
}

/// Terms of `p` supported on `face`, which must be a face of Newt(p).
pub fn face_polynomial<C: Coeff>(p: &Laurent<C>, face: &LatticePolytope) -> Result<Laurent<C>> {
    let n = newton_polytope(p)?;
    if !face.is_face_of(&n) {
        return Err(Error::Invalid(format!("{face} is not a face of the Newton polytope")));
    }
    Ok(restrict(p, face))
}

fn restrict<C: Coeff>(p: &Laurent<C>, face: &LatticePolytope) -> Laurent<C> {
    Laurent::from_terms(p.nvars(), p.terms().filter(|(e, _)| face.contains(e)).map(|(e, c)| (e.clone(), c.clone())))
        .expect("same arity")
}

/// One entry (delta_i, n_i); the polytope is stored with its lex-smallest vertex at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub polytope: LatticePolytope,
    pub multiplicity: u32,
}

/// A lattice Minkowski decomposition M(delta) of one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDecomposition {
    pub face: LatticePolytope,
    pub summands: Vec<Summand>,
}

impl FaceDecomposition {
    pub fn trivial(face: &LatticePolytope) -> Self {
        FaceDecomposition { face: face.clone(), summands: vec![Summand { polytope: face.normalized(), multiplicity: 1 }] }
    }

    pub fn new(face: &LatticePolytope, parts: &[(LatticePolytope, u32)]) -> Self {
        FaceDecomposition {
            face: face.clone(),
            summands: parts.iter().map(|(p, m)| Summand { polytope: p.normalized(), multiplicity: *m }).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].multiplicity == 1
    }

    /// Summands repeated by multiplicity.
    pub fn copies(&self) -> Vec<&LatticePolytope> {
        self.summands.iter().flat_map(|s| std::iter::repeat(&s.polytope).take(s.multiplicity as usize)).collect()
    }

    /// sum n_i delta_i equals the face up to translation.
    pub fn sums_to_face(&self) -> Result<bool> {
        let mut acc: Option<LatticePolytope> = None;
        for c in self.copies() {
            acc = Some(match acc {
                None => c.clone(),
                Some(a) => a.minkowski_sum(c)?,
            });
        }
        Ok(acc.is_some_and(|a| a.equal_up_to_translation(&self.face)))
    }

    /// Lattice points of the face are exactly the sums of lattice points of the summands.
    pub fn lattice_point_condition(&self) -> bool {
        let mut acc: BTreeSet<Point> = BTreeSet::new();
        acc.insert(vec![0; self.face.ambient_dim()]);
        for c in self.copies() {
            let pts = c.lattice_points();
            acc = acc.iter().flat_map(|a| pts.iter().map(move |p| add(a, p))).collect();
        }
        let base = self.face.lex_min_vertex();
        let target: BTreeSet<Point> = self.face.lattice_points().iter().map(|p| sub(p, base)).collect();
        acc == target
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.sums_to_face()? && self.lattice_point_condition())
    }
}

fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Primitive edge vectors (local coordinates) with multiplicity = lattice length.
fn edge_multiset(face: &LatticePolytope) -> Vec<(Point, u32)> {
    let loc = face.local_vertices();
    let mut counts: BTreeMap<Point, u32> = BTreeMap::new();
    match face.dim() {
        1 => {
            let len = (loc[1][0] - loc[0][0]).unsigned_abs() as u32;
            counts.insert(vec![1], len);
            counts.insert(vec![-1], len);
        }
        2 => {
            let ring = convex_ring(loc);
            for i in 0..ring.len() {
                let e = sub(&ring[(i + 1) % ring.len()], &ring[i]);
                let g = e[0].gcd(&e[1]);
                *counts.entry(vec![e[0] / g, e[1] / g]).or_default() += g as u32;
            }
        }
        _ => {}
    }
    counts.into_iter().collect()
}

/// All sub-count-vectors of `rest` containing index `first`, summing to zero.
fn zero_sum_blocks(vecs: &[Point], rest: &[u32], first: usize) -> Vec<Vec<u32>> {
    let d = vecs.first().map_or(0, Vec::len);
    let mut out = vec![];
    let mut cur = vec![0u32; rest.len()];
    fn rec(i: usize, vecs: &[Point], rest: &[u32], first: usize, d: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == rest.len() {
            let mut s = vec![0i64; d];
            for (v, &c) in vecs.iter().zip(cur.iter()) {
                for (x, y) in s.iter_mut().zip(v) {
                    *x += y * i64::from(c);
                }
            }
            if cur[first] > 0 && s.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let lo = u32::from(i == first);
        for c in lo..=rest[i] {
            cur[i] = c;
            rec(i + 1, vecs, rest, first, d, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, vecs, rest, first, d, &mut cur, &mut out);
    out
}

fn block_partitions(vecs: &[Point], rest: Vec<u32>) -> Vec<Vec<Vec<u32>>> {
    let Some(first) = rest.iter().position(|&c| c > 0) else {
        return vec![vec![]];
    };
    let mut out = vec![];
    for b in zero_sum_blocks(vecs, &rest, first) {
        let remaining: Vec<u32> = rest.iter().zip(&b).map(|(r, x)| r - x).collect();
        for mut tail in block_partitions(vecs, remaining) {
            tail.push(b.clone());
            out.push(tail);
        }
    }
    out
}

/// Polygon (or segment) with the given edge vectors, in local coordinates, from the origin.
fn polygon_from_edges(vecs: &[Point], counts: &[u32]) -> Vec<Point> {
    let d = vecs[0].len();
    let mut edges: Vec<(Point, u32)> =
        vecs.iter().zip(counts).filter(|(_, &c)| c > 0).map(|(v, &c)| (v.clone(), c)).collect();
    if d == 2 {
        edges.sort_by(|a, b| angle_cmp(&a.0, &b.0));
    }
    let mut pts = vec![vec![0i64; d]];
    let mut cur = vec![0i64; d];
    for (v, c) in edges {
        for (x, y) in cur.iter_mut().zip(&v) {
            *x += y * i64::from(c);
        }
        pts.push(cur.clone());
    }
    pts
}

fn half(v: &[i64]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
}

fn integer_partitions(k: u32, max: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in (1..=k.min(max)).rev() {
        for mut rest in integer_partitions(k - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every lattice Minkowski decomposition of a face of dimension at most 2, up to
/// translation of summands and reordering. Equal summands may be grouped into
/// multiplicities in every possible way.
pub fn minkowski_decompositions(face: &LatticePolytope) -> Result<Vec<FaceDecomposition>> {
    if face.dim() > 2 {
        return Err(Error::Unsupported("only facets supported (dimension at most 2)".into()));
    }
    if face.dim() == 0 {
        return Ok(vec![FaceDecomposition::trivial(face)]);
    }
    let ms = edge_multiset(face);
    let vecs: Vec<Point> = ms.iter().map(|(v, _)| v.clone()).collect();
    let counts: Vec<u32> = ms.iter().map(|(_, c)| *c).collect();
    let mut seen: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    let mut out: Vec<FaceDecomposition> = vec![];
    for mut blocks in block_partitions(&vecs, counts) {
        blocks.sort();
        if !seen.insert(blocks.clone()) {
            continue;
        }
        // distinct blocks with their repeat counts
        let mut grouped: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for b in &blocks {
            *grouped.entry(b.clone()).or_default() += 1;
        }
        let shapes: Vec<(LatticePolytope, u32)> = grouped
            .iter()
            .map(|(b, k)| {
                let loc = polygon_from_edges(&vecs, b);
                let glob: Vec<Point> = loc.iter().map(|y| face.frame().direction_to_global(y)).collect();
                (LatticePolytope::from_points(&glob).expect("summand").normalized(), *k)
            })
            .collect();
        let flat = FaceDecomposition {
            face: face.clone(),
            summands: shapes.iter().map(|(p, k)| Summand { polytope: p.clone(), multiplicity: *k }).collect(),
        };
        if !flat.lattice_point_condition() {
            continue;
        }
        // every way of grouping equal copies into multiplicities
        let mut variants: Vec<Vec<Summand>> = vec![vec![]];
        for (p, k) in &shapes {
            let mut next = vec![];
            for v in &variants {
                for part in integer_partitions(*k, *k) {
                    let mut w = v.clone();
                    w.extend(part.into_iter().map(|m| Summand { polytope: p.clone(), multiplicity: m }));
                    next.push(w);
                }
            }
            variants = next;
        }
        out.extend(variants.into_iter().map(|summands| FaceDecomposition { face: face.clone(), summands }));
    }
    out.sort_by_key(|d| (d.summands.len(), d.summands.iter().map(|s| s.multiplicity).sum::<u32>()));
    Ok(out)
}

/// Whether `m1` refines `m2`: the copies of the summands of `m1` split into groups,
/// n_j groups for each (delta_j, n_j) of `m2`, each group summing to delta_j.
pub fn refines(m1: &FaceDecomposition, m2: &FaceDecomposition) -> Result<bool> {
    let copies: Vec<&LatticePolytope> = m1.copies();
    let mut slots: Vec<(usize, &LatticePolytope)> = vec![];
    for (j, s) in m2.summands.iter().enumerate() {
        for _ in 0..s.multiplicity {
            slots.push((j, &s.polytope));
        }
    }
    let caps: Vec<usize> = slots.iter().map(|(_, p)| p.lattice_points().len()).collect();
    let mut sums: Vec<Option<LatticePolytope>> = vec![None; slots.len()];
    fn rec(
        i: usize,
        copies: &[&LatticePolytope],
        slots: &[(usize, &LatticePolytope)],
        caps: &[usize],
        sums: &mut Vec<Option<LatticePolytope>>,
    ) -> Result<bool> {
        if i == copies.len() {
            return Ok(slots
                .iter()
                .zip(sums.iter())
                .all(|((_, t), s)| s.as_ref().is_some_and(|s| s.equal_up_to_translation(t))));
        }
        for k in 0..slots.len() {
            // identical empty slots are interchangeable
            if sums[k].is_none() && (0..k).any(|l| sums[l].is_none() && slots[l].0 == slots[k].0) {
                continue;
            }
            let next = match &sums[k] {
                None => copies[i].clone(),
                Some(s) => s.minkowski_sum(copies[i])?,
            };
            if next.lattice_points().len() > caps[k] {
                continue;
            }
            let saved = sums[k].replace(next);
            if rec(i + 1, copies, slots, caps, sums)? {
                return Ok(true);
            }
            sums[k] = saved;
        }
        Ok(false)
    }
    rec(0, &copies, &slots, &caps, &mut sums)
}

/// Normalized polynomial of an admissible summand (unit segment or A_n triangle),
/// placed with its lex-smallest vertex at the origin; `None` if not admissible.
pub fn canonical_summand_polynomial<C: Coeff>(s: &LatticePolytope) -> Option<Laurent<C>> {
    let n = s.ambient_dim();
    match s.dim() {
        0 => Some(Laurent::one(n)),
        1 => {
            if s.lattice_points().len() != 2 {
                return None;
            }
            let base = s.lex_min_vertex().clone();
            Laurent::from_terms(n, s.vertices().iter().map(|v| (sub(v, &base), C::one()))).ok()
        }
        2 => {
            if s.vertices().len() != 3 {
                return None;
            }
            let vs = s.vertices();
            let base = s.lex_min_vertex().clone();
            // long edge: the one whose opposite vertex is at lattice distance 1
            for apex in 0..3 {
                let (a, b) = (&vs[(apex + 1) % 3], &vs[(apex + 2) % 3]);
                let e = sub(b, a);
                let len = e.iter().fold(0i64, |g, x| g.gcd(x));
                let pts_on_edge = len + 1;
                let total = s.lattice_points().len() as i64;
                if total != pts_on_edge + 1 {
                    continue;
                }
                let step: Point = e.iter().map(|x| x / len).collect();
                let mut terms = vec![(sub(&vs[apex], &base), C::one())];
                let mut binom = num_bigint::BigInt::from(1);
                for k in 0..=len {
                    let pt: Point = a.iter().zip(&step).map(|(x, y)| x + k * y).collect();
                    terms.push((sub(&pt, &base), C::from_rational(crate::scalar::Rational::from_integer(binom.clone()))));
                    binom = binom * (len - k) / (k + 1);
                }
                return Laurent::from_terms(n, terms).ok();
            }
            None
        }
        _ => None,
    }
}

/// p_delta = (prod h_i^{n_i}) x^nu with Newt(h_i) = delta_i, for each listed face.
/// Faces not listed carry the trivial decomposition, which always holds.
pub fn verify_m_polynomial<C: Coeff>(
    p: &Laurent<C>,
    datum: &[FaceDecomposition],
    witness: &[Vec<Laurent<C>>],
) -> Result<bool> {
    if datum.len() != witness.len() {
        return Err(Error::Dimension(format!("{} faces but {} witness lists", datum.len(), witness.len())));
    }
    let newt = newton_polytope(p)?;
    for (d, hs) in datum.iter().zip(witness) {
        if d.summands.len() != hs.len() {
            return Err(Error::Dimension(format!(
                "face {} has {} summands but {} factors",
                d.face,
                d.summands.len(),
                hs.len()
            )));
        }
        if !d.face.is_face_of(&newt) {
            return Err(Error::Invalid(format!("{} is not a face of the Newton polytope", d.face)));
        }
        if !d.is_valid()? {
            return Err(Error::Invalid(format!("datum for {} is not a lattice Minkowski decomposition", d.face)));
        }
        let mut prod = Laurent::<C>::one(p.nvars());
        for (s, h) in d.summands.iter().zip(hs) {
            if h.is_zero() || !newton_polytope(h)?.equal_up_to_translation(&s.polytope) {
                return Ok(false);
            }
            prod = &prod * &h.pow(s.multiplicity);
        }
        if !matches_up_to_monomial(&restrict(p, &d.face), &prod) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// a = b * x^nu for some nu.
pub fn matches_up_to_monomial<C: Coeff>(a: &Laurent<C>, b: &Laurent<C>) -> bool {
    let (Some((ea, _)), Some((eb, _))) = (a.terms().next(), b.terms().next()) else {
        return a.is_zero() && b.is_zero();
    };
    let nu = sub(ea, eb);
    b.mul_monomial(&nu) == *a
}

/// A facet together with the admissible decomposition and factors that reproduce it.
#[derive(Clone, Debug)]
pub struct FacetFactorization<C> {
    pub decomposition: FaceDecomposition,
    pub factors: Vec<Laurent<C>>,
}

#[derive(Clone, Debug)]
pub struct MinkowskiCheck<C> {
    pub is_minkowski: bool,
    pub witness: Vec<FacetFactorization<C>>,
    pub failed_facet: Option<LatticePolytope>,
}

/// Minkowski polynomial test: every facet polynomial is the product of the normalized
/// segment / A_n-triangle polynomials of some admissible decomposition. Edges and
/// vertices lie on facets and are covered by the same products.
pub fn is_minkowski_polynomial<C: Coeff>(p: &Laurent<C>) -> Result<MinkowskiCheck<C>> {
    let newt = newton_polytope(p)?;
    if newt.dim() != 3 || !newt.is_full_dimensional() {
        return Err(Error::Invalid("Newton polytope must be 3-dimensional".into()));
    }
    if !newt.reflexivity()?.is_reflexive {
        return Err(Error::Invalid("Newton polytope is not reflexive".into()));
    }
    let mut witness = vec![];
    for facet in newt.faces(2) {
        let pf = restrict(p, &facet);
        let mut found = None;
        for d in minkowski_decompositions(&facet)? {
            let hs: Option<Vec<Laurent<C>>> =
                d.summands.iter().map(|s| canonical_summand_polynomial::<C>(&s.polytope)).collect();
            let Some(hs) = hs else { continue };
            let prod = d.summands.iter().zip(&hs).fold(Laurent::one(p.nvars()), |acc, (s, h)| &acc * &h.pow(s.multiplicity));
            if matches_up_to_monomial(&pf, &prod) {
                found = Some(FacetFactorization { decomposition: d, factors: hs });
                break;
            }
        }
        match found {
            Some(f) => witness.push(f),
            None => return Ok(MinkowskiCheck { is_minkowski: false, witness, failed_facet: Some(facet) }),
        }
    }
    Ok(MinkowskiCheck { is_minkowski: true, witness, failed_facet: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse::parse_laurent;
    use crate::scalar::Rational;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_points(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn square_decompositions() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let ds = minkowski_decompositions(&sq).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds[0].is_trivial());
        assert_eq!(ds[1].summands.len(), 2);
        assert!(ds.iter().all(|d| d.is_valid().unwrap()));
    }

    #[test]
    fn long_segment() {
        let s = poly(&[&[0, 0, 0], &[2, 0, 2]]);
        let ds = minkowski_decompositions(&s).unwrap();
        assert_eq!(ds.len(), 3);
        let mults: Vec<Vec<u32>> = ds.iter().map(|d| d.summands.iter().map(|x| x.multiplicity).collect()).collect();
        assert_eq!(mults, vec![vec![1], vec![2], vec![1, 1]]);
    }

    #[test]
    fn lattice_point_test_filters() {
        let a2 = poly(&[&[0, 0], &[1, 0], &[0, 2]]);
        assert_eq!(minkowski_decompositions(&a2).unwrap().len(), 1);
        // hexagon = triangle + reversed triangle, both summands unimodular
        let hex = poly(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1], &[1, -1]]);
        let ds = minkowski_decompositions(&hex).unwrap();
        assert!(ds.iter().any(|d| d.summands.len() == 2 && d.summands.iter().all(|s| s.polytope.vertices().len() == 3)));
        assert!(ds.iter().any(|d| d.summands.len() == 3));
        assert!(ds.iter().all(FaceDecomposition::lattice_point_condition));
        let cube = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert!(minkowski_decompositions(&cube).is_err());
    }

    #[test]
    fn refinement() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let ds = minkowski_decompositions(&sq).unwrap();
        let triv = FaceDecomposition::trivial(&sq);
        assert!(refines(&ds[1], &triv).unwrap());
        assert!(!refines(&triv, &ds[1]).unwrap());
        let double = FaceDecomposition::new(&sq.dilate(2), &[(sq.clone(), 2)]);
        let split = FaceDecomposition::new(&sq.dilate(2), &[(sq.clone(), 1), (sq.clone(), 1)]);
        assert!(refines(&double, &split).unwrap());
        let segs = FaceDecomposition { face: sq.clone(), summands: ds[1].summands.clone() };
        let bogus = FaceDecomposition::new(&sq, &[(sq.clone(), 2)]);
        assert!(!refines(&segs, &bogus).unwrap());
    }

    #[test]
    fn canonical_triangle() {
        let a3 = poly(&[&[0, 0], &[1, 0], &[0, 3]]);
        let h: Laurent<Rational> = canonical_summand_polynomial(&a3).unwrap();
        let expected: Laurent<Rational> = parse_laurent("(1+y)^3 + x").unwrap().specialize(&Default::default()).unwrap();
        assert_eq!(h, expected);
        assert!(canonical_summand_polynomial::<Rational>(&poly(&[&[0, 0], &[2, 0], &[0, 2]])).is_none());
    }

    #[test]
    fn minkowski_polynomial_checks() {
        let p = parse_laurent("(x*y*z+1)*(x*y*z^2+x*y*z+x+y)/(x*y*z) - 1").unwrap();
        let r = is_minkowski_polynomial(&p).unwrap();
        assert!(r.is_minkowski, "{:?}", r.failed_facet);
        let q = parse_laurent("x + y + z + 2*x^-1*y^-1*z^-1").unwrap();
        assert!(!is_minkowski_polynomial(&q).unwrap().is_minkowski);
        assert!(is_minkowski_polynomial(&parse_laurent("x + y + z + x^-1*y^-1*z^-1").unwrap()).unwrap().is_minkowski);
        assert!(is_minkowski_polynomial(&parse_laurent("x + y + z").unwrap()).is_err());
    }

    #[test]
    fn face_polynomials() {
        let p = parse_laurent("x + y + 3*x^-1*y^-1 + 5").unwrap();
        let n = newton_polytope(&p).unwrap();
        let v = poly(&[&[1, 0]]);
        assert_eq!(face_polynomial(&p, &v).unwrap(), parse_laurent("x").unwrap());
        assert_eq!(face_polynomial(&p, &n).unwrap(), p);
        assert!(face_polynomial(&p, &poly(&[&[0, 0]])).is_err());
    }
}
