//! Anticanonical (Beauville) pairings on Fano threefolds: <a,b> = c1(X).a.b.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fixture::{as_array, as_int, as_string_list, check_keys, Document};
use crate::genus::genus_equal;
use crate::lattice::{IntegralLattice, RootType};
use crate::matrix::Matrix;
use crate::Lattice;

/// Symmetric trilinear form on a set of divisor generators plus the class of -K.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleIntersectionData {
    labels: Vec<String>,
    t: Vec<BigInt>,
    minus_k: Vec<BigInt>,
}

impl TripleIntersectionData {
    /// Zero tensor; fill with `set`.
    pub fn new(labels: Vec<String>, minus_k: Vec<BigInt>) -> Result<Self> {
        let n = labels.len();
        if minus_k.len() != n {
            return Err(Error::Dimension(format!("-K has {} entries, {} generators", minus_k.len(), n)));
        }
        Ok(TripleIntersectionData { labels, t: vec![BigInt::zero(); n * n * n], minus_k })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn minus_k(&self) -> &[BigInt] {
        &self.minus_k
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.dim();
        (i * n + j) * n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.t[self.idx(i, j, k)]
    }

    /// Sets T(i,j,k) and all its permutations.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: impl Into<BigInt>) {
        let v = v.into();
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            let id = self.idx(a, b, c);
            self.t[id] = v.clone();
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let v = self.get(i, j, k);
                    v == self.get(j, i, k) && v == self.get(i, k, j)
                })
            })
        })
    }

    /// Matrix of D_i.D_j.c for a class c in the generator basis.
    pub fn contract(&self, c: &[BigInt]) -> Result<Matrix<BigInt>> {
        let n = self.dim();
        if c.len() != n {
            return Err(Error::Dimension(format!("class has {} entries, {} generators", c.len(), n)));
        }
        Ok(Matrix::from_fn(n, n, |i, j| {
            (0..n).fold(BigInt::zero(), |acc, k| acc + &c[k] * self.get(i, j, k))
        }))
    }

    /// P^1 x P^1 x P^1 with fibre classes F1, F2, F3.
    pub fn p1_cubed() -> Self {
        let mut d = Self::new(vec!["F1".into(), "F2".into(), "F3".into()], ints(&[2, 2, 2])).expect("dims");
        d.set(0, 1, 2, 1);
        d
    }

    pub fn p3() -> Self {
        let mut d = Self::new(vec!["H".into()], ints(&[4])).expect("dims");
        d.set(0, 0, 0, 1);
        d
    }

    /// P^1 x P^2 with H1 from P^1 and H2 from P^2.
    pub fn p1_p2() -> Self {
        let mut d = Self::new(vec!["H1".into(), "H2".into()], ints(&[2, 3])).expect("dims");
        d.set(0, 1, 1, 1);
        d
    }

    /// Text form: `[triple]` with `labels`, `minus_k` and `entries = [["H","H","H",1], ...]`.
    pub fn parse(text: &str, strict: bool) -> Result<(Self, Vec<String>)> {
        let doc = Document::parse(text)?;
        let sec = doc.require("triple")?;
        let mut warnings = vec![];
        check_keys(sec, &["labels", "minus_k", "entries"], strict, &mut warnings)?;
        let labels = as_string_list(sec.require("labels")?, "labels")?;
        let minus_k = int_list(sec.require("minus_k")?, "minus_k")?;
        let mut d = Self::new(labels, minus_k)?;
        for e in as_array(sec.require("entries")?, "entries")? {
            let e = as_array(e, "entries")?;
            if e.len() != 4 {
                return Err(Error::Schema("entries: expected [label, label, label, value]".into()));
            }
            let mut ix = [0usize; 3];
            for (slot, v) in ix.iter_mut().zip(e) {
                let name = v.as_str().ok_or_else(|| Error::Schema("entries: expected label".into()))?;
                *slot = d
                    .labels
                    .iter()
                    .position(|l| l == name)
                    .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            }
            d.set(ix[0], ix[1], ix[2], as_int(&e[3], "entries")?);
        }
        Ok((d, warnings))
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn int_list(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    as_array(v, what)?.iter().map(|x| as_int(x, what)).collect()
}

fn labelled(gram: Matrix<BigInt>, labels: &[String]) -> Result<Lattice> {
    IntegralLattice::from_gram(gram)?.with_labels(labels.to_vec())
}

pub fn anticanonical_gram(data: &TripleIntersectionData) -> Result<Lattice> {
    labelled(data.contract(&data.minus_k)?, &data.labels)
}

/// Double cover branched in a smooth divisor; -K of the cover is the pullback of `minus_k_pullback`.
pub fn double_cover_gram(base: &TripleIntersectionData, minus_k_pullback: &[BigInt]) -> Result<Lattice> {
    let g = base.contract(minus_k_pullback)?.scale(&BigInt::from(2));
    labelled(g, &base.labels)
}

/// Smooth curve Y on X: intersection numbers D_i.Y and genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveOnFano {
    pub dot: Vec<BigInt>,
    pub genus: u32,
}

impl CurveOnFano {
    pub fn new(dot: &[i64], genus: u32) -> Self {
        CurveOnFano { dot: ints(dot), genus }
    }
}

/// Pairing on the blow-up along Y, basis (pullbacks, exceptional divisor).
/// The corner is 2g - 2.
pub fn blowup_extend(gram_x: &Lattice, curve: &CurveOnFano) -> Result<Lattice> {
    let n = gram_x.rank();
    if curve.dot.len() != n {
        return Err(Error::Dimension(format!("curve has {} intersection numbers, rank {}", curve.dot.len(), n)));
    }
    let corner = BigInt::from(2 * i64::from(curve.genus) - 2);
    let g = gram_x.gram();
    let m = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => g[(i, j)].clone(),
        (true, false) => curve.dot[i].clone(),
        (false, true) => curve.dot[j].clone(),
        (false, false) => corner.clone(),
    });
    let l = IntegralLattice::from_gram(m)?;
    match gram_x.labels() {
        Some(ls) => {
            let mut ls = ls.to_vec();
            ls.push("E".into());
            l.with_labels(ls)
        }
        None => Ok(l),
    }
}

/// Base of a projective bundle P(E) with E split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BundleBase {
    P1,
    P2,
}

impl BundleBase {
    fn dim(self) -> usize {
        match self {
            BundleBase::P1 => 1,
            BundleBase::P2 => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "P1" => Ok(BundleBase::P1),
            "P2" => Ok(BundleBase::P2),
            _ => Err(Error::Unsupported(format!("bundle base {s}"))),
        }
    }
}

/// Complete homogeneous symmetric polynomial h_k(d).
fn complete_homogeneous(d: &[BigInt], k: usize) -> BigInt {
    fn rec(d: &[BigInt], k: usize) -> BigInt {
        if k == 0 {
            return BigInt::one();
        }
        match d.split_first() {
            None => BigInt::zero(),
            Some((first, rest)) => {
                let mut acc = BigInt::zero();
                let mut pw = BigInt::one();
                for j in 0..=k {
                    acc += &pw * rec(rest, k - j);
                    pw *= first;
                }
                acc
            }
        }
    }
    rec(d, k)
}

/// Gram of P(O(d_1) + ... + O(d_r)) over P^m in the basis (H, zeta), zeta = O(1).
///
/// Uses zeta^r = sum c_i zeta^{r-i} with integrals H^a zeta^b = h_{b-r+1}(d) for a + b = 3,
/// and -K = r zeta + (m + 1 - sum d) H. Only threefolds: m + r - 1 = 3 with m in {1, 2}.
pub fn projective_bundle_gram(base: BundleBase, degrees: &[i64]) -> Result<Lattice> {
    let m = base.dim();
    let r = degrees.len();
    if r + m != 4 {
        return Err(Error::Unsupported(format!("rank {r} bundle over P{m} is not a threefold")));
    }
    let d = ints(degrees);
    let integral = |a: usize, b: usize| -> BigInt {
        if a + b != 3 || a > m || b + 1 < r {
            return BigInt::zero();
        }
        complete_homogeneous(&d, b + 1 - r)
    };
    let sum_d: BigInt = d.iter().sum();
    let mk = [BigInt::from(m as i64 + 1) - sum_d, BigInt::from(r as i64)];
    // generator 0 = H, generator 1 = zeta
    let pair = |i: usize, j: usize| -> BigInt {
        let mut acc = BigInt::zero();
        for (k, c) in mk.iter().enumerate() {
            let a = (i == 0) as usize + (j == 0) as usize + (k == 0) as usize;
            acc += c * integral(a, 3 - a);
        }
        acc
    };
    let g = Matrix::from_fn(2, 2, |i, j| pair(i, j));
    labelled(g, &["H".to_string(), "zeta".to_string()])
}

/// N_k: pairing on a K3 in P^1 x S with S the blow-up of P^2 in k points.
/// Basis R_1..R_k, G, S.
pub fn product_dp_lattice(points: usize) -> Result<Lattice> {
    if !(1..=8).contains(&points) {
        return Err(Error::Invalid(format!("blown-up points must be in 1..=8, got {points}")));
    }
    let k = points;
    let g = Matrix::from_fn(k + 2, k + 2, |i, j| {
        let v: i64 = match (i, j) {
            _ if i < k && j < k => {
                if i == j {
                    -2
                } else {
                    0
                }
            }
            _ if (i < k && j == k + 1) || (j < k && i == k + 1) => -1,
            _ if i < k || j < k => 0,
            _ if i == k && j == k => 2,
            _ if i == k + 1 && j == k + 1 => 0,
            _ => 3,
        };
        BigInt::from(v)
    });
    let mut labels: Vec<String> = (1..=k).map(|i| format!("R{i}")).collect();
    labels.push("G".into());
    labels.push("S".into());
    labelled(g, &labels)
}

/// Root lattice attached to a del Pezzo surface of degree 1..=6.
pub fn dp_root_system(degree: usize) -> Result<Vec<(RootType, usize)>> {
    use RootType::*;
    Ok(match degree {
        1 => vec![(E, 8)],
        2 => vec![(E, 7)],
        3 => vec![(E, 6)],
        4 => vec![(D, 5)],
        5 => vec![(A, 4)],
        6 => vec![(A, 2), (A, 1)],
        _ => return Err(Error::Invalid(format!("no root lattice for degree {degree}"))),
    })
}

fn root_name(parts: &[(RootType, usize)]) -> String {
    parts.iter().map(|(k, n)| format!("{}{}", k.letter(), n)).collect::<Vec<_>>().join("+")
}

/// H + R(2) with R negative definite, i.e. Gram -2 * Cartan on the root part.
pub fn hyperbolic_plus_scaled_roots(parts: &[(RootType, usize)]) -> Result<Lattice> {
    let mut l = Lattice::hyperbolic();
    for (kind, n) in parts {
        l = l.direct_sum(&Lattice::root(*kind, *n)?.rescale(&BigInt::from(-2))?);
    }
    Ok(l)
}

#[derive(Clone, Debug, Serialize)]
pub struct DpIdentification {
    pub degree: usize,
    pub points: usize,
    pub root: String,
    pub det_n: String,
    pub det_candidate: String,
    pub genus_equal: bool,
}

/// Compare N_{9-d} with H + R_d(2) (optionally with another root system as control).
pub fn dp_root_identification_with(
    degree: usize,
    roots: &[(RootType, usize)],
    bound: u64,
) -> Result<DpIdentification> {
    if !(1..=8).contains(&degree) {
        return Err(Error::Invalid(format!("degree must be in 1..=8, got {degree}")));
    }
    let n = product_dp_lattice(9 - degree)?;
    let cand = hyperbolic_plus_scaled_roots(roots)?;
    let eq = if n.rank() == cand.rank() { genus_equal(&n, &cand, bound)? } else { false };
    Ok(DpIdentification {
        degree,
        points: 9 - degree,
        root: root_name(roots),
        det_n: n.determinant().to_string(),
        det_candidate: cand.determinant().to_string(),
        genus_equal: eq,
    })
}

pub fn dp_root_identification(degree: usize, bound: u64) -> Result<DpIdentification> {
    dp_root_identification_with(degree, &dp_root_system(degree)?, bound)
}

/// `[curve]` section: `dot = [...]`, `genus = g`.
pub fn parse_curve(text: &str, strict: bool) -> Result<(CurveOnFano, Vec<String>)> {
    let doc = Document::parse(text)?;
    let sec = doc.require("curve")?;
    let mut warnings = vec![];
    check_keys(sec, &["dot", "genus"], strict, &mut warnings)?;
    let dot = int_list(sec.require("dot")?, "dot")?;
    let genus = sec
        .require("genus")?
        .as_u64()
        .and_then(|g| u32::try_from(g).ok())
        .ok_or_else(|| Error::Schema("genus: expected non-negative integer".into()))?;
    Ok((CurveOnFano { dot, genus }, warnings))
}
