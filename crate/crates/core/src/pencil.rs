//! From the singularity and curve data of a pencil to the lattice `L_S`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::duality::{dn_dual_verify, Check};
use crate::error::{Error, Result};
use crate::fixture::{self, as_int, as_int_matrix, as_rational_text, as_str, as_string_list, check_keys, Document};
use crate::form::{forms_equivalent, FiniteQuadraticForm};
use crate::lattice::{cartan, IntegralLattice, RootType};
use crate::matrix::Matrix;
use crate::scalar::format_rational;
use crate::Lattice;

type IntMatrix = Matrix<BigInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdeType {
    pub kind: RootType,
    pub n: usize,
}

impl AdeType {
    pub fn new(kind: RootType, n: usize) -> Result<Self> {
        cartan::<i64>(kind, n)?;
        Ok(AdeType { kind, n })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('A') => RootType::A,
            Some('D') => RootType::D,
            Some('E') => RootType::E,
            _ => return Err(Error::InvalidRoot(s.to_string())),
        };
        let n: usize = chars.as_str().parse().map_err(|_| Error::InvalidRoot(s.to_string()))?;
        Self::new(kind, n)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn cartan(&self) -> IntMatrix {
        cartan(self.kind, self.n).expect("validated on construction")
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub label: String,
    pub ade: AdeType,
    pub note: Option<String>,
}

/// Printed discriminant data: the form on `L_S` and the one on `H ⊕ Pic(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedForms {
    pub form: FiniteQuadraticForm,
    pub dual: FiniteQuadraticForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilConfig {
    pub family_id: String,
    pub parametrized: bool,
    pub singularities: Vec<SingularPoint>,
    pub curve_labels: Vec<String>,
    pub mixed_b: IntMatrix,
    pub mixed_c: IntMatrix,
    /// Non-trivial orbits; labels not listed are fixed.
    pub galois_orbits: Vec<Vec<String>>,
    pub pic: Lattice,
    pub expected: Option<ExpectedForms>,
}

impl PencilConfig {
    /// `E{i}^{j}`: component `j` over the `i`-th singular point, both 1-based.
    pub fn exceptional_labels(&self) -> Vec<String> {
        self.singularities
            .iter()
            .enumerate()
            .flat_map(|(i, p)| (1..=p.ade.rank()).map(move |j| format!("E{}^{}", i + 1, j)))
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut l = self.exceptional_labels();
        l.extend(self.curve_labels.iter().cloned());
        l
    }

    pub fn validate(&self) -> Result<()> {
        let ex = self.exceptional_labels().len();
        let nc = self.curve_labels.len();
        if self.mixed_b.rows() != nc || self.mixed_b.cols() != ex {
            return Err(Error::Dimension(format!(
                "B is {}x{}, expected {nc}x{ex}",
                self.mixed_b.rows(),
                self.mixed_b.cols()
            )));
        }
        if self.mixed_c.rows() != nc || !self.mixed_c.is_symmetric() {
            return Err(Error::Schema("C must be a symmetric square matrix over the curves".into()));
        }
        let mut seen = HashSet::new();
        for p in &self.singularities {
            if !seen.insert(p.label.clone()) {
                return Err(Error::Schema(format!("duplicate singular point {}", p.label)));
            }
        }
        let mut seen = HashSet::new();
        for c in &self.curve_labels {
            if !seen.insert(c.clone()) {
                return Err(Error::Schema(format!("duplicate curve {c}")));
            }
        }
        let labels = self.labels();
        check_orbits(&labels, &self.galois_orbits)?;
        if !self.pic.is_nondegenerate() {
            return Err(Error::Schema("Pic(X) is degenerate".into()));
        }
        Ok(())
    }

    pub fn rank_pic(&self) -> usize {
        self.pic.rank()
    }

    pub fn from_document(doc: &Document, strict: bool) -> Result<(Self, Vec<String>)> {
        let mut warnings = vec![];
        for s in &doc.sections {
            let known = ["family", "pic", "singularities", "curves", "mixed", "galois", "expected"];
            if !known.contains(&s.name.as_str()) {
                let msg = format!("unknown section [{}]", s.name);
                if strict {
                    return Err(Error::Schema(msg));
                }
                warnings.push(msg);
            }
        }
        let fam = doc.require("family")?;
        check_keys(fam, &["id", "rank_pic", "parametrized"], strict, &mut warnings)?;
        let family_id = as_str(fam.require("id")?, "id")?.to_string();
        let rank_pic = fixture::as_usize(fam.require("rank_pic")?, "rank_pic")?;
        let parametrized = fam.get("parametrized").and_then(|v| v.as_bool()).unwrap_or(false);

        let pic_sec = doc.require("pic")?;
        check_keys(pic_sec, &["gram", "labels"], strict, &mut warnings)?;
        let pic_gram = as_int_matrix(pic_sec.require("gram")?, "pic.gram", None)?;
        if !pic_gram.is_symmetric() {
            return Err(Error::Schema("pic.gram is not symmetric".into()));
        }
        if pic_gram.rows() != rank_pic {
            return Err(Error::Schema(format!("pic.gram has rank {} but rank_pic = {rank_pic}", pic_gram.rows())));
        }
        let pic = IntegralLattice::from_gram(pic_gram)?;

        let sing = doc.require("singularities")?;
        let mut singularities: Vec<SingularPoint> = vec![];
        let mut notes: HashMap<String, String> = HashMap::new();
        for e in &sing.entries {
            if let Some(base) = e.key.strip_suffix(".note") {
                notes.insert(base.to_string(), as_str(&e.value, &e.key)?.to_string());
            } else {
                let ade = AdeType::parse(as_str(&e.value, &e.key)?)?;
                singularities.push(SingularPoint { label: e.key.clone(), ade, note: None });
            }
        }
        for (k, v) in notes {
            match singularities.iter_mut().find(|p| p.label == k) {
                Some(p) => p.note = Some(v),
                None => return Err(Error::Schema(format!("note for unknown point {k}"))),
            }
        }

        let curves = doc.require("curves")?;
        check_keys(curves, &["order"], strict, &mut warnings)?;
        let curve_labels = as_string_list(curves.require("order")?, "curves.order")?;

        let mixed = doc.require("mixed")?;
        check_keys(mixed, &["B", "C"], strict, &mut warnings)?;
        let ex: usize = singularities.iter().map(|p| p.ade.rank()).sum();
        let mixed_b = as_int_matrix(mixed.require("B")?, "mixed.B", Some(ex))?;
        let mixed_c = as_int_matrix(mixed.require("C")?, "mixed.C", Some(0))?;
        if !mixed_c.is_symmetric() {
            return Err(Error::Schema("mixed.C is not symmetric".into()));
        }

        let galois = doc.require("galois")?;
        check_keys(galois, &["orbits"], strict, &mut warnings)?;
        let galois_orbits = fixture::as_array(galois.require("orbits")?, "orbits")?
            .iter()
            .map(|o| as_string_list(o, "orbits"))
            .collect::<Result<Vec<_>>>()?;

        let expected = match doc.section("expected") {
            None => None,
            Some(sec) => {
                check_keys(
                    sec,
                    &["orders", "B", "Q", "orders_dual", "B_dual", "Q_dual", "G", "G_dual"],
                    strict,
                    &mut warnings,
                )?;
                let form = printed_form(sec, "")?;
                let dual = printed_form(sec, "_dual")?;
                Some(ExpectedForms { form, dual })
            }
        };
        let cfg = PencilConfig {
            family_id,
            parametrized,
            singularities,
            curve_labels,
            mixed_b,
            mixed_c,
            galois_orbits,
            pic,
            expected,
        };
        cfg.validate()?;
        Ok((cfg, warnings))
    }

    pub fn parse(text: &str, strict: bool) -> Result<(Self, Vec<String>)> {
        Self::from_document(&Document::parse(text)?, strict)
    }

    pub fn load(path: &Path, strict: bool) -> Result<(Self, Vec<String>)> {
        Self::parse(&fixture::read_file(path)?, strict)
    }
}

fn printed_form(sec: &fixture::Section, suffix: &str) -> Result<FiniteQuadraticForm> {
    let orders: Vec<i64> = fixture::as_array(sec.require(&format!("orders{suffix}"))?, "orders")?
        .iter()
        .map(|v| as_int(v, "orders").and_then(|b| i64::try_from(b).map_err(|_| Error::Schema("order too large".into()))))
        .collect::<Result<Vec<_>>>()?;
    let b: Vec<Vec<String>> = fixture::as_array(sec.require(&format!("B{suffix}"))?, "B")?
        .iter()
        .map(|r| fixture::as_array(r, "B")?.iter().map(|x| as_rational_text(x, "B")).collect())
        .collect::<Result<Vec<_>>>()?;
    let q: Vec<String> = fixture::as_array(sec.require(&format!("Q{suffix}"))?, "Q")?
        .iter()
        .map(|x| as_rational_text(x, "Q"))
        .collect::<Result<Vec<_>>>()?;
    FiniteQuadraticForm::from_printed(&orders, &b, &q)
}

fn check_orbits(labels: &[String], orbits: &[Vec<String>]) -> Result<()> {
    let known: HashSet<&String> = labels.iter().collect();
    let mut seen = HashSet::new();
    for o in orbits {
        if o.is_empty() {
            return Err(Error::Schema("empty Galois orbit".into()));
        }
        for l in o {
            if !known.contains(l) {
                return Err(Error::UnknownLabel(l.clone()));
            }
            if !seen.insert(l.clone()) {
                return Err(Error::Schema(format!("label {l} in two orbits")));
            }
        }
    }
    Ok(())
}

/// Full matrix `((A, Bᵀ), (B, C))` with `A = ⊕(−Cartan)`, and its labels.
pub fn assemble_gram(cfg: &PencilConfig) -> Result<(IntMatrix, Vec<String>)> {
    cfg.validate()?;
    let mut a = IntMatrix::zeros(0, 0);
    for p in &cfg.singularities {
        a = a.block_diag(&p.ade.cartan().scale(&BigInt::from(-1)));
    }
    let ex = a.rows();
    let nc = cfg.curve_labels.len();
    let m = IntMatrix::from_fn(ex + nc, ex + nc, |i, j| match (i < ex, j < ex) {
        (true, true) => a[(i, j)].clone(),
        (true, false) => cfg.mixed_b[(j - ex, i)].clone(),
        (false, true) => cfg.mixed_b[(i - ex, j)].clone(),
        (false, false) => cfg.mixed_c[(i - ex, j - ex)].clone(),
    });
    Ok((m, cfg.labels()))
}

/// Gram matrix on orbit sums. Labels outside every orbit stay as they are.
pub fn galois_invariant(m: &IntMatrix, labels: &[String], orbits: &[Vec<String>]) -> Result<(IntMatrix, Vec<String>)> {
    if m.rows() != labels.len() {
        return Err(Error::Dimension("labels do not match matrix".into()));
    }
    check_orbits(labels, orbits)?;
    let index: HashMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let orbit_of: HashMap<&String, usize> =
        orbits.iter().enumerate().flat_map(|(k, o)| o.iter().map(move |l| (l, k))).collect();
    let mut basis: Vec<Vec<usize>> = vec![];
    let mut names = vec![];
    let mut emitted = HashSet::new();
    for l in labels {
        match orbit_of.get(l) {
            None => {
                basis.push(vec![index[l]]);
                names.push(l.clone());
            }
            Some(&k) => {
                if emitted.insert(k) {
                    basis.push(orbits[k].iter().map(|x| index[x]).collect());
                    names.push(orbits[k].join("+"));
                }
            }
        }
    }
    let p = IntMatrix::from_fn(labels.len(), basis.len(), |i, j| {
        if basis[j].contains(&i) {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    Ok((m.congruence(&p), names))
}

/// Nondegenerate lattice on a saturated complement of the radical.
pub fn radical_quotient(m: &IntMatrix) -> Result<Lattice> {
    if !m.is_symmetric() {
        return Err(Error::Invalid("matrix is not symmetric".into()));
    }
    let n = m.rows();
    if n == 0 || !m.det().is_zero() {
        return IntegralLattice::from_gram(m.clone());
    }
    let snf = m.smith_normal_form();
    let r = snf.nonzero_diagonal().len();
    let c = snf.v.select(&(0..n).collect::<Vec<_>>(), &(0..r).collect::<Vec<_>>());
    IntegralLattice::from_gram(m.congruence(&c))
}

pub fn build_ls(cfg: &PencilConfig) -> Result<Lattice> {
    let (m, labels) = assemble_gram(cfg)?;
    let (g, _) = galois_invariant(&m, &labels, &cfg.galois_orbits)?;
    let ls = radical_quotient(&g)?;
    let expected = 20usize.saturating_sub(cfg.rank_pic());
    if ls.rank() != expected {
        return Err(Error::RankMismatch { got: ls.rank(), expected });
    }
    Ok(ls)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub family_id: String,
    pub rank: Option<usize>,
    pub expected_rank: usize,
    pub invariant_factors: Vec<String>,
    pub q_values: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl LatticeReport {
    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    fn finish(mut self) -> Self {
        self.passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        self
    }
}

/// Build `L_S`, compare with the printed discriminant data and run the duality check.
///
/// Failures inside sub-steps become failed checks; the report is always produced.
pub fn verify_family(cfg: &PencilConfig, bound: u64) -> LatticeReport {
    let expected_rank = 20usize.saturating_sub(cfg.rank_pic());
    let mut rep = LatticeReport {
        family_id: cfg.family_id.clone(),
        rank: None,
        expected_rank,
        invariant_factors: vec![],
        q_values: vec![],
        checks: vec![],
        passed: false,
    };
    let ls = match build_ls(cfg) {
        Ok(l) => l,
        Err(e) => {
            let name = match e {
                Error::RankMismatch { got, .. } => {
                    rep.rank = Some(got);
                    "rank"
                }
                _ => "build",
            };
            rep.checks.push(Check::new(name, false, e.to_string()));
            return rep.finish();
        }
    };
    rep.rank = Some(ls.rank());
    rep.checks.push(Check::new("rank", true, format!("{} = 20 - {}", ls.rank(), cfg.rank_pic())));
    let form = match ls.discriminant_group() {
        Ok(f) => f,
        Err(e) => {
            rep.checks.push(Check::new("discriminant", false, e.to_string()));
            return rep.finish();
        }
    };
    rep.invariant_factors = form.invariant_factors().iter().map(|x| x.to_string()).collect();
    rep.q_values = form.quadratic().iter().map(format_rational).collect();
    if let Some(exp) = &cfg.expected {
        rep.checks.push(equivalence_check("expected_form", &form, &exp.form, bound));
        let hp = Lattice::hyperbolic().direct_sum(&cfg.pic);
        match hp.discriminant_group() {
            Ok(fd) => rep.checks.push(equivalence_check("expected_dual_form", &fd, &exp.dual, bound)),
            Err(e) => rep.checks.push(Check::new("expected_dual_form", false, e.to_string())),
        }
    }
    match dn_dual_verify(&ls, &cfg.pic, bound) {
        Ok(d) => rep.checks.extend(d.checks),
        Err(e) => rep.checks.push(Check::new("duality", false, e.to_string())),
    }
    rep.finish()
}

fn equivalence_check(name: &str, a: &FiniteQuadraticForm, b: &FiniteQuadraticForm, bound: u64) -> Check {
    match forms_equivalent(a, b, bound) {
        Ok(ok) => Check::new(name, ok, format!("|A| = {}", a.order())),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn single(ade: &str) -> PencilConfig {
        PencilConfig {
            family_id: "t".into(),
            parametrized: false,
            singularities: vec![SingularPoint { label: "P1".into(), ade: AdeType::parse(ade).unwrap(), note: None }],
            curve_labels: vec![],
            mixed_b: IntMatrix::zeros(0, AdeType::parse(ade).unwrap().rank()),
            mixed_c: IntMatrix::zeros(0, 0),
            galois_orbits: vec![],
            pic: Lattice::hyperbolic(),
            expected: None,
        }
    }

    #[test]
    fn ade_parsing() {
        assert_eq!(AdeType::parse("D4").unwrap().to_string(), "D4");
        assert!(AdeType::parse("E9").is_err());
        assert!(AdeType::parse("X2").is_err());
    }

    #[test]
    fn single_a1() {
        let (m, labels) = assemble_gram(&single("A1")).unwrap();
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[-2]]));
        assert_eq!(labels, vec!["E1^1".to_string()]);
    }

    #[test]
    fn singleton_orbits_identity() {
        let (m, labels) = assemble_gram(&single("A3")).unwrap();
        let (g, l) = galois_invariant(&m, &labels, &[]).unwrap();
        assert_eq!((g, l), (m.clone(), labels.clone()));
        let orbit = vec![vec!["E1^1".to_string(), "E1^3".to_string()]];
        let (g, l) = galois_invariant(&m, &labels, &orbit).unwrap();
        assert_eq!(l, vec!["E1^1+E1^3".to_string(), "E1^2".to_string()]);
        assert_eq!(g, IntMatrix::from_i64_rows(&[&[-4, 2], &[2, -2]]));
        assert!(galois_invariant(&m, &labels, &[vec!["E9^9".into()]]).is_err());
    }

    #[test]
    fn radical_quotient_cases() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1], &[1, -2]]);
        assert_eq!(radical_quotient(&m).unwrap().gram(), &m);
        let d = IntMatrix::from_i64_rows(&[&[2, 2, 0], &[2, 2, 0], &[0, 0, -2]]);
        let q = radical_quotient(&d).unwrap();
        assert_eq!(q.rank(), 2);
        assert_eq!(q.determinant().abs(), BigInt::from(4));
    }
}
