//! Finite quadratic forms on abstract groups `⊕ Z/oᵢ`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{invariant_factors, Matrix};
use crate::scalar::{format_rational, parse_rational, reduce_mod, Rational};

/// Default cap on the group order for the brute-force isometry search.
pub const DEFAULT_BOUND: u64 = 10_000;

/// Bilinear values live in `Q/Z`, quadratic values in `Q/2Z`.
///
/// Generator `i` has order `orders[i]`; the group is the external direct sum of
/// the cyclic groups, so the orders need not be in Smith form. When the form
/// comes from an odd lattice the quadratic refinement is not defined and
/// `quadratic` holds `b(gᵢ,gᵢ)` in `Q/Z` instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<BigInt>,
    bilinear: Vec<Vec<Rational>>,
    quadratic: Vec<Rational>,
    has_quadratic: bool,
    generators: Option<Vec<Vec<Rational>>>,
}

impl FiniteQuadraticForm {
    pub fn from_parts(
        orders: Vec<BigInt>,
        bilinear: Vec<Vec<Rational>>,
        quadratic: Vec<Rational>,
        has_quadratic: bool,
        generators: Option<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        let n = orders.len();
        if bilinear.len() != n || bilinear.iter().any(|r| r.len() != n) || quadratic.len() != n {
            return Err(Error::Dimension(format!("form data does not match {n} generators")));
        }
        if let Some(g) = &generators {
            if g.len() != n {
                return Err(Error::Dimension("generator lifts do not match orders".into()));
            }
        }
        if orders.iter().any(|o| *o <= BigInt::zero()) {
            return Err(Error::Invalid("generator orders must be positive".into()));
        }
        let bilinear: Vec<Vec<Rational>> =
            bilinear.iter().map(|r| r.iter().map(|x| reduce_mod(x, 1)).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                if bilinear[i][j] != bilinear[j][i] {
                    return Err(Error::Invalid("bilinear form is not symmetric".into()));
                }
            }
        }
        let m = if has_quadratic { 2 } else { 1 };
        let quadratic = quadratic.iter().map(|x| reduce_mod(x, m)).collect();
        Ok(FiniteQuadraticForm { orders, bilinear, quadratic, has_quadratic, generators })
    }

    /// Form given by printed tables: orders, `B` entries and `Q` entries as `"p/q"` strings.
    pub fn from_printed(orders: &[i64], bilinear: &[Vec<String>], quadratic: &[String]) -> Result<Self> {
        let parse = |s: &String| parse_rational(s).ok_or_else(|| Error::Invalid(format!("bad rational {s:?}")));
        let b = bilinear
            .iter()
            .map(|r| r.iter().map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let q = quadratic.iter().map(parse).collect::<Result<Vec<_>>>()?;
        Self::from_parts(orders.iter().map(|&o| BigInt::from(o)).collect(), b, q, true, None)
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm {
            orders: vec![],
            bilinear: vec![],
            quadratic: vec![],
            has_quadratic: true,
            generators: Some(vec![]),
        }
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn bilinear(&self) -> &[Vec<Rational>] {
        &self.bilinear
    }

    pub fn quadratic(&self) -> &[Rational] {
        &self.quadratic
    }

    pub fn has_quadratic(&self) -> bool {
        self.has_quadratic
    }

    /// Lifts of the generators to `L ⊗ Q`, when the form came from a lattice.
    pub fn generators(&self) -> Option<&[Vec<Rational>]> {
        self.generators.as_deref()
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_one()
    }

    /// Invariant factors `d₁ | d₂ | …` of the group, all `> 1`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let d = Matrix::diagonal(&self.orders);
        invariant_factors(&d).into_iter().filter(|x| !x.is_one()).collect()
    }

    /// Minimal number of generators `ℓ(A)`.
    pub fn length(&self) -> usize {
        self.invariant_factors().len()
    }

    pub fn negate(&self) -> Self {
        let m = if self.has_quadratic { 2 } else { 1 };
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            bilinear: self.bilinear.iter().map(|r| r.iter().map(|x| reduce_mod(&-x, 1)).collect()).collect(),
            quadratic: self.quadratic.iter().map(|x| reduce_mod(&-x, m)).collect(),
            has_quadratic: self.has_quadratic,
            generators: self.generators.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.num_generators();
        let m = other.num_generators();
        let mut bil = vec![vec![Rational::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                bil[i][j] = self.bilinear[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                bil[n + i][n + j] = other.bilinear[i][j].clone();
            }
        }
        let has_q = self.has_quadratic && other.has_quadratic;
        let mut quad: Vec<Rational> = self.quadratic.iter().chain(&other.quadratic).cloned().collect();
        if !has_q {
            quad = quad.iter().map(|x| reduce_mod(x, 1)).collect();
        }
        FiniteQuadraticForm {
            orders: self.orders.iter().chain(&other.orders).cloned().collect(),
            bilinear: bil,
            quadratic: quad,
            has_quadratic: has_q,
            generators: None,
        }
    }

    /// Whether the values are well defined on `⊕ Z/oᵢ`.
    pub fn is_well_defined(&self) -> bool {
        let n = self.num_generators();
        for i in 0..n {
            let o = Rational::from_integer(self.orders[i].clone());
            for j in 0..n {
                if !(&o * &self.bilinear[i][j]).is_integer() {
                    return false;
                }
            }
            if reduce_mod(&self.quadratic[i], 1) != self.bilinear[i][i] {
                return false;
            }
            let m = if self.has_quadratic { 2 } else { 1 };
            if !reduce_mod(&(&o * &o * &self.quadratic[i]), m).is_zero() {
                return false;
            }
        }
        true
    }

    /// `q(Σ cᵢ gᵢ)` (or `b(x,x)` when no quadratic refinement exists).
    pub fn value(&self, coeffs: &[i64]) -> Rational {
        let n = self.num_generators();
        let mut acc = Rational::zero();
        for i in 0..n {
            let ci = Rational::from_integer(BigInt::from(coeffs[i]));
            acc += &ci * &ci * &self.quadratic[i];
            for j in i + 1..n {
                let cj = Rational::from_integer(BigInt::from(coeffs[j]));
                acc += Rational::from_integer(BigInt::from(2)) * &ci * cj * &self.bilinear[i][j];
            }
        }
        reduce_mod(&acc, if self.has_quadratic { 2 } else { 1 })
    }

    /// Multiset of values over the whole group, as sorted `(value, count)` pairs.
    pub fn value_distribution(&self, bound: u64) -> Result<Vec<(Rational, usize)>> {
        let enc = Encoded::new(self, &common_denominator(&[self]), bound)?;
        let mut counts: HashMap<i64, usize> = HashMap::new();
        for v in &enc.values {
            *counts.entry(*v).or_default() += 1;
        }
        let mut out: Vec<(Rational, usize)> = counts
            .into_iter()
            .map(|(k, c)| (Rational::new(BigInt::from(k), enc.den.clone()), c))
            .collect();
        out.sort();
        Ok(out)
    }
}

impl fmt::Display for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.orders.iter().map(|o| o.to_string()).collect();
        let b: Vec<String> = self
            .bilinear
            .iter()
            .map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
            .collect();
        let q: Vec<String> = self.quadratic.iter().map(format_rational).collect();
        write!(f, "orders [{}]; B [{}]; Q [{}]", orders.join(", "), b.join(", "), q.join(", "))
    }
}

fn common_denominator(forms: &[&FiniteQuadraticForm]) -> BigInt {
    let mut d = BigInt::one();
    for f in forms {
        for r in &f.bilinear {
            for x in r {
                d = d.lcm(x.denom());
            }
        }
        for x in &f.quadratic {
            d = d.lcm(x.denom());
        }
    }
    d
}

/// Integer encoding of a form with values scaled by a common denominator.
struct Encoded {
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    den: BigInt,
    modulus: i64,
    bil: Vec<Vec<i64>>,
    quad: Vec<i64>,
    values: Vec<i64>,
}

impl Encoded {
    fn new(f: &FiniteQuadraticForm, den: &BigInt, bound: u64) -> Result<Self> {
        let order = f.order();
        let big_bound = BigInt::from(bound);
        if order > big_bound {
            return Err(Error::BoundExceeded { order: order.to_u64().unwrap_or(u64::MAX), bound });
        }
        let den_i = den.to_i64().ok_or_else(|| Error::Unsupported("denominator too large".into()))?;
        let m = if f.has_quadratic { 2 } else { 1 };
        let modulus = m * den_i;
        let scale = |x: &Rational| -> i64 {
            let v = x * Rational::from_integer(den.clone());
            debug_assert!(v.is_integer());
            v.to_integer().to_i64().expect("scaled value fits")
        };
        let orders: Vec<u64> = f.orders.iter().map(|o| o.to_u64().expect("order within bound")).collect();
        let mut strides = Vec::with_capacity(orders.len());
        let mut size = 1usize;
        for &o in &orders {
            strides.push(size);
            size *= o as usize;
        }
        let bil: Vec<Vec<i64>> = f.bilinear.iter().map(|r| r.iter().map(scale).collect()).collect();
        let quad: Vec<i64> = f.quadratic.iter().map(scale).collect();
        let mut enc = Encoded { orders, strides, size, den: den.clone(), modulus, bil, quad, values: vec![] };
        enc.values = (0..size).map(|x| enc.value_of(&enc.decode(x))).collect();
        Ok(enc)
    }

    fn decode(&self, mut x: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let c = (x as u64) % o;
                x /= o as usize;
                c
            })
            .collect()
    }

    fn encode(&self, c: &[u64]) -> usize {
        c.iter().zip(&self.strides).map(|(a, s)| *a as usize * s).sum()
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let a = self.decode(x);
        let b = self.decode(y);
        let c: Vec<u64> = (0..a.len()).map(|i| (a[i] + b[i]) % self.orders[i]).collect();
        self.encode(&c)
    }

    fn value_of(&self, c: &[u64]) -> i64 {
        let n = c.len();
        let mut acc: i128 = 0;
        for i in 0..n {
            let ci = c[i] as i128;
            acc += ci * ci * self.quad[i] as i128;
            for j in i + 1..n {
                acc += 2 * ci * c[j] as i128 * self.bil[i][j] as i128;
            }
        }
        acc.rem_euclid(self.modulus as i128) as i64
    }

    fn element_order(&self, c: &[u64]) -> u64 {
        c.iter().zip(&self.orders).fold(1u64, |acc, (&ci, &o)| acc.lcm(&(o / ci.gcd(&o))))
    }

    /// `k ↦ Σ_l c_l · b(e_k, e_l)` scaled by the denominator.
    fn functional(&self, c: &[u64]) -> Vec<i64> {
        let den = self.bil_den() as i128;
        (0..c.len())
            .map(|k| {
                let s: i128 = (0..c.len()).map(|l| c[l] as i128 * self.bil[k][l] as i128).sum();
                s.rem_euclid(den) as i64
            })
            .collect()
    }

    fn bil_den(&self) -> i64 {
        self.den.to_i64().expect("denominator fits")
    }
}

/// Decide whether two finite quadratic forms are isometric.
///
/// Screens by group invariants and the value distribution, then searches for
/// images of the generators of `a` inside `b` that respect `q` and `b` and
/// generate a subgroup of the right order.
pub fn forms_equivalent(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm, bound: u64) -> Result<bool> {
    let (oa, ob) = (a.order(), b.order());
    let big_bound = BigInt::from(bound);
    for o in [&oa, &ob] {
        if *o > big_bound {
            return Err(Error::BoundExceeded { order: o.to_u64().unwrap_or(u64::MAX), bound });
        }
    }
    if oa != ob || a.invariant_factors() != b.invariant_factors() {
        return Ok(false);
    }
    if oa.is_one() {
        return Ok(true);
    }
    let use_q = a.has_quadratic && b.has_quadratic;
    let (a, b) = if use_q {
        (a.clone(), b.clone())
    } else {
        (drop_quadratic(a), drop_quadratic(b))
    };
    let den = common_denominator(&[&a, &b]);
    let ea = Encoded::new(&a, &den, bound)?;
    let eb = Encoded::new(&b, &den, bound)?;

    let mut va = ea.values.clone();
    let mut vb = eb.values.clone();
    va.sort_unstable();
    vb.sort_unstable();
    if va != vb {
        return Ok(false);
    }

    let n = ea.orders.len();
    let mut by_class: HashMap<(u64, i64), Vec<usize>> = HashMap::new();
    for x in 0..eb.size {
        let c = eb.decode(x);
        by_class.entry((eb.element_order(&c), eb.values[x])).or_default().push(x);
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| by_class.get(&(ea.orders[i], ea.quad[i].rem_euclid(ea.modulus))).cloned().unwrap_or_default())
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(false);
    }

    let mut search = Search {
        ea: &ea,
        eb: &eb,
        candidates,
        images: Vec::with_capacity(n),
        functionals: Vec::with_capacity(n),
        in_span: vec![false; eb.size],
        span: vec![0],
    };
    search.in_span[0] = true;
    Ok(search.run(0))
}

fn drop_quadratic(f: &FiniteQuadraticForm) -> FiniteQuadraticForm {
    let mut g = f.clone();
    g.has_quadratic = false;
    g.quadratic = g.bilinear.iter().enumerate().map(|(i, r)| r[i].clone()).collect();
    g
}

struct Search<'a> {
    ea: &'a Encoded,
    eb: &'a Encoded,
    candidates: Vec<Vec<usize>>,
    images: Vec<usize>,
    functionals: Vec<Vec<i64>>,
    in_span: Vec<bool>,
    span: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> bool {
        let n = self.ea.orders.len();
        if i == n {
            return true;
        }
        let den = self.eb.bil_den() as i128;
        let cands = self.candidates[i].clone();
        for x in cands {
            let cx = self.eb.decode(x);
            let ok_b = (0..i).all(|j| {
                let s: i128 = (0..cx.len()).map(|k| cx[k] as i128 * self.functionals[j][k] as i128).sum();
                s.rem_euclid(den) == (self.ea.bil[i][j] as i128).rem_euclid(den)
            });
            if !ok_b {
                continue;
            }
            // ⟨x⟩ must meet the current span trivially
            let o = self.ea.orders[i] as usize;
            let mut mult = x;
            let mut multiples = Vec::with_capacity(o);
            let mut clash = false;
            for _ in 1..o {
                if self.in_span[mult] {
                    clash = true;
                    break;
                }
                multiples.push(mult);
                mult = self.eb.add(mult, x);
            }
            if clash {
                continue;
            }
            let old_len = self.span.len();
            let mut added = Vec::with_capacity(old_len * (o - 1));
            for s in 0..old_len {
                for &m in &multiples {
                    added.push(self.eb.add(self.span[s], m));
                }
            }
            for &e in &added {
                self.in_span[e] = true;
            }
            self.span.extend_from_slice(&added);
            self.images.push(x);
            self.functionals.push(self.eb.functional(&cx));
            if self.run(i + 1) {
                return true;
            }
            self.images.pop();
            self.functionals.pop();
            for &e in &added {
                self.in_span[e] = false;
            }
            self.span.truncate(old_len);
        }
        false
    }
}
