//! Laurent polynomials in n variables over a coefficient ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::laurent::param::{Coeff, ParamPolynomial};
use crate::scalar::Rational;

pub type Exponent = Vec<i64>;

#[derive(Clone, Debug)]
pub struct Laurent<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

/// Parameter coefficients.
pub type LaurentPolynomial = Laurent<ParamPolynomial>;
/// Fully specialized.
pub type RationalLaurent = Laurent<Rational>;

fn pad(e: &[i64], n: usize) -> Exponent {
    let mut v = e.to_vec();
    v.resize(n, 0);
    v
}

fn add_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<C: Coeff> Laurent<C> {
    pub fn zero(nvars: usize) -> Self {
        Laurent { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { nvars, terms }
    }

    /// x_i (0-based) in n variables.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension(format!("exponent of length {} in {} variables", e.len(), nvars)));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, e: &[i64]) -> C {
        self.terms.get(&pad(e, self.nvars)).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    /// Same polynomial viewed in more variables.
    pub fn with_nvars(&self, n: usize) -> Result<Self> {
        if n < self.nvars && self.terms.keys().any(|e| e[n..].iter().any(|&x| x != 0)) {
            return Err(Error::Dimension(format!("polynomial uses more than {n} variables")));
        }
        Ok(Laurent { nvars: n, terms: self.terms.iter().map(|(e, c)| (pad(e, n), c.clone())).collect() })
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn lift(a: &Self, b: &Self) -> (Self, Self) {
        let n = a.nvars.max(b.nvars);
        (a.with_nvars(n).expect("widening"), b.with_nvars(n).expect("widening"))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.clone() * c.clone());
        }
        p
    }

    pub fn mul_monomial(&self, shift: &[i64]) -> Self {
        let s = pad(shift, self.nvars);
        Laurent { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (add_exp(e, &s), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Inverse of a single invertible term.
    pub fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(e.iter().map(|x| -x).collect(), c.try_inverse()?))
    }

    pub fn pow_signed(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            let inv = self
                .try_inverse()
                .ok_or_else(|| Error::NotLaurent(format!("negative power of non-monomial ({self})")))?;
            Ok(inv.pow((-k) as u32))
        }
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &C)> {
        self.terms.iter().next_back()
    }

    /// Per-coordinate (min, max) of the support.
    pub fn bounding_box(&self) -> Vec<(i64, i64)> {
        (0..self.nvars)
            .map(|i| {
                let it = self.terms.keys().map(|e| e[i]);
                (it.clone().min().unwrap_or(0), it.max().unwrap_or(0))
            })
            .collect()
    }

    /// Exact quotient p / g, or `None` if g does not divide p.
    ///
    /// Lex leading-term division; quotient exponents are confined to the box
    /// forced by the Newton polytopes, which bounds the loop.
    pub fn div_exact(&self, g: &Self) -> Result<Option<Self>> {
        if g.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        let (p, g) = Self::lift(self, g);
        if p.is_zero() {
            return Ok(Some(p));
        }
        let (lg_e, lg_c) = g.leading_term().expect("nonzero");
        let inv = lg_c
            .try_inverse()
            .ok_or_else(|| Error::NotLaurent(format!("leading coefficient {lg_c} of divisor is not a unit")))?;
        let (bp, bg) = (p.bounding_box(), g.bounding_box());
        let qbox: Vec<(i64, i64)> = bp.iter().zip(&bg).map(|(a, b)| (a.0 - b.0, a.1 - b.1)).collect();
        let mut r = p.clone();
        let mut q = Self::zero(p.nvars);
        while let Some((e, c)) = r.leading_term() {
            let te: Exponent = e.iter().zip(lg_e).map(|(a, b)| a - b).collect();
            if te.iter().zip(&qbox).any(|(x, (lo, hi))| x < lo || x > hi) {
                return Ok(None);
            }
            let t = Self::monomial(te, c.clone() * inv.clone());
            r = &r - &(&t * &g);
            q = &q + &t;
        }
        Ok(Some(q))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Laurent<D>> {
        let mut p = Laurent::<D>::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c)?);
        }
        Ok(p)
    }

    /// Substitute x_j -> scale_j * x^{rows[j]}.
    pub fn substitute_monomials(&self, rows: &[Exponent], scales: &[C]) -> Result<Self> {
        if rows.len() != self.nvars || scales.len() != self.nvars {
            return Err(Error::Dimension("one image per variable required".into()));
        }
        let m = rows.first().map_or(self.nvars, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("ragged substitution".into()));
        }
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut img = vec![0i64; m];
            let mut coef = c.clone();
            for (j, &k) in e.iter().enumerate() {
                for (slot, r) in img.iter_mut().zip(&rows[j]) {
                    *slot += k * r;
                }
                let s = &scales[j];
                let f = if k >= 0 {
                    (0..k).fold(C::one(), |a, _| a * s.clone())
                } else {
                    let si = s
                        .try_inverse()
                        .ok_or_else(|| Error::NotLaurent(format!("scaling {s} is not invertible")))?;
                    (0..-k).fold(C::one(), |a, _| a * si.clone())
                };
                coef = coef * f;
            }
            out.add_term(img, coef);
        }
        Ok(out)
    }

    /// Substitute x_j -> images[j] (Laurent polynomials); negative powers need monomial images.
    pub fn substitute(&self, images: &[Self]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::Dimension("one image per variable required".into()));
        }
        let m = images.iter().map(|p| p.nvars).max().unwrap_or(0);
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut t = Self::constant(m, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k != 0 {
                    t = &t * &images[j].pow_signed(k)?;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

impl LaurentPolynomial {
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        self.terms.values().flat_map(|c| c.params()).collect()
    }

    /// Substitute parameters; unassigned parameters stay symbolic.
    pub fn substitute_params(&self, map: &BTreeMap<String, ParamPolynomial>) -> Result<Self> {
        self.map_coeffs(|c| {
            c.substitute(map).ok_or_else(|| Error::NotLaurent(format!("cannot invert substituted value in {c}")))
        })
    }

    /// Assign every parameter a rational value.
    pub fn specialize(&self, values: &BTreeMap<String, Rational>) -> Result<RationalLaurent> {
        self.map_coeffs(|c| {
            c.evaluate(values).ok_or_else(|| {
                let missing: Vec<String> = c.params().into_iter().filter(|p| !values.contains_key(p)).collect();
                if missing.is_empty() {
                    Error::Invalid(format!("zero value inverted in {c}"))
                } else {
                    Error::Invalid(format!("unassigned parameters: {}", missing.join(", ")))
                }
            })
        })
    }

    /// Partial assignment, keeping parameter coefficients.
    pub fn assign(&self, values: &BTreeMap<String, Rational>) -> Result<Self> {
        let map = values.iter().map(|(k, v)| (k.clone(), ParamPolynomial::constant(v.clone()))).collect();
        self.substitute_params(&map)
    }
}

impl RationalLaurent {
    pub fn to_param(&self) -> LaurentPolynomial {
        self.map_coeffs(|c| Ok(ParamPolynomial::constant(c.clone()))).expect("infallible")
    }
}

impl<'a, C: Coeff> Add<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;

    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        let (mut a, b) = Laurent::lift(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl<'a, C: Coeff> Sub<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;

    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Neg for &Laurent<C> {
    type Output = Laurent<C>;

    fn neg(self) -> Laurent<C> {
        Laurent { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl<'a, C: Coeff> Mul<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;

    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        let (a, b) = Laurent::lift(self, rhs);
        let mut out = Laurent::zero(a.nvars);
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                out.add_term(add_exp(e1, e2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Add for Laurent<C> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Laurent<C> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Laurent<C> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for Laurent<C> {
    type Output = Self;

    fn neg(self) -> Self {
        -&self
    }
}

/// Equality ignores trailing variables that do not occur.
impl<C: Coeff> PartialEq for Laurent<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars == other.nvars {
            return self.terms == other.terms;
        }
        let (a, b) = Laurent::lift(self, other);
        a.terms == b.terms
    }
}

pub fn var_name(i: usize, nvars: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn monomial_text(e: &[i64]) -> String {
    let n = e.len();
    e.iter()
        .enumerate()
        .filter(|(_, k)| **k != 0)
        .map(|(i, k)| if *k == 1 { var_name(i, n) } else { format!("{}^{}", var_name(i, n), k) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text: terms by descending lex exponent.
impl<C: Coeff> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_term();
            let c = if neg { -c.clone() } else { c.clone() };
            let mono = monomial_text(e);
            let body = if mono.is_empty() {
                if c.is_compound() {
                    format!("({c})")
                } else {
                    c.to_string()
                }
            } else if c.is_one() {
                mono
            } else if c.is_compound() {
                format!("({c})*{mono}")
            } else {
                format!("{c}*{mono}")
            };
            match (idx == 0, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
