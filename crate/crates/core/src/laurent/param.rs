//! Polynomials over the rationals in named parameters, and the coefficient trait.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::{format_rational, Rational};

/// Coefficient ring of a Laurent polynomial.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: Rational) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(v)))
    }

    /// Exact inverse where one exists in the ring (units only).
    fn try_inverse(&self) -> Option<Self>;

    /// The value, when the coefficient is a constant.
    fn as_rational(&self) -> Option<Rational>;

    /// Whether printing needs parentheses before a monomial.
    fn is_compound(&self) -> bool;

    /// A single term with negative rational part; printed as ` - ` and the negation.
    fn is_negative_term(&self) -> bool;
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn is_compound(&self) -> bool {
        false
    }

    fn is_negative_term(&self) -> bool {
        self.is_negative()
    }
}

/// Sparse monomial in parameters: sorted `(name, exponent)` pairs, exponents nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(String, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(vec![])
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, i32)>) -> Self {
        let mut m: BTreeMap<String, i32> = BTreeMap::new();
        for (k, e) in pairs {
            *m.entry(k).or_default() += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn pairs(&self) -> &[(String, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.0.iter().find(|(k, _)| k == name).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(&other.0).cloned())
    }

    pub fn inverse(&self) -> Self {
        Monomial(self.0.iter().map(|(k, e)| (k.clone(), -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Self {
        Self::from_pairs(self.0.iter().map(|(n, e)| (n.clone(), e * k)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, e)| if *e == 1 { k.clone() } else { format!("{k}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPolynomial {
    pub fn constant(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        ParamPolynomial { terms }
    }

    pub fn int(v: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(v)))
    }

    pub fn var(name: &str) -> Self {
        Self::term(Rational::one(), Monomial::var(name))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPolynomial { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(k, _)| k.clone())).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPolynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        ParamPolynomial { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out * self.clone();
        }
        out
    }

    /// `(coefficient, monomial)` when there is exactly one term.
    pub fn as_single_term(&self) -> Option<(Rational, Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            Some((c.clone(), m.clone()))
        } else {
            None
        }
    }

    /// Replace parameters by polynomials. Negative exponents need single-term images.
    pub fn substitute(&self, map: &BTreeMap<String, ParamPolynomial>) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (k, e) in &m.0 {
                let base = match map.get(k) {
                    Some(p) => p.clone(),
                    None => Self::var(k),
                };
                let factor = if *e >= 0 { base.pow(*e as u32) } else { base.try_inverse()?.pow((-*e) as u32) };
                t = t * factor;
            }
            out = out + t;
        }
        Some(out)
    }

    pub fn evaluate(&self, values: &BTreeMap<String, Rational>) -> Option<Rational> {
        let map: BTreeMap<String, ParamPolynomial> =
            values.iter().map(|(k, v)| (k.clone(), Self::constant(v.clone()))).collect();
        self.substitute(&map)?.as_rational()
    }
}

impl Zero for ParamPolynomial {
    fn zero() -> Self {
        ParamPolynomial { terms: BTreeMap::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ParamPolynomial {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Add for ParamPolynomial {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl AddAssign for ParamPolynomial {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Sub for ParamPolynomial {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ParamPolynomial {
    type Output = Self;

    fn neg(self) -> Self {
        ParamPolynomial { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for ParamPolynomial {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        ParamPolynomial { terms: acc }
    }
}

impl Coeff for ParamPolynomial {
    fn from_rational(r: Rational) -> Self {
        Self::constant(r)
    }

    fn try_inverse(&self) -> Option<Self> {
        let (c, m) = self.as_single_term()?;
        Some(Self::term(c.recip(), m.inverse()))
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn is_compound(&self) -> bool {
        self.terms.len() > 1
    }

    fn is_negative_term(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(Signed::is_negative)
    }
}

impl fmt::Display for ParamPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.is_one() {
                format_rational(&a)
            } else if a.is_one() {
                m.to_string()
            } else {
                format!("{}*{}", format_rational(&a), m)
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}
