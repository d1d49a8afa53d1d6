//! Closed-form period maps to weighted projective moduli spaces.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::param::Coeff;
use crate::scalar::Rational;

pub const WEIGHTS_2356: [u32; 4] = [2, 3, 5, 6];
pub const WEIGHTS_236: [u32; 3] = [2, 3, 6];

fn k<C: Coeff>(n: i64) -> C {
    C::from_int(n)
}

fn q<C: Coeff>(n: i64, d: i64) -> C {
    C::from_rational(Rational::new(n.into(), d.into()))
}

fn pw<C: Coeff>(x: &C, e: u32) -> C {
    (0..e).fold(C::one(), |acc, _| acc * x.clone())
}

/// (alpha, beta, gamma, delta) of a0 x + a1 y + a2 z + a3 x/z + a4/(xy) + a5.
pub fn modular_invariants_233<C: Coeff>(a: &[C; 6]) -> [C; 4] {
    let [a0, a1, a2, a3, a4, a5] = a.clone();
    let alpha = q::<C>(1, 9)
        * (k::<C>(144) * a1.clone() * a2.clone() * a3.clone() * a4.clone()
            + k::<C>(24) * a0.clone() * a1.clone() * a4.clone() * a5.clone()
            + pw(&a5, 4));
    let beta = q::<C>(-1, 27)
        * (k::<C>(216) * pw(&a0, 2) * pw(&a1, 2) * pw(&a4, 2)
            - k::<C>(648) * a1.clone() * a2.clone() * a3.clone() * a4.clone() * pw(&a5, 2)
            + k::<C>(36) * a0.clone() * a1.clone() * a4.clone() * pw(&a5, 3)
            + pw(&a5, 6));
    let gamma = k::<C>(1024) * a3.clone() * a2.clone() * pw(&a0, 2) * pw(&a4, 3) * pw(&a1, 3);
    let delta = q::<C>(1024, 3)
        * a3.clone()
        * a2.clone()
        * pw(&a4, 3)
        * pw(&a1, 3)
        * (k::<C>(12) * pw(&a2, 2) * pw(&a3, 2) - k::<C>(12) * a0.clone() * a2.clone() * a3.clone() * a5.clone()
            + pw(&a0, 2) * pw(&a5, 2));
    [alpha, beta, gamma, delta]
}

/// Pencil of x + y + z + x/z + a/(xy) + b, as printed.
pub fn pi_ab<C: Coeff>(a: &C, b: &C, lambda: &C, mu: &C) -> [C; 4] {
    let (l, m) = (lambda, mu);
    let alpha = q::<C>(1, 9)
        * (k::<C>(144) * a.clone() * pw(l, 4)
            + k::<C>(24) * a.clone() * b.clone() * pw(l, 3) * m.clone()
            + pw(b, 4) * pw(m, 4));
    let beta = q::<C>(-1, 27)
        * (k::<C>(216) * pw(a, 2) * pw(l, 6) - k::<C>(648) * a.clone() * pw(b, 2) * pw(l, 4) * pw(m, 2)
            + k::<C>(36) * a.clone() * pw(b, 3) * pw(l, 3) * pw(m, 3)
            + pw(b, 6) * pw(m, 6));
    let gamma = k::<C>(1024) * pw(a, 3) * pw(l, 10);
    let delta = q::<C>(1024, 3)
        * pw(a, 3)
        * pw(l, 10)
        * (k::<C>(12) * pw(l, 2) - k::<C>(12) * b.clone() * l.clone() * m.clone() + pw(b, 2) * pw(m, 2));
    [alpha, beta, gamma, delta]
}

/// Coefficients (a0..a5) placing the pencil of x + y + z + x/z + a/(xy) + b into the 2.33 map.
pub fn ab_substitution<C: Coeff>(a: &C, b: &C, lambda: &C, mu: &C) -> [C; 6] {
    let l = lambda.clone();
    [l.clone(), l.clone(), l.clone(), l.clone(), a.clone() * l, b.clone() * mu.clone()]
}

/// Period map of the 2.28 family, as printed.
pub fn pi_cd<C: Coeff>(c: &C, d: &C, lambda: &C, mu: &C) -> [C; 4] {
    let (l, m) = (lambda, mu);
    let t = |coef: i64, cp: u32, dp: u32, lp: u32, mp: u32| -> C {
        k::<C>(coef) * pw(c, cp) * pw(d, dp) * pw(l, lp) * pw(m, mp)
    };
    let alpha = q::<C>(1, 9)
        * (t(1, 0, 4, 4, 0) - t(4, 0, 3, 3, 1) - t(24, 1, 1, 3, 1) + t(6, 0, 2, 2, 2) + t(168, 1, 0, 2, 2)
            - t(4, 0, 1, 1, 3)
            + t(1, 0, 0, 0, 4));
    let beta = q::<C>(-1, 27)
        * (t(1, 0, 6, 6, 0) - t(6, 0, 5, 5, 1) - t(36, 1, 3, 5, 1) + t(15, 0, 4, 4, 2) - t(540, 1, 2, 4, 2)
            - t(20, 0, 3, 3, 3)
            + t(216, 2, 0, 4, 2)
            + t(1188, 1, 1, 3, 3)
            + t(15, 0, 2, 2, 4)
            - t(612, 1, 0, 2, 4)
            - t(6, 0, 1, 1, 5)
            + t(1, 0, 0, 0, 6));
    let gamma = t(1024, 3, 0, 6, 4);
    let delta = q::<C>(1024, 3) * t(1, 3, 0, 6, 4) * (t(1, 0, 2, 2, 0) + t(10, 0, 1, 1, 1) + t(1, 0, 0, 0, 2));
    [alpha, beta, gamma, delta]
}

/// Coefficients (a0..a5) of x + y + z + x/z + c l^2/(xy) + 1 - d l over [l : m],
/// homogenized and multiplied through by m^2.
pub fn cd_substitution<C: Coeff>(c: &C, d: &C, lambda: &C, mu: &C) -> [C; 6] {
    let m2 = pw(mu, 2);
    [
        m2.clone(),
        m2.clone(),
        m2.clone(),
        m2,
        c.clone() * pw(lambda, 2),
        mu.clone() * (mu.clone() - d.clone() * lambda.clone()),
    ]
}

/// A representative of the printed 2.1 map [lambda^(2/3) : B : D] in P(2,3,6).
///
/// For lambda != 0 the point is rescaled by t = lambda^(2/3), giving
/// (lambda^2, lambda^2 B, lambda^4 D); at lambda = 0 it is (0, B, D).
pub fn pi_21<C: Coeff>(c: &C, lambda: &C, mu: &C) -> [C; 3] {
    let (l, m) = (lambda, mu);
    let b = k::<C>(1728) * c.clone() * pw(m, 2) - pw(l, 2) + k::<C>(864) * l.clone() * m.clone();
    let d = k::<C>(4096 * 729) * (c.clone() * m.clone() + l.clone()) * pw(m, 3) * c.clone();
    if l.is_zero() {
        [C::zero(), b, d]
    } else {
        [pw(l, 2), pw(l, 2) * b, pw(l, 4) * d]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PeriodFamily {
    /// parameter c
    F2_1,
    /// parameters c, d
    F2_28,
    /// parameters a, b
    F2_33,
}

impl PeriodFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "2.1" => Ok(PeriodFamily::F2_1),
            "2.28" => Ok(PeriodFamily::F2_28),
            "2.33" | "2.33-pencil" => Ok(PeriodFamily::F2_33),
            _ => Err(Error::Unsupported(format!("no period map for family {s}"))),
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            PeriodFamily::F2_1 => 1,
            _ => 2,
        }
    }

    pub fn weights(self) -> &'static [u32] {
        match self {
            PeriodFamily::F2_1 => &WEIGHTS_236,
            _ => &WEIGHTS_2356,
        }
    }
}

/// Point of the period map over [lambda : mu].
pub fn period_map_eval<C: Coeff>(family: PeriodFamily, params: &[C], lambda: &C, mu: &C) -> Result<Vec<C>> {
    if params.len() != family.param_count() {
        return Err(Error::Dimension(format!(
            "{family:?} takes {} parameters, got {}",
            family.param_count(),
            params.len()
        )));
    }
    Ok(match family {
        PeriodFamily::F2_1 => pi_21(&params[0], lambda, mu).to_vec(),
        PeriodFamily::F2_28 => pi_cd(&params[0], &params[1], lambda, mu).to_vec(),
        PeriodFamily::F2_33 => pi_ab(&params[0], &params[1], lambda, mu).to_vec(),
    })
}

fn check_shape<C: Coeff>(p1: &[C], p2: &[C], weights: &[u32]) -> Result<()> {
    if p1.len() != weights.len() || p2.len() != weights.len() {
        return Err(Error::Dimension("coordinate tuples and weights differ in length".into()));
    }
    if p1.iter().all(Zero::is_zero) || p2.iter().all(Zero::is_zero) {
        return Err(Error::Invalid("all-zero tuple is not a weighted projective point".into()));
    }
    Ok(())
}

/// p1_i = t^{w_i} p2_i for the given t.
pub fn wp_equal_with<C: Coeff>(p1: &[C], p2: &[C], weights: &[u32], t: &C) -> Result<bool> {
    check_shape(p1, p2, weights)?;
    Ok(p1.iter().zip(p2).zip(weights).all(|((a, b), w)| *a == pw(t, *w) * b.clone()))
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn rpow(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}

/// Equality in weighted projective space over C for rational coordinates.
///
/// With g the gcd of the weights on the support, s = t^g is forced to be
/// prod r_i^{c_i} where sum c_i w_i / g = 1; then s^{w_i/g} = r_i is checked.
pub fn wp_equal(p1: &[Rational], p2: &[Rational], weights: &[u32]) -> Result<bool> {
    check_shape(p1, p2, weights)?;
    let mut support = vec![];
    for (i, (a, b)) in p1.iter().zip(p2).enumerate() {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {}
            (false, false) => support.push(i),
            _ => return Ok(false),
        }
    }
    let g = support.iter().fold(0i64, |acc, &i| ext_gcd(acc, i64::from(weights[i])).0);
    let reduced: Vec<i64> = support.iter().map(|&i| i64::from(weights[i]) / g).collect();
    // Bezout coefficients for the reduced weights
    let mut coeffs = vec![0i64; reduced.len()];
    let mut cur = 0i64;
    for (j, &w) in reduced.iter().enumerate() {
        let (h, x, y) = ext_gcd(cur, w);
        for c in coeffs.iter_mut().take(j) {
            *c *= x;
        }
        coeffs[j] = y;
        cur = h;
    }
    debug_assert_eq!(cur, 1);
    let ratios: Vec<Rational> = support.iter().map(|&i| &p1[i] / &p2[i]).collect();
    let s = ratios.iter().zip(&coeffs).fold(Rational::one(), |acc, (r, &c)| acc * rpow(r, c));
    Ok(ratios.iter().zip(&reduced).all(|(r, &w)| rpow(&s, w) == *r))
}
