//! Integer scalar abstraction shared by the exact linear algebra.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer type usable as a matrix/lattice entry.
///
/// `BigInt` is the production choice. Fixed-width types work as long as
/// intermediate values stay in range; they are checked nowhere.
pub trait Int:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub type Rational = num_rational::BigRational;

pub(crate) fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("integer conversion")
}

pub(crate) fn to_big<T: Int>(v: &T) -> BigInt {
    // every Int prints as a plain decimal integer
    v.to_string().parse().expect("integer display")
}

pub(crate) fn ratio_to_big<T: Int>(r: &Ratio<T>) -> Rational {
    Rational::new(to_big(r.numer()), to_big(r.denom()))
}

/// Representative of `r` modulo `m·Z` in `[0, m)`.
pub fn reduce_mod(r: &Rational, m: i64) -> Rational {
    let m = Rational::from_integer(BigInt::from(m));
    let q = (r / &m).floor();
    r - q * m
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
