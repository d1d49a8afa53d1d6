//! Integral lattices given by symmetric Gram matrices.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::form::FiniteQuadraticForm;
use crate::matrix::Matrix;
use crate::scalar::{int, ratio_to_big, to_big, Int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootType {
    A,
    D,
    E,
}

impl RootType {
    pub fn letter(self) -> char {
        match self {
            RootType::A => 'A',
            RootType::D => 'D',
            RootType::E => 'E',
        }
    }
}

/// Signature `(n₊, n₋)` plus the radical dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pos, self.neg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicInvariants<T> {
    pub rank: usize,
    pub determinant: T,
    pub signature: Signature,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralLattice<T> {
    gram: Matrix<T>,
    labels: Option<Vec<String>>,
}


impl<T: Int> IntegralLattice<T> {
    pub fn from_gram(gram: Matrix<T>) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Invalid("Gram matrix is not symmetric".into()));
        }
        Ok(IntegralLattice { gram, labels: None })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_gram(Matrix::from_i64_rows(rows))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::Dimension(format!("{} labels for rank {}", labels.len(), self.rank())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Root lattice with the positive-definite Cartan matrix (Sage numbering).
    pub fn root(kind: RootType, n: usize) -> Result<Self> {
        Self::from_gram(cartan(kind, n)?)
    }

    /// The hyperbolic plane `((0,1),(1,0))`.
    pub fn hyperbolic() -> Self {
        IntegralLattice { gram: Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]), labels: None }
    }

    pub fn zero_rank() -> Self {
        IntegralLattice { gram: Matrix::zeros(0, 0), labels: None }
    }

    pub fn rescale(&self, k: &T) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::Invalid("rescale by zero".into()));
        }
        Ok(IntegralLattice { gram: self.gram.scale(k), labels: self.labels.clone() })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        IntegralLattice { gram: self.gram.block_diag(&other.gram), labels }
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> T {
        self.gram.det()
    }

    pub fn parity(&self) -> Parity {
        let two = int::<T>(2);
        if (0..self.rank()).all(|i| self.gram[(i, i)].is_multiple_of(&two)) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram)
    }

    pub fn basic_invariants(&self) -> BasicInvariants<T> {
        BasicInvariants {
            rank: self.rank(),
            determinant: self.determinant(),
            signature: self.signature(),
            parity: self.parity(),
        }
    }

    /// Change of basis: the columns of `basis` are the new basis vectors.
    pub fn change_basis(&self, basis: &Matrix<T>) -> Result<Self> {
        if basis.rows() != self.rank() {
            return Err(Error::Dimension("basis rows must match rank".into()));
        }
        Ok(IntegralLattice { gram: self.gram.congruence(basis), labels: None })
    }

    /// Discriminant group `L*/L` with its bilinear and quadratic forms.
    ///
    /// With `u·G·v = d`, the class of `v[:,i]/dᵢ` generates the `Z/dᵢ` summand.
    pub fn discriminant_group(&self) -> Result<FiniteQuadraticForm> {
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        let snf = self.gram.smith_normal_form();
        let n = self.rank();
        let mut orders = Vec::new();
        let mut gens: Vec<Vec<Rational>> = Vec::new();
        for i in 0..n {
            let d = snf.d[(i, i)].clone();
            if d.is_one() {
                continue;
            }
            let col = snf.v.column(i);
            gens.push(col.iter().map(|x| ratio_to_big(&Ratio::new(x.clone(), d.clone()))).collect());
            orders.push(to_big(&d));
        }
        let g = self.gram.map(|x| Rational::from_integer(to_big(x)));
        let bil: Vec<Vec<Rational>> =
            gens.iter().map(|a| gens.iter().map(|b| g.bilinear(a, b)).collect()).collect();
        let quad: Vec<Rational> = gens.iter().map(|a| g.bilinear(a, a)).collect();
        FiniteQuadraticForm::from_parts(orders, bil, quad, self.is_even(), Some(gens))
    }

    /// Saturated orthogonal complement of the rows of `sub_basis` (coordinates in this lattice).
    pub fn orthogonal_complement(&self, sub_basis: &Matrix<T>) -> Result<Self> {
        if sub_basis.cols() != self.rank() {
            return Err(Error::Dimension("sub-basis width must equal rank".into()));
        }
        let k = sub_basis.rows();
        if k > 0 {
            let f = crate::matrix::invariant_factors(sub_basis);
            if f.len() != k || f.iter().any(|x| !x.is_one()) {
                return Err(Error::NotPrimitive);
            }
        }
        let a = sub_basis.mul(&self.gram);
        let ker = if k == 0 { Matrix::identity(self.rank()) } else { a.kernel() };
        Ok(IntegralLattice { gram: self.gram.congruence(&ker), labels: None })
    }
}

impl<T: Int> fmt::Display for IntegralLattice<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gram)
    }
}

/// Positive-definite Cartan matrix in Sage numbering.
///
/// `D_n`: chain `1-…-(n-2)` with `n-1` and `n` both attached to `n-2`.
/// `E_n`: `1-3-4-5-…-n` with `2` attached to `4`.
pub fn cartan<T: Int>(kind: RootType, n: usize) -> Result<Matrix<T>> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match kind {
        RootType::A => {
            if n < 1 {
                return Err(Error::InvalidRoot(format!("A{n}")));
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
        }
        RootType::D => {
            if n < 4 {
                return Err(Error::InvalidRoot(format!("D{n}")));
            }
            edges.extend((1..n - 2).map(|i| (i - 1, i)));
            edges.push((n - 3, n - 2));
            edges.push((n - 3, n - 1));
        }
        RootType::E => {
            if !(6..=8).contains(&n) {
                return Err(Error::InvalidRoot(format!("E{n}")));
            }
            edges.push((0, 2));
            edges.push((1, 3));
            edges.extend((3..n).map(|i| (i - 1, i)));
        }
    }
    let mut m = Matrix::<T>::diagonal(&vec![int::<T>(2); n]);
    for (a, b) in edges {
        m[(a, b)] = -T::one();
        m[(b, a)] = -T::one();
    }
    Ok(m)
}

/// Exact signature by symmetric Gaussian elimination over the rationals.
pub fn signature<T: Int>(g: &Matrix<T>) -> Signature {
    let n = g.rows();
    let mut a = g.to_rational();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(j, k);
                a.swap_cols(j, k);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                // x_k += x_j makes the pivot 2·a_kj
                for c in 0..n {
                    let v = a[(k, c)].clone() + a[(j, c)].clone();
                    a[(k, c)] = v;
                }
                for r in 0..n {
                    let v = a[(r, k)].clone() + a[(r, j)].clone();
                    a[(r, k)] = v;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let p = a[(k, k)].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].clone() / p.clone();
            for j in k..n {
                let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                a[(i, j)] = v;
            }
            for r in k..n {
                let v = a[(r, i)].clone() - f.clone() * a[(r, k)].clone();
                a[(r, i)] = v;
            }
        }
    }
    Signature { pos, neg, zero }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type L = IntegralLattice<BigInt>;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn e6_matches_printed_display() {
        let e6 = L::root(RootType::E, 6).unwrap();
        let printed = Matrix::from_i64_rows(&[
            &[2, 0, -1, 0, 0, 0],
            &[0, 2, 0, -1, 0, 0],
            &[-1, 0, 2, -1, 0, 0],
            &[0, -1, -1, 2, -1, 0],
            &[0, 0, 0, -1, 2, -1],
            &[0, 0, 0, 0, -1, 2],
        ]);
        assert_eq!(e6.gram(), &printed);
    }

    #[test]
    fn d_branch_at_n_minus_2() {
        let d5 = cartan::<BigInt>(RootType::D, 5).unwrap();
        assert_eq!(d5.row(2), &[b(0), b(-1), b(2), b(-1), b(-1)]);
        assert_eq!(d5[(3, 4)], b(0));
    }

    #[test]
    fn root_determinants() {
        // classical values: det A_n = n+1, D_n = 4, E_n = 9-n
        for n in 1..9 {
            assert_eq!(L::root(RootType::A, n).unwrap().determinant(), b(n as i64 + 1));
        }
        for n in 4..9 {
            assert_eq!(L::root(RootType::D, n).unwrap().determinant(), b(4));
        }
        for n in 6..9 {
            assert_eq!(L::root(RootType::E, n).unwrap().determinant(), b(9 - n as i64));
        }
    }

    #[test]
    fn invalid_roots() {
        assert!(L::root(RootType::D, 3).is_err());
        assert!(L::root(RootType::E, 5).is_err());
        assert!(L::root(RootType::E, 9).is_err());
        assert!(L::root(RootType::A, 0).is_err());
    }

    #[test]
    fn a1_rescaled() {
        let a1 = L::root(RootType::A, 1).unwrap();
        assert_eq!(a1.rescale(&b(-1)).unwrap().gram(), &Matrix::from_i64_rows(&[&[-2]]));
        assert!(a1.rescale(&b(0)).is_err());
    }

    #[test]
    fn h_plus_e8_minus() {
        let l = L::hyperbolic().direct_sum(&L::root(RootType::E, 8).unwrap().rescale(&b(-1)).unwrap());
        assert_eq!(l.rank(), 10);
        assert_eq!(l.determinant(), b(-1));
    }

    #[test]
    fn invariants_of_h_and_e8() {
        let h = L::hyperbolic().basic_invariants();
        assert_eq!(h.rank, 2);
        assert_eq!(h.determinant, b(-1));
        assert_eq!(h.signature, Signature { pos: 1, neg: 1, zero: 0 });
        assert_eq!(h.parity, Parity::Even);
        let e8 = L::root(RootType::E, 8).unwrap().rescale(&b(-1)).unwrap().basic_invariants();
        assert_eq!((e8.rank, e8.determinant.clone()), (8, b(1)));
        assert_eq!(e8.signature, Signature { pos: 0, neg: 8, zero: 0 });
    }

    #[test]
    fn degenerate_signature_counts_radical() {
        let l = L::from_rows(&[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(l.signature(), Signature { pos: 0, neg: 0, zero: 2 });
        let m = L::from_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(m.signature(), Signature { pos: 1, neg: 0, zero: 1 });
    }

    #[test]
    fn disc_of_h_is_trivial() {
        assert!(L::hyperbolic().discriminant_group().unwrap().is_trivial());
    }

    #[test]
    fn disc_of_minus_two() {
        let f = L::from_rows(&[&[-2]]).unwrap().discriminant_group().unwrap();
        assert_eq!(f.orders(), &[b(2)]);
        assert_eq!(f.bilinear()[0][0].to_string(), "1/2");
        assert_eq!(f.quadratic()[0].to_string(), "3/2");
    }

    #[test]
    fn disc_of_degenerate_fails() {
        let l = L::from_rows(&[&[2, 2], &[2, 2]]).unwrap();
        assert_eq!(l.discriminant_group().unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn complement_examples() {
        let l = L::from_rows(&[&[2, 0], &[0, -2]]).unwrap();
        let c = l.orthogonal_complement(&Matrix::from_i64_rows(&[&[1, 0]])).unwrap();
        assert_eq!(c.gram(), &Matrix::from_i64_rows(&[&[-2]]));
        let full = l.orthogonal_complement(&Matrix::identity(2)).unwrap();
        assert_eq!(full.rank(), 0);
        assert_eq!(
            l.orthogonal_complement(&Matrix::from_i64_rows(&[&[2, 0]])).unwrap_err(),
            Error::NotPrimitive
        );
    }

    #[test]
    fn non_symmetric_rejected() {
        assert!(L::from_rows(&[&[0, 1], &[2, 0]]).is_err());
    }

    #[test]
    fn fixed_width_scalar_agrees() {
        let big = L::root(RootType::E, 7).unwrap();
        let small = IntegralLattice::<i64>::root(RootType::E, 7).unwrap();
        assert_eq!(small.determinant(), 2);
        assert_eq!(big.signature(), small.signature());
    }
}
