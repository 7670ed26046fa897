//! Dense integer matrices with unbounded-precision entries.
//!
//! Everything downstream reduces to exact arithmetic on these: attachment
//! maps of a graph of groups, moduli of loops, and the Hermite/Smith
//! eliminations in [`crate::snf`]. Entries are [`BigInt`], stored row-major;
//! column vectors act on the right.

use std::fmt;
use std::ops::Index;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A rows x cols integer matrix. Row-major storage, column vectors act on
/// the right. Either dimension may be zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from row slices of machine integers. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*x));
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// A single column vector as an n x 1 matrix.
    pub fn column_vector(v: &[BigInt]) -> Self {
        Self::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    /// Assemble a matrix from column vectors, all of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        for c in cols {
            assert_eq!(c.len(), rows, "column length mismatch");
        }
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        })
    }

    /// Keep the columns selected by `keep` (in the given order).
    pub fn select_columns(&self, keep: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, keep.len(), |i, j| self.at(i, keep[j]).clone())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.at(i, j).is_one() } else { self.at(i, j).is_zero() }
                })
            })
    }

    /// `self^k` by binary powering; requires a square matrix.
    pub fn pow(&self, k: u64) -> IntMatrix {
        assert!(self.is_square(), "pow requires a square matrix");
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `self^k` for an unbounded exponent.
    pub fn pow_biguint(&self, k: &BigUint) -> IntMatrix {
        assert!(self.is_square(), "pow requires a square matrix");
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let bits = k.bits();
        for i in 0..bits {
            if k.bit(i) {
                result = result.mul(&base);
            }
            if i + 1 < bits {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Geometric power sum `I + self + ... + self^(k-1)`.
    ///
    /// Uses the doubling identity `S(2m) = S(m) (I + self^m)` so only
    /// O(log k) products are needed.
    pub fn power_sum(&self, k: &BigUint) -> IntMatrix {
        assert!(self.is_square(), "power_sum requires a square matrix");
        fn rec(m: &IntMatrix, k: &BigUint) -> (IntMatrix, IntMatrix) {
            // returns (S(k), m^k)
            let n = m.rows();
            if k.is_zero() {
                return (IntMatrix::zeros(n, n), IntMatrix::identity(n));
            }
            if k.is_one() {
                return (IntMatrix::identity(n), m.clone());
            }
            let (s_half, p_half) = rec(m, &(k >> 1));
            let s = s_half.add(&s_half.mul(&p_half));
            let p = p_half.mul(&p_half);
            if k.bit(0) {
                (s.add(&p), p.mul(m))
            } else {
                (s, p)
            }
        }
        rec(self, k).0
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det requires a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut b = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if b.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !b.at(r, k).is_zero()) {
                    Some(r) => {
                        b.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (b.at(k, k) * b.at(i, j) - b.at(i, k) * b.at(k, j)) / &prev;
                    b.set(i, j, v);
                }
                b.set(i, k, BigInt::zero());
            }
            prev = b.at(k, k).clone();
        }
        sign * b.at(n - 1, n - 1)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c);
            self.set(i, c, v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, j);
            self.set(r, j, v);
        }
    }

    /// row_dst += q * row_src
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        assert_ne!(dst, src);
        for c in 0..self.cols {
            let v = self.at(dst, c) + q * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    /// col_dst += q * col_src
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        assert_ne!(dst, src);
        for r in 0..self.rows {
            let v = self.at(r, dst) + q * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    /// Column rank over the rationals (= over Z for span purposes).
    pub fn column_rank(&self) -> usize {
        crate::snf::column_hermite(self).cols()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        self.at(r, c)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// An automorphism of Z^n: a square integer matrix with determinant +/-1.
///
/// Houses loop moduli and basis changes. The determinant condition is checked
/// on construction, so a value of this type is always invertible over Z.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnimodularAuto {
    matrix: IntMatrix,
}

impl UnimodularAuto {
    pub fn new(matrix: IntMatrix) -> Result<Self, Error> {
        if !matrix.is_square() {
            return Err(Error::NotUnimodular { det: "non-square".into() });
        }
        let d = matrix.det();
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular { det: d.to_string() });
        }
        Ok(UnimodularAuto { matrix })
    }

    pub fn identity(n: usize) -> Self {
        UnimodularAuto { matrix: IntMatrix::identity(n) }
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn det(&self) -> BigInt {
        self.matrix.det()
    }

    /// Exact inverse, again an integer matrix.
    pub fn inverse(&self) -> UnimodularAuto {
        let inv = crate::snf::inverse_unimodular(&self.matrix)
            .expect("unimodular matrix must be invertible over Z");
        UnimodularAuto { matrix: inv }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    /// Least k >= 1 with self^k = identity, or None when no such k exists.
    ///
    /// Finiteness is decided by a single exponent test: every finite-order
    /// n x n integer matrix has order dividing [`crate::lattice::order_exponent`]`(n)`.
    pub fn order(&self) -> Option<BigUint> {
        let n = self.size();
        let (exponent, primes) = crate::lattice::order_exponent_factored(n);
        if !self.matrix.pow_biguint(&exponent).is_identity() {
            return None;
        }
        let mut k = exponent;
        for p in primes {
            let p = BigUint::from(p);
            while (&k % &p).is_zero() && self.matrix.pow_biguint(&(&k / &p)).is_identity() {
                k /= &p;
            }
        }
        Some(k)
    }
}

impl fmt::Debug for UnimodularAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnimodularAuto({:?})", self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 0]]);
        let id = IntMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);
        let b = IntMatrix::from_i64(&[&[0, 1], &[1, -2]]);
        assert!(a.mul(&b).is_identity());
    }

    #[test]
    fn empty_dimensions() {
        let a = IntMatrix::zeros(2, 0);
        let b = IntMatrix::zeros(0, 3);
        let p = a.mul(&b);
        assert_eq!((p.rows(), p.cols()), (2, 3));
        assert!(p.is_zero());
        assert_eq!(IntMatrix::zeros(0, 0).det(), BigInt::one());
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::from_i64(&[&[2, 0], &[0, 3]]).det(), BigInt::from(6));
        assert_eq!(IntMatrix::from_i64(&[&[2, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).det(), BigInt::zero());
        // needs a row swap
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(
            IntMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 1]]).det(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn powers_and_power_sums() {
        let r = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert!(r.pow(4).is_identity());
        assert_eq!(r.pow(2), IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]));
        assert_eq!(r.pow_biguint(&BigUint::from(13u32)), r.pow(13));
        // power sum against the naive loop
        let m = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        for k in 0..8u64 {
            let mut naive = IntMatrix::zeros(2, 2);
            for i in 0..k {
                naive = naive.add(&m.pow(i));
            }
            assert_eq!(m.power_sum(&BigUint::from(k)), naive, "k={k}");
        }
    }

    #[test]
    fn unimodular_rejects_singular() {
        assert!(UnimodularAuto::new(IntMatrix::from_i64(&[&[2, 0], &[0, 1]])).is_err());
        assert!(UnimodularAuto::new(IntMatrix::from_i64(&[&[1, 0]])).is_err());
        let u = UnimodularAuto::new(IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        assert!(u.matrix().mul(u.inverse().matrix()).is_identity());
    }

    #[test]
    fn orders() {
        let ord = |m: &UnimodularAuto| m.order().map(|k| u64::try_from(k).unwrap());
        let quarter = UnimodularAuto::new(IntMatrix::from_i64(&[&[0, -1], &[1, 0]])).unwrap();
        assert_eq!(ord(&quarter), Some(4));
        let shear = UnimodularAuto::new(IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(ord(&shear), None);
        // squares to the identity: [[-1,0],[1,1]]^2 = I
        let m = UnimodularAuto::new(IntMatrix::from_i64(&[&[-1, 0], &[1, 1]])).unwrap();
        assert!(m.matrix().pow(2).is_identity());
        assert_eq!(ord(&m), Some(2));
        assert_eq!(ord(&UnimodularAuto::identity(3)), Some(1));
    }
}
