//! Hermite and Smith eliminations over the integers.
//!
//! The column Hermite form is the canonicalization substrate for sublattices:
//! two generating sets span the same sublattice of Z^n exactly when their
//! column Hermite forms agree. The Smith form provides quotient invariants,
//! kernels and saturations.
//!
//! Conventions. Column Hermite form is lower staircase: pivot rows strictly
//! increase column by column, pivots are positive, entries to the left of a
//! pivot in its pivot row are reduced into `[0, pivot)`. Smith form is
//! `u * a * v = s` with `s` diagonal, non-negative, and each diagonal entry
//! dividing the next.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Canonical column Hermite form of the column span of `a`.
///
/// Zero columns are pruned, so the result has full column rank equal to the
/// rank of `a`.
pub fn column_hermite(a: &IntMatrix) -> IntMatrix {
    let mut m = a.clone();
    let rows = m.rows();
    let cols = m.cols();
    let mut pivot_col = 0;
    let mut pivot_rows: Vec<usize> = Vec::new();
    for row in 0..rows {
        if pivot_col == cols {
            break;
        }
        if (pivot_col..cols).all(|j| m.at(row, j).is_zero()) {
            continue;
        }
        // gcd-reduce the row entries right of pivot_col onto one column
        loop {
            let j_min = (pivot_col..cols)
                .filter(|&j| !m.at(row, j).is_zero())
                .min_by_key(|&j| m.at(row, j).abs())
                .expect("nonzero entry exists");
            m.swap_cols(pivot_col, j_min);
            let mut all_zero = true;
            for j in pivot_col + 1..cols {
                if m.at(row, j).is_zero() {
                    continue;
                }
                let q = m.at(row, j) / m.at(row, pivot_col);
                if !q.is_zero() {
                    let nq = -q;
                    m.add_col_multiple(j, pivot_col, &nq);
                }
                if !m.at(row, j).is_zero() {
                    all_zero = false;
                }
            }
            if all_zero {
                break;
            }
        }
        if m.at(row, pivot_col).is_negative() {
            m.negate_col(pivot_col);
        }
        // reduce earlier columns at this pivot row into [0, pivot)
        for k in 0..pivot_col {
            let q = m.at(row, k).div_floor(m.at(row, pivot_col));
            if !q.is_zero() {
                let nq = -q;
                m.add_col_multiple(k, pivot_col, &nq);
            }
        }
        pivot_rows.push(row);
        pivot_col += 1;
    }
    m.select_columns(&(0..pivot_col).collect::<Vec<_>>())
}

/// Pivot rows of a matrix already in column Hermite form.
pub fn hermite_pivot_rows(h: &IntMatrix) -> Vec<usize> {
    (0..h.cols())
        .map(|j| {
            (0..h.rows())
                .find(|&i| !h.at(i, j).is_zero())
                .expect("Hermite basis has no zero column")
        })
        .collect()
}

/// A Smith decomposition `u * a * v = s` with all four transforms recorded.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries, i.e. the rank of the input.
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).take_while(|&i| !self.s.at(i, i).is_zero()).count()
    }

    /// The nonzero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.s.at(i, i).clone()).collect()
    }
}

struct Worker {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Worker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        self.a.add_row_multiple(i, j, q);
        self.u.add_row_multiple(i, j, q);
        let nq = -q;
        self.u_inv.add_col_multiple(j, i, &nq);
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        self.a.add_col_multiple(i, j, q);
        self.v.add_col_multiple(i, j, q);
        let nq = -q;
        self.v_inv.add_row_multiple(j, i, &nq);
    }
}

/// Smith normal form with unimodular transforms and their inverses.
pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut w = Worker {
        a: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let n = rows.min(cols);
    for t in 0..n {
        // move a nonzero pivot of minimal magnitude to (t, t)
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !w.a.at(i, j).is_zero())
            .min_by_key(|&(i, j)| w.a.at(i, j).abs());
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        // clear row t and column t; restart if a division leaves a remainder
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a.at(i, t).is_zero() {
                    continue;
                }
                let q = -(w.a.at(i, t) / w.a.at(t, t));
                if !q.is_zero() {
                    w.add_row(i, t, &q);
                }
                if !w.a.at(i, t).is_zero() {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a.at(t, j).is_zero() {
                    continue;
                }
                let q = -(w.a.at(t, j) / w.a.at(t, t));
                if !q.is_zero() {
                    w.add_col(j, t, &q);
                }
                if !w.a.at(t, j).is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // enforce divisibility of the remaining block by the pivot
        'divisibility: loop {
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(w.a.at(i, j) % w.a.at(t, t)).is_zero() {
                        let one = BigInt::one();
                        w.add_row(t, i, &one);
                        // re-clear row t
                        loop {
                            let mut dirty = false;
                            for jj in t + 1..cols {
                                if w.a.at(t, jj).is_zero() {
                                    continue;
                                }
                                let q = -(w.a.at(t, jj) / w.a.at(t, t));
                                if !q.is_zero() {
                                    w.add_col(jj, t, &q);
                                }
                                if !w.a.at(t, jj).is_zero() {
                                    w.swap_cols(t, jj);
                                    dirty = true;
                                }
                            }
                            // column t may have been refilled by the row addition
                            for ii in t + 1..rows {
                                if w.a.at(ii, t).is_zero() {
                                    continue;
                                }
                                let q = -(w.a.at(ii, t) / w.a.at(t, t));
                                if !q.is_zero() {
                                    w.add_row(ii, t, &q);
                                }
                                if !w.a.at(ii, t).is_zero() {
                                    w.swap_rows(t, ii);
                                    dirty = true;
                                }
                            }
                            if !dirty {
                                break;
                            }
                        }
                        continue 'divisibility;
                    }
                }
            }
            break;
        }
        if w.a.at(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    debug_assert!(w.u.mul(a).mul(&w.v) == w.a, "smith transform identity violated");
    SmithDecomposition { s: w.a, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv }
}

/// Inverse of a unimodular integer matrix, or None when not unimodular.
pub fn inverse_unimodular(a: &IntMatrix) -> Option<IntMatrix> {
    if !a.is_square() {
        return None;
    }
    let d = smith(a);
    if !d.s.is_identity() {
        return None;
    }
    // u a v = 1  =>  a^-1 = v u
    Some(d.v.mul(&d.u))
}

/// Exact solve of `s * x = b` over Z, columns independently. None when some
/// column of `b` is outside the integer column span of `s`.
pub fn solve_columns(s: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(s.rows(), b.rows(), "solve dimension mismatch");
    let d = smith(s);
    let rank = d.rank();
    // s x = b  <=>  (u s v) y = u b with x = v y
    let ub = d.u.mul(b);
    let mut y = IntMatrix::zeros(s.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..s.rows() {
            if i < rank {
                let di = d.s.at(i, i);
                let (q, r) = ub.at(i, j).div_rem(di);
                if !r.is_zero() {
                    return None;
                }
                y.set(i, j, q);
            } else if !ub.at(i, j).is_zero() {
                return None;
            }
        }
    }
    Some(d.v.mul(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn hermite_identity_and_gcd() {
        assert_eq!(column_hermite(&m(&[&[1, 0], &[0, 1]])), IntMatrix::identity(2));
        // gcd of first coordinates via column reduction
        assert_eq!(column_hermite(&m(&[&[2, 1], &[0, 0]])), m(&[&[1], &[0]]));
        assert_eq!(column_hermite(&m(&[&[2], &[4]])), m(&[&[2], &[4]]));
        // zero generators span the zero lattice
        let h = column_hermite(&m(&[&[0, 0], &[0, 0]]));
        assert_eq!((h.rows(), h.cols()), (2, 0));
    }

    #[test]
    fn hermite_reduces_left_entries() {
        // pivots 2 (row 0) and 3 (row 1): the row-1 entry of column 0 must
        // land in [0, 3)
        let h = column_hermite(&m(&[&[2, 0], &[7, 3]]));
        assert_eq!(h, m(&[&[2, 0], &[1, 3]]));
        let pivots = hermite_pivot_rows(&h);
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn hermite_is_basis_invariant() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let t = m(&[&[1, 4], &[0, 1]]);
        assert_eq!(column_hermite(&a), column_hermite(&a.mul(&t)));
    }

    #[test]
    fn smith_examples() {
        // already diagonal
        let d = smith(&m(&[&[2, 0], &[0, 2]]));
        assert_eq!(d.s, m(&[&[2, 0], &[0, 2]]));
        // unimodular input has trivial invariant factors
        let d = smith(&m(&[&[2, 1], &[1, 0]]));
        assert_eq!(d.s, IntMatrix::identity(2));
        // divisibility fix-up: diag(2,3) -> diag(1,6)
        let a = m(&[&[2, 0], &[0, 3]]);
        let d = smith(&a);
        assert_eq!(d.s, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
    }

    #[test]
    fn smith_transform_identities() {
        let cases = [
            m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]),
            m(&[&[0, 0], &[0, 0]]),
            m(&[&[3], &[6]]),
            m(&[&[5, 0, -3]]),
        ];
        for a in cases {
            let d = smith(&a);
            assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
            assert!(d.u.mul(&d.u_inv).is_identity());
            assert!(d.v.mul(&d.v_inv).is_identity());
            let fac = d.invariant_factors();
            for w in fac.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {fac:?}");
            }
        }
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let inv = inverse_unimodular(&a).unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inverse_unimodular(&m(&[&[2, 0], &[0, 1]])).is_none());
    }

    #[test]
    fn solve_exact() {
        let s = m(&[&[2, 0], &[0, 1]]);
        let b = m(&[&[4], &[3]]);
        let x = solve_columns(&s, &b).unwrap();
        assert_eq!(s.mul(&x), b);
        assert_eq!(x, m(&[&[2], &[3]]));
        // (1,0) is not in the span of (2,0),(0,1) scaled: odd first coord fails
        assert!(solve_columns(&s, &m(&[&[1], &[0]])).is_none());
        // overdetermined consistent
        let s = m(&[&[1], &[2]]);
        let b = m(&[&[3], &[6]]);
        assert_eq!(s.mul(&solve_columns(&s, &b).unwrap()), b);
        assert!(solve_columns(&s, &m(&[&[3], &[5]])).is_none());
    }
}
