//! Exact integer and rational linear algebra for the small dense matrices
//! that appear here (at most a few hundred rows).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Checked product; panics on `i64` overflow.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = out.get(i, j).checked_add(a.checked_mul(b).expect("overflow"));
                        out.set(i, j, v.expect("overflow"));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if a != 0 && !x.is_zero() {
                        acc += x * BigInt::from(a);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_big_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    pub fn to_rational_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&v| rational::int(v)).collect())
            .collect()
    }
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn rank_bareiss(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.to_big_rows();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    BigInt::from(sign) * &a[n - 1][n - 1]
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Basis of `{v : M v = 0}`, one vector per free column.
pub fn nullspace(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Incrementally maintained echelon basis of a rational subspace.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    /// Rows normalized to a leading 1 at `pivots[i]`.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` if it is independent; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&w) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `xᵀ M y` for an integer matrix.
pub fn bilinear(m: &IntMatrix, x: &[Rational], y: &[Rational]) -> Rational {
    let my = m.apply(y);
    x.iter().zip(&my).map(|(a, b)| a * b).sum()
}

pub fn abs_max(m: &IntMatrix) -> i64 {
    m.data.iter().map(|v| v.abs()).max().unwrap_or(0)
}

pub fn is_unit(b: &BigInt) -> bool {
    b.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn from_rows(rows: &[&[i64]]) -> IntMatrix {
        let r = rows.len();
        let c = rows[0].len();
        IntMatrix { rows: r, cols: c, data: rows.iter().flat_map(|x| x.iter().copied()).collect() }
    }

    #[test]
    fn small_ranks_and_determinants() {
        let m = from_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(rank_bareiss(&m.to_big_rows()), 2);
        assert_eq!(determinant(&m), BigInt::zero());
        let m = from_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(determinant(&m), BigInt::from(6));
        let m = from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), BigInt::from(-1));
    }

    #[test]
    fn nullspace_of_rank_two() {
        let m = from_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let ns = nullspace(&m.to_rational_rows());
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vector(&m.apply(&ns[0])));
        assert_eq!(ns[0], vec![int(1), int(-2), int(1)]);
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e = EchelonBasis::new();
        assert!(e.insert(&[int(1), int(1), int(0)]));
        assert!(e.insert(&[int(0), int(1), int(1)]));
        assert!(!e.insert(&[int(1), int(2), int(1)]));
        assert!(e.contains(&[int(2), int(0), int(-2)]));
        assert!(!e.contains(&[int(0), int(0), int(1)]));
        assert_eq!(e.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c)
                .prop_map(move |data| IntMatrix { rows: r, cols: c, data })
        })
    }

    proptest! {
        // Bareiss rank and RREF nullity are independent routes to the same number.
        #[test]
        fn rank_plus_nullity(m in small_matrix()) {
            let rank = rank_bareiss(&m.to_big_rows());
            let ns = nullspace(&m.to_rational_rows());
            prop_assert_eq!(rank + ns.len(), m.cols);
            for v in &ns {
                prop_assert!(is_zero_vector(&m.apply(v)));
            }
            let mut e = EchelonBasis::new();
            for row in m.to_rational_rows() {
                e.insert(&row);
            }
            prop_assert_eq!(e.rank(), rank);
        }

        #[test]
        fn determinant_is_multiplicative(a in proptest::collection::vec(-2i64..=2, 9), b in proptest::collection::vec(-2i64..=2, 9)) {
            let a = IntMatrix { rows: 3, cols: 3, data: a };
            let b = IntMatrix { rows: 3, cols: 3, data: b };
            prop_assert_eq!(determinant(&a.mul(&b)), determinant(&a) * determinant(&b));
        }
    }
}
