//! Dense matrices over R and their minors.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::groebner::FreeVector;
use crate::ring::{Automorphism, Ring, RingElem};

/// An `nrows × ncols` matrix with entries in R.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<RingElem>>,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, ncols, rows: vec![vec![RingElem::zero(); ncols]; nrows] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = ring.one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<RingElem>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { nrows: rows.len(), ncols, rows }
    }

    /// Builds a matrix whose columns are the given vectors of length `nrows`.
    pub fn from_columns(nrows: usize, cols: &[FreeVector]) -> Self {
        let mut m = Self::zero(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length");
            for (i, e) in c.iter().enumerate() {
                m.rows[i][j] = e.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<RingElem>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[RingElem] {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> FreeVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<FreeVector> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.ncols, &self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|e| e.is_zero()))
    }

    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows, "matrix product dimensions");
        let mut out = Matrix::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] = ring.add(&out.rows[i][j], &ring.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product `self · v`.
    pub fn apply(&self, ring: &Ring, v: &[RingElem]) -> FreeVector {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| {
                let mut acc = RingElem::zero();
                for (a, b) in r.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, ring: &Ring, c: &RingElem) -> Matrix {
        let rows = self.rows.iter().map(|r| r.iter().map(|e| ring.mul(e, c)).collect()).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn add(&self, ring: &Ring, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let rows =
            self.rows.iter().zip(&other.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn neg(&self, ring: &Ring) -> Matrix {
        let rows = self.rows.iter().map(|r| r.iter().map(|e| ring.neg(e)).collect()).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    /// Applies a ring automorphism entrywise.
    pub fn twist(&self, ring: &Ring, sigma: &Automorphism) -> Matrix {
        let rows = self.rows.iter().map(|r| r.iter().map(|e| sigma.apply(ring, e)).collect()).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        assert_eq!(a.nrows, b.nrows);
        assert_eq!(c.nrows, d.nrows);
        assert_eq!(a.ncols, c.ncols);
        assert_eq!(b.ncols, d.ncols);
        let mut rows = Vec::with_capacity(a.nrows + c.nrows);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            let mut r = x.clone();
            r.extend(y.iter().cloned());
            rows.push(r);
        }
        for (x, y) in c.rows.iter().zip(&d.rows) {
            let mut r = x.clone();
            r.extend(y.iter().cloned());
            rows.push(r);
        }
        Matrix { nrows: a.nrows + c.nrows, ncols: a.ncols + b.ncols, rows }
    }

    pub fn hstack(a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.nrows, b.nrows);
        let rows = a.rows.iter().zip(&b.rows).map(|(x, y)| x.iter().chain(y.iter()).cloned().collect()).collect();
        Matrix { nrows: a.nrows, ncols: a.ncols + b.ncols, rows }
    }

    pub fn vstack(a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.ncols, b.ncols);
        let mut rows = a.rows.clone();
        rows.extend(b.rows.iter().cloned());
        Matrix { nrows: a.nrows + b.nrows, ncols: a.ncols, rows }
    }

    /// Square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<RingElem>> {
        rows.iter().map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect()).collect()
    }

    /// Determinant of a square matrix.
    pub fn det(&self, ring: &Ring) -> RingElem {
        assert_eq!(self.nrows, self.ncols, "determinant of a non-square matrix");
        ring.det(&self.rows)
    }

    /// The distinct nonzero k×k minors. `k = 0` yields `[1]`.
    pub fn minors(&self, ring: &Ring, k: usize) -> Vec<RingElem> {
        minors_of_rows(ring, &self.rows, self.ncols, k)
    }
}

/// The distinct nonzero k×k minors of the matrix with the given rows.
pub fn minors_of_rows(ring: &Ring, rows: &[Vec<RingElem>], ncols: usize, k: usize) -> Vec<RingElem> {
    if k == 0 {
        return vec![ring.one()];
    }
    if k > rows.len() || k > ncols {
        return Vec::new();
    }
    assert!(ncols <= 64, "too many columns for minor enumeration");
    let mut found: BTreeSet<Vec<(crate::ring::Mono, u32)>> = BTreeSet::new();
    let mut out = Vec::new();
    for rsel in combinations(rows.len(), k) {
        // Laplace expansion row by row, memoized on column subsets
        let mut level: BTreeMap<u64, RingElem> = BTreeMap::new();
        level.insert(0, ring.one());
        for &ri in &rsel {
            let row = &rows[ri];
            let mut next: BTreeMap<u64, RingElem> = BTreeMap::new();
            for (&s, val) in &level {
                for (j, e) in row.iter().enumerate() {
                    if s & (1 << j) != 0 || e.is_zero() {
                        continue;
                    }
                    let greater = (s >> (j + 1)).count_ones();
                    let term = ring.mul(e, val);
                    let slot = next.entry(s | (1 << j)).or_default();
                    *slot = if greater % 2 == 0 { ring.add(slot, &term) } else { ring.sub(slot, &term) };
                }
            }
            next.retain(|_, v| !v.is_zero());
            level = next;
            if level.is_empty() {
                break;
            }
        }
        for (_, v) in level {
            if !v.is_zero() && found.insert(v.terms().to_vec()) {
                out.push(v);
            }
        }
    }
    out
}

/// All increasing k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn minors_of_small_matrix() {
        let r = Ring::new(RingSpec::new(3, 2, &[])).unwrap();
        let m = Matrix::from_rows(2, vec![vec![r.x(0), r.x(1)], vec![r.zero(), r.x(0)]]);
        assert_eq!(m.minors(&r, 2), vec![r.parse("x^2").unwrap()]);
        assert_eq!(m.minors(&r, 1).len(), 2);
        assert_eq!(m.det(&r), r.parse("x^2").unwrap());
    }
}
