//! Dense linear algebra: exact integer rank (fraction-free elimination) and
//! matrices over `F_p`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::field::{FieldElement, PrimeField};

/// Rank over the rationals of an integer matrix given by rows.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    match bareiss_rank_i128(wide) {
        Some(r) => r,
        None => {
            let big = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            bareiss_rank_big(big)
        }
    }
}

/// Indices of a maximal set of rows, chosen greedily in input order, that is
/// linearly independent over the rationals.
pub fn independent_rows(rows: &[Vec<i64>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let candidate: Vec<Vec<i64>> = kept.iter().chain(std::iter::once(&i)).map(|&k| rows[k].clone()).collect();
        if exact_rank(&candidate) > kept.len() {
            kept.push(i);
        }
    }
    kept
}

// One-step Bareiss elimination; every intermediate entry is a minor of the
// input, so divisions by the previous pivot are exact.
fn bareiss_rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        for i in (rank + 1)..nrows {
            for j in (col + 1)..ncols {
                let num = m[rank][col].checked_mul(m[i][j])?.checked_sub(m[i][col].checked_mul(m[rank][j])?)?;
                m[i][j] = num / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for i in (rank + 1)..nrows {
            for j in (col + 1)..ncols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = num / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix { field, rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        FpMatrix { field, rows, cols, data: values.iter().map(|&v| field.from_i64(v)).collect() }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        FpMatrix { field, rows, cols, data: (0..rows * cols).map(|_| field.random(rng)).collect() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// `sum_k coeffs[k] * mats[k]`.
    pub fn linear_combination(coeffs: &[FieldElement], mats: &[FpMatrix]) -> FpMatrix {
        assert_eq!(coeffs.len(), mats.len());
        let first = mats.first().expect("at least one matrix");
        let f = first.field;
        let mut out = Self::zeros(f, first.rows, first.cols);
        for (c, m) in coeffs.iter().zip(mats) {
            for (o, &v) in out.data.iter_mut().zip(&m.data) {
                *o = f.add(*o, f.mul(*c, v));
            }
        }
        out
    }

    /// Frobenius pairing `sum_{kl} self_kl * other_kl`.
    pub fn pairing(&self, other: &FpMatrix) -> FieldElement {
        let f = self.field;
        self.data.iter().zip(&other.data).fold(FieldElement::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, FieldElement::ONE);
        }
        let pivots = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Solves `self * x = rhs`: a particular solution plus a basis of the
    /// kernel, or `None` when the system is inconsistent.
    pub fn solve_affine(&self, rhs: &[FieldElement]) -> Option<(Vec<FieldElement>, Vec<Vec<FieldElement>>)> {
        assert_eq!(rhs.len(), self.rows);
        let f = self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, rhs[i]);
        }
        let pivots = aug.row_reduce();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut particular = vec![FieldElement::ZERO; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = aug.get(r, self.cols);
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[fc] = FieldElement::ONE;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = f.neg(aug.get(r, fc));
                }
                v
            })
            .collect();
        Some((particular, kernel))
    }
}
