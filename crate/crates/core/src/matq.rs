//! Dense matrices over a finite field.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ff::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("expected full row rank {expected}, found rank {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("entry {0} is not a field element")]
    InvalidEntry(u32),
    #[error("gaussian binomial [{n} choose {m}] requires m <= n")]
    BinomialRange { n: u64, m: u64 },
    #[error("gaussian binomial needs q >= 2, got {0}")]
    BinomialBase(u64),
}

/// An `rows x cols` matrix over a finite field, stored row-major as
/// element codes.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFq {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatrixFq {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        MatrixFq {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(
        field: &FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<u32>,
    ) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(MatrixError::InvalidEntry(bad));
        }
        Ok(MatrixFq {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of equal length. An empty slice gives a
    /// `0 x cols` matrix only through [`MatrixFq::zeros`].
    pub fn from_rows<R: AsRef<[u32]>>(field: &FieldSpec, rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(MatrixError::Shape("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::from_vec(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(self.field.contains(v));
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.elementwise(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.elementwise(other, |f, a, b| f.sub(a, b))
    }

    fn elementwise(
        &self,
        other: &Self,
        op: impl Fn(&FieldSpec, u32, u32) -> u32,
    ) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(&self.field, a, b))
            .collect();
        Ok(MatrixFq {
            data,
            ..self.clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Self {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        MatrixFq {
            data,
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// `self` stacked on top of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_compatible(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Shape(format!(
                "cannot stack {} columns over {}",
                self.cols, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Ok(MatrixFq {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(i, j)));
        }
        MatrixFq {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        MatrixFq {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns, left to right.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(src) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if src != r {
                for j in 0..cols {
                    self.data.swap(src * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            if inv != 1 {
                for j in c..cols {
                    self.data[r * cols + j] = f.mul(self.data[r * cols + j], inv);
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let pivot_entry = self.data[r * cols + j];
                    if pivot_entry != 0 {
                        let idx = i * cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(neg, pivot_entry));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (MatrixFq, Vec<usize>) {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        (r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// True when `self` is already in reduced row echelon form, zero rows last.
    pub fn is_rref(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..self.rows {
            let Some(c) = self.row(i).iter().position(|&x| x != 0) else {
                seen_zero_row = true;
                continue;
            };
            if seen_zero_row || last_pivot.is_some_and(|p| c <= p) || self.get(i, c) != 1 {
                return false;
            }
            if (0..self.rows).any(|k| k != i && self.get(k, c) != 0) {
                return false;
            }
            last_pivot = Some(c);
        }
        true
    }

    /// Drops all-zero rows.
    pub fn nonzero_rows(&self) -> Self {
        let keep: Vec<usize> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|&x| x != 0))
            .collect();
        self.select_rows(&keep)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(aug.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MatrixFq[{}x{} over {}]{:?}",
            self.rows,
            self.cols,
            self.field,
            self.row_vecs()
        )
    }
}

impl fmt::Display for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `dim(rowsp U ∩ rowsp W)` via `rank U + rank W - rank [U; W]`.
pub fn intersection_dim(u: &MatrixFq, w: &MatrixFq) -> Result<usize, MatrixError> {
    let stacked = u.vstack(w)?;
    Ok(u.rank() + w.rank() - stacked.rank())
}

/// Canonical RREF basis of the orthogonal complement of `rowsp U` under the
/// standard dot product. `U` must have full row rank.
pub fn orthogonal_complement(u: &MatrixFq) -> Result<MatrixFq, MatrixError> {
    let (r, pivots) = u.rref();
    if pivots.len() != u.rows() {
        return Err(MatrixError::RankDeficient {
            expected: u.rows(),
            found: pivots.len(),
        });
    }
    let f = u.field();
    let n = u.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = MatrixFq::zeros(f, free.len(), n);
    for (row, &fc) in free.iter().enumerate() {
        out.data[row * n + fc] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            out.data[row * n + pc] = f.neg(r.get(i, fc));
        }
    }
    out.rref_in_place();
    Ok(out)
}

/// Exact Gaussian binomial `[n choose m]_q` from the product formula.
pub fn gaussian_binomial(n: u64, m: u64, q: u64) -> Result<BigUint, MatrixError> {
    if m > n {
        return Err(MatrixError::BinomialRange { n, m });
    }
    if q < 2 {
        return Err(MatrixError::BinomialBase(q));
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= q.pow((n - i) as u32) - &one;
        den *= q.pow((i + 1) as u32) - &one;
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `[n choose m]_q`, or zero when `m > n`.
pub fn gaussian_binomial_or_zero(n: u64, m: u64, q: u64) -> BigUint {
    gaussian_binomial(n, m, q).unwrap_or_else(|_| BigUint::zero())
}
