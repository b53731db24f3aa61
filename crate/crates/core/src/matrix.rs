//! Dense matrices of truncated series sharing one precision.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::Field;
use crate::series::{Order, TruncSeries};

#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    precision: usize,
    entries: Vec<TruncSeries>,
}

impl SeriesMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize, precision: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            precision,
            entries: vec![TruncSeries::zero(field, precision); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize, precision: usize) -> Self {
        let mut m = Self::zeros(field, n, n, precision);
        for i in 0..n {
            m.set(i, i, TruncSeries::one(field, precision));
        }
        m
    }

    /// Builds a matrix from rows of series. Entries are truncated to the smallest
    /// precision present so that the precision is uniform.
    pub fn from_rows(
        field: Field,
        rows: Vec<Vec<TruncSeries>>,
        cols: usize,
        precision: usize,
    ) -> Result<Self, AlgebraError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r);
        }
        let precision = entries
            .iter()
            .map(TruncSeries::precision)
            .min()
            .unwrap_or(precision)
            .min(precision);
        let entries = entries.into_iter().map(|e| e.truncate(precision)).collect();
        Ok(Self {
            field,
            rows: nrows,
            cols,
            precision,
            entries,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn get(&self, r: usize, c: usize) -> &TruncSeries {
        &self.entries[r * self.cols + c]
    }

    /// Stores an entry, truncating or (if it is shorter) lowering nothing: the entry
    /// must carry at least the matrix precision.
    pub fn set(&mut self, r: usize, c: usize, v: TruncSeries) {
        debug_assert!(v.precision() >= self.precision);
        self.entries[r * self.cols + c] = v.truncate(self.precision);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows, self.precision);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let p = self.precision.min(rhs.precision);
        let mut out = Self::zeros(self.field, self.rows, rhs.cols, p);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = TruncSeries::zero(self.field, p);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(rhs.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Sub-matrix from the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, rows.len(), cols.len(), self.precision);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] -= q * row[source]`
    pub fn row_axpy(&mut self, target: usize, source: usize, q: &TruncSeries) {
        for c in 0..self.cols {
            let v = self.get(target, c).sub(&q.mul(self.get(source, c)));
            self.set(target, c, v);
        }
    }

    /// `col[target] -= q * col[source]`
    pub fn col_axpy(&mut self, target: usize, source: usize, q: &TruncSeries) {
        for r in 0..self.rows {
            let v = self.get(r, target).sub(&q.mul(self.get(r, source)));
            self.set(r, target, v);
        }
    }

    pub fn scale_col(&mut self, c: usize, w: &TruncSeries) {
        for r in 0..self.rows {
            let v = self.get(r, c).mul(w);
            self.set(r, c, v);
        }
    }

    /// Determinant by cofactor expansion (the matrices here are at most a handful wide).
    pub fn det(&self) -> Result<TruncSeries, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let idx: Vec<usize> = (0..self.cols).collect();
        Ok(self.det_rec(0, &idx))
    }

    fn det_rec(&self, row: usize, cols: &[usize]) -> TruncSeries {
        if cols.is_empty() {
            return TruncSeries::one(self.field, self.precision);
        }
        let mut acc = TruncSeries::zero(self.field, self.precision);
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.det_rec(row + 1, &rest));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// Minimum order over all entries.
    pub fn min_order(&self) -> Order {
        self.entries
            .iter()
            .map(TruncSeries::order)
            .fold(Order::AtLeast(self.precision), Order::min)
    }

    /// True if every entry agrees with `other` up to the smaller precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let p = self.precision.min(other.precision);
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.truncate(p) == b.truncate(p))
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} @ O(t^{})]", self.rows, self.cols, self.precision)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
