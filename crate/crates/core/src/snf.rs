//! Smith normal form over the truncated power series ring `K[[t]]/(t^P)`.
//!
//! `K[[t]]` is a discrete valuation ring, so an entry of minimal order divides
//! every other entry; repeated pivoting on such an entry diagonalizes the
//! matrix. The transforms are kept as exact polynomial matrices: each
//! elimination multiplier is only determined modulo `t^{P-o}` (with `o` the
//! pivot order) and is fixed by padding with zeros, which is a legitimate
//! choice of unimodular transform. Consequently `U * M * V` is diagonal to the
//! full input precision.

use crate::error::AlgebraError;
use crate::field::Field;
use crate::matrix::SeriesMatrix;
use crate::series::{Order, TruncSeries};

#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Diagonal orders, nondecreasing; `Order::AtLeast(P)` marks an entry that
    /// exceeds the precision.
    pub orders: Vec<Order>,
    /// Left transform (rows x rows).
    pub u: SeriesMatrix,
    /// Inverse of the left transform, tracked alongside it.
    pub u_inv: SeriesMatrix,
    /// Right transform (cols x cols).
    pub v: SeriesMatrix,
    pub precision: usize,
}

impl SnfResult {
    /// The diagonal matrix `diag(t^{e_i})` of the input's shape (zero where the order
    /// exceeds the precision).
    pub fn diagonal(&self, field: Field) -> SeriesMatrix {
        let mut d = SeriesMatrix::zeros(field, self.u.rows(), self.v.rows(), self.precision);
        for (i, o) in self.orders.iter().enumerate() {
            if let Order::Finite(k) = o {
                d.set(i, i, TruncSeries::monomial(field.one(), *k, self.precision));
            }
        }
        d
    }

    /// Number of diagonal entries with a certified finite order.
    pub fn finite_count(&self) -> usize {
        self.orders.iter().filter(|o| o.finite().is_some()).count()
    }

    /// The positive finite orders (the torsion profile of the cokernel).
    pub fn torsion(&self) -> Vec<usize> {
        self.orders
            .iter()
            .filter_map(|o| o.finite())
            .filter(|&k| k > 0)
            .collect()
    }
}

/// Diagonalizes `m` by pivoting on an entry of minimal known order (ties broken by
/// lowest row, then column).
pub fn snf(m: &SeriesMatrix) -> Result<SnfResult, AlgebraError> {
    let field = m.field();
    let p = m.precision();
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut u = SeriesMatrix::identity(field, rows, p);
    let mut u_inv = SeriesMatrix::identity(field, rows, p);
    let mut v = SeriesMatrix::identity(field, cols, p);
    let rank_bound = rows.min(cols);
    let mut orders = Vec::with_capacity(rank_bound);

    for k in 0..rank_bound {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if let Order::Finite(o) = w.get(i, j).order() {
                    if best.map_or(true, |(bo, _, _)| o < bo) {
                        best = Some((o, i, j));
                    }
                }
            }
        }
        let Some((o, pi, pj)) = best else {
            orders.extend(std::iter::repeat(Order::AtLeast(p)).take(rank_bound - k));
            break;
        };
        w.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        w.swap_cols(k, pj);
        v.swap_cols(k, pj);

        let unit = w.get(k, k).shift_down(o)?;
        let unit_inv = unit.inverse()?;

        for r in k + 1..rows {
            let entry = w.get(r, k);
            if entry.is_zero() {
                continue;
            }
            let q = entry
                .shift_down(o)?
                .mul(&unit_inv)
                .with_precision_exact(p);
            w.row_axpy(r, k, &q);
            u.row_axpy(r, k, &q);
            // U^{-1} <- U^{-1} * E^{-1}: column k gains q * column r
            u_inv.col_axpy(k, r, &q.neg());
        }
        for c in k + 1..cols {
            let entry = w.get(k, c);
            if entry.is_zero() {
                continue;
            }
            let q = entry
                .shift_down(o)?
                .mul(&unit_inv)
                .with_precision_exact(p);
            w.col_axpy(c, k, &q);
            v.col_axpy(c, k, &q);
        }
        let scale = unit_inv.with_precision_exact(p);
        w.scale_col(k, &scale);
        v.scale_col(k, &scale);
        orders.push(Order::Finite(o));
    }

    Ok(SnfResult {
        orders,
        u,
        u_inv,
        v,
        precision: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(f: Field, c: &[i64], p: usize) -> TruncSeries {
        TruncSeries::from_i64s(f, c, p)
    }

    fn check(m: &SeriesMatrix, r: &SnfResult) {
        let f = m.field();
        let prod = r.u.mul(m).unwrap().mul(&r.v).unwrap();
        assert!(prod.agrees_with(&r.diagonal(f)), "{prod:?}");
        assert_eq!(r.u.det().unwrap().order(), Order::Finite(0));
        assert_eq!(r.v.det().unwrap().order(), Order::Finite(0));
        let id = r.u.mul(&r.u_inv).unwrap();
        assert!(id.agrees_with(&SeriesMatrix::identity(f, m.rows(), m.precision())));
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let f = Field::Rational;
        let m = SeriesMatrix::from_rows(
            f,
            vec![
                vec![s(f, &[0, 1], 8), s(f, &[], 8)],
                vec![s(f, &[], 8), s(f, &[0, 0, 1], 8)],
            ],
            2,
            8,
        )
        .unwrap();
        let r = snf(&m).unwrap();
        assert_eq!(r.orders, vec![Order::Finite(1), Order::Finite(2)]);
        assert!(r.u.agrees_with(&SeriesMatrix::identity(f, 2, 8)));
        assert!(r.v.agrees_with(&SeriesMatrix::identity(f, 2, 8)));
    }

    #[test]
    fn antidiagonal() {
        let f = Field::Rational;
        let m = SeriesMatrix::from_rows(
            f,
            vec![
                vec![s(f, &[], 8), s(f, &[0, 1], 8)],
                vec![s(f, &[0, 0, 1], 8), s(f, &[], 8)],
            ],
            2,
            8,
        )
        .unwrap();
        let r = snf(&m).unwrap();
        assert_eq!(r.orders, vec![Order::Finite(1), Order::Finite(2)]);
        check(&m, &r);
    }

    #[test]
    fn cusp_column() {
        let f = Field::Rational;
        let m = SeriesMatrix::from_rows(
            f,
            vec![vec![s(f, &[0, 0, 0, 0, -3], 12)], vec![s(f, &[0, 0, 0, 2], 12)]],
            1,
            12,
        )
        .unwrap();
        let r = snf(&m).unwrap();
        assert_eq!(r.orders, vec![Order::Finite(3)]);
        check(&m, &r);
    }

    #[test]
    fn exhausted_precision_is_marked() {
        let f = Field::prime(5).unwrap();
        let m = SeriesMatrix::from_rows(
            f,
            vec![
                vec![s(f, &[0, 2], 6), s(f, &[], 6)],
                vec![s(f, &[0, 4], 6), s(f, &[], 6)],
            ],
            2,
            6,
        )
        .unwrap();
        let r = snf(&m).unwrap();
        assert_eq!(r.orders, vec![Order::Finite(1), Order::AtLeast(6)]);
        check(&m, &r);
    }

    #[test]
    fn empty_shapes() {
        let f = Field::Rational;
        let m = SeriesMatrix::zeros(f, 3, 0, 5);
        let r = snf(&m).unwrap();
        assert!(r.orders.is_empty());
        assert_eq!(r.u.rows(), 3);
    }
}
