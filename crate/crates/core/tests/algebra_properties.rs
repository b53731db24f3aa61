//! Randomized properties of the coefficient fields, polynomials, truncated
//! series and the Smith normal form.

use arcspace::field::Field;
use arcspace::matrix::SeriesMatrix;
use arcspace::poly::MultiPoly;
use arcspace::series::{Order, TruncSeries};
use arcspace::snf::snf;
use proptest::prelude::*;

fn fields() -> [Field; 2] {
    [Field::Rational, Field::prime(5).unwrap()]
}

fn poly(field: Field, terms: &[(u8, u8, i64)]) -> MultiPoly {
    let terms = terms
        .iter()
        .map(|&(a, b, c)| (vec![a as u32, b as u32], field.from_i64(c)))
        .collect();
    MultiPoly::from_terms(field, 2, terms)
}

fn terms() -> impl Strategy<Value = Vec<(u8, u8, i64)>> {
    prop::collection::vec((0u8..4, 0u8..4, -9i64..10), 0..6)
}

/// A series `t^shift * (c_0 + c_1 t + ...)` known to `precision`.
fn series(field: Field, shift: usize, coeffs: &[i64], precision: usize) -> TruncSeries {
    let mut v = vec![0; shift];
    v.extend_from_slice(coeffs);
    TruncSeries::from_i64s(field, &v, precision)
}

fn series_parts() -> impl Strategy<Value = (usize, Vec<i64>, usize)> {
    (0usize..5, prop::collection::vec(-6i64..7, 0..8), 3usize..14)
}

fn same(a: &TruncSeries, b: &TruncSeries) -> bool {
    let p = a.precision().min(b.precision());
    a.truncate(p) == b.truncate(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn polynomial_ring_axioms(a in terms(), b in terms(), c in terms()) {
        for f in fields() {
            let (a, b, c) = (poly(f, &a), poly(f, &b), poly(f, &c));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert!(a.add(&a.neg()).is_zero());
            prop_assert_eq!(a.mul(&MultiPoly::one(f, 2)), a.clone());
        }
    }

    #[test]
    fn series_ring_axioms(x in series_parts(), y in series_parts(), z in series_parts()) {
        for f in fields() {
            let a = series(f, x.0, &x.1, x.2);
            let b = series(f, y.0, &y.1, y.2);
            let c = series(f, z.0, &z.1, z.2);
            prop_assert!(same(&a.add(&b).add(&c), &a.add(&b.add(&c))));
            prop_assert!(same(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
            prop_assert!(same(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
            prop_assert!(same(&a.mul(&b), &b.mul(&a)));
            prop_assert!(a.add(&a.neg()).is_zero());
            prop_assert_eq!(a.add(&b).precision(), a.precision().min(b.precision()));
            prop_assert_eq!(a.mul(&b).precision(), a.precision().min(b.precision()));
        }
    }

    #[test]
    fn order_is_never_overstated(x in series_parts()) {
        for f in fields() {
            let a = series(f, x.0, &x.1, x.2);
            match a.order() {
                Order::Finite(k) => {
                    prop_assert!(k < a.precision());
                    prop_assert!(!a.coeff(k).unwrap().is_zero());
                    prop_assert!((0..k).all(|i| a.coeff(i).unwrap().is_zero()));
                }
                Order::AtLeast(k) => {
                    prop_assert_eq!(k, a.precision());
                    prop_assert!(a.is_zero());
                }
            }
        }
    }

    #[test]
    fn precision_soundness(
        x in series_parts(),
        y in series_parts(),
        tail in prop::collection::vec(-6i64..7, 1..6),
        e in 0u32..4,
    ) {
        for f in fields() {
            let a = series(f, x.0, &x.1, x.2);
            let b = series(f, y.0, &y.1, y.2);
            // a2 agrees with a below a's precision and knows more beyond it
            let p2 = a.precision() + tail.len();
            let mut coeffs: Vec<i64> = vec![0; x.0];
            coeffs.extend_from_slice(&x.1);
            coeffs.resize(a.precision(), 0);
            coeffs.extend_from_slice(&tail);
            let a2 = TruncSeries::from_i64s(f, &coeffs, p2);
            prop_assert!(same(&a, &a2));
            let ops: [(TruncSeries, TruncSeries); 4] = [
                (a.add(&b), a2.add(&b)),
                (a.sub(&b), a2.sub(&b)),
                (a.mul(&b), a2.mul(&b)),
                (a.pow(e), a2.pow(e)),
            ];
            for (r, r2) in &ops {
                prop_assert!(r.precision() <= r2.precision());
                prop_assert!(same(r, r2));
            }
            if a.order() == Order::Finite(0) {
                let (i, i2) = (a.inverse().unwrap(), a2.inverse().unwrap());
                prop_assert!(same(&i, &i2));
                prop_assert!(same(&a.mul(&i), &TruncSeries::one(f, a.precision())));
            }
        }
    }
}

fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<(usize, Vec<i64>)>)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        let entry = (0usize..6, prop::collection::vec(-3i64..4, 0..5));
        (Just(r), Just(c), prop::collection::vec(entry, r * c))
    })
}

fn build(f: Field, r: usize, c: usize, entries: &[(usize, Vec<i64>)], precision: usize) -> SeriesMatrix {
    let rows = (0..r)
        .map(|i| {
            (0..c)
                .map(|j| {
                    let (shift, coeffs) = &entries[i * c + j];
                    series(f, *shift, coeffs, precision)
                })
                .collect()
        })
        .collect();
    SeriesMatrix::from_rows(f, rows, c, precision).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_reconstructs_the_diagonal((r, c, entries) in matrix_strategy()) {
        for f in fields() {
            let m = build(f, r, c, &entries, 20);
            let s = snf(&m).unwrap();
            let d = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
            prop_assert!(d.agrees_with(&s.diagonal(f)));
            prop_assert_eq!(s.u.det().unwrap().order(), Order::Finite(0));
            prop_assert_eq!(s.v.det().unwrap().order(), Order::Finite(0));
            let id = SeriesMatrix::identity(f, r, 20);
            prop_assert!(s.u.mul(&s.u_inv).unwrap().agrees_with(&id));
            let finite: Vec<usize> = s.orders.iter().filter_map(|o| o.finite()).collect();
            prop_assert!(finite.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn snf_orders_are_stable_under_more_precision((r, c, entries) in matrix_strategy()) {
        for f in fields() {
            let lo = snf(&build(f, r, c, &entries, 6)).unwrap();
            let hi = snf(&build(f, r, c, &entries, 20)).unwrap();
            for (a, b) in lo.orders.iter().zip(&hi.orders) {
                if let Order::Finite(k) = a {
                    prop_assert_eq!(*b, Order::Finite(*k));
                }
            }
        }
    }
}
