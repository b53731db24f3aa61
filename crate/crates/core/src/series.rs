//! Truncated univariate power series `c_0 + c_1 t + ... + c_{P-1} t^{P-1} + O(t^P)`.
//!
//! The precision `P` is part of the value: coefficients at exponents `>= P`
//! are unknown, not zero. Binary operations return the minimum precision of
//! their operands.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::{Field, FieldValue};

/// Order of vanishing of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    /// The first nonzero coefficient sits at this index (certified below the precision).
    Finite(usize),
    /// Every known coefficient vanishes; the order is at least this value.
    AtLeast(usize),
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::AtLeast(_) => None,
        }
    }

    /// A lower bound that is valid in both cases.
    pub fn lower_bound(self) -> usize {
        match self {
            Order::Finite(k) | Order::AtLeast(k) => k,
        }
    }

    /// Minimum of two orders, keeping track of certification.
    pub fn min(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.min(b)),
            (Order::Finite(a), Order::AtLeast(b)) | (Order::AtLeast(b), Order::Finite(a)) => {
                if a < b {
                    Order::Finite(a)
                } else {
                    Order::AtLeast(b)
                }
            }
            (Order::AtLeast(a), Order::AtLeast(b)) => Order::AtLeast(a.min(b)),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    field: Field,
    coeffs: Vec<FieldValue>,
}

impl TruncSeries {
    pub fn zero(field: Field, precision: usize) -> Self {
        Self {
            field,
            coeffs: vec![field.zero(); precision],
        }
    }

    pub fn one(field: Field, precision: usize) -> Self {
        Self::constant(field.one(), precision)
    }

    pub fn constant(c: FieldValue, precision: usize) -> Self {
        let field = c.field();
        let mut s = Self::zero(field, precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c * t^k` at the given precision.
    pub fn monomial(c: FieldValue, k: usize, precision: usize) -> Self {
        let field = c.field();
        let mut s = Self::zero(field, precision);
        if k < precision {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from known coefficients; missing ones (below `precision`) are zero,
    /// extra ones are dropped.
    pub fn from_coeffs(field: Field, mut coeffs: Vec<FieldValue>, precision: usize) -> Self {
        coeffs.resize(precision, field.zero());
        Self { field, coeffs }
    }

    pub fn from_i64s(field: Field, coeffs: &[i64], precision: usize) -> Self {
        Self::from_coeffs(
            field,
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
            precision,
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Known coefficients `c_0 .. c_{P-1}`.
    pub fn coeffs(&self) -> &[FieldValue] {
        &self.coeffs
    }

    /// Coefficient at `k`, or `None` if `k` is at or beyond the precision.
    pub fn coeff(&self, k: usize) -> Option<&FieldValue> {
        self.coeffs.get(k)
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Order::Finite(k),
            None => Order::AtLeast(self.precision()),
        }
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldValue::is_zero)
    }

    /// Drops knowledge beyond `precision` (no-op if already lower).
    pub fn truncate(&self, precision: usize) -> Self {
        let p = precision.min(self.precision());
        Self {
            field: self.field,
            coeffs: self.coeffs[..p].to_vec(),
        }
    }

    /// Treats the series as an exact polynomial and re-expresses it at a new precision,
    /// padding with zeros.
    pub fn with_precision_exact(&self, precision: usize) -> Self {
        Self::from_coeffs(self.field, self.coeffs.clone(), precision)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        Self {
            field: self.field,
            coeffs: (0..p).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        Self {
            field: self.field,
            coeffs: (0..p).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &FieldValue) -> Self {
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        let mut out = vec![self.field.zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(p - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field, self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `t^k`; the low coefficients become known zeros, so precision grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            field: self.field,
            coeffs,
        }
    }

    /// Divides by `t^k`. Requires the first `k` coefficients to be known zeros;
    /// the precision drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self, AlgebraError> {
        if k > self.precision() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NonUnitDivisor {
                order: format!("t^{k} does not divide {self}"),
            });
        }
        Ok(Self {
            field: self.field,
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiplicative inverse of a unit (order 0).
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let order = self.order();
        if order != Order::Finite(0) {
            return Err(AlgebraError::NonUnitDivisor {
                order: order.to_string(),
            });
        }
        let p = self.precision();
        let c0_inv = self.coeffs[0].inv()?;
        let mut inv: Vec<FieldValue> = Vec::with_capacity(p);
        inv.push(c0_inv.clone());
        for n in 1..p {
            let mut acc = self.field.zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc = &acc + &(a * &inv[n - k]);
                }
            }
            inv.push(-&(&acc * &c0_inv));
        }
        Ok(Self {
            field: self.field,
            coeffs: inv,
        })
    }

    /// `self / divisor` where the divisor must be a unit.
    pub fn div_unit(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&divisor.inverse()?))
    }

    /// Evaluates the known part at a field point (treating it as a polynomial).
    pub fn eval_truncated(&self, x: &FieldValue) -> FieldValue {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
