//! Ground fields: the rationals and prime fields `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// Descriptor of the ambient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    /// `F_p` for a prime `p` (primality is checked on construction).
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    /// Characteristic: 0 for the rationals.
    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldValue {
        match *self {
            Field::Rational => FieldValue::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldValue::Fp {
                v: n.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldValue {
        match *self {
            Field::Rational => FieldValue::Rat(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = ((n % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                FieldValue::Fp {
                    v: r.to_u32().expect("reduced residue fits"),
                    p,
                }
            }
        }
    }

    /// Maps a rational into the field. Fails if the denominator vanishes mod p.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldValue, AlgebraError> {
        match self {
            Field::Rational => Ok(FieldValue::Rat(r.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(r.numer());
                let den = self.from_bigint(r.denom());
                num.checked_div(&den)
            }
        }
    }

    /// Number of elements, if finite.
    pub fn size(&self) -> Option<u32> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> Option<Vec<FieldValue>> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..p).map(|v| FieldValue::Fp { v, p }).collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Prime-field values are always stored reduced into `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rat(BigRational),
    Fp { v: u32, p: u32 },
}

impl FieldValue {
    pub fn field(&self) -> Field {
        match self {
            FieldValue::Rat(_) => Field::Rational,
            FieldValue::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rat(r) => r.is_zero(),
            FieldValue::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rat(r) => r.is_one(),
            FieldValue::Fp { v, .. } => *v == 1,
        }
    }

    /// Residue of a prime-field element; `None` over the rationals.
    pub fn residue(&self) -> Option<u32> {
        match self {
            FieldValue::Rat(_) => None,
            FieldValue::Fp { v, .. } => Some(*v),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rat(r) => Some(r),
            FieldValue::Fp { .. } => None,
        }
    }

    pub fn inv(&self) -> Result<FieldValue, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Rat(r) => FieldValue::Rat(r.recip()),
            FieldValue::Fp { v, p } => FieldValue::Fp {
                v: pow_mod(*v as u64, (*p - 2) as u64, *p as u64) as u32,
                p: *p,
            },
        })
    }

    pub fn checked_div(&self, rhs: &FieldValue) -> Result<FieldValue, AlgebraError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> FieldValue {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check_same(&self, rhs: &FieldValue) {
        assert_eq!(
            self.field(),
            rhs.field(),
            "arithmetic between elements of different fields"
        );
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl<'a> Add<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a + b),
            (FieldValue::Fp { v: a, p }, FieldValue::Fp { v: b, .. }) => FieldValue::Fp {
                v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: &FieldValue) -> FieldValue {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        self.check_same(rhs);
        match (self, rhs) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a * b),
            (FieldValue::Fp { v: a, p }, FieldValue::Fp { v: b, .. }) => FieldValue::Fp {
                v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Rat(a) => FieldValue::Rat(-a),
            FieldValue::Fp { v, p } => FieldValue::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $m(self, rhs: FieldValue) -> FieldValue {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        -&self
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldValue::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sign helper used when rendering coefficients.
pub(crate) fn is_negative_rational(v: &FieldValue) -> bool {
    matches!(v, FieldValue::Rat(r) if r.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_reduces() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.from_i64(-3).residue(), Some(2));
        assert_eq!(f.from_i64(12).residue(), Some(2));
        let inv = f.from_i64(2).inv().unwrap();
        assert_eq!(inv.residue(), Some(3));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.one().checked_div(&f.zero()), Err(AlgebraError::DivisionByZero));
        let q = Field::Rational;
        assert!(q.zero().inv().is_err());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::prime(5).unwrap();
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half).unwrap().residue(), Some(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(f.from_rational(&fifth).is_err());
    }
}
