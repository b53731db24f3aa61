//! The subring of the completed Grothendieck ring generated by `L`, `L^{-1}` and
//! the geometric series `1/(1 - L^{-k})`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// A Laurent polynomial in `L` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MotivicClass {
    terms: BTreeMap<i64, BigInt>,
}

impl MotivicClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `L`.
    pub fn lefschetz() -> Self {
        Self::monomial(1, 1)
    }

    /// `c L^n`.
    pub fn monomial(c: i64, n: i64) -> Self {
        let mut m = Self::zero();
        m.add_term(n, BigInt::from(c));
        m
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut m = Self::zero();
        for (n, c) in terms {
            m.add_term(n, BigInt::from(c));
        }
        m
    }

    fn add_term(&mut self, n: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(n).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    pub fn coeff(&self, n: i64) -> BigInt {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    /// The top exponent; `None` stands for `-∞`.
    pub fn dimension(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn low(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &rhs.terms {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// Multiplication by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(n, c)| (n + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `1 - L^{-k}`.
    pub fn geometric_factor(k: u32) -> Self {
        Self::from_terms([(0, 1), (-(k as i64), -1)])
    }

    /// Exact quotient by `1 - L^{-k}`, if it exists.
    fn div_factor(&self, k: u32) -> Option<Self> {
        // In u = L^{-1}: self = Σ c_n u^{-n}. Divide from the top exponent down:
        // if q = Σ q_n L^n then self_n = q_n - q_{n+k}.
        let k = k as i64;
        let (lo, hi) = (self.low()?, self.dimension()?);
        let mut rest = self.clone();
        let mut q = Self::zero();
        let mut n = hi;
        while n >= lo + k {
            let c = rest.coeff(n);
            if !c.is_zero() {
                q.add_term(n, c.clone());
                rest.add_term(n, -c.clone());
                rest.add_term(n - k, c);
            }
            n -= 1;
        }
        rest.is_zero().then_some(q)
    }

    pub fn specialize(&self, q: &BigRational) -> Result<BigRational, AlgebraError> {
        let mut acc = BigRational::zero();
        for (n, c) in &self.terms {
            if q.is_zero() && *n < 0 {
                return Err(AlgebraError::DivisionByZero);
            }
            acc += BigRational::from_integer(c.clone()) * pow_rat(q, *n);
        }
        Ok(acc)
    }
}

fn pow_rat(q: &BigRational, n: i64) -> BigRational {
    let p = num_traits::pow(q.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        p.recip()
    } else {
        p
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, c: &BigInt, n: i64, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let unit = a.is_one();
    match (n, unit) {
        (0, _) => write!(f, "{a}"),
        (1, true) => f.write_str("L"),
        (1, false) => write!(f, "{a}*L"),
        (_, true) => write!(f, "L^{n}"),
        (_, false) => write!(f, "{a}*L^{n}"),
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.terms.iter().rev().enumerate() {
            fmt_monomial(f, c, *n, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `numerator / ∏ (1 - L^{-k_i})`.
#[derive(Clone)]
pub struct MotivicRational {
    num: MotivicClass,
    /// Sorted `k_i >= 1`.
    den: Vec<u32>,
}

impl MotivicRational {
    pub fn new(num: MotivicClass, mut den: Vec<u32>) -> Self {
        assert!(den.iter().all(|&k| k >= 1), "denominator factors need k >= 1");
        den.sort_unstable();
        let mut r = Self { num, den };
        r.canonicalize();
        r
    }

    pub fn zero() -> Self {
        MotivicClass::zero().into()
    }

    pub fn one() -> Self {
        MotivicClass::one().into()
    }

    pub fn numerator(&self) -> &MotivicClass {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels factors dividing the numerator, smallest `k` first.
    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut kept = Vec::with_capacity(self.den.len());
        for &k in &self.den {
            match self.num.div_factor(k) {
                Some(q) => self.num = q,
                None => kept.push(k),
            }
        }
        self.den = kept;
    }

    fn den_product(den: &[u32]) -> MotivicClass {
        den.iter()
            .fold(MotivicClass::one(), |acc, &k| acc.mul(&MotivicClass::geometric_factor(k)))
    }

    /// The dimension of the leading term; the denominator has dimension 0.
    pub fn dimension(&self) -> Option<i64> {
        self.num.dimension()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        // multiset lcm of the two denominators
        let mut common: BTreeMap<u32, usize> = BTreeMap::new();
        let count = |d: &[u32]| {
            let mut m: BTreeMap<u32, usize> = BTreeMap::new();
            for &k in d {
                *m.entry(k).or_default() += 1;
            }
            m
        };
        let (ca, cb) = (count(&self.den), count(&rhs.den));
        for (k, n) in ca.iter().chain(cb.iter()) {
            let e = common.entry(*k).or_default();
            *e = (*e).max(*n);
        }
        let missing = |have: &BTreeMap<u32, usize>| -> Vec<u32> {
            common
                .iter()
                .flat_map(|(k, n)| std::iter::repeat(*k).take(n - have.get(k).copied().unwrap_or(0)))
                .collect()
        };
        let num = self
            .num
            .mul(&Self::den_product(&missing(&ca)))
            .add(&rhs.num.mul(&Self::den_product(&missing(&cb))));
        let den = common
            .iter()
            .flat_map(|(k, n)| std::iter::repeat(*k).take(*n))
            .collect();
        Self::new(num, den)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut den = self.den.clone();
        den.extend(&rhs.den);
        Self::new(self.num.mul(&rhs.num), den)
    }

    /// Expands the geometric series and keeps the terms of dimension
    /// `>= dim(x) - depth`.
    pub fn truncate_ladic(&self, depth: u64) -> MotivicClass {
        let Some(top) = self.dimension() else {
            return MotivicClass::zero();
        };
        let floor = top - depth as i64;
        // series in u = L^{-1} for 1/∏(1 - u^k), up to degree depth
        let d = depth as usize;
        let mut s = vec![BigInt::zero(); d + 1];
        s[0] = BigInt::one();
        for &k in &self.den {
            let k = k as usize;
            for j in k..=d {
                let prev = s[j - k].clone();
                s[j] += prev;
            }
        }
        let mut out = MotivicClass::zero();
        for (n, c) in self.num.terms() {
            for (j, sj) in s.iter().enumerate() {
                let e = n - j as i64;
                if e < floor {
                    break;
                }
                if !sj.is_zero() {
                    out.add_term(e, c * sj);
                }
            }
        }
        out
    }

    /// Substitutes `L = q`.
    pub fn specialize_q(&self, q: &BigRational) -> Result<BigRational, AlgebraError> {
        let num = self.num.specialize(q)?;
        let den = Self::den_product(&self.den).specialize(q)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(num / den)
    }
}

/// `coeff · L^{-k p0} / (1 - L^{-k})`, the sum `Σ_{p >= p0} coeff · L^{-kp}`.
pub fn geometric_sum(coeff: &MotivicClass, k: u32, p0: u64) -> MotivicRational {
    assert!(k >= 1, "geometric ratio needs k >= 1");
    MotivicRational::new(coeff.shift(-(k as i64) * p0 as i64), vec![k])
}

impl From<MotivicClass> for MotivicRational {
    fn from(num: MotivicClass) -> Self {
        Self { num, den: Vec::new() }
    }
}

impl PartialEq for MotivicRational {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&Self::den_product(&other.den)) == other.num.mul(&Self::den_product(&self.den))
    }
}

impl Eq for MotivicRational {}

impl fmt::Display for MotivicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.terms.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        f.write_str("/")?;
        let factors: Vec<String> = self.den.iter().map(|k| format!("(1 - L^-{k})")).collect();
        if factors.len() == 1 {
            f.write_str(&factors[0])
        } else {
            write!(f, "({})", factors.concat())
        }
    }
}

impl fmt::Debug for MotivicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l2m1() -> MotivicClass {
        MotivicClass::from_terms([(2, 1), (0, -1)])
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dimensions() {
        assert_eq!(l2m1().dimension(), Some(2));
        assert_eq!(MotivicClass::zero().dimension(), None);
        assert_eq!(MotivicClass::from_terms([(-3, 1), (-5, 1)]).dimension(), Some(-3));
    }

    #[test]
    fn geometric_sums_and_rendering() {
        let s = geometric_sum(&l2m1(), 3, 0);
        assert_eq!(s.to_string(), "(L^2 - 1)/(1 - L^-3)");
        // oracle: partial sums to depth 40
        let partial = (0..40).fold(MotivicClass::zero(), |acc, p| acc.add(&l2m1().shift(-3 * p)));
        let diff = s.sub(&partial.into());
        assert!(diff.dimension().unwrap() <= 2 - 3 * 40);
        assert!(geometric_sum(&MotivicClass::zero(), 3, 0).is_zero());
        let s = geometric_sum(&MotivicClass::one(), 1, 2);
        assert_eq!(s.to_string(), "L^-2/(1 - L^-1)");
    }

    #[test]
    fn cancellation() {
        let x = MotivicRational::new(MotivicClass::one(), vec![1]);
        let y: MotivicRational = MotivicClass::geometric_factor(1).into();
        let p = x.mul(&y);
        assert_eq!(p.to_string(), "1");
        assert!(p.denominator().is_empty());
        assert!(x.add(&x.neg()).is_zero());
        // (1 - L^-2)/(1 - L^-1) = 1 + L^-1
        let z = MotivicRational::new(MotivicClass::geometric_factor(2), vec![1]);
        assert_eq!(z.to_string(), "1 + L^-1");
    }

    #[test]
    fn truncation_pattern() {
        let s = geometric_sum(&l2m1(), 3, 0);
        let t = s.truncate_ladic(6);
        assert_eq!(t.to_string(), "L^2 - 1 + L^-1 - L^-3 + L^-4");
        let poly: MotivicRational = l2m1().into();
        assert_eq!(poly.truncate_ladic(10), l2m1());
        assert!(MotivicRational::zero().truncate_ladic(5).is_zero());
    }

    #[test]
    fn specialization() {
        let s = geometric_sum(&l2m1(), 3, 0);
        assert_eq!(s.specialize_q(&rat(2, 1)).unwrap(), rat(24, 7));
        let l3: MotivicRational = MotivicClass::monomial(1, 3).into();
        assert_eq!(l3.specialize_q(&rat(5, 1)).unwrap(), rat(125, 1));
        assert!(MotivicRational::zero().specialize_q(&rat(3, 1)).unwrap().is_zero());
        assert!(s.specialize_q(&rat(1, 1)).is_err());
    }
}
