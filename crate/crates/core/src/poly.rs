//! Sparse multivariate polynomials over an exact field, and a small
//! recursive-descent parser for polynomial expressions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::AlgebraError;
use crate::field::{is_negative_rational, Field, FieldValue};
use crate::series::TruncSeries;

/// Exponent vector, one entry per ambient variable.
pub type Exponent = Vec<u32>;

/// A polynomial in `nvars` variables. Terms are kept sorted by exponent
/// (lexicographic), without duplicates or zero coefficients, so equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: Vec<(Exponent, FieldValue)>,
}

impl MultiPoly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: FieldValue, nvars: usize) -> Self {
        Self::from_terms(c.field(), nvars, vec![(vec![0; nvars], c)])
    }

    pub fn one(field: Field, nvars: usize) -> Self {
        Self::constant(field.one(), nvars)
    }

    /// The coordinate function `x_i`.
    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(field, nvars, vec![(e, field.one())])
    }

    /// Canonicalizes an arbitrary term list (merges duplicates, drops zeros, sorts).
    pub fn from_terms(field: Field, nvars: usize, terms: Vec<(Exponent, FieldValue)>) -> Self {
        let mut map: BTreeMap<Exponent, FieldValue> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must match variable count");
            match map.get_mut(&e) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        Self {
            field,
            nvars,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exponent, FieldValue)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of variable `i` appearing in any term.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0)
    }

    /// Constant term.
    pub fn constant_term(&self) -> FieldValue {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut t = self.terms.clone();
        t.extend(rhs.terms.iter().cloned());
        Self::from_terms(self.field, self.nvars, t)
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut t = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                t.push((e, ca * cb));
            }
        }
        Self::from_terms(self.field, self.nvars, t)
    }

    pub fn scale(&self, c: &FieldValue) -> Self {
        Self::from_terms(
            self.field,
            self.nvars,
            self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.field, self.nvars);
        let mut base = self.clone();
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

    /// Partial derivative with respect to variable `i` (characteristic-aware).
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * &self.field.from_i64(e[i] as i64))
            })
            .collect();
        Self::from_terms(self.field, self.nvars, terms)
    }

    /// Evaluates at a point of the field.
    pub fn eval(&self, point: &[FieldValue]) -> Result<FieldValue, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    m = &m * &x.pow(k);
                }
            }
            acc = &acc + &m;
        }
        Ok(acc)
    }

    /// Substitutes truncated series for the variables. All entries must share one precision.
    pub fn eval_series(&self, point: &[TruncSeries]) -> Result<TruncSeries, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let precision = point
            .iter()
            .map(TruncSeries::precision)
            .min()
            .unwrap_or(usize::MAX);
        if let Some(bad) = point.iter().find(|s| s.precision() != precision) {
            return Err(AlgebraError::DimensionMismatch {
                expected: precision,
                got: bad.precision(),
            });
        }
        if self.nvars == 0 {
            // no variables: the caller decides the precision, use 1 known coefficient
            return Ok(TruncSeries::constant(self.constant_term(), 1));
        }
        // power tables per variable
        let powers: Vec<Vec<TruncSeries>> = (0..self.nvars)
            .map(|i| {
                let d = self.degree_in(i) as usize;
                let mut v = Vec::with_capacity(d + 1);
                v.push(TruncSeries::one(self.field, precision));
                for k in 1..=d {
                    let next = v[k - 1].mul(&point[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = TruncSeries::zero(self.field, precision);
        for (e, c) in &self.terms {
            let mut m = TruncSeries::constant(c.clone(), precision);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m.mul(&powers[i][k as usize]);
                }
            }
            acc = acc.add(&m);
        }
        Ok(acc)
    }

    /// Composition `self(subs_1, ..., subs_n)` where each substitute lives in a common ring.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<MultiPoly, AlgebraError> {
        if subs.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let target_vars = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut acc = MultiPoly::zero(self.field, target_vars);
        for (e, c) in &self.terms {
            let mut m = MultiPoly::constant(c.clone(), target_vars);
            for (s, &k) in subs.iter().zip(e) {
                if k > 0 {
                    m = m.mul(&s.pow(k));
                }
            }
            acc = acc.add(&m);
        }
        Ok(acc)
    }

    /// Re-embeds into a ring with more variables; variable `i` goes to `map[i]`.
    pub fn rename_vars(&self, new_nvars: usize, map: &[usize]) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; new_nvars];
                for (i, &k) in e.iter().enumerate() {
                    e2[map[i]] += k;
                }
                (e2, c.clone())
            })
            .collect();
        MultiPoly::from_terms(self.field, new_nvars, terms)
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        assert_eq!(self.field, rhs.field, "field mismatch");
    }

    /// Renders with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest exponent first reads more naturally
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative_rational(c);
            let abs = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

/// Parses a polynomial expression over `field` in the given variables.
///
/// Grammar: integer literals, variable names, `+ - * ^`, parentheses.
/// Exponents must be non-negative integer literals.
pub fn parse_poly(src: &str, vars: &[&str], field: Field) -> Result<MultiPoly, AlgebraError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        vars,
        field,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
    field: Field,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let e: u32 = n
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse::<BigInt>().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        let n = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(MultiPoly::constant(self.field.from_bigint(&v), n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(MultiPoly::var(self.field, n, i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn parse_and_render() {
        let p = parse_poly("y^2 - x^3", &["x", "y"], q()).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.display_with(&names), "-x^3 + y^2");
        let r = parse_poly("(x + 1)*(x - 1)", &["x"], q()).unwrap();
        assert_eq!(r, parse_poly("x^2 - 1", &["x"], q()).unwrap());
    }

    #[test]
    fn parse_errors_report_position() {
        let e = parse_poly("x + z", &["x"], q()).unwrap_err();
        assert_eq!(
            e,
            AlgebraError::Parse {
                pos: 4,
                msg: "unknown variable 'z'".into()
            }
        );
        assert!(parse_poly("(x", &["x"], q()).is_err());
        assert!(parse_poly("x^", &["x"], q()).is_err());
        assert!(parse_poly("x y", &["x", "y"], q()).is_err());
    }

    #[test]
    fn derivative_depends_on_characteristic() {
        let f2 = Field::prime(2).unwrap();
        let p = parse_poly("y^2 - x^3", &["x", "y"], f2).unwrap();
        assert!(p.derivative(1).is_zero());
        let f3 = Field::prime(3).unwrap();
        let p = parse_poly("y^2 - x^3", &["x", "y"], f3).unwrap();
        assert!(p.derivative(0).is_zero());
    }

    #[test]
    fn eval_series_cusp() {
        let p = parse_poly("y^2 - x^3", &["x", "y"], q()).unwrap();
        let x = TruncSeries::from_i64s(q(), &[0, 0, 1], 12);
        let y = TruncSeries::from_i64s(q(), &[0, 0, 0, 1], 12);
        let r = p.eval_series(&[x.clone(), y]).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.precision(), 12);
        let y2 = TruncSeries::from_i64s(q(), &[0, 0, 0, 1, 1], 12);
        let r = p.eval_series(&[x.clone(), y2]).unwrap();
        // independent naive expansion of (t^3 + t^4)^2 - (t^2)^3
        let mut naive = vec![0i64; 12];
        let y = [0i64, 0, 0, 1, 1];
        for i in 0..5 {
            for j in 0..5 {
                if i + j < 12 {
                    naive[i + j] += y[i] * y[j];
                }
            }
        }
        naive[6] -= 1;
        assert_eq!(r, TruncSeries::from_i64s(q(), &naive, 12));
        assert_eq!(r, TruncSeries::from_i64s(q(), &[0, 0, 0, 0, 0, 0, 0, 2, 1], 12));
        let one = MultiPoly::one(q(), 2);
        assert_eq!(
            one.eval_series(&[x.clone(), x]).unwrap(),
            TruncSeries::one(q(), 12)
        );
    }

    #[test]
    fn eval_series_dimension_mismatch() {
        let p = MultiPoly::var(q(), 2, 0);
        let x = TruncSeries::one(q(), 4);
        assert!(p.eval_series(&[x]).is_err());
    }

    #[test]
    fn compose_substitutes() {
        let vars = ["u", "v"];
        let f = parse_poly("u*v", &vars, q()).unwrap();
        let s = vec![
            parse_poly("u", &vars, q()).unwrap(),
            parse_poly("u*v", &vars, q()).unwrap(),
        ];
        assert_eq!(f.compose(&s).unwrap(), parse_poly("u^2*v", &vars, q()).unwrap());
    }
}
