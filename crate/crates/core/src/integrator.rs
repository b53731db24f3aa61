//! Motivic measures of cylinders and integrals of `L^{-φ}` over strata given in
//! closed form, plus the finite-field counting measure of constraint-defined
//! cylinders.
//!
//! A stratum is a family indexed by integer parameters. Its class
//! `[ψ_m(C)] = coeff · L^{class_exp}`, stabilization level `m` and integrand weight
//! are affine in the parameters, so summing over an unbounded parameter is a
//! geometric series.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{IntegratorError, JetError};
use crate::field::Field;
use crate::jets::{enumerate_jets, filter_liftable, ContactConstraint, EnumConfig};
use crate::motivic::{MotivicClass, MotivicRational};
use crate::presentation::AffineVariety;

/// `constant + Σ coeffs[i] · params[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub constant: i64,
    pub coeffs: Vec<i64>,
}

impl Affine {
    pub fn new(constant: i64, coeffs: &[i64]) -> Self {
        Self {
            constant,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::new(c, &[])
    }

    pub fn eval(&self, params: &[i64]) -> i64 {
        self.constant
            + self
                .coeffs
                .iter()
                .zip(params)
                .map(|(c, p)| c * p)
                .sum::<i64>()
    }

    fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct Param {
    pub name: String,
    pub min: i64,
    /// Inclusive upper bound; `None` for an unbounded direction.
    pub max: Option<i64>,
}

impl Param {
    pub fn at_least(name: &str, min: i64) -> Self {
        Self {
            name: name.into(),
            min,
            max: None,
        }
    }
}

/// `ord(gens) = order(params)` (or `>=` when not exact) on the chart coordinates.
#[derive(Clone, Debug)]
pub struct ConstraintSpec {
    pub gens: Vec<String>,
    pub order: Affine,
    pub exact: bool,
}

impl ConstraintSpec {
    pub fn exact(gens: &[&str], order: Affine) -> Self {
        Self {
            gens: gens.iter().map(|s| s.to_string()).collect(),
            order,
            exact: true,
        }
    }

    pub fn at_least(gens: &[&str], order: i64) -> Self {
        Self {
            gens: gens.iter().map(|s| s.to_string()).collect(),
            order: Affine::constant(order),
            exact: false,
        }
    }

    pub fn instantiate(
        &self,
        variety: &AffineVariety,
        params: &[i64],
    ) -> Result<ContactConstraint, IntegratorError> {
        let gens = self
            .gens
            .iter()
            .map(|g| variety.poly(g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| IntegratorError::Presentation(e.into()))?;
        let min = self.order.eval(params);
        if min < 0 {
            return Err(IntegratorError::OutOfRange {
                name: "order".into(),
                value: min,
            });
        }
        Ok(ContactConstraint {
            gens,
            min: min as usize,
            exact: self.exact,
        })
    }
}

#[derive(Clone, Debug)]
pub struct StratumSpec {
    pub name: String,
    /// Index of the chart the stratum lives on.
    pub chart: usize,
    pub params: Vec<Param>,
    pub class_coeff: MotivicClass,
    pub class_exp: Affine,
    pub level: Affine,
    pub weight: Affine,
    /// Contact conditions cutting the stratum out of the chart.
    pub region: Vec<ConstraintSpec>,
    pub note: String,
}

impl StratumSpec {
    pub fn check_params(&self, params: &[i64]) -> Result<(), IntegratorError> {
        if params.len() != self.params.len() {
            return Err(IntegratorError::OutOfRange {
                name: format!("{} (parameter count)", self.name),
                value: params.len() as i64,
            });
        }
        for (p, &v) in self.params.iter().zip(params) {
            if v < p.min || p.max.is_some_and(|m| v > m) {
                return Err(IntegratorError::OutOfRange {
                    name: p.name.clone(),
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// `[ψ_m(C)]` at the given parameters.
    pub fn class_at(&self, params: &[i64]) -> Result<MotivicClass, IntegratorError> {
        self.check_params(params)?;
        Ok(self.class_coeff.shift(self.class_exp.eval(params)))
    }

    pub fn level_at(&self, params: &[i64]) -> Result<usize, IntegratorError> {
        self.check_params(params)?;
        let m = self.level.eval(params);
        usize::try_from(m).map_err(|_| IntegratorError::OutOfRange {
            name: format!("{} level", self.name),
            value: m,
        })
    }

    /// Exponent of the summand `μ(C) L^{-w}` per unit step of parameter `i`.
    fn slope(&self, i: usize, dim: usize) -> i64 {
        self.class_exp.coeff(i) - dim as i64 * self.level.coeff(i) - self.weight.coeff(i)
    }

    /// All parameter tuples with `Σ (v_i - min_i) <= spread`, in lexicographic order.
    pub fn sample_params(&self, spread: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(ps: &[Param], spread: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            let Some((p, rest)) = ps.split_first() else {
                out.push(cur.clone());
                return;
            };
            let hi = p.max.map_or(p.min + spread, |m| m.min(p.min + spread));
            for v in p.min..=hi {
                cur.push(v);
                rec(rest, spread - (v - p.min), cur, out);
                cur.pop();
            }
        }
        rec(&self.params, spread, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for StratumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self
            .params
            .iter()
            .map(|p| match p.max {
                Some(m) => format!("{}<={}<={}", p.min, p.name, m),
                None => format!("{}>={}", p.name, p.min),
            })
            .collect();
        write!(f, "{} [{}]", self.name, ps.join(", "))
    }
}

/// `μ(C) = [ψ_m(C)] · L^{-m d}`.
pub fn cylinder_measure_exact(
    stratum: &StratumSpec,
    dim: usize,
    params: &[i64],
) -> Result<MotivicRational, IntegratorError> {
    let class = stratum.class_at(params)?;
    let m = stratum.level_at(params)?;
    Ok(class.shift(-((m * dim) as i64)).into())
}

/// `Σ_params μ(C) L^{-w}` for one stratum, in closed form.
pub fn stratum_integral(stratum: &StratumSpec, dim: usize) -> Result<MotivicRational, IntegratorError> {
    let mins: Vec<i64> = stratum.params.iter().map(|p| p.min).collect();
    let at_min = cylinder_measure_exact(stratum, dim, &mins)?;
    let mut total = at_min.mul(&MotivicClass::monomial(1, -stratum.weight.eval(&mins)).into());
    for (i, p) in stratum.params.iter().enumerate() {
        let s = stratum.slope(i, dim);
        let factor: MotivicRational = match p.max {
            Some(max) => {
                // finite sum Σ_{v=0}^{max-min} L^{s v}
                let terms = (0..=(max - p.min)).map(|v| (s * v, 1));
                MotivicClass::from_terms(terms).into()
            }
            None => {
                if s >= 0 {
                    return Err(IntegratorError::NotSummable(format!(
                        "{}: parameter {} has step exponent {}",
                        stratum.name, p.name, s
                    )));
                }
                MotivicRational::new(MotivicClass::one(), vec![(-s) as u32])
            }
        };
        total = total.mul(&factor);
    }
    Ok(total)
}

/// `∫ L^{-φ} dμ` over a disjoint family of strata.
pub fn motivic_integral_exact(strata: &[StratumSpec], dim: usize) -> Result<MotivicRational, IntegratorError> {
    strata.iter().try_fold(MotivicRational::zero(), |acc, s| {
        Ok(acc.add(&stratum_integral(s, dim)?))
    })
}

/// `q^k` as an exact rational.
pub fn q_pow(q: u32, k: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    let p = num_traits::pow(base, k.unsigned_abs() as usize);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

/// A counting measure at two consecutive levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingMeasure {
    pub value: BigRational,
    pub level: usize,
    pub count_n: usize,
    pub count_n1: usize,
}

/// `|ψ_n(C)(F_q)| · q^{-n d}` for the cylinder cut out by `constraints`, counting
/// liftable jets; recomputed at `n + 1` and rejected if the two values differ.
pub fn cylinder_measure_counting(
    variety: &AffineVariety,
    constraints: &[ContactConstraint],
    n: usize,
    cfg: &EnumConfig,
) -> Result<CountingMeasure, IntegratorError> {
    let q = match variety.field {
        Field::Prime(p) => p,
        Field::Rational => return Err(JetError::NotFinite("Q".into()).into()),
    };
    let d = variety.dim as i64;
    let count = |level: usize| -> Result<usize, IntegratorError> {
        let cfg = EnumConfig {
            constraints: constraints.to_vec(),
            ..cfg.clone()
        };
        let all = enumerate_jets(variety, level, &cfg)?;
        let rep = filter_liftable(variety, &all, &cfg)?;
        if !rep.undetermined.is_empty() {
            return Err(JetError::Undetermined {
                count: rep.undetermined.len(),
            }
            .into());
        }
        Ok(rep.liftable.len())
    };
    let (c0, c1) = (count(n)?, count(n + 1)?);
    let v0 = BigRational::from_integer(c0.into()) * q_pow(q, -(n as i64) * d);
    let v1 = BigRational::from_integer(c1.into()) * q_pow(q, -(n as i64 + 1) * d);
    if v0 != v1 {
        return Err(IntegratorError::Unstable {
            n,
            n1: n + 1,
            at_n: v0.to_string(),
            at_n1: v1.to_string(),
        });
    }
    Ok(CountingMeasure {
        value: v0,
        level: n,
        count_n: c0,
        count_n1: c1,
    })
}

/// Result of comparing the two sides of the change of variables in closed form.
#[derive(Clone, Debug)]
pub struct ExactCheck {
    pub example: String,
    pub lhs: MotivicRational,
    pub rhs: MotivicRational,
    pub expected: Option<MotivicRational>,
    pub lhs_terms: Vec<(String, MotivicRational)>,
    pub rhs_terms: Vec<(String, MotivicRational)>,
}

impl ExactCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs && self.expected.as_ref().map_or(true, |e| *e == self.lhs)
    }
}
