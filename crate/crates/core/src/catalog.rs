//! The shipped examples: affine chart atlases of proper birational maps onto
//! `A^2`, their strata in closed form on both sides of the change of variables,
//! and samplers for admissible arcs.
//!
//! Arcs centered on chart overlaps are assigned to one primary chart; the other
//! charts carry a contact restriction (`ord >= 1` of the coordinate that vanishes
//! exactly off the primary chart).

use rand::Rng;

use crate::error::{IntegratorError, PresentationError};
use crate::field::{Field, FieldValue};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::integrator::{
    cylinder_measure_counting, cylinder_measure_exact, motivic_integral_exact, stratum_integral, Affine,
    ConstraintSpec, CountingMeasure, ExactCheck, Param, StratumSpec,
};
use crate::jets::EnumConfig;
use crate::motivic::{MotivicClass, MotivicRational};
use crate::presentation::{AffineVariety, ArcGen, MorphismPres, SubschemeIdeal};

/// How arcs on a chart are produced so that they satisfy its equations exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcShape {
    /// Coordinates `t^{k_i} u_i`.
    Free,
    /// On `{x b = y^2}` with coordinates `(x, y, b)`:
    /// `y = t^k u w`, `b = t^j u`, `x = t^{2k-j} u w^2`.
    Quadric,
    /// On `{y^2 = x^3}`: `x = s^2`, `y = s^3` with `s = t^k u`.
    Cusp,
    /// On `{x z = y^2}` with coordinates `(x, y, z)`:
    /// `x = u a^2`, `y = u a c`, `z = u c^2`, `a = t^i a'`, `c = t^l c'`.
    Cone,
}

/// Inclusive ranges for the shift exponents of a shape.
#[derive(Clone, Debug)]
pub struct ArcSampler {
    pub shape: ArcShape,
    pub shifts: Vec<(usize, usize)>,
}

/// The data an arc is assembled from; tails can be re-drawn above a given degree.
#[derive(Clone, Debug)]
pub struct ArcRecipe {
    pub shape: ArcShape,
    pub shifts: Vec<usize>,
    pub parts: Vec<Vec<FieldValue>>,
}

const PART_DEGREE: usize = 4;

fn random_unit<R: Rng + ?Sized>(field: Field, rng: &mut R, degree: usize) -> Vec<FieldValue> {
    let mut c = vec![random_nonzero(field, rng)];
    for _ in 0..degree {
        c.push(random_elem(field, rng));
    }
    c
}

fn random_elem<R: Rng + ?Sized>(field: Field, rng: &mut R) -> FieldValue {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        Field::Rational => field.from_i64(rng.gen_range(-4..=4)),
    }
}

fn random_nonzero<R: Rng + ?Sized>(field: Field, rng: &mut R) -> FieldValue {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(1..p as i64)),
        Field::Rational => {
            let v = rng.gen_range(1..=4);
            field.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
    }
}

fn poly_mul(field: Field, a: &[FieldValue], b: &[FieldValue]) -> Vec<FieldValue> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn shifted(field: Field, k: usize, a: Vec<FieldValue>) -> Vec<FieldValue> {
    let mut v = vec![field.zero(); k];
    v.extend(a);
    v
}

impl ArcSampler {
    pub fn new(shape: ArcShape, shifts: &[(usize, usize)]) -> Self {
        Self {
            shape,
            shifts: shifts.to_vec(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, field: Field, rng: &mut R) -> ArcRecipe {
        let mut shifts: Vec<usize> = self
            .shifts
            .iter()
            .map(|&(lo, hi)| rng.gen_range(lo..=hi))
            .collect();
        if self.shape == ArcShape::Quadric && shifts[1] > 2 * shifts[0] {
            shifts[1] = 2 * shifts[0];
        }
        let nparts = match self.shape {
            ArcShape::Free => shifts.len(),
            ArcShape::Quadric => 2,
            ArcShape::Cusp => 1,
            ArcShape::Cone => 3,
        };
        let parts = (0..nparts)
            .map(|_| {
                let deg = rng.gen_range(0..=PART_DEGREE);
                random_unit(field, rng, deg)
            })
            .collect();
        ArcRecipe {
            shape: self.shape,
            shifts,
            parts,
        }
    }
}

impl ArcRecipe {
    pub fn assemble(&self, field: Field) -> ArcGen {
        let m = |a: &[FieldValue], b: &[FieldValue]| poly_mul(field, a, b);
        let coords = match self.shape {
            ArcShape::Free => self
                .parts
                .iter()
                .zip(&self.shifts)
                .map(|(p, &k)| shifted(field, k, p.clone()))
                .collect(),
            ArcShape::Quadric => {
                let (k, j) = (self.shifts[0], self.shifts[1]);
                let (u, w) = (&self.parts[0], &self.parts[1]);
                let uw = m(u, w);
                vec![
                    shifted(field, 2 * k - j, m(&uw, w)),
                    shifted(field, k, uw),
                    shifted(field, j, u.clone()),
                ]
            }
            ArcShape::Cusp => {
                let s = shifted(field, self.shifts[0], self.parts[0].clone());
                let s2 = m(&s, &s);
                vec![s2.clone(), m(&s2, &s)]
            }
            ArcShape::Cone => {
                let u = &self.parts[0];
                let a = shifted(field, self.shifts[0], self.parts[1].clone());
                let c = shifted(field, self.shifts[1], self.parts[2].clone());
                let ua = m(u, &a);
                vec![m(&ua, &a), m(&ua, &c), m(&m(u, &c), &c)]
            }
        };
        ArcGen::new(field, coords)
    }

    /// The same recipe with every part re-drawn in degrees `>= from`. Since every
    /// coordinate is a product of shifted parts, the assembled arc is unchanged
    /// modulo `t^from`.
    pub fn with_tail<R: Rng + ?Sized>(&self, field: Field, from: usize, rng: &mut R) -> ArcRecipe {
        let parts = self
            .parts
            .iter()
            .map(|p| {
                let mut q: Vec<FieldValue> = p.iter().take(from).cloned().collect();
                q.resize(from, field.zero());
                let extra = rng.gen_range(1..=PART_DEGREE);
                for _ in 0..extra {
                    q.push(random_elem(field, rng));
                }
                q
            })
            .collect();
        ArcRecipe {
            shape: self.shape,
            shifts: self.shifts.clone(),
            parts,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub morphism: MorphismPres,
    /// Contact conditions assigning overlap arcs to another chart.
    pub restriction: Vec<ConstraintSpec>,
    pub sampler: ArcSampler,
    /// `(inner, outer)` with `outer ∘ inner` equal to the chart map, when the chart
    /// factors through an intermediate blow-up.
    pub factorization: Option<(MorphismPres, MorphismPres)>,
    /// The source is smooth (its Jacobian ideal is the unit ideal).
    pub smooth: bool,
}

impl Chart {
    pub fn name(&self) -> &str {
        &self.morphism.source.name
    }
}

#[derive(Clone, Debug)]
pub struct CatalogExample {
    pub id: String,
    pub title: String,
    pub target: AffineVariety,
    pub z: SubschemeIdeal,
    pub v: SubschemeIdeal,
    pub charts: Vec<Chart>,
    /// The identity chart of the target, used for the left-hand side.
    pub target_chart: Chart,
    pub lhs: Vec<StratumSpec>,
    pub rhs: Vec<StratumSpec>,
    pub expected: Option<MotivicRational>,
}

impl CatalogExample {
    pub fn dim(&self) -> usize {
        self.target.dim
    }
}

pub const EXAMPLE_IDS: [&str; 4] = ["E1", "E2", "E3", "E4"];

fn l_minus_1() -> MotivicClass {
    MotivicClass::from_terms([(1, 1), (0, -1)])
}

fn l2_minus_1() -> MotivicClass {
    MotivicClass::from_terms([(2, 1), (0, -1)])
}

/// `(L^2 - 1)/(1 - L^{-3})`.
pub fn blowup_value() -> MotivicRational {
    MotivicRational::new(l2_minus_1(), vec![3])
}

fn map_err(e: PresentationError) -> IntegratorError {
    IntegratorError::Presentation(e)
}

fn plane(field: Field, name: &str, vars: &[&str]) -> AffineVariety {
    AffineVariety::affine_space(name, field, vars)
}

fn free_chart(morphism: MorphismPres, restriction: Vec<ConstraintSpec>, shifts: &[(usize, usize)]) -> Chart {
    Chart {
        morphism,
        restriction,
        sampler: ArcSampler::new(ArcShape::Free, shifts),
        factorization: None,
        smooth: true,
    }
}

/// `Cont^p(origin)` on `A^2` with weight `ord_Z = p`.
fn lhs_strata() -> Vec<StratumSpec> {
    vec![StratumSpec {
        name: "Cont^p(x,y)".into(),
        chart: 0,
        params: vec![Param::at_least("p", 0)],
        class_coeff: l2_minus_1(),
        class_exp: Affine::constant(0),
        level: Affine::new(0, &[1]),
        weight: Affine::new(0, &[1]),
        region: vec![ConstraintSpec::exact(&["x", "y"], Affine::new(0, &[1]))],
        note: "level-p jets with vanishing lower coefficients and a nonzero pair at t^p".into(),
    }]
}

fn stratum(
    name: &str,
    chart: usize,
    params: Vec<Param>,
    class_coeff: MotivicClass,
    class_exp: Affine,
    level: Affine,
    weight: Affine,
    region: Vec<ConstraintSpec>,
    note: &str,
) -> StratumSpec {
    StratumSpec {
        name: name.into(),
        chart,
        params,
        class_coeff,
        class_exp,
        level,
        weight,
        region,
        note: note.into(),
    }
}

/// Builds a catalog example over the given field. `identity-example` is an alias of `E1`.
pub fn example(id: &str, field: Field) -> Result<CatalogExample, IntegratorError> {
    let a2 = plane(field, "A2", &["x", "y"]);
    let origin = a2.ideal("origin", &["x", "y"]).map_err(map_err)?;
    let target_chart = free_chart(MorphismPres::identity(&a2), vec![], &[(0, 3), (0, 3)]);
    let base = |id: &str, title: &str, charts, rhs, expected| CatalogExample {
        id: id.into(),
        title: String::from(title),
        target: a2.clone(),
        z: origin.clone(),
        v: origin.clone(),
        charts,
        target_chart: target_chart.clone(),
        lhs: lhs_strata(),
        rhs,
        expected,
    };
    let p = || vec![Param::at_least("p", 0)];
    match id {
        "E1" | "identity-example" => {
            let chart = free_chart(MorphismPres::identity(&a2), vec![], &[(0, 3), (0, 3)]);
            let rhs = vec![stratum(
                "Cont^p(x,y)",
                0,
                p(),
                l2_minus_1(),
                Affine::constant(0),
                Affine::new(0, &[1]),
                Affine::new(0, &[1]),
                vec![ConstraintSpec::exact(&["x", "y"], Affine::new(0, &[1]))],
                "identity: e = 0, weight ord_Z = p",
            )];
            Ok(base("E1", "identity of A^2, Z = origin", vec![chart], rhs, Some(blowup_value())))
        }
        "E2" => {
            let c1 = MorphismPres::new("U1", plane(field, "U1", &["u", "v"]), a2.clone(), &["u", "u*v"])
                .map_err(map_err)?;
            let c2 = MorphismPres::new("U2", plane(field, "U2", &["s", "v"]), a2.clone(), &["s*v", "v"])
                .map_err(map_err)?;
            let charts = vec![
                free_chart(c1, vec![], &[(0, 3), (0, 3)]),
                free_chart(c2, vec![ConstraintSpec::at_least(&["s"], 1)], &[(1, 3), (0, 3)]),
            ];
            let rhs = vec![
                stratum(
                    "U1: ord u = p",
                    0,
                    p(),
                    l_minus_1(),
                    Affine::new(1, &[1]),
                    Affine::new(0, &[1]),
                    Affine::new(0, &[2]),
                    vec![ConstraintSpec::exact(&["u"], Affine::new(0, &[1]))],
                    "Jac = (u), so e = p; ψ_p = {u_p != 0} x (v free): (L-1) L^{p+1}",
                ),
                stratum(
                    "U2: ord s >= 1, ord v = p",
                    1,
                    p(),
                    l_minus_1(),
                    Affine::new(0, &[1]),
                    Affine::new(0, &[1]),
                    Affine::new(0, &[2]),
                    vec![ConstraintSpec::exact(&["v"], Affine::new(0, &[1]))],
                    "Jac = (v), so e = p; ψ_p = {v_p != 0} x {s_0 = 0}: (L-1) L^p",
                ),
            ];
            Ok(base("E2", "blow-up of A^2 at the origin, Z = origin", charts, rhs, Some(blowup_value())))
        }
        "E3" => {
            let sing = AffineVariety::new("S", field, &["x", "y", "b"], &["x*b - y^2"], 2).map_err(map_err)?;
            let cs = MorphismPres::new("S", sing, a2.clone(), &["x", "y"]).map_err(map_err)?;
            let cm = MorphismPres::new("W", plane(field, "W", &["a", "y"]), a2.clone(), &["a*y^2", "y"])
                .map_err(map_err)?;
            let charts = vec![
                Chart {
                    morphism: cs,
                    restriction: vec![],
                    sampler: ArcSampler::new(ArcShape::Quadric, &[(0, 3), (0, 4)]),
                    factorization: None,
                    smooth: false,
                },
                free_chart(cm, vec![ConstraintSpec::at_least(&["a"], 1)], &[(1, 3), (0, 3)]),
            ];
            let sq = l_minus_1().pow(2);
            let rhs = vec![
                stratum(
                    "S: ord b = j, ord y = j + r",
                    0,
                    vec![Param::at_least("j", 0), Param::at_least("r", 0)],
                    sq.clone(),
                    Affine::new(0, &[0, 1]),
                    Affine::new(0, &[1, 1]),
                    Affine::new(0, &[1, 3]),
                    vec![
                        ConstraintSpec::exact(&["b"], Affine::new(0, &[1, 0])),
                        ConstraintSpec::exact(&["y"], Affine::new(0, &[1, 1])),
                    ],
                    "a = j, c = ord x = j + 2r, e = c - a = 2r, p = j + r; \
                     x = y^2/b is fixed by (y, b) mod t^{m+1}, so ψ_m = (L-1)^2 L^r",
                ),
                stratum(
                    "S: ord x = i, ord y = i + r",
                    0,
                    vec![Param::at_least("i", 0), Param::at_least("r", 1)],
                    sq.clone(),
                    Affine::new(0, &[0, 1]),
                    Affine::new(0, &[1, 1]),
                    Affine::new(0, &[1, 0]),
                    vec![
                        ConstraintSpec::exact(&["x"], Affine::new(0, &[1, 0])),
                        ConstraintSpec::exact(&["y"], Affine::new(0, &[1, 1])),
                    ],
                    "ord b = i + 2r > ord y, a = c = i, e = 0, p = i; \
                     b = y^2/x is fixed by (x, y) mod t^{m+1}",
                ),
                stratum(
                    "W: ord a = l, ord y = k",
                    1,
                    vec![Param::at_least("l", 1), Param::at_least("k", 0)],
                    sq,
                    Affine::new(0, &[1, 1]),
                    Affine::new(0, &[1, 1]),
                    Affine::new(0, &[0, 3]),
                    vec![
                        ConstraintSpec::exact(&["a"], Affine::new(0, &[1, 0])),
                        ConstraintSpec::exact(&["y"], Affine::new(0, &[0, 1])),
                    ],
                    "Jac = (y^2), e = 2k, p = k",
                ),
            ];
            Ok(base(
                "E3",
                "blow-up of the ideal (x, y^2), singular chart {xb = y^2}, Z = origin",
                charts,
                rhs,
                Some(blowup_value()),
            ))
        }
        "E4" => {
            let x1 = plane(field, "U1", &["u", "v"]);
            let x1_to_a2 = MorphismPres::new("U1", x1.clone(), a2.clone(), &["u", "u*v"]).map_err(map_err)?;
            let u2 = MorphismPres::new("U2", plane(field, "U2", &["s", "v"]), a2.clone(), &["s*v", "v"])
                .map_err(map_err)?;
            let ca_inner = MorphismPres::new("VA", plane(field, "VA", &["s", "w"]), x1.clone(), &["s", "s*w"])
                .map_err(map_err)?;
            let cb_inner = MorphismPres::new("VB", plane(field, "VB", &["z", "w"]), x1, &["z*w", "w"])
                .map_err(map_err)?;
            let ca = ca_inner.then(&x1_to_a2, "VA").map_err(map_err)?;
            let cb = cb_inner.then(&x1_to_a2, "VB").map_err(map_err)?;
            let mut chart_a = free_chart(ca, vec![], &[(0, 3), (0, 3)]);
            chart_a.factorization = Some((ca_inner, x1_to_a2.clone()));
            let mut chart_b = free_chart(cb, vec![ConstraintSpec::at_least(&["z"], 1)], &[(1, 3), (0, 3)]);
            chart_b.factorization = Some((cb_inner, x1_to_a2));
            let charts = vec![
                free_chart(u2, vec![ConstraintSpec::at_least(&["s"], 1)], &[(1, 3), (0, 3)]),
                chart_a,
                chart_b,
            ];
            let rhs = vec![
                stratum(
                    "U2: ord s >= 1, ord v = p",
                    0,
                    p(),
                    l_minus_1(),
                    Affine::new(0, &[1]),
                    Affine::new(0, &[1]),
                    Affine::new(0, &[2]),
                    vec![ConstraintSpec::exact(&["v"], Affine::new(0, &[1]))],
                    "untouched by the second blow-up; e = p",
                ),
                stratum(
                    "VA: ord s = p",
                    1,
                    p(),
                    l_minus_1(),
                    Affine::new(1, &[1]),
                    Affine::new(0, &[1]),
                    Affine::new(0, &[3]),
                    vec![ConstraintSpec::exact(&["s"], Affine::new(0, &[1]))],
                    "composite (s, s^2 w), Jac = (s^2), e = 2p",
                ),
                stratum(
                    "VB: ord z = i, ord w = j",
                    2,
                    vec![Param::at_least("i", 1), Param::at_least("j", 0)],
                    l_minus_1().pow(2),
                    Affine::new(0, &[1, 1]),
                    Affine::new(0, &[1, 1]),
                    Affine::new(0, &[2, 3]),
                    vec![
                        ConstraintSpec::exact(&["z"], Affine::new(0, &[1, 0])),
                        ConstraintSpec::exact(&["w"], Affine::new(0, &[0, 1])),
                    ],
                    "composite (zw, zw^2), Jac = (z w^2), e = i + 2j, p = i + j",
                ),
            ];
            Ok(base(
                "E4",
                "blow-up of A^2 at the origin followed by the blow-up of a point on the exceptional curve",
                charts,
                rhs,
                Some(blowup_value()),
            ))
        }
        other => Err(IntegratorError::UnknownExample(other.to_string())),
    }
}

/// Both sides of the change of variables from the catalog strata.
pub fn cov_check_exact(ex: &CatalogExample) -> Result<ExactCheck, IntegratorError> {
    let d = ex.dim();
    let terms = |strata: &[StratumSpec]| -> Result<Vec<(String, MotivicRational)>, IntegratorError> {
        strata
            .iter()
            .map(|s| Ok((s.name.clone(), stratum_integral(s, d)?)))
            .collect()
    };
    Ok(ExactCheck {
        example: ex.id.clone(),
        lhs: motivic_integral_exact(&ex.lhs, d)?,
        rhs: motivic_integral_exact(&ex.rhs, d)?,
        expected: ex.expected.clone(),
        lhs_terms: terms(&ex.lhs)?,
        rhs_terms: terms(&ex.rhs)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// One stratum measure computed both ways at fixed parameters.
#[derive(Clone, Debug)]
pub struct StratumComparison {
    pub side: Side,
    pub stratum: String,
    pub params: Vec<i64>,
    pub exact: MotivicRational,
    pub specialized: BigRational,
    pub counted: CountingMeasure,
}

impl StratumComparison {
    pub fn passed(&self) -> bool {
        self.specialized == self.counted.value
    }
}

/// Compares `specialize_q` of every stratum measure with the liftable-jet count
/// over the example's field, for all parameter tuples within `spread` of the minimum.
pub fn cross_check_strata(
    ex: &CatalogExample,
    spread: i64,
    cfg: &EnumConfig,
) -> Result<Vec<StratumComparison>, IntegratorError> {
    let q = match ex.target.field {
        Field::Prime(p) => BigRational::from_integer(BigInt::from(p)),
        Field::Rational => return Err(crate::error::JetError::NotFinite("Q".into()).into()),
    };
    let d = ex.dim();
    let mut out = Vec::new();
    let sides = ex.lhs.iter().map(|s| (Side::Lhs, s)).chain(ex.rhs.iter().map(|s| (Side::Rhs, s)));
    for (side, s) in sides {
        let chart = match side {
            Side::Lhs => &ex.target_chart,
            Side::Rhs => &ex.charts[s.chart],
        };
        let variety = &chart.morphism.source;
        for params in s.sample_params(spread) {
            let mut cons = chart
                .restriction
                .iter()
                .map(|c| c.instantiate(variety, &params))
                .collect::<Result<Vec<_>, _>>()?;
            for c in &s.region {
                cons.push(c.instantiate(variety, &params)?);
            }
            let exact = cylinder_measure_exact(s, d, &params)?;
            let specialized = exact.specialize_q(&q).map_err(|e| IntegratorError::Presentation(e.into()))?;
            let counted = cylinder_measure_counting(variety, &cons, s.level_at(&params)?, cfg)?;
            out.push(StratumComparison {
                side,
                stratum: s.name.clone(),
                params,
                exact,
                specialized,
                counted,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::validate_arc;
    use rand::SeedableRng;

    #[test]
    fn exact_checks_pass() {
        for id in EXAMPLE_IDS {
            let ex = example(id, Field::Rational).unwrap();
            let r = cov_check_exact(&ex).unwrap();
            assert!(r.passed(), "{id}: {} vs {}", r.lhs, r.rhs);
        }
        let r = cov_check_exact(&example("E2", Field::Rational).unwrap()).unwrap();
        assert_eq!(r.rhs.to_string(), "(L^2 - 1)/(1 - L^-3)");
    }

    #[test]
    fn stratum_measures_match_counts() {
        for id in EXAMPLE_IDS {
            let ex = example(id, Field::prime(2).unwrap()).unwrap();
            let rows = cross_check_strata(&ex, 1, &EnumConfig::default()).unwrap();
            for r in &rows {
                assert!(r.passed(), "{id} {} {:?}: {} vs {}", r.stratum, r.params, r.specialized, r.counted.value);
            }
        }
    }

    #[test]
    fn a_wrong_stratum_is_caught() {
        let mut ex = example("E2", Field::Rational).unwrap();
        ex.rhs[1].weight = Affine::new(0, &[1]);
        assert!(!cov_check_exact(&ex).unwrap().passed());
    }

    #[test]
    fn unknown_example() {
        assert!(matches!(example("E9", Field::Rational), Err(IntegratorError::UnknownExample(_))));
        assert_eq!(example("identity-example", Field::Rational).unwrap().id, "E1");
    }

    #[test]
    fn samplers_stay_on_their_varieties() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for field in [Field::Rational, Field::prime(3).unwrap()] {
            for id in EXAMPLE_IDS {
                let ex = example(id, field).unwrap();
                for chart in &ex.charts {
                    for _ in 0..20 {
                        let r = chart.sampler.sample(field, &mut rng);
                        let arc = r.assemble(field);
                        validate_arc(&chart.morphism.source, &arc, 40).unwrap();
                        let tail = r.with_tail(field, 5, &mut rng).assemble(field);
                        validate_arc(&chart.morphism.source, &tail, 40).unwrap();
                        for i in 0..arc.ambient_dim() {
                            for j in 0..5 {
                                assert_eq!(arc.coeff(i, j), tail.coeff(i, j));
                            }
                        }
                    }
                }
            }
        }
    }
}
