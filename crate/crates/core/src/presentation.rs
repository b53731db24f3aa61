//! Affine varieties, morphisms, closed subschemes, polynomial arcs and jets.

use std::fmt;

use crate::error::{AlgebraError, PresentationError};
use crate::field::{Field, FieldValue};
use crate::poly::{parse_poly, MultiPoly};
use crate::series::{Order, TruncSeries};

/// A closed subvariety of `A^N` cut out by `eqs`, with a claimed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineVariety {
    pub name: String,
    pub vars: Vec<String>,
    pub eqs: Vec<MultiPoly>,
    pub dim: usize,
    pub field: Field,
}

impl AffineVariety {
    pub fn new(
        name: &str,
        field: Field,
        vars: &[&str],
        eqs: &[&str],
        dim: usize,
    ) -> Result<Self, PresentationError> {
        if dim > vars.len() {
            return Err(PresentationError::DimensionMismatch(format!(
                "dimension {dim} exceeds ambient dimension {}",
                vars.len()
            )));
        }
        let eqs = eqs
            .iter()
            .map(|e| parse_poly(e, vars, field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            name: name.to_string(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            eqs,
            dim,
            field,
        })
    }

    /// Affine space `A^n` with coordinates `vars`.
    pub fn affine_space(name: &str, field: Field, vars: &[&str]) -> Self {
        Self::new(name, field, vars, &[], vars.len()).expect("affine space is well formed")
    }

    pub fn ambient_dim(&self) -> usize {
        self.vars.len()
    }

    /// Parses a polynomial in this variety's coordinates.
    pub fn poly(&self, src: &str) -> Result<MultiPoly, AlgebraError> {
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        parse_poly(src, &names, self.field)
    }

    pub fn ideal(&self, name: &str, gens: &[&str]) -> Result<SubschemeIdeal, PresentationError> {
        let gens = gens
            .iter()
            .map(|g| self.poly(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SubschemeIdeal::new(name, &self.name, gens))
    }

    /// The `r x N` Jacobian matrix `(d g_i / d x_j)`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.eqs
            .iter()
            .map(|g| (0..self.ambient_dim()).map(|j| g.derivative(j)).collect())
            .collect()
    }
}

/// A closed subscheme given by generators of its ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubschemeIdeal {
    pub name: String,
    pub variety: String,
    pub gens: Vec<MultiPoly>,
}

impl SubschemeIdeal {
    /// Zero generators are dropped and duplicates removed; order of first occurrence is kept.
    pub fn new(name: &str, variety: &str, gens: Vec<MultiPoly>) -> Self {
        let mut out: Vec<MultiPoly> = Vec::new();
        for g in gens {
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Self {
            name: name.to_string(),
            variety: variety.to_string(),
            gens: out,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.gens
            .iter()
            .any(|g| g.terms().len() == 1 && g.total_degree() == 0)
    }
}

/// A morphism `X -> Y` of affine varieties given by component polynomials in the
/// source coordinates. Properness and birationality are declared, not verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPres {
    pub name: String,
    pub source: AffineVariety,
    pub target: AffineVariety,
    pub components: Vec<MultiPoly>,
    pub proper_birational: bool,
}

impl MorphismPres {
    pub fn new(
        name: &str,
        source: AffineVariety,
        target: AffineVariety,
        components: &[&str],
    ) -> Result<Self, PresentationError> {
        if components.len() != target.ambient_dim() {
            return Err(PresentationError::DimensionMismatch(format!(
                "morphism {name} has {} components, target ambient dimension is {}",
                components.len(),
                target.ambient_dim()
            )));
        }
        let components = components
            .iter()
            .map(|c| source.poly(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            name: name.to_string(),
            source,
            target,
            components,
            proper_birational: true,
        })
    }

    pub fn identity(variety: &AffineVariety) -> Self {
        let n = variety.ambient_dim();
        Self {
            name: format!("id_{}", variety.name),
            source: variety.clone(),
            target: variety.clone(),
            components: (0..n).map(|i| MultiPoly::var(variety.field, n, i)).collect(),
            proper_birational: true,
        }
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &MorphismPres, name: &str) -> Result<MorphismPres, PresentationError> {
        if outer.source.ambient_dim() != self.target.ambient_dim() {
            return Err(PresentationError::DimensionMismatch(format!(
                "cannot compose {} after {}",
                outer.name, self.name
            )));
        }
        let components = outer
            .components
            .iter()
            .map(|c| c.compose(&self.components))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MorphismPres {
            name: name.to_string(),
            source: self.source.clone(),
            target: outer.target.clone(),
            components,
            proper_birational: self.proper_birational && outer.proper_birational,
        })
    }

    /// The `M x N` matrix `(d f_k / d x_j)`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.components
            .iter()
            .map(|f| (0..self.source.ambient_dim()).map(|j| f.derivative(j)).collect())
            .collect()
    }
}

/// An arc given by exact polynomial coordinates in `t`; it can be expanded at any precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArcGen {
    pub field: Field,
    /// `coords[i][j]` is the coefficient of `t^j` in coordinate `i`.
    pub coords: Vec<Vec<FieldValue>>,
}

impl ArcGen {
    pub fn new(field: Field, mut coords: Vec<Vec<FieldValue>>) -> Self {
        for c in &mut coords {
            while c.last().is_some_and(FieldValue::is_zero) {
                c.pop();
            }
        }
        Self { field, coords }
    }

    pub fn from_i64s(field: Field, coords: &[&[i64]]) -> Self {
        Self::new(
            field,
            coords
                .iter()
                .map(|c| c.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    /// Parses coordinates written as polynomials in `t`.
    pub fn parse(field: Field, coords: &[&str]) -> Result<Self, AlgebraError> {
        let mut out = Vec::with_capacity(coords.len());
        for src in coords {
            let p = parse_poly(src, &["t"], field)?;
            let deg = p.degree_in(0) as usize;
            let mut c = vec![field.zero(); deg + 1];
            for (e, v) in p.terms() {
                c[e[0] as usize] = v.clone();
            }
            out.push(c);
        }
        Ok(Self::new(field, out))
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn degree(&self) -> usize {
        self.coords
            .iter()
            .map(|c| c.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Coordinates as truncated series at the given precision.
    pub fn expand(&self, precision: usize) -> Vec<TruncSeries> {
        self.coords
            .iter()
            .map(|c| TruncSeries::from_coeffs(self.field, c.clone(), precision))
            .collect()
    }

    /// The base point `alpha(0)`.
    pub fn base_point(&self) -> Vec<FieldValue> {
        self.coords
            .iter()
            .map(|c| c.first().cloned().unwrap_or_else(|| self.field.zero()))
            .collect()
    }

    /// Coefficient of `t^j` in coordinate `i`.
    pub fn coeff(&self, i: usize, j: usize) -> FieldValue {
        self.coords[i]
            .get(j)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn display_with(&self, var: &str) -> String {
        let names = vec![var.to_string()];
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                let terms = c
                    .iter()
                    .enumerate()
                    .map(|(j, v)| (vec![j as u32], v.clone()))
                    .collect();
                MultiPoly::from_terms(self.field, 1, terms).display_with(&names)
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Debug for ArcGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t"))
    }
}

/// A level-`n` jet: per coordinate, the coefficients of `t^0 .. t^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Jet {
    pub field: Field,
    pub level: usize,
    pub coords: Vec<Vec<FieldValue>>,
}

impl Jet {
    pub fn new(field: Field, level: usize, coords: Vec<Vec<FieldValue>>) -> Self {
        debug_assert!(coords.iter().all(|c| c.len() == level + 1));
        Self {
            field,
            level,
            coords,
        }
    }

    pub fn from_i64s(field: Field, level: usize, coords: &[&[i64]]) -> Self {
        let coords = coords
            .iter()
            .map(|c| {
                let mut v: Vec<FieldValue> = c.iter().map(|&x| field.from_i64(x)).collect();
                v.resize(level + 1, field.zero());
                v
            })
            .collect();
        Self::new(field, level, coords)
    }

    /// The jet viewed as a polynomial arc (its coefficients exactly).
    pub fn as_arc(&self) -> ArcGen {
        ArcGen::new(self.field, self.coords.clone())
    }

    /// Coordinates as series known modulo `t^{level+1}`.
    pub fn expand(&self) -> Vec<TruncSeries> {
        self.coords
            .iter()
            .map(|c| TruncSeries::from_coeffs(self.field, c.clone(), self.level + 1))
            .collect()
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                let v: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("({})", v.join(","))
            })
            .collect();
        write!(f, "J{}[{}]", self.level, parts.join(","))
    }
}

/// Checks that every generator vanishes along the arc to the given precision.
/// Violations report the 1-based generator index and the first offending coefficient.
pub fn validate_arc(
    variety: &AffineVariety,
    arc: &ArcGen,
    precision: usize,
) -> Result<(), PresentationError> {
    if arc.ambient_dim() != variety.ambient_dim() {
        return Err(PresentationError::DimensionMismatch(format!(
            "arc has {} coordinates, {} has ambient dimension {}",
            arc.ambient_dim(),
            variety.name,
            variety.ambient_dim()
        )));
    }
    let point = arc.expand(precision);
    for (i, g) in variety.eqs.iter().enumerate() {
        let v = g.eval_series(&point)?;
        if let Order::Finite(k) = v.order() {
            return Err(PresentationError::ArcViolation {
                variety: variety.name.clone(),
                generator: i + 1,
                index: k,
            });
        }
    }
    Ok(())
}

/// Determinant of a square polynomial matrix by cofactor expansion.
fn poly_det(m: &[Vec<MultiPoly>], field: Field, nvars: usize) -> MultiPoly {
    fn rec(m: &[Vec<MultiPoly>], row: usize, cols: &[usize], field: Field, nvars: usize) -> MultiPoly {
        if cols.is_empty() {
            return MultiPoly::one(field, nvars);
        }
        let mut acc = MultiPoly::zero(field, nvars);
        for (k, &c) in cols.iter().enumerate() {
            if m[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = m[row][c].mul(&rec(m, row + 1, &rest, field, nvars));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    let cols: Vec<usize> = (0..m.first().map_or(0, Vec::len)).collect();
    rec(m, 0, &cols, field, nvars)
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// All `k x k` minors of an `r x c` polynomial matrix.
fn minors(m: &[Vec<MultiPoly>], c: usize, k: usize, field: Field, nvars: usize) -> Vec<MultiPoly> {
    let mut out = Vec::new();
    for rs in subsets(m.len(), k) {
        for cs in subsets(c, k) {
            let sub: Vec<Vec<MultiPoly>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&j| m[r][j].clone()).collect())
                .collect();
            out.push(poly_det(&sub, field, nvars));
        }
    }
    out
}

/// `Jac_X`: the ideal of `(N-d) x (N-d)` minors of the Jacobian matrix.
pub fn jacobian_ideal(variety: &AffineVariety) -> Result<SubschemeIdeal, PresentationError> {
    let n = variety.ambient_dim();
    let k = n - variety.dim;
    if variety.eqs.len() < k {
        return Err(PresentationError::Degenerate(format!(
            "{} has {} equations, need at least {} for codimension {}",
            variety.name,
            variety.eqs.len(),
            k,
            k
        )));
    }
    let gens = minors(&variety.jacobian_matrix(), n, k, variety.field, n);
    Ok(SubschemeIdeal::new(
        &format!("Jac_{}", variety.name),
        &variety.name,
        gens,
    ))
}

/// `Jac_f`: the ideal of `N x N` minors of the source Jacobian rows stacked over
/// the rows `(d f_k / d x_j)`, i.e. `Fitt^0` of the relative differentials.
pub fn jacobian_ideal_of_morphism(f: &MorphismPres) -> Result<SubschemeIdeal, PresentationError> {
    if f.source.dim != f.target.dim {
        return Err(PresentationError::DimensionMismatch(format!(
            "{} has source dimension {} and target dimension {}",
            f.name, f.source.dim, f.target.dim
        )));
    }
    let n = f.source.ambient_dim();
    let mut stacked = f.source.jacobian_matrix();
    stacked.extend(f.jacobian_matrix());
    let gens = minors(&stacked, n, n, f.source.field, n);
    Ok(SubschemeIdeal::new(
        &format!("Jac_{}", f.name),
        &f.source.name,
        gens,
    ))
}

/// `ord_alpha(I)`: the minimum order of the generators along the arc. A zero ideal
/// gives `AtLeast(precision)`.
pub fn ord_ideal(arc: &ArcGen, ideal: &SubschemeIdeal, precision: usize) -> Result<Order, AlgebraError> {
    ord_ideal_series(&arc.expand(precision), ideal, precision)
}

/// Same as [`ord_ideal`] for coordinates already expanded as series.
pub fn ord_ideal_series(
    point: &[TruncSeries],
    ideal: &SubschemeIdeal,
    precision: usize,
) -> Result<Order, AlgebraError> {
    let mut acc = Order::AtLeast(precision);
    for g in &ideal.gens {
        acc = acc.min(g.eval_series(point)?.order());
        if acc == Order::Finite(0) {
            break;
        }
    }
    Ok(acc)
}

/// The arc `f ∘ alpha` as exact polynomials.
pub fn push_arc(f: &MorphismPres, arc: &ArcGen) -> Result<ArcGen, AlgebraError> {
    let deg = f.components.iter().map(MultiPoly::total_degree).max().unwrap_or(0) as usize;
    let precision = deg * arc.degree() + 1;
    let point = arc.expand(precision);
    let coords = f
        .components
        .iter()
        .map(|c| Ok(c.eval_series(&point)?.coeffs().to_vec()))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(ArcGen::new(arc.field, coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn cusp(f: Field) -> AffineVariety {
        AffineVariety::new("cusp", f, &["x", "y"], &["y^2 - x^3"], 1).unwrap()
    }

    #[test]
    fn validate_cusp_arcs() {
        let x = cusp(q());
        let a = ArcGen::parse(q(), &["t^2", "t^3"]).unwrap();
        assert!(validate_arc(&x, &a, 12).is_ok());
        let b = ArcGen::parse(q(), &["t^2", "t^3 + t^4"]).unwrap();
        assert_eq!(
            validate_arc(&x, &b, 12),
            Err(PresentationError::ArcViolation {
                variety: "cusp".into(),
                generator: 1,
                index: 7
            })
        );
        let zero = ArcGen::parse(q(), &["0", "0"]).unwrap();
        assert!(validate_arc(&x, &zero, 12).is_ok());
        let short = ArcGen::parse(q(), &["t"]).unwrap();
        assert!(matches!(
            validate_arc(&x, &short, 4),
            Err(PresentationError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn jacobian_of_cusp_per_characteristic() {
        let j = jacobian_ideal(&cusp(q())).unwrap();
        let x = cusp(q());
        assert_eq!(j.gens, vec![x.poly("-3*x^2").unwrap(), x.poly("2*y").unwrap()]);
        let f2 = Field::prime(2).unwrap();
        let j2 = jacobian_ideal(&cusp(f2)).unwrap();
        assert_eq!(j2.gens, vec![cusp(f2).poly("x^2").unwrap()]);
        let f3 = Field::prime(3).unwrap();
        let j3 = jacobian_ideal(&cusp(f3)).unwrap();
        assert_eq!(j3.gens, vec![cusp(f3).poly("2*y").unwrap()]);
    }

    #[test]
    fn jacobian_of_smooth_line_is_unit() {
        let l = AffineVariety::new("line", q(), &["x", "y"], &["y"], 1).unwrap();
        let j = jacobian_ideal(&l).unwrap();
        assert!(j.is_unit());
        let a = ArcGen::parse(q(), &["t^3 + 2", "0"]).unwrap();
        assert_eq!(ord_ideal(&a, &j, 8).unwrap(), Order::Finite(0));
    }

    #[test]
    fn jacobian_of_a1_singularity() {
        let x = AffineVariety::new("A1", q(), &["x", "y", "z"], &["x*z - y^2"], 2).unwrap();
        let j = jacobian_ideal(&x).unwrap();
        assert_eq!(
            j.gens,
            vec![x.poly("z").unwrap(), x.poly("-2*y").unwrap(), x.poly("x").unwrap()]
        );
    }

    #[test]
    fn degenerate_presentation_rejected() {
        let x = AffineVariety::new("pt", q(), &["x", "y"], &["x"], 0).unwrap();
        assert!(matches!(jacobian_ideal(&x), Err(PresentationError::Degenerate(_))));
    }

    #[test]
    fn morphism_jacobians() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let src = AffineVariety::affine_space("U", q(), &["u", "v"]);
        let f = MorphismPres::new("bl", src.clone(), a2.clone(), &["u", "u*v"]).unwrap();
        assert_eq!(jacobian_ideal_of_morphism(&f).unwrap().gens, vec![src.poly("u").unwrap()]);
        let id = MorphismPres::identity(&a2);
        assert!(jacobian_ideal_of_morphism(&id).unwrap().is_unit());
        let src = AffineVariety::affine_space("W", q(), &["y", "a"]);
        let g = MorphismPres::new("bl2", src.clone(), a2, &["a*y^2", "y"]).unwrap();
        assert_eq!(
            jacobian_ideal_of_morphism(&g).unwrap().gens,
            vec![src.poly("-y^2").unwrap()]
        );
    }

    #[test]
    fn ord_ideal_examples() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let origin = a2.ideal("0", &["x", "y"]).unwrap();
        let a = ArcGen::parse(q(), &["t^2", "t^3"]).unwrap();
        assert_eq!(ord_ideal(&a, &origin, 10).unwrap(), Order::Finite(2));
        let jac = jacobian_ideal(&cusp(q())).unwrap();
        assert_eq!(ord_ideal(&a, &jac, 10).unwrap(), Order::Finite(3));
        let unit = a2.ideal("1", &["1"]).unwrap();
        assert_eq!(ord_ideal(&a, &unit, 10).unwrap(), Order::Finite(0));
        assert_eq!(ord_ideal(&a, &origin, 2).unwrap(), Order::AtLeast(2));
    }

    #[test]
    fn push_arc_examples() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let src = AffineVariety::affine_space("U", q(), &["u", "v"]);
        let f = MorphismPres::new("bl", src, a2.clone(), &["u", "u*v"]).unwrap();
        let a = ArcGen::parse(q(), &["t", "1 + t"]).unwrap();
        assert_eq!(push_arc(&f, &a).unwrap(), ArcGen::parse(q(), &["t", "t + t^2"]).unwrap());
        let id = MorphismPres::identity(&a2);
        assert_eq!(push_arc(&id, &a).unwrap(), a);
        let src = AffineVariety::affine_space("W", q(), &["y", "a"]);
        let g = MorphismPres::new("bl2", src, a2, &["a*y^2", "y"]).unwrap();
        let b = ArcGen::parse(q(), &["t", "t"]).unwrap();
        assert_eq!(push_arc(&g, &b).unwrap(), ArcGen::parse(q(), &["t^3", "t"]).unwrap());
    }

    #[test]
    fn subsets_enumerate() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(1, 2).is_empty());
    }
}
