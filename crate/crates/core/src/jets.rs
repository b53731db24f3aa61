//! Jet schemes: the symbolic jet equations, truncation maps, induced maps on
//! jets, and exhaustive enumeration of `X_n(F_p)` with a liftability test.
//!
//! Enumeration is incremental. For `k >= 1` the `t^k` coefficient of `g(x(t))`
//! is affine in the new coefficients `x_{i,k}`:
//! `[t^k] g = c_k(x_{<k}) + Σ_i (∂g/∂x_i)(x_0) x_{i,k}`,
//! so each parent jet only needs one series evaluation and one gradient.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{JetError, PresentationError};
use crate::field::{Field, FieldValue};
use crate::fp::{ideal_order, prime_of, residue, Fp, FpPoly, Scratch};
use crate::poly::MultiPoly;
use crate::presentation::{jacobian_ideal, AffineVariety, ArcGen, Jet, MorphismPres};

/// Default cap on candidate checks during enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// The polynomial system cutting out `X_n` in the variables `x_{i,j}`.
#[derive(Clone, Debug)]
pub struct JetSystem {
    pub variety: String,
    pub level: usize,
    /// `x_{i,j}` sits at index `i (n+1) + j`.
    pub var_names: Vec<String>,
    /// Coefficient of `t^k` of generator `g`, at index `k r + g`.
    pub equations: Vec<MultiPoly>,
}

impl JetSystem {
    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }
}

fn series_mul_poly(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let len = a.len();
    let mut out: Vec<MultiPoly> = (0..len)
        .map(|_| MultiPoly::zero(a[0].field(), a[0].nvars()))
        .collect();
    for i in 0..len {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..len - i {
            if !b[j].is_zero() {
                out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
            }
        }
    }
    out
}

pub fn jet_equations(variety: &AffineVariety, n: usize) -> JetSystem {
    let field = variety.field;
    let big_n = variety.ambient_dim();
    let nv = big_n * (n + 1);
    let var_names = variety
        .vars
        .iter()
        .flat_map(|v| (0..=n).map(move |j| format!("{v}_{j}")))
        .collect();
    let coord_series: Vec<Vec<MultiPoly>> = (0..big_n)
        .map(|i| (0..=n).map(|j| MultiPoly::var(field, nv, i * (n + 1) + j)).collect())
        .collect();
    let mut by_gen = Vec::with_capacity(variety.eqs.len());
    for g in &variety.eqs {
        let mut acc: Vec<MultiPoly> = (0..=n).map(|_| MultiPoly::zero(field, nv)).collect();
        for (e, c) in g.terms() {
            let mut term: Vec<MultiPoly> = (0..=n).map(|_| MultiPoly::zero(field, nv)).collect();
            term[0] = MultiPoly::constant(c.clone(), nv);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = series_mul_poly(&term, &coord_series[i]);
                }
            }
            for k in 0..=n {
                acc[k] = acc[k].add(&term[k]);
            }
        }
        by_gen.push(acc);
    }
    let equations = (0..=n)
        .flat_map(|k| by_gen.iter().map(move |s| s[k].clone()))
        .collect();
    JetSystem {
        variety: variety.name.clone(),
        level: n,
        var_names,
        equations,
    }
}

pub fn truncate_jet(jet: &Jet, m: usize) -> Result<Jet, JetError> {
    if m > jet.level {
        return Err(JetError::LevelOutOfRange {
            requested: m,
            level: jet.level,
        });
    }
    Ok(Jet::new(
        jet.field,
        m,
        jet.coords.iter().map(|c| c[..=m].to_vec()).collect(),
    ))
}

pub fn truncate_arc(arc: &ArcGen, m: usize) -> Jet {
    let coords = (0..arc.ambient_dim())
        .map(|i| (0..=m).map(|j| arc.coeff(i, j)).collect())
        .collect();
    Jet::new(arc.field, m, coords)
}

pub fn push_jet(f: &MorphismPres, jet: &Jet) -> Result<Jet, JetError> {
    let point = jet.expand();
    let coords = f
        .components
        .iter()
        .map(|c| {
            c.eval_series(&point)
                .map(|s| s.coeffs().to_vec())
                .map_err(|e| JetError::Presentation(e.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Jet::new(jet.field, jet.level, coords))
}

/// Restricts enumeration to jets with `ord(gens) >= min`, or `= min` when `exact`.
#[derive(Clone, Debug)]
pub struct ContactConstraint {
    pub gens: Vec<MultiPoly>,
    pub min: usize,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    All,
    Liftable,
    Fiber,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::All => "all",
            Provenance::Liftable => "liftable",
            Provenance::Fiber => "fiber",
        })
    }
}

/// Level-`n` jets over `F_p`, stored flat in row-major `(coordinate, level)` order
/// and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSet {
    pub field: Field,
    pub level: usize,
    pub nvars: usize,
    pub provenance: Provenance,
    data: Vec<u32>,
}

impl JetSet {
    fn from_rows(field: Field, level: usize, nvars: usize, provenance: Provenance, mut rows: Vec<Vec<u32>>) -> Self {
        rows.par_sort_unstable();
        Self {
            field,
            level,
            nvars,
            provenance,
            data: rows.concat(),
        }
    }

    fn stride(&self) -> usize {
        self.nvars * (self.level + 1)
    }

    pub fn len(&self) -> usize {
        if self.stride() == 0 {
            return 0;
        }
        self.data.len() / self.stride()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Raw residues of each jet in row-major order.
    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.stride().max(1))
    }

    pub fn jet(&self, k: usize) -> Jet {
        let s = self.stride();
        row_to_jet(self.field, self.level, self.nvars, &self.data[k * s..(k + 1) * s])
    }

    pub fn jets(&self) -> impl Iterator<Item = Jet> + '_ {
        self.rows()
            .map(|r| row_to_jet(self.field, self.level, self.nvars, r))
    }

    pub fn contains(&self, jet: &Jet) -> bool {
        let row = jet_to_row(jet);
        let s = self.stride();
        let n = self.len();
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.data[mid * s..(mid + 1) * s].cmp(&row[..]) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// One jet per line, coefficients as decimal residues.
    pub fn dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in self.rows() {
            let line: Vec<String> = r.iter().map(u32::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn row_to_jet(field: Field, level: usize, nvars: usize, row: &[u32]) -> Jet {
    let p = field.characteristic();
    let coords = (0..nvars)
        .map(|i| {
            row[i * (level + 1)..(i + 1) * (level + 1)]
                .iter()
                .map(|&v| FieldValue::Fp { v, p })
                .collect()
        })
        .collect();
    Jet::new(field, level, coords)
}

pub(crate) fn jet_to_row(jet: &Jet) -> Vec<u32> {
    jet.coords.iter().flatten().map(residue).collect()
}

#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub budget: u64,
    pub constraints: Vec<ContactConstraint>,
    /// Extra levels searched beyond the jet level when `ord Jac > m`.
    pub extra_depth: Option<usize>,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            constraints: Vec::new(),
            extra_depth: None,
        }
    }
}

struct CompiledConstraint {
    gens: Vec<FpPoly>,
    grads: Vec<Vec<FpPoly>>,
    min: usize,
    exact: bool,
}

/// Everything needed to extend jets of one variety by one level.
pub(crate) struct Extender {
    fp: Fp,
    nvars: usize,
    gens: Vec<FpPoly>,
    grads: Vec<Vec<FpPoly>>,
    constraints: Vec<CompiledConstraint>,
    jac: Vec<FpPoly>,
}

fn compile_with_grads(polys: &[MultiPoly], nvars: usize) -> (Vec<FpPoly>, Vec<Vec<FpPoly>>) {
    let gens = polys.iter().map(FpPoly::compile).collect();
    let grads = polys
        .iter()
        .map(|g| (0..nvars).map(|i| FpPoly::compile(&g.derivative(i))).collect())
        .collect();
    (gens, grads)
}

impl Extender {
    pub(crate) fn new(variety: &AffineVariety, constraints: &[ContactConstraint]) -> Result<Self, JetError> {
        let p = prime_of(variety.field)?;
        let nvars = variety.ambient_dim();
        let (gens, grads) = compile_with_grads(&variety.eqs, nvars);
        let constraints = constraints
            .iter()
            .map(|c| {
                let (gens, grads) = compile_with_grads(&c.gens, nvars);
                CompiledConstraint {
                    gens,
                    grads,
                    min: c.min,
                    exact: c.exact,
                }
            })
            .collect();
        let jac = jacobian_ideal(variety)?
            .gens
            .iter()
            .map(FpPoly::compile)
            .collect();
        Ok(Self {
            fp: Fp(p),
            nvars,
            gens,
            grads,
            constraints,
            jac,
        })
    }

    fn q(&self) -> u64 {
        self.fp.0 as u64
    }

    /// Candidates examined per parent.
    pub(crate) fn branching(&self) -> u64 {
        self.q().pow(self.nvars as u32)
    }

    /// Affine forms `(c, grad)` giving the `t^k` coefficient of each polynomial as a
    /// function of the new coefficients.
    fn affine_forms(
        &self,
        polys: &[FpPoly],
        grads: &[Vec<FpPoly>],
        coords: &[&[u32]],
        k: usize,
        scratch: &mut Scratch,
    ) -> Vec<(u32, Vec<u32>)> {
        let base: Vec<u32> = coords.iter().map(|c| c[0]).collect();
        let mut out = vec![0u32; k + 1];
        polys
            .iter()
            .zip(grads)
            .map(|(g, gr)| {
                g.eval_series(self.fp, coords, k + 1, scratch, &mut out);
                let grad = gr.iter().map(|d| d.eval_point(self.fp, &base)).collect();
                (out[k], grad)
            })
            .collect()
    }

    /// Calls `emit` with every admissible choice of the level-`k` coefficients, given
    /// the jet's coordinates (each of length `>= k + 1`, coefficient `k` zero).
    pub(crate) fn for_each_extension(
        &self,
        coords: &[&[u32]],
        k: usize,
        scratch: &mut Scratch,
        mut emit: impl FnMut(&[u32]),
    ) {
        let fp = self.fp;
        let n = self.nvars;
        let mut v = vec![0u32; n];
        if k == 0 {
            loop {
                let ok = self.gens.iter().all(|g| g.eval_point(fp, &v) == 0)
                    && self.constraints.iter().all(|c| {
                        let nz = c.gens.iter().any(|g| g.eval_point(fp, &v) != 0);
                        constraint_ok(c, 0, nz)
                    });
                if ok {
                    emit(&v);
                }
                if !next_vector(&mut v, fp.0) {
                    return;
                }
            }
        }
        let eqs = self.affine_forms(&self.gens, &self.grads, coords, k, scratch);
        let cons: Vec<(&CompiledConstraint, Vec<(u32, Vec<u32>)>)> = self
            .constraints
            .iter()
            .filter(|c| k < c.min || (k == c.min && c.exact))
            .map(|c| (c, self.affine_forms(&c.gens, &c.grads, coords, k, scratch)))
            .collect();
        let apply = |(c, g): &(u32, Vec<u32>), v: &[u32]| {
            g.iter()
                .zip(v)
                .fold(*c, |acc, (a, x)| fp.add(acc, fp.mul(*a, *x)))
        };
        loop {
            let ok = eqs.iter().all(|f| apply(f, &v) == 0)
                && cons.iter().all(|(c, forms)| {
                    let nz = forms.iter().any(|f| apply(f, &v) != 0);
                    constraint_ok(c, k, nz)
                });
            if ok {
                emit(&v);
            }
            if !next_vector(&mut v, fp.0) {
                return;
            }
        }
    }

    /// `ord Jac_X` along the first `len` coefficients, `None` if it exceeds `len - 1`.
    pub(crate) fn jac_order(&self, coords: &[&[u32]], len: usize, scratch: &mut Scratch) -> Option<usize> {
        ideal_order(&self.jac, self.fp, coords, len, scratch)
    }
}

fn constraint_ok(c: &CompiledConstraint, k: usize, nonzero: bool) -> bool {
    if k < c.min {
        !nonzero
    } else if k == c.min && c.exact {
        nonzero
    } else {
        true
    }
}

fn next_vector(v: &mut [u32], q: u32) -> bool {
    for x in v.iter_mut().rev() {
        *x += 1;
        if *x < q {
            return true;
        }
        *x = 0;
    }
    false
}

/// A jet under construction: row-major with a fixed stride.
fn coords_of(buf: &[u32], nvars: usize, stride: usize) -> Vec<&[u32]> {
    (0..nvars).map(|i| &buf[i * stride..(i + 1) * stride]).collect()
}

/// Extends every parent (rows of stride `target + 1`, filled up to `from`) level by
/// level to `target`.
fn grow(
    ext: &Extender,
    mut frontier: Vec<Vec<u32>>,
    from: usize,
    target: usize,
    budget: u64,
    spent: &mut u64,
) -> Result<Vec<Vec<u32>>, JetError> {
    let stride = target + 1;
    let n = ext.nvars;
    for k in from..=target {
        let cost = frontier.len() as u64 * ext.branching();
        *spent = spent.saturating_add(cost);
        if *spent > budget {
            return Err(JetError::BudgetExceeded { budget, level: k });
        }
        frontier = frontier
            .par_iter()
            .map_init(Scratch::default, |scratch, parent| {
                let coords = coords_of(parent, n, stride);
                let mut kids = Vec::new();
                ext.for_each_extension(&coords, k, scratch, |v| {
                    let mut child = parent.clone();
                    for (i, &x) in v.iter().enumerate() {
                        child[i * stride + k] = x;
                    }
                    kids.push(child);
                });
                kids
            })
            .flatten()
            .collect();
    }
    Ok(frontier)
}

/// All `F_p`-points of `X_n` (subject to any contact constraints in `cfg`).
pub fn enumerate_jets(variety: &AffineVariety, n: usize, cfg: &EnumConfig) -> Result<JetSet, JetError> {
    let ext = Extender::new(variety, &cfg.constraints)?;
    let nv = variety.ambient_dim();
    let mut spent = 0;
    let rows = grow(&ext, vec![vec![0; nv * (n + 1)]], 0, n, cfg.budget, &mut spent)?;
    Ok(JetSet::from_rows(variety.field, n, nv, Provenance::All, rows))
}

fn check_on_variety(variety: &AffineVariety, jet: &Jet) -> Result<(), JetError> {
    let point = jet.expand();
    for (gi, g) in variety.eqs.iter().enumerate() {
        let v = g
            .eval_series(&point)
            .map_err(|e| JetError::Presentation(e.into()))?;
        if let Some(idx) = v.coeffs().iter().position(|c| !c.is_zero()) {
            return Err(JetError::Presentation(PresentationError::ArcViolation {
                variety: variety.name.clone(),
                generator: gi + 1,
                index: idx,
            }));
        }
    }
    Ok(())
}

fn widen(jet: &Jet, stride: usize) -> Vec<u32> {
    let mut row = vec![0u32; jet.coords.len() * stride];
    for (i, c) in jet.coords.iter().enumerate() {
        for (j, v) in c.iter().enumerate() {
            row[i * stride + j] = residue(v);
        }
    }
    row
}

/// All level-`n` jets truncating to `gamma`.
pub fn fiber_jets(variety: &AffineVariety, n: usize, gamma: &Jet, cfg: &EnumConfig) -> Result<JetSet, JetError> {
    let m = gamma.level;
    if m > n {
        return Err(JetError::LevelOutOfRange { requested: n, level: m });
    }
    prime_of(variety.field)?;
    check_on_variety(variety, gamma)?;
    let ext = Extender::new(variety, &cfg.constraints)?;
    let nv = variety.ambient_dim();
    let mut spent = 0;
    let rows = grow(&ext, vec![widen(gamma, n + 1)], m + 1, n, cfg.budget, &mut spent)?;
    Ok(JetSet::from_rows(variety.field, n, nv, Provenance::Fiber, rows))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Liftability {
    Yes,
    No,
    Undetermined,
}

struct Search<'a> {
    ext: &'a Extender,
    nvars: usize,
    stride: usize,
    budget: u64,
    spent: u64,
}

impl Search<'_> {
    fn children(&mut self, node: &[u32], k: usize, scratch: &mut Scratch) -> Option<Vec<Vec<u32>>> {
        self.spent += self.ext.branching();
        if self.spent > self.budget {
            return None;
        }
        let coords = coords_of(node, self.nvars, self.stride);
        let mut kids = Vec::new();
        let stride = self.stride;
        self.ext.for_each_extension(&coords, k, scratch, |v| {
            let mut c = node.to_vec();
            for (i, &x) in v.iter().enumerate() {
                c[i * stride + k] = x;
            }
            kids.push(c);
        });
        Some(kids)
    }

    /// Does the level-`l` node extend to level `target`? `None` on budget exhaustion.
    fn extends_to(&mut self, node: &[u32], l: usize, target: usize, scratch: &mut Scratch) -> Option<bool> {
        if l >= target {
            return Some(true);
        }
        for kid in self.children(node, l + 1, scratch)? {
            if self.extends_to(&kid, l + 1, target, scratch)? {
                return Some(true);
            }
        }
        Some(false)
    }

    fn status(&mut self, node: &[u32], l: usize, depth_limit: usize, scratch: &mut Scratch) -> Liftability {
        let coords = coords_of(node, self.nvars, self.stride);
        if let Some(a) = self.ext.jac_order(&coords, l + 1, scratch) {
            if l + a < self.stride {
                return match self.extends_to(node, l, l + a, scratch) {
                    Some(true) => Liftability::Yes,
                    Some(false) => Liftability::No,
                    None => Liftability::Undetermined,
                };
            }
        }
        if l >= depth_limit {
            return Liftability::Undetermined;
        }
        let Some(kids) = self.children(node, l + 1, scratch) else {
            return Liftability::Undetermined;
        };
        let mut undetermined = false;
        for kid in kids {
            match self.status(&kid, l + 1, depth_limit, scratch) {
                Liftability::Yes => return Liftability::Yes,
                Liftability::Undetermined => undetermined = true,
                Liftability::No => {}
            }
        }
        if undetermined {
            Liftability::Undetermined
        } else {
            Liftability::No
        }
    }
}

/// Whether the jet is the truncation of an arc. With `a = ord Jac_X <= m` this is
/// decided exactly by searching for an extension to level `m + a`; otherwise the
/// extension tree is searched to a bounded depth for a node where that criterion
/// applies.
pub fn is_liftable(variety: &AffineVariety, jet: &Jet, cfg: &EnumConfig) -> Result<Liftability, JetError> {
    prime_of(variety.field)?;
    check_on_variety(variety, jet)?;
    let ext = Extender::new(variety, &[])?;
    Ok(liftability_with(&ext, variety.ambient_dim(), &widen(jet, jet.level + 1), jet.level, cfg))
}

pub(crate) fn liftability_with(ext: &Extender, nvars: usize, row: &[u32], m: usize, cfg: &EnumConfig) -> Liftability {
    let depth_limit = m + cfg.extra_depth.unwrap_or(m + 4);
    // room for the exact criterion at the deepest node: a <= level there
    let stride = 2 * depth_limit + 2;
    let mut node = vec![0u32; nvars * stride];
    for i in 0..nvars {
        node[i * stride..i * stride + m + 1].copy_from_slice(&row[i * (m + 1)..(i + 1) * (m + 1)]);
    }
    let mut search = Search {
        ext,
        nvars,
        stride,
        budget: cfg.budget,
        spent: 0,
    };
    search.status(&node, m, depth_limit, &mut Scratch::default())
}

#[derive(Clone, Debug)]
pub struct LiftableReport {
    pub liftable: JetSet,
    pub undetermined: Vec<Jet>,
    pub total: usize,
}

/// The liftable subset of `X_n(F_p)`; undetermined jets are listed separately.
pub fn liftable_set(variety: &AffineVariety, n: usize, cfg: &EnumConfig) -> Result<LiftableReport, JetError> {
    let all = enumerate_jets(variety, n, cfg)?;
    filter_liftable(variety, &all, cfg)
}

pub fn filter_liftable(variety: &AffineVariety, set: &JetSet, cfg: &EnumConfig) -> Result<LiftableReport, JetError> {
    let ext = Extender::new(variety, &[])?;
    let nv = set.nvars;
    let n = set.level;
    let verdicts: Vec<Liftability> = set
        .rows()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|r| liftability_with(&ext, nv, r, n, cfg))
        .collect();
    let mut keep = Vec::new();
    let mut undetermined = Vec::new();
    for (r, v) in set.rows().zip(&verdicts) {
        match v {
            Liftability::Yes => keep.push(r.to_vec()),
            Liftability::Undetermined => undetermined.push(row_to_jet(set.field, n, nv, r)),
            Liftability::No => {}
        }
    }
    let mut liftable = JetSet::from_rows(set.field, n, nv, Provenance::Liftable, keep);
    if set.provenance == Provenance::Fiber {
        liftable.provenance = Provenance::Fiber;
    }
    Ok(LiftableReport {
        liftable,
        undetermined,
        total: set.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn cusp(field: Field) -> AffineVariety {
        AffineVariety::new("cusp", field, &["x", "y"], &["y^2 - x^3"], 1).unwrap()
    }

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn equations_of_cusp_level_one() {
        let sys = jet_equations(&cusp(Field::Rational), 1);
        assert_eq!(sys.var_names, vec!["x_0", "x_1", "y_0", "y_1"]);
        let names = sys.var_names.clone();
        let shown: Vec<String> = sys.equations.iter().map(|e| e.display_with(&names)).collect();
        assert_eq!(shown, vec!["-x_0^3 + y_0^2", "-3*x_0^2*x_1 + 2*y_0*y_1"]);
        let a1 = AffineVariety::affine_space("A1", Field::Rational, &["x"]);
        let s = jet_equations(&a1, 3);
        assert_eq!((s.nvars(), s.equations.len()), (4, 0));
        let cone = AffineVariety::new("cone", Field::Rational, &["x", "y", "z"], &["x*z - y^2"], 2).unwrap();
        let s = jet_equations(&cone, 0);
        assert_eq!(s.equations[0].display_with(&s.var_names), "x_0*z_0 - y_0^2");
    }

    #[test]
    fn truncations() {
        let q = Field::Rational;
        let arc = ArcGen::parse(q, &["t^2", "t^3"]).unwrap();
        assert_eq!(truncate_arc(&arc, 2), Jet::from_i64s(q, 2, &[&[0, 0, 1], &[0, 0, 0]]));
        let arc = ArcGen::parse(q, &["t", "1 + t"]).unwrap();
        let j = truncate_arc(&arc, 1);
        assert_eq!(j, Jet::from_i64s(q, 1, &[&[0, 1], &[1, 1]]));
        assert_eq!(truncate_jet(&j, 1).unwrap(), j);
        assert!(matches!(truncate_jet(&j, 2), Err(JetError::LevelOutOfRange { .. })));
    }

    #[test]
    fn pushing_jets() {
        let q = Field::Rational;
        let a2 = AffineVariety::affine_space("A2", q, &["x", "y"]);
        let u = AffineVariety::affine_space("U", q, &["u", "v"]);
        let bl = MorphismPres::new("bl", u.clone(), a2.clone(), &["u", "u*v"]).unwrap();
        let j = truncate_arc(&ArcGen::parse(q, &["t", "1 + t"]).unwrap(), 2);
        assert_eq!(push_jet(&bl, &j).unwrap(), Jet::from_i64s(q, 2, &[&[0, 1], &[0, 1, 1]]));
        let id = MorphismPres::identity(&u);
        assert_eq!(push_jet(&id, &j).unwrap(), j);
        let g = MorphismPres::new("g", AffineVariety::affine_space("S", q, &["y", "a"]), a2, &["a*y^2", "y"]).unwrap();
        let j = truncate_arc(&ArcGen::parse(q, &["t", "t"]).unwrap(), 3);
        assert_eq!(push_jet(&g, &j).unwrap(), Jet::from_i64s(q, 3, &[&[0, 0, 0, 1], &[0, 1]]));
    }

    #[test]
    fn enumeration_counts() {
        let a1 = AffineVariety::affine_space("A1", f(3), &["x"]);
        assert_eq!(enumerate_jets(&a1, 2, &cfg()).unwrap().len(), 27);
        assert_eq!(enumerate_jets(&cusp(f(5)), 0, &cfg()).unwrap().len(), 5);
        let cone = AffineVariety::new("cone", f(2), &["x", "y", "z"], &["x*z - y^2"], 2).unwrap();
        assert_eq!(enumerate_jets(&cone, 0, &cfg()).unwrap().len(), 4);
    }

    #[test]
    fn enumeration_requires_prime_field() {
        let a1 = AffineVariety::affine_space("A1", Field::Rational, &["x"]);
        assert!(matches!(enumerate_jets(&a1, 1, &cfg()), Err(JetError::NotFinite(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let a2 = AffineVariety::affine_space("A2", f(3), &["x", "y"]);
        let small = EnumConfig {
            budget: 100,
            ..cfg()
        };
        assert!(matches!(
            enumerate_jets(&a2, 3, &small),
            Err(JetError::BudgetExceeded { level: 2, .. })
        ));
    }

    #[test]
    fn cusp_fibers() {
        let field = f(5);
        let x = cusp(field);
        let gamma = truncate_arc(&ArcGen::parse(field, &["t^2", "t^3"]).unwrap(), 3);
        let fib = fiber_jets(&x, 4, &gamma, &cfg()).unwrap();
        assert_eq!(fib.len(), 25);
        let lift = filter_liftable(&x, &fib, &cfg()).unwrap();
        assert!(lift.undetermined.is_empty());
        assert_eq!(lift.liftable.len(), 5);
    }

    #[test]
    fn liftability_verdicts() {
        let field = f(5);
        let x = cusp(field);
        let gamma = truncate_arc(&ArcGen::parse(field, &["t^2", "t^3"]).unwrap(), 3);
        assert_eq!(is_liftable(&x, &gamma, &cfg()).unwrap(), Liftability::Yes);
        let bad = Jet::from_i64s(field, 1, &[&[0, 1], &[0, 0]]);
        assert_eq!(is_liftable(&x, &bad, &cfg()).unwrap(), Liftability::No);
        let line = AffineVariety::new("line", field, &["x", "y"], &["y"], 1).unwrap();
        let j = Jet::from_i64s(field, 2, &[&[1, 2, 3], &[0, 0, 0]]);
        assert_eq!(is_liftable(&line, &j, &cfg()).unwrap(), Liftability::Yes);
    }

    #[test]
    fn smooth_fibers_are_affine_spaces() {
        let field = f(3);
        let line = AffineVariety::new("line", field, &["x", "y"], &["y"], 1).unwrap();
        let gamma = Jet::from_i64s(field, 1, &[&[2, 1], &[0, 0]]);
        for n in 1..5 {
            assert_eq!(fiber_jets(&line, n, &gamma, &cfg()).unwrap().len(), 3usize.pow(n as u32 - 1));
        }
    }

    #[test]
    fn contact_constraints_prune() {
        let field = f(3);
        let a2 = AffineVariety::affine_space("A2", field, &["u", "v"]);
        let c = ContactConstraint {
            gens: vec![a2.poly("u").unwrap()],
            min: 2,
            exact: true,
        };
        let cf = EnumConfig {
            constraints: vec![c],
            ..cfg()
        };
        // ord u = 2 at level 3: u = (0,0,*!=0,*), v free
        assert_eq!(enumerate_jets(&a2, 3, &cf).unwrap().len(), 2 * 3 * 81);
    }

    #[test]
    fn dump_format() {
        let a1 = AffineVariety::affine_space("A1", f(2), &["x"]);
        let set = enumerate_jets(&a1, 1, &cfg()).unwrap();
        let mut buf = Vec::new();
        set.dump(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 0\n0 1\n1 0\n1 1\n");
        assert!(set.contains(&Jet::from_i64s(f(2), 1, &[&[1, 0]])));
    }
}
