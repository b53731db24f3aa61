//! Invariant factors of differentials along arcs, the transition matrix between
//! the free parts of pulled-back differentials, and the relative Mather
//! discrepancy `ord_{K^_{X/Y}}(alpha) = ord_t det A`.
//!
//! Along an arc `alpha` of `X ⊂ A^N` the pulled-back differentials are the
//! cokernel of the `N x r` matrix `(d g_i / d x_j)(alpha)^T`. Its Smith form
//! `U R V = diag(t^{a_1}, ..., t^{a_s}, 0, ...)` splits off the torsion
//! `⊕ K[t]/(t^{a_i})`; the rows `s..N` of `U` project onto the free part
//! `K[[t]]^d`. For `f: X -> Y` the map `f^* Ω_Y -> Ω_X` is `(d f_k / d x_j)^T`,
//! and conjugating it by the two free frames gives the `d x d` matrix `A`.

use crate::error::{MatherError, PresentationError};
use crate::field::Field;
use crate::matrix::SeriesMatrix;
use crate::poly::MultiPoly;
use crate::presentation::{
    jacobian_ideal, jacobian_ideal_of_morphism, ord_ideal_series, push_arc, validate_arc,
    AffineVariety, ArcGen, MorphismPres, SubschemeIdeal,
};
use crate::series::{Order, TruncSeries};
use crate::snf::{snf, SnfResult};

/// Precision escalation stops here.
pub const PRECISION_CAP: usize = 512;

/// Torsion profile of the pulled-back differentials along one arc.
#[derive(Clone, Debug)]
pub struct DiffProfile {
    pub free_rank: usize,
    /// Sorted positive invariant factors `a_i`.
    pub torsion: Vec<usize>,
    /// `a = Σ a_i`.
    pub total: usize,
    pub snf: SnfResult,
    pub precision: usize,
}

#[derive(Clone, Debug)]
pub struct DiscrepancyResult {
    /// `e = ord det A`.
    pub e: usize,
    /// Diagonal orders `e_1 <= ... <= e_d` of `A`.
    pub e_diag: Vec<usize>,
    pub matrix: SeriesMatrix,
    /// `ord Jac_X` along the arc.
    pub a: usize,
    /// `ord Jac_Y` along the pushed arc.
    pub b: usize,
    /// `ord Jac_f` along the arc.
    pub c: usize,
    /// Every precision tried, in order; the last one succeeded.
    pub precisions: Vec<usize>,
}

impl DiscrepancyResult {
    /// `c - a <= e <= min(c, c - a + b)`.
    pub fn bounds_hold(&self) -> bool {
        let (a, b, c, e) = (self.a as i64, self.b as i64, self.c as i64, self.e as i64);
        c - a <= e && e <= c.min(c - a + b)
    }
}

/// The tuple indexing the strata `C_{a,b,e,p,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactProfile {
    pub a: usize,
    pub b: usize,
    pub e: usize,
    pub p: usize,
    pub q: usize,
}

impl ContactProfile {
    /// `max{a+e, b+e, 2e, p, q}`: the jet level at which the stratum is studied.
    pub fn fibration_level(&self) -> usize {
        (self.a + self.e)
            .max(self.b + self.e)
            .max(2 * self.e)
            .max(self.p)
            .max(self.q)
    }
}

impl std::fmt::Display for ContactProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{},{})", self.a, self.b, self.e, self.p, self.q)
    }
}

/// Evaluates a polynomial matrix along series coordinates.
fn eval_matrix(
    field: Field,
    m: &[Vec<MultiPoly>],
    cols: usize,
    point: &[TruncSeries],
    precision: usize,
) -> Result<SeriesMatrix, PresentationError> {
    let rows = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| p.eval_series(point))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Ok(SeriesMatrix::zeros(field, 0, cols, precision));
    }
    Ok(SeriesMatrix::from_rows(field, rows, cols, precision)?)
}

/// Invariant factors at one fixed precision. `Ok(None)` means fewer than `N - d`
/// relations were certified, so the free part is not yet determined.
pub fn diff_profile_at(
    variety: &AffineVariety,
    point: &[TruncSeries],
    precision: usize,
) -> Result<Option<DiffProfile>, MatherError> {
    let n = variety.ambient_dim();
    let jac = eval_matrix(
        variety.field,
        &variety.jacobian_matrix(),
        n,
        point,
        precision,
    )?;
    // relations as columns: N x r
    let rel = if variety.eqs.is_empty() {
        SeriesMatrix::zeros(variety.field, n, 0, precision)
    } else {
        jac.transpose()
    };
    let res = snf(&rel).map_err(PresentationError::from)?;
    let s = res.finite_count();
    let codim = n - variety.dim;
    if s > codim {
        return Err(MatherError::FreeRankMismatch {
            expected: variety.dim,
            found: n - s,
        });
    }
    if s < codim {
        return Ok(None);
    }
    let torsion = res.torsion();
    Ok(Some(DiffProfile {
        free_rank: n - s,
        total: torsion.iter().sum(),
        torsion,
        snf: res,
        precision,
    }))
}

/// Invariant factors of `Ω_X` along `arc`, doubling the precision until the free
/// part is determined.
pub fn invariant_factors(
    variety: &AffineVariety,
    arc: &ArcGen,
    precision: usize,
) -> Result<DiffProfile, MatherError> {
    validate_arc(variety, arc, precision)?;
    let mut p = precision.max(1);
    loop {
        if let Some(prof) = diff_profile_at(variety, &arc.expand(p), p)? {
            return Ok(prof);
        }
        if p >= PRECISION_CAP {
            return Err(MatherError::InsufficientPrecision {
                cap: PRECISION_CAP,
                partial: vec![format!("free part of {} undetermined", variety.name)],
            });
        }
        p = (2 * p).min(PRECISION_CAP);
    }
}

/// Everything computed from one truncation of an arc.
#[derive(Clone, Debug)]
pub struct Transition {
    pub matrix: SeriesMatrix,
    pub source: DiffProfile,
    pub target: DiffProfile,
    /// `ord det A`, certified only when below `precision - max(a, b)`.
    pub det_order: Order,
    pub precision: usize,
}

impl Transition {
    /// The frames are exact modulo `t^{P - a}` and `t^{P - b}`, so `det A` is
    /// known modulo `t^{P - max(a, b)}`.
    pub fn certified_e(&self) -> Option<usize> {
        let margin = self.source.total.max(self.target.total);
        match self.det_order {
            Order::Finite(e) if e + margin < self.precision => Some(e),
            _ => None,
        }
    }
}

/// Builds `A` from series coordinates of the source arc at one precision.
/// `Ok(None)` if either free part is undetermined at this precision.
pub fn transition_at(
    f: &MorphismPres,
    point: &[TruncSeries],
    precision: usize,
) -> Result<Option<Transition>, MatherError> {
    if f.source.dim != f.target.dim {
        return Err(MatherError::Presentation(PresentationError::DimensionMismatch(
            format!("{}: source and target dimensions differ", f.name),
        )));
    }
    let d = f.source.dim;
    let n = f.source.ambient_dim();
    let m = f.target.ambient_dim();
    let Some(src) = diff_profile_at(&f.source, point, precision)? else {
        return Ok(None);
    };
    let image: Vec<TruncSeries> = f
        .components
        .iter()
        .map(|c| c.eval_series(point))
        .collect::<Result<_, _>>()
        .map_err(PresentationError::from)?;
    let Some(tgt) = diff_profile_at(&f.target, &image, precision)? else {
        return Ok(None);
    };
    let proj: Vec<usize> = (n - d..n).collect();
    let all_n: Vec<usize> = (0..n).collect();
    let all_m: Vec<usize> = (0..m).collect();
    let incl: Vec<usize> = (m - d..m).collect();
    let source_frame = src.snf.u.select(&proj, &all_n);
    let target_frame = tgt.snf.u_inv.select(&all_m, &incl);
    // (d f_k / d x_j)^T : N x M
    let jf = eval_matrix(f.source.field, &f.jacobian_matrix(), n, point, precision)?.transpose();
    let a = source_frame
        .mul(&jf)
        .and_then(|x| x.mul(&target_frame))
        .map_err(PresentationError::from)?;
    let det_order = a.det().map_err(PresentationError::from)?.order();
    Ok(Some(Transition {
        matrix: a,
        source: src,
        target: tgt,
        det_order,
        precision,
    }))
}

/// The transition matrix `A` along a polynomial arc, escalating precision until
/// both free parts are determined.
pub fn transition_matrix(
    f: &MorphismPres,
    arc: &ArcGen,
    precision: usize,
) -> Result<SeriesMatrix, MatherError> {
    validate_arc(&f.source, arc, precision)?;
    let pushed = push_arc(f, arc).map_err(PresentationError::from)?;
    validate_arc(&f.target, &pushed, precision)?;
    let mut p = precision.max(1);
    loop {
        if let Some(tr) = transition_at(f, &arc.expand(p), p)? {
            return Ok(tr.matrix);
        }
        if p >= PRECISION_CAP {
            return Err(MatherError::InsufficientPrecision {
                cap: PRECISION_CAP,
                partial: vec!["free frames undetermined".into()],
            });
        }
        p = (2 * p).min(PRECISION_CAP);
    }
}

/// `ord_{K^_{X/Y}}(alpha)` computed as `ord det A`, together with `a`, `b`, `c`.
pub fn mather_discrepancy(f: &MorphismPres, arc: &ArcGen) -> Result<DiscrepancyResult, MatherError> {
    let src = invariant_factors(&f.source, arc, 16)?;
    let pushed = push_arc(f, arc).map_err(PresentationError::from)?;
    let tgt = invariant_factors(&f.target, &pushed, 16)?;
    let jac_f = jacobian_ideal_of_morphism(f)?;
    let mut p = (src.total + tgt.total + 8).max(src.precision).max(tgt.precision);
    let mut precisions = Vec::new();
    loop {
        precisions.push(p);
        let point = arc.expand(p);
        let c = ord_ideal_series(&point, &jac_f, p).map_err(PresentationError::from)?;
        if let (Some(tr), Order::Finite(c)) = (transition_at(f, &point, p)?, c) {
            if let Some(e) = tr.certified_e() {
                let diag = snf(&tr.matrix).map_err(PresentationError::from)?;
                let e_diag: Vec<usize> = diag.orders.iter().filter_map(|o| o.finite()).collect();
                return Ok(DiscrepancyResult {
                    e,
                    e_diag,
                    matrix: tr.matrix,
                    a: tr.source.total,
                    b: tr.target.total,
                    c,
                    precisions,
                });
            }
        }
        if p >= PRECISION_CAP {
            return Err(MatherError::NotGenericallyTransverse { precision: p });
        }
        p = (2 * p).min(PRECISION_CAP);
    }
}

/// `(a, b, e, p, q)` with `p = ord_V` and `q = ord_Z` along the pushed arc.
pub fn contact_profile(
    f: &MorphismPres,
    z: &SubschemeIdeal,
    v: &SubschemeIdeal,
    arc: &ArcGen,
) -> Result<ContactProfile, MatherError> {
    let disc = mather_discrepancy(f, arc)?;
    let pushed = push_arc(f, arc).map_err(PresentationError::from)?;
    let mut prec = *disc.precisions.last().expect("at least one precision");
    loop {
        let point = pushed.expand(prec);
        let p = ord_ideal_series(&point, v, prec).map_err(PresentationError::from)?;
        let q = ord_ideal_series(&point, z, prec).map_err(PresentationError::from)?;
        if let (Order::Finite(p), Order::Finite(q)) = (p, q) {
            return Ok(ContactProfile {
                a: disc.a,
                b: disc.b,
                e: disc.e,
                p,
                q,
            });
        }
        if prec >= PRECISION_CAP {
            return Err(MatherError::InsufficientPrecision {
                cap: PRECISION_CAP,
                partial: vec![format!("ord_V = {p}, ord_Z = {q}")],
            });
        }
        prec = (2 * prec).min(PRECISION_CAP);
    }
}

/// Profile of any arc truncating to the given coordinates, read off at a single
/// precision `P` (for a jet of level `n`, `P = n + 1`). `None` when some entry is
/// not certified at this precision.
pub fn contact_profile_at(
    f: &MorphismPres,
    point: &[TruncSeries],
    precision: usize,
    z: &SubschemeIdeal,
    v: &SubschemeIdeal,
) -> Result<Option<ContactProfile>, MatherError> {
    let image: Vec<TruncSeries> = f
        .components
        .iter()
        .map(|c| c.eval_series(point))
        .collect::<Result<_, _>>()
        .map_err(PresentationError::from)?;
    let (Order::Finite(p), Order::Finite(q)) = (
        ord_ideal_series(&image, v, precision).map_err(PresentationError::from)?,
        ord_ideal_series(&image, z, precision).map_err(PresentationError::from)?,
    ) else {
        return Ok(None);
    };
    let Some(tr) = transition_at(f, point, precision)? else {
        return Ok(None);
    };
    let Some(e) = tr.certified_e() else {
        return Ok(None);
    };
    Ok(Some(ContactProfile {
        a: tr.source.total,
        b: tr.target.total,
        e,
        p,
        q,
    }))
}

/// Convenience: `ord Jac_X` along an arc, independently of the Smith form.
pub fn jacobian_order(variety: &AffineVariety, arc: &ArcGen, precision: usize) -> Result<Order, MatherError> {
    let jac = jacobian_ideal(variety)?;
    Ok(ord_ideal_series(&arc.expand(precision), &jac, precision).map_err(PresentationError::from)?)
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
    fn cusp_invariant_factors_per_characteristic() {
        let arc = |f| ArcGen::parse(f, &["t^2", "t^3"]).unwrap();
        let p0 = invariant_factors(&cusp(q()), &arc(q()), 12).unwrap();
        assert_eq!((p0.torsion.clone(), p0.total, p0.free_rank), (vec![3], 3, 1));
        let f2 = Field::prime(2).unwrap();
        let p2 = invariant_factors(&cusp(f2), &arc(f2), 12).unwrap();
        assert_eq!(p2.torsion, vec![4]);
        let f5 = Field::prime(5).unwrap();
        let p5 = invariant_factors(&cusp(f5), &arc(f5), 12).unwrap();
        assert_eq!(p5.torsion, vec![3]);
    }

    #[test]
    fn smooth_chart_has_no_torsion() {
        let a2 = AffineVariety::affine_space("A2", q(), &["u", "v"]);
        let arc = ArcGen::parse(q(), &["t^2", "1 + t"]).unwrap();
        let p = invariant_factors(&a2, &arc, 8).unwrap();
        assert!(p.torsion.is_empty());
        assert_eq!(p.free_rank, 2);
    }

    #[test]
    fn free_rank_mismatch_detected() {
        // claim dimension 0 for a curve
        let bad = AffineVariety::new("bad", q(), &["x", "y"], &["y"], 0);
        let bad = bad.unwrap();
        let arc = ArcGen::parse(q(), &["t", "0"]).unwrap();
        assert!(matches!(
            invariant_factors(&bad, &arc, 8),
            Err(MatherError::InsufficientPrecision { .. })
        ));
        let line = AffineVariety::new("line", q(), &["x", "y"], &["y", "x*y"], 0).unwrap();
        let p = invariant_factors(&line, &arc, 8);
        assert!(p.is_err());
    }

    #[test]
    fn identity_has_zero_discrepancy() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let id = MorphismPres::identity(&a2);
        let arc = ArcGen::parse(q(), &["t + 3*t^2", "2 - t"]).unwrap();
        let r = mather_discrepancy(&id, &arc).unwrap();
        assert_eq!(r.e, 0);
        assert!(r.matrix.agrees_with(&SeriesMatrix::identity(q(), 2, r.matrix.precision())));
    }

    #[test]
    fn point_blowup_chart() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let u = AffineVariety::affine_space("U", q(), &["u", "v"]);
        let f = MorphismPres::new("bl", u, a2.clone(), &["u", "u*v"]).unwrap();
        let arc = ArcGen::parse(q(), &["t^2", "1 + t"]).unwrap();
        let r = mather_discrepancy(&f, &arc).unwrap();
        assert_eq!((r.e, r.c, r.a, r.b), (2, 2, 0, 0));
        assert_eq!(r.e_diag, vec![0, 2]);
        let z = a2.ideal("Z", &["x", "y"]).unwrap();
        let prof = contact_profile(&f, &z, &z, &arc).unwrap();
        assert_eq!(prof, ContactProfile { a: 0, b: 0, e: 2, p: 2, q: 2 });
    }

    #[test]
    fn singular_source_chart() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let x = AffineVariety::new("Xs", q(), &["x", "y", "b"], &["x*b - y^2"], 2).unwrap();
        let f = MorphismPres::new("bls", x, a2, &["x", "y"]).unwrap();
        // x = t^3, b = t, y = t^2
        let arc = ArcGen::parse(q(), &["t^3", "t^2", "t"]).unwrap();
        let r = mather_discrepancy(&f, &arc).unwrap();
        assert_eq!((r.a, r.b, r.c), (1, 0, 3));
        assert_eq!(r.e, r.c - r.a);
        assert!(r.bounds_hold());
    }

    #[test]
    fn arc_in_exceptional_locus_is_refused() {
        let a2 = AffineVariety::affine_space("A2", q(), &["x", "y"]);
        let u = AffineVariety::affine_space("U", q(), &["u", "v"]);
        let f = MorphismPres::new("bl", u, a2, &["u", "u*v"]).unwrap();
        let arc = ArcGen::parse(q(), &["0", "1 + t"]).unwrap();
        assert!(matches!(
            mather_discrepancy(&f, &arc),
            Err(MatherError::NotGenericallyTransverse { .. })
        ));
    }
}
