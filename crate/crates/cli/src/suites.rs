//! `verify` suites over catalog examples and scenes.

use arcspace::catalog::{cov_check_exact, CatalogExample};
use arcspace::counting::{cov_check_counting, CountingConfig, CountingReport};
use arcspace::field::Field;
use arcspace::jets::{fiber_jets, filter_liftable, truncate_arc, EnumConfig};
use arcspace::mather::{invariant_factors, mather_discrepancy};
use arcspace::presentation::{push_arc, AffineVariety, ArcGen, MorphismPres};
use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::CliError;
use crate::report::Report;
use crate::scene::Scene;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Fibration,
    CovExact,
    CovCount,
    Stability,
    Additivity,
    Fibers,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Fibration => "fibration",
            Suite::CovExact => "cov-exact",
            Suite::CovCount => "cov-count",
            Suite::Stability => "stability",
            Suite::Additivity => "additivity",
            Suite::Fibers => "fibers",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub cap: usize,
    pub budget: u64,
    pub samples: usize,
    pub tails: usize,
    pub seed: u64,
    /// Largest fiber the fiber suite enumerates.
    pub fiber_limit: u64,
}

pub fn field_name(field: Field) -> String {
    match field {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("F_{p}"),
    }
}

pub fn cov_exact(ex: &CatalogExample) -> Result<Report, CliError> {
    let mut r = Report::new(format!("verify cov-exact {}", ex.id));
    r.set("example", ex.title.clone());
    let c = cov_check_exact(ex)?;
    for (name, v) in &c.lhs_terms {
        r.push("lhs_strata", json!({ "stratum": name, "integral": v.to_string() }));
    }
    for (name, v) in &c.rhs_terms {
        r.push("rhs_strata", json!({ "stratum": name, "integral": v.to_string() }));
    }
    r.set("lhs", c.lhs.to_string());
    r.set("rhs", c.rhs.to_string());
    r.check(c.lhs == c.rhs, || format!("LHS {} != RHS {}", c.lhs, c.rhs));
    if let Some(e) = &c.expected {
        r.set("expected", e.to_string());
        r.check(*e == c.lhs, || format!("expected {e}, got {}", c.lhs));
    }
    Ok(r)
}

fn counting(ex: &CatalogExample, opts: &SuiteOptions) -> Result<CountingReport, CliError> {
    let cfg = CountingConfig {
        budget: opts.budget,
        ..CountingConfig::default()
    };
    Ok(cov_check_counting(ex, opts.cap, &cfg)?)
}

fn profile_rows(r: &mut Report, rep: &CountingReport) {
    for row in &rep.rows {
        let ratio = row.ratio().map_or("not an integer".to_string(), |x| x.to_string());
        r.push(
            "profiles",
            json!({
                "chart": row.chart,
                "profile": row.profile.to_string(),
                "level": row.level,
                "count": row.count,
                "images": row.images,
                "ratio": ratio,
                "expected": row.expected_ratio(rep.q),
                "union_of_fibers": row.union_ok,
            }),
        );
        r.check(row.passed(rep.q), || {
            format!(
                "{} {}: {}",
                row.chart,
                row.profile,
                row.witness.clone().unwrap_or_else(|| format!("ratio {ratio}"))
            )
        });
    }
    for f in &rep.failures {
        r.check(false, || f.clone());
    }
    for msg in &rep.incomplete {
        r.check(false, || format!("incomplete: {msg}"));
    }
}

pub fn fibration(ex: &CatalogExample, opts: &SuiteOptions) -> Result<Report, CliError> {
    let rep = counting(ex, opts)?;
    let mut r = Report::new(format!("verify fibration {} --q {} --P {}", ex.id, rep.q, opts.cap));
    profile_rows(&mut r, &rep);
    Ok(r)
}

pub fn cov_count(ex: &CatalogExample, opts: &SuiteOptions) -> Result<Report, CliError> {
    let rep = counting(ex, opts)?;
    let mut r = Report::new(format!("verify cov-count {} --q {} --P {}", ex.id, rep.q, opts.cap));
    profile_rows(&mut r, &rep);
    let show = |x: &Option<num_rational::BigRational>| x.as_ref().map_or("incomplete".into(), |v| v.to_string());
    for row in &rep.per_p {
        r.push(
            "contact",
            json!({
                "p": row.p,
                "lhs": row.lhs.to_string(),
                "rhs": show(&row.rhs),
                "target_measure": row.target_measure.to_string(),
                "image_measure": show(&row.image_measure),
            }),
        );
        r.check(row.passed(), || {
            format!(
                "p = {}: LHS {} RHS {}, measure {} vs images {}",
                row.p,
                row.lhs,
                show(&row.rhs),
                row.target_measure,
                show(&row.image_measure)
            )
        });
    }
    let (lhs, rhs) = rep.totals();
    r.set("lhs_total", lhs.to_string());
    r.set("rhs_total", show(&rhs));
    r.set("truncation", format!("strata with p > {} excluded on both sides", opts.cap));
    Ok(r)
}

fn stability_of(
    r: &mut Report,
    f: &MorphismPres,
    base: &ArcGen,
    tails: impl Iterator<Item = ArcGen>,
) -> Result<(usize, usize, usize), CliError> {
    let d = mather_discrepancy(f, base)?;
    let m = d.a + d.e;
    let jet = truncate_arc(base, m);
    let mut n = 0;
    for other in tails {
        if truncate_arc(&other, m) != jet {
            continue;
        }
        n += 1;
        let o = mather_discrepancy(f, &other)?;
        r.check((o.a, o.e) == (d.a, d.e), || {
            format!(
                "{}: {} has (a, e) = ({}, {}) but {} has ({}, {})",
                f.name,
                base.display_with("t"),
                d.a,
                d.e,
                other.display_with("t"),
                o.a,
                o.e
            )
        });
    }
    Ok((d.a, d.e, n))
}

pub fn stability(ex: &CatalogExample, opts: &SuiteOptions) -> Result<Report, CliError> {
    let field = ex.target.field;
    let mut r = Report::new(format!("verify stability {} over {}", ex.id, field_name(field)));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for chart in &ex.charts {
        let mut tried = 0;
        for _ in 0..opts.samples {
            let recipe = chart.sampler.sample(field, &mut rng);
            let base = recipe.assemble(field);
            let m = {
                let d = mather_discrepancy(&chart.morphism, &base)?;
                d.a + d.e
            };
            let tails: Vec<ArcGen> = (0..opts.tails)
                .map(|_| recipe.with_tail(field, m + 1, &mut rng).assemble(field))
                .collect();
            let (_, _, n) = stability_of(&mut r, &chart.morphism, &base, tails.into_iter())?;
            tried += n;
        }
        r.push(
            "charts",
            json!({ "chart": chart.name(), "base_arcs": opts.samples, "re_extensions": tried }),
        );
    }
    Ok(r)
}

/// Scene version: each arc is re-extended by random tails above `a + e`.
pub fn stability_scene(scene: &Scene, opts: &SuiteOptions) -> Result<Report, CliError> {
    let mut r = Report::new(format!("verify stability (scene over {})", field_name(scene.field)));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut any = false;
    for f in &scene.morphisms {
        for arc in scene.arcs.iter().filter(|a| a.on == f.source.name) {
            any = true;
            let d = mather_discrepancy(f, &arc.arc)?;
            let m = d.a + d.e;
            let tails: Vec<ArcGen> = (0..opts.tails)
                .filter_map(|_| random_tail(&arc.arc, m + 1, &f.source, &mut rng))
                .collect();
            let (a, e, n) = stability_of(&mut r, f, &arc.arc, tails.into_iter())?;
            r.push(
                "arcs",
                json!({ "morphism": f.name, "arc": arc.name, "a": a, "e": e, "re_extensions": n }),
            );
        }
    }
    if !any {
        return Err(CliError::Usage("scene has no arc on the source of a morphism".into()));
    }
    Ok(r)
}

/// A random tail above degree `from` when the variety is an affine space; arcs on
/// other varieties cannot be perturbed blindly and yield `None`.
fn random_tail(arc: &ArcGen, from: usize, x: &AffineVariety, rng: &mut ChaCha8Rng) -> Option<ArcGen> {
    use rand::Rng;
    if !x.eqs.is_empty() {
        return None;
    }
    let field = arc.field;
    let coords = (0..arc.ambient_dim())
        .map(|i| {
            let mut c: Vec<_> = (0..from).map(|j| arc.coeff(i, j)).collect();
            for _ in 0..rng.gen_range(1..=4) {
                let v = match field {
                    Field::Prime(p) => rng.gen_range(0..p as i64),
                    Field::Rational => rng.gen_range(-4..=4),
                };
                c.push(field.from_i64(v));
            }
            c
        })
        .collect();
    Some(ArcGen::new(field, coords))
}

pub fn additivity(ex: &CatalogExample, opts: &SuiteOptions) -> Result<Report, CliError> {
    let field = ex.target.field;
    let mut r = Report::new(format!("verify additivity {} over {}", ex.id, field_name(field)));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let factored: Vec<_> = ex.charts.iter().filter(|c| c.factorization.is_some()).collect();
    if factored.is_empty() {
        return Err(CliError::Usage(format!("{} has no factored chart", ex.id)));
    }
    for chart in factored {
        let (inner, outer) = chart.factorization.as_ref().expect("filtered");
        for _ in 0..opts.samples {
            let arc = chart.sampler.sample(field, &mut rng).assemble(field);
            let total = mather_discrepancy(&chart.morphism, &arc)?.e;
            let first = mather_discrepancy(inner, &arc)?.e;
            let pushed = push_arc(inner, &arc).map_err(arcspace::error::PresentationError::from)?;
            let second = mather_discrepancy(outer, &pushed)?.e;
            r.check(total == first + second, || {
                format!("{}: {} gives {total} != {first} + {second}", chart.name(), arc.display_with("t"))
            });
        }
        r.push(
            "charts",
            json!({ "chart": chart.name(), "inner": inner.name, "outer": outer.name, "arcs": opts.samples }),
        );
    }
    Ok(r)
}

/// Fiber laws over the level-`m` truncation of `arc` for `m <= n <= 2m + 1`.
fn fiber_laws(
    r: &mut Report,
    x: &AffineVariety,
    arc: &ArcGen,
    m: usize,
    opts: &SuiteOptions,
) -> Result<(), CliError> {
    let q = match x.field {
        Field::Prime(p) => p as u64,
        Field::Rational => return Err(CliError::Usage("the fibers suite needs --q".into())),
    };
    let cfg = EnumConfig {
        budget: opts.budget,
        ..EnumConfig::default()
    };
    let prof = invariant_factors(x, arc, 16)?;
    let a = prof.total;
    if a > m {
        return Ok(());
    }
    let gamma = truncate_arc(arc, m);
    let d = x.dim as u64;
    for n in m..=2 * m + 1 {
        let a_prime: u64 = prof.torsion.iter().map(|&ai| ai.min(n - m) as u64).sum();
        let expect = q.pow((d * (n - m) as u64 + a_prime) as u32);
        if expect > opts.fiber_limit {
            r.push("skipped", format!("{gamma:?} n={n}: {expect} points"));
            continue;
        }
        let fiber = fiber_jets(x, n, &gamma, &cfg)?;
        let mut row = json!({
            "variety": x.name,
            "jet": format!("{gamma:?}"),
            "a": a,
            "n": n,
            "fiber": fiber.len(),
            "expected": expect,
        });
        r.check(fiber.len() as u64 == expect, || {
            format!("{} {gamma:?} n={n}: fiber {} != q^(d(n-m)+a') = {expect}", x.name, fiber.len())
        });
        if n + a <= 2 * m + 1 {
            let rep = filter_liftable(x, &fiber, &cfg)?;
            let want = q.pow((d * (n - m) as u64) as u32);
            row["liftable"] = json!(rep.liftable.len());
            row["liftable_expected"] = json!(want);
            r.add_undetermined(rep.undetermined.len());
            r.check(rep.liftable.len() as u64 == want, || {
                format!("{} {gamma:?} n={n}: liftable fiber {} != q^(d(n-m)) = {want}", x.name, rep.liftable.len())
            });
        }
        r.push("fibers", row);
    }
    Ok(())
}

pub fn fibers(ex: &CatalogExample, opts: &SuiteOptions) -> Result<Report, CliError> {
    let field = ex.target.field;
    let mut r = Report::new(format!("verify fibers {} over {}", ex.id, field_name(field)));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for chart in &ex.charts {
        let x = &chart.morphism.source;
        for _ in 0..opts.samples {
            let arc = chart.sampler.sample(field, &mut rng).assemble(field);
            for m in 1..=3 {
                fiber_laws(&mut r, x, &arc, m, opts)?;
            }
        }
    }
    Ok(r)
}

pub fn fibers_scene(scene: &Scene, opts: &SuiteOptions) -> Result<Report, CliError> {
    let mut r = Report::new(format!("verify fibers (scene over {})", field_name(scene.field)));
    for arc in &scene.arcs {
        let x = scene.variety(&arc.on)?;
        let a = invariant_factors(x, &arc.arc, 16)?.total;
        for m in a.max(1)..=a.max(1) + 1 {
            fiber_laws(&mut r, x, &arc.arc, m, opts)?;
        }
    }
    Ok(r)
}
