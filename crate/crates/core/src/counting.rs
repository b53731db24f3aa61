//! The change of variables checked by counting jets over `F_q`.
//!
//! For every chart and every `p <= P` the liftable jets with `ord_{f^*V} = p` are
//! grown level by level. A jet whose profile `(a, b, e, p, q)` is certified keeps
//! it for all its extensions, so only uncertified jets are profiled. When the
//! level reaches `n_C = max{a+e, b+e, 2e, p, q}` for a profile `C`, the jets of `C`
//! are grouped by their image under `f_n`: every group must have `q^e` members,
//! and no other liftable jet may map into the image. Afterwards those jets are
//! no longer extended. Image sets of different profiles and charts are compared
//! after truncating to the smaller level.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::catalog::{CatalogExample, Chart};
use crate::error::{IntegratorError, JetError};
use crate::fp::{prime_of, Fp, FpPoly, Scratch};
use crate::integrator::q_pow;
use crate::jets::{enumerate_jets, liftability_with, row_to_jet, ContactConstraint, EnumConfig, Extender, Liftability};
use crate::mather::{contact_profile_at, ContactProfile};

#[derive(Clone, Debug)]
pub struct CountingConfig {
    /// Candidate checks allowed per (chart, p) scan.
    pub budget: u64,
    /// Largest jet population held at one level.
    pub max_jets: usize,
    /// Candidate checks allowed per liftability search.
    pub lift_budget: u64,
}

impl Default for CountingConfig {
    fn default() -> Self {
        Self {
            budget: crate::jets::DEFAULT_BUDGET,
            max_jets: 4_000_000,
            lift_budget: 1_000_000,
        }
    }
}

/// One realized `(chart, profile)` stratum.
#[derive(Clone, Debug)]
pub struct ProfileRow {
    pub chart: String,
    pub profile: ContactProfile,
    pub level: usize,
    /// `|ψ_n(C)(F_q)|`.
    pub count: u64,
    /// `|f_n(ψ_n(C))(F_q)|`.
    pub images: u64,
    pub fibers_ok: bool,
    pub union_ok: bool,
    pub witness: Option<String>,
}

impl ProfileRow {
    pub fn expected_ratio(&self, q: u32) -> u64 {
        (q as u64).pow(self.profile.e as u32)
    }

    /// `count / images` when it divides exactly.
    pub fn ratio(&self) -> Option<u64> {
        (self.images > 0 && self.count % self.images == 0).then(|| self.count / self.images)
    }

    pub fn passed(&self, q: u32) -> bool {
        self.fibers_ok && self.union_ok && self.ratio() == Some(self.expected_ratio(q))
    }
}

/// Both sides restricted to arcs with `ord_V = p`.
#[derive(Clone, Debug)]
pub struct ContactRow {
    pub p: usize,
    /// `μ_q(Cont^p V) q^{-p}`.
    pub lhs: BigRational,
    /// `Σ_C μ_q(C) q^{-q-e}`.
    pub rhs: Option<BigRational>,
    /// `μ_q(Cont^p V)` and `Σ_C μ_q(f(C))`.
    pub target_measure: BigRational,
    pub image_measure: Option<BigRational>,
}

impl ContactRow {
    pub fn passed(&self) -> bool {
        self.rhs.as_ref() == Some(&self.lhs) && self.image_measure.as_ref() == Some(&self.target_measure)
    }
}

#[derive(Clone, Debug)]
pub struct CountingReport {
    pub example: String,
    pub q: u32,
    pub cap: usize,
    pub rows: Vec<ProfileRow>,
    pub per_p: Vec<ContactRow>,
    pub failures: Vec<String>,
    /// Scans stopped by the enumeration budget, with what was left pending.
    pub incomplete: Vec<String>,
}

impl CountingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.incomplete.is_empty()
            && self.rows.iter().all(|r| r.passed(self.q))
            && self.per_p.iter().all(ContactRow::passed)
    }

    /// Truncated sums over `p <= P`.
    pub fn totals(&self) -> (BigRational, Option<BigRational>) {
        let lhs = self.per_p.iter().fold(BigRational::from_integer(0.into()), |a, r| a + &r.lhs);
        let rhs = self.per_p.iter().try_fold(BigRational::from_integer(0.into()), |a, r| {
            r.rhs.as_ref().map(|x| a + x)
        });
        (lhs, rhs)
    }
}

struct Verified {
    row: ProfileRow,
    p: usize,
    images: HashSet<Vec<u32>>,
}

struct Scan {
    verified: Vec<Verified>,
    failures: Vec<String>,
    incomplete: Option<String>,
}

const NONE: u32 = u32::MAX;

fn truncate_row(row: &[u32], nvars: usize, from: usize, to: usize) -> Vec<u32> {
    (0..nvars)
        .flat_map(|i| row[i * (from + 1)..i * (from + 1) + to + 1].iter().copied())
        .collect()
}

fn instantiate(chart: &Chart, p: usize, ex: &CatalogExample) -> Result<Vec<ContactConstraint>, IntegratorError> {
    let src = &chart.morphism.source;
    let mut cons = chart
        .restriction
        .iter()
        .map(|c| c.instantiate(src, &[]))
        .collect::<Result<Vec<_>, _>>()?;
    let pulled = ex
        .v
        .gens
        .iter()
        .map(|g| g.compose(&chart.morphism.components))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| IntegratorError::Presentation(e.into()))?;
    cons.push(ContactConstraint {
        gens: pulled,
        min: p,
        exact: true,
    });
    Ok(cons)
}

fn scan_chart(
    ex: &CatalogExample,
    chart: &Chart,
    p: usize,
    cfg: &CountingConfig,
) -> Result<Scan, IntegratorError> {
    let f = &chart.morphism;
    let src = &f.source;
    let field = src.field;
    let q = prime_of(field)?;
    let fp = Fp(q);
    let nv = src.ambient_dim();
    let mv = f.target.ambient_dim();
    let constrained = Extender::new(src, &instantiate(chart, p, ex)?)?;
    let plain = Extender::new(src, &[])?;
    let comps: Vec<FpPoly> = f.components.iter().map(FpPoly::compile).collect();
    let lift_cfg = EnumConfig {
        budget: cfg.lift_budget,
        ..EnumConfig::default()
    };

    let mut profiles: Vec<ContactProfile> = Vec::new();
    let mut index: HashMap<ContactProfile, u32> = HashMap::new();
    let mut out = Scan {
        verified: Vec::new(),
        failures: Vec::new(),
        incomplete: None,
    };
    // level -1: one empty parent
    let mut rows: Vec<u32> = Vec::new();
    let mut prof: Vec<u32> = vec![NONE];
    let mut spent: u64 = 0;
    let mut n = 0usize;
    loop {
        // extend to level n
        let parents = prof.len();
        spent = spent.saturating_add(parents as u64 * constrained.branching());
        if spent > cfg.budget {
            out.incomplete = Some(pending(chart, p, n, &profiles, &prof, "candidate budget"));
            return Ok(out);
        }
        let held = AtomicUsize::new(0);
        let old = n; // parents have `old` coefficients per coordinate
        let batches: Vec<(Vec<u32>, Vec<u32>)> = (0..parents)
            .into_par_iter()
            .map_init(Scratch::default, |scratch, i| {
                let parent = &rows[i * nv * old..(i + 1) * nv * old];
                let padded: Vec<Vec<u32>> = (0..nv)
                    .map(|c| {
                        let mut v = parent[c * old..(c + 1) * old].to_vec();
                        v.push(0);
                        v
                    })
                    .collect();
                let coords: Vec<&[u32]> = padded.iter().map(Vec::as_slice).collect();
                let mut kid_rows = Vec::new();
                let mut kid_prof = Vec::new();
                constrained.for_each_extension(&coords, n, scratch, |v| {
                    if held.fetch_add(1, Ordering::Relaxed) >= cfg.max_jets {
                        return;
                    }
                    for (c, col) in padded.iter().enumerate() {
                        kid_rows.extend_from_slice(&col[..old]);
                        kid_rows.push(v[c]);
                    }
                    kid_prof.push(prof[i]);
                });
                (kid_rows, kid_prof)
            })
            .collect();
        rows = Vec::new();
        prof = Vec::new();
        for (r, pr) in batches {
            rows.extend(r);
            prof.extend(pr);
        }
        if held.load(Ordering::Relaxed) > cfg.max_jets {
            out.incomplete = Some(pending(chart, p, n, &profiles, &prof, "jet population cap"));
            return Ok(out);
        }
        let stride = nv * (n + 1);

        // liftability
        let lift: Vec<Liftability> = if chart.smooth {
            vec![Liftability::Yes; prof.len()]
        } else {
            (0..prof.len())
                .into_par_iter()
                .map(|i| liftability_with(&plain, nv, &rows[i * stride..(i + 1) * stride], n, &lift_cfg))
                .collect()
        };
        let keep: Vec<usize> = (0..prof.len()).filter(|&i| lift[i] != Liftability::No).collect();
        if keep.len() != prof.len() {
            rows = keep.iter().flat_map(|&i| rows[i * stride..(i + 1) * stride].to_vec()).collect();
            prof = keep.iter().map(|&i| prof[i]).collect();
        }
        let lift: Vec<Liftability> = keep.iter().map(|&i| lift[i]).collect();

        // profiles of uncertified liftable jets
        if n >= p {
            let found: Vec<(usize, Result<Option<ContactProfile>, String>)> = (0..prof.len())
                .into_par_iter()
                .filter(|&i| prof[i] == NONE && lift[i] == Liftability::Yes)
                .map(|i| {
                    let jet = row_to_jet(field, n, nv, &rows[i * stride..(i + 1) * stride]);
                    let r = contact_profile_at(f, &jet.expand(), n + 1, &ex.z, &ex.v)
                        .map_err(|e| format!("{jet:?}: {e}"));
                    (i, r)
                })
                .collect();
            for (i, r) in found {
                match r {
                    Ok(Some(c)) => {
                        let idx = *index.entry(c).or_insert_with(|| {
                            profiles.push(c);
                            (profiles.len() - 1) as u32
                        });
                        if c.fibration_level() < n {
                            out.failures.push(format!(
                                "{}: profile {c} first certified at level {n}, above its fibration level {}",
                                chart.name(),
                                c.fibration_level()
                            ));
                        }
                        prof[i] = idx;
                    }
                    Ok(None) => {}
                    Err(e) => out.failures.push(format!("{}: profile evaluation failed at {e}", chart.name())),
                }
            }
        }

        // verify the profiles whose fibration level is n
        let due: Vec<u32> = (0..profiles.len() as u32)
            .filter(|&k| profiles[k as usize].fibration_level() == n)
            .filter(|k| prof.contains(k))
            .collect();
        if !due.is_empty() {
            let images: Vec<Vec<u32>> = (0..prof.len())
                .into_par_iter()
                .map_init(Scratch::default, |scratch, i| {
                    let row = &rows[i * stride..(i + 1) * stride];
                    let coords: Vec<&[u32]> = (0..nv).map(|c| &row[c * (n + 1)..(c + 1) * (n + 1)]).collect();
                    let mut img = vec![0u32; mv * (n + 1)];
                    for (k, g) in comps.iter().enumerate() {
                        g.eval_series(fp, &coords, n + 1, scratch, &mut img[k * (n + 1)..(k + 1) * (n + 1)]);
                    }
                    img
                })
                .collect();
            for &k in &due {
                let c = profiles[k as usize];
                let mut fibers: HashMap<&[u32], u64> = HashMap::new();
                let mut count = 0u64;
                for i in 0..prof.len() {
                    if prof[i] == k {
                        *fibers.entry(images[i].as_slice()).or_default() += 1;
                        count += 1;
                    }
                }
                let want = (q as u64).pow(c.e as u32);
                let mut witness = None;
                let fibers_ok = fibers.values().all(|&s| s == want);
                if !fibers_ok {
                    let (img, s) = fibers.iter().find(|(_, &s)| s != want).unwrap();
                    witness = Some(format!(
                        "image {:?} has {s} preimages",
                        row_to_jet(field, n, mv, img)
                    ));
                }
                let mut union_ok = true;
                for i in 0..prof.len() {
                    if prof[i] != k && fibers.contains_key(images[i].as_slice()) {
                        union_ok = false;
                        witness.get_or_insert_with(|| {
                            let why = if lift[i] == Liftability::Undetermined {
                                "with undetermined liftability"
                            } else {
                                "without profile"
                            };
                            format!(
                                "{:?} maps into the image {why} {c}",
                                row_to_jet(field, n, nv, &rows[i * stride..(i + 1) * stride])
                            )
                        });
                        break;
                    }
                }
                let set: HashSet<Vec<u32>> = fibers.keys().map(|s| s.to_vec()).collect();
                out.verified.push(Verified {
                    row: ProfileRow {
                        chart: chart.name().to_string(),
                        profile: c,
                        level: n,
                        count,
                        images: set.len() as u64,
                        fibers_ok,
                        union_ok,
                        witness,
                    },
                    p,
                    images: set,
                });
            }
        }

        // retire jets of verified profiles
        let retired = |k: u32| k != NONE && profiles[k as usize].fibration_level() <= n;
        if prof.iter().any(|&k| retired(k)) {
            let keep: Vec<usize> = (0..prof.len()).filter(|&i| !retired(prof[i])).collect();
            rows = keep.iter().flat_map(|&i| rows[i * stride..(i + 1) * stride].to_vec()).collect();
            prof = keep.iter().map(|&i| prof[i]).collect();
        }
        if prof.is_empty() {
            return Ok(out);
        }
        n += 1;
    }
}

fn pending(chart: &Chart, p: usize, n: usize, profiles: &[ContactProfile], prof: &[u32], why: &str) -> String {
    let mut open: Vec<String> = profiles
        .iter()
        .enumerate()
        .filter(|(k, _)| prof.contains(&(*k as u32)))
        .map(|(_, c)| format!("{c}@{}", c.fibration_level()))
        .collect();
    open.sort();
    let unresolved = prof.iter().filter(|&&k| k == NONE).count();
    format!(
        "{} p={p}: {why} reached while extending to level {n} ({} jets held; pending profiles [{}]; {unresolved} uncertified jets)",
        chart.name(),
        prof.len(),
        open.join(", ")
    )
}

/// Runs the counting comparison for every `p <= cap` over the example's field.
pub fn cov_check_counting(ex: &CatalogExample, cap: usize, cfg: &CountingConfig) -> Result<CountingReport, IntegratorError> {
    if ex.z.gens != ex.v.gens {
        return Err(IntegratorError::Unsupported(
            "counting comparison requires V = Z".into(),
        ));
    }
    let q = prime_of(ex.target.field)?;
    let d = ex.dim() as i64;
    let mut report = CountingReport {
        example: ex.id.clone(),
        q,
        cap,
        rows: Vec::new(),
        per_p: Vec::new(),
        failures: Vec::new(),
        incomplete: Vec::new(),
    };
    let mut verified: Vec<Verified> = Vec::new();
    let mut complete_p = vec![true; cap + 1];
    for chart in &ex.charts {
        for p in 0..=cap {
            let scan = scan_chart(ex, chart, p, cfg)?;
            report.failures.extend(scan.failures);
            if let Some(msg) = scan.incomplete {
                report.incomplete.push(msg);
                complete_p[p] = false;
            }
            verified.extend(scan.verified);
        }
    }
    // disjointness of image strata
    for (i, a) in verified.iter().enumerate() {
        for b in verified.iter().skip(i + 1) {
            let (lo, hi) = if a.row.level <= b.row.level { (a, b) } else { (b, a) };
            let mv = ex.target.ambient_dim();
            if let Some(hit) = hi
                .images
                .iter()
                .find(|img| lo.images.contains(&truncate_row(img, mv, hi.row.level, lo.row.level)))
            {
                report.failures.push(format!(
                    "images of {} {} and {} {} meet: {:?}",
                    a.row.chart,
                    a.row.profile,
                    b.row.chart,
                    b.row.profile,
                    row_to_jet(ex.target.field, hi.row.level, mv, hit)
                ));
            }
        }
    }
    // left-hand side per p and the aggregated comparison
    let tcons = |p: usize| -> Result<Vec<ContactConstraint>, IntegratorError> {
        Ok(vec![ContactConstraint {
            gens: ex.v.gens.clone(),
            min: p,
            exact: true,
        }])
    };
    for p in 0..=cap {
        let set = enumerate_jets(
            &ex.target,
            p,
            &EnumConfig {
                budget: cfg.budget,
                constraints: tcons(p)?,
                extra_depth: None,
            },
        )
        .map_err(|e: JetError| IntegratorError::from(e))?;
        let target_measure = BigRational::from_integer(set.len().into()) * q_pow(q, -(p as i64) * d);
        let lhs = &target_measure * q_pow(q, -(p as i64));
        let (rhs, image_measure) = if complete_p[p] {
            let mut rhs = BigRational::from_integer(0.into());
            let mut img = BigRational::from_integer(0.into());
            for v in verified.iter().filter(|v| v.p == p) {
                let lvl = -(v.row.level as i64) * d;
                let c = &v.row.profile;
                rhs += BigRational::from_integer(v.row.count.into()) * q_pow(q, lvl - (c.q + c.e) as i64);
                img += BigRational::from_integer(v.row.images.into()) * q_pow(q, lvl);
            }
            (Some(rhs), Some(img))
        } else {
            (None, None)
        };
        report.per_p.push(ContactRow {
            p,
            lhs,
            rhs,
            target_measure,
            image_measure,
        });
    }
    verified.sort_by(|a, b| (a.p, &a.row.chart, a.row.profile).cmp(&(b.p, &b.row.chart, b.row.profile)));
    report.rows = verified.into_iter().map(|v| v.row).collect();
    Ok(report)
}
