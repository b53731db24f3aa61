use arcspace::jets::{fiber_jets, filter_liftable, truncate_arc, EnumConfig, JetSet};
use arcspace::mather::{contact_profile, invariant_factors, mather_discrepancy};
use arcspace::presentation::{jacobian_ideal, ord_ideal, push_arc};
use arcspace::series::Order;
use serde_json::json;

use crate::error::CliError;
use crate::report::Report;
use crate::scene::Scene;

pub fn invariants(scene: &Scene, arc_name: &str, ords: &[String], precision: usize) -> Result<Report, CliError> {
    let arc = scene.arc(arc_name)?;
    let variety = scene.variety(&arc.on)?;
    let mut r = Report::new(format!("invariants {arc_name}"));
    r.set("variety", variety.name.clone());
    r.set("arc", arc.arc.display_with("t"));
    let prof = invariant_factors(variety, &arc.arc, precision)?;
    r.set("free_rank", prof.free_rank);
    r.set("torsion", prof.torsion.clone());
    r.set("a", prof.total);
    let jac = ord_ideal(&arc.arc, &jacobian_ideal(variety)?, prof.precision.max(precision))
        .map_err(arcspace::error::PresentationError::from)?;
    r.set("ord_jacobian", jac.to_string());
    if let Order::Finite(a) = jac {
        r.check(a == prof.total, || format!("sum of invariant factors {} != ord Jac {a}", prof.total));
    }
    for name in ords {
        let (on, z) = scene.subscheme(name)?;
        if *on != variety.name {
            return Err(CliError::Usage(format!("subscheme {name} lives on {on}, arc {arc_name} on {}", variety.name)));
        }
        let o = ord_ideal(&arc.arc, z, precision).map_err(arcspace::error::PresentationError::from)?;
        r.push("orders", json!({ "subscheme": name, "order": o.to_string() }));
    }
    r.set("precision", prof.precision);
    Ok(r)
}

pub fn mather(
    scene: &Scene,
    morphism: &str,
    arc_name: &str,
    z: Option<&str>,
    v: Option<&str>,
) -> Result<Report, CliError> {
    let f = scene.morphism(morphism)?;
    let arc = scene.arc(arc_name)?;
    if arc.on != f.source.name {
        return Err(CliError::Usage(format!(
            "arc {arc_name} lives on {}, {morphism} starts at {}",
            arc.on, f.source.name
        )));
    }
    let mut r = Report::new(format!("mather {morphism} {arc_name}"));
    r.set("arc", arc.arc.display_with("t"));
    r.set("image", push_arc(f, &arc.arc).map_err(arcspace::error::PresentationError::from)?.display_with("t"));
    let d = mather_discrepancy(f, &arc.arc)?;
    r.set("e", d.e);
    r.set("e_diag", d.e_diag.clone());
    r.set("a", d.a);
    r.set("b", d.b);
    r.set("c", d.c);
    r.set("precisions", d.precisions.clone());
    r.check(d.bounds_hold(), || {
        format!("bounds c - a <= e <= min(c, c - a + b) fail: a={} b={} c={} e={}", d.a, d.b, d.c, d.e)
    });
    let mut notes = vec!["c - a <= e <= min(c, c - a + b)"];
    if jacobian_ideal(&f.source)?.is_unit() {
        notes.push("e = c (smooth source)");
        r.check(d.e == d.c, || format!("smooth source but e = {} != c = {}", d.e, d.c));
    }
    if jacobian_ideal(&f.target)?.is_unit() {
        notes.push("e = c - a (smooth target)");
        r.check(d.e + d.a == d.c, || format!("smooth target but e = {} != c - a = {}", d.e, d.c as i64 - d.a as i64));
    }
    r.set("laws", notes);
    match (z, v) {
        (Some(z), Some(v)) => {
            let (zon, zi) = scene.subscheme(z)?;
            let (von, vi) = scene.subscheme(v)?;
            if *zon != f.target.name || *von != f.target.name {
                return Err(CliError::Usage(format!("Z and V must live on {}", f.target.name)));
            }
            let p = contact_profile(f, zi, vi, &arc.arc)?;
            r.set("profile", p.to_string());
            r.set("fibration_level", p.fibration_level());
        }
        (None, None) => {}
        _ => return Err(CliError::Usage("--z and --v go together".into())),
    }
    Ok(r)
}

/// `NAME@m`: the scene arc `NAME` truncated at level `m`.
pub fn parse_fiber_spec(spec: &str) -> Result<(&str, usize), CliError> {
    let (name, m) = spec
        .split_once('@')
        .ok_or_else(|| CliError::Usage(format!("fiber spec `{spec}` is not ARC@LEVEL")))?;
    let m = m
        .parse()
        .map_err(|_| CliError::Usage(format!("fiber level `{m}` is not a number")))?;
    Ok((name, m))
}

fn dump_lines(set: &JetSet) -> Vec<String> {
    let mut buf = Vec::new();
    set.dump(&mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("dump is ascii").lines().map(str::to_string).collect()
}

pub struct CountArgs<'a> {
    pub variety: &'a str,
    pub level: usize,
    pub liftable: bool,
    pub fiber: Option<&'a str>,
    pub dump: bool,
    pub budget: u64,
}

pub fn count_jets(scene: &Scene, args: &CountArgs) -> Result<Report, CliError> {
    let x = scene.variety(args.variety)?;
    let cfg = EnumConfig {
        budget: args.budget,
        ..EnumConfig::default()
    };
    let mut r = Report::new(format!("count-jets {} --level {}", args.variety, args.level));
    r.set("variety", x.name.clone());
    r.set("field", crate::suites::field_name(x.field));
    r.set("level", args.level);
    let set = match args.fiber {
        Some(spec) => {
            let (name, m) = parse_fiber_spec(spec)?;
            let arc = scene.arc(name)?;
            if arc.on != x.name {
                return Err(CliError::Usage(format!("arc {name} lives on {}", arc.on)));
            }
            let gamma = truncate_arc(&arc.arc, m);
            r.set("fiber_over", format!("{gamma:?}"));
            fiber_jets(x, args.level, &gamma, &cfg)?
        }
        None => arcspace::jets::enumerate_jets(x, args.level, &cfg)?,
    };
    r.set("count", set.len());
    let shown = if args.liftable {
        let rep = filter_liftable(x, &set, &cfg)?;
        r.set("liftable", rep.liftable.len());
        r.set("undetermined", rep.undetermined.len());
        r.add_undetermined(rep.undetermined.len());
        if !rep.undetermined.is_empty() {
            let list: Vec<String> = rep.undetermined.iter().map(|j| format!("{j:?}")).collect();
            r.set("undetermined_jets", list);
        }
        rep.liftable
    } else {
        set
    };
    if args.dump {
        r.set("jets", dump_lines(&shown));
    }
    Ok(r)
}
