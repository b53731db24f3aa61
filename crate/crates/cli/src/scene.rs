//! Line-oriented scene files.
//!
//! ```text
//! [field]
//! char = 0
//!
//! [variety X]
//! vars = x, y
//! dim = 1
//! eqs = y^2 - x^3
//!
//! [arc a] on = X  coords = t^2, t^3
//! ```
//!
//! Keys may follow a header on the same line or on their own lines; several
//! `key = value` pairs on one line are separated by two or more spaces.

use std::collections::HashMap;

use arcspace::field::Field;
use arcspace::presentation::{validate_arc, AffineVariety, ArcGen, MorphismPres, SubschemeIdeal};

use crate::error::CliError;

/// Precision at which every arc is validated on load.
pub const LOAD_PRECISION: usize = 16;

#[derive(Clone, Debug)]
pub struct SceneArc {
    pub name: String,
    pub on: String,
    pub arc: ArcGen,
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub field: Field,
    pub varieties: Vec<AffineVariety>,
    pub morphisms: Vec<MorphismPres>,
    pub subschemes: Vec<(String, SubschemeIdeal)>,
    pub arcs: Vec<SceneArc>,
}

#[derive(Debug)]
struct Section {
    kind: String,
    name: Option<String>,
    line: usize,
    keys: HashMap<String, (String, usize)>,
}

impl Section {
    fn get(&self, key: &str) -> Result<(&str, usize), CliError> {
        self.keys
            .get(key)
            .map(|(v, l)| (v.as_str(), *l))
            .ok_or_else(|| CliError::Scene {
                line: self.line,
                msg: format!("[{}] is missing `{key}`", self.kind),
            })
    }

    fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("")
    }
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_pairs(text: &str, line: usize, section: &mut Section) -> Result<(), CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(());
    }
    // pairs are separated by runs of at least two spaces
    let mut pieces = Vec::new();
    let mut rest = text;
    while let Some(pos) = rest.find("  ") {
        pieces.push(&rest[..pos]);
        rest = rest[pos..].trim_start();
    }
    pieces.push(rest);
    for piece in pieces {
        let (k, v) = piece.split_once('=').ok_or_else(|| CliError::Scene {
            line,
            msg: format!("expected `key = value`, got `{piece}`"),
        })?;
        let k = k.trim().to_string();
        if section.keys.insert(k.clone(), (v.trim().to_string(), line)).is_some() {
            return Err(CliError::Scene {
                line,
                msg: format!("duplicate key `{k}`"),
            });
        }
    }
    Ok(())
}

fn sections(src: &str) -> Result<Vec<Section>, CliError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(body) = text.strip_prefix('[') {
            let (header, rest) = body.split_once(']').ok_or_else(|| CliError::Scene {
                line,
                msg: "unterminated section header".into(),
            })?;
            let mut words = header.split_whitespace();
            let kind = words.next().unwrap_or("").to_string();
            let name = words.next().map(str::to_string);
            if words.next().is_some() {
                return Err(CliError::Scene {
                    line,
                    msg: format!("malformed header `[{header}]`"),
                });
            }
            let mut section = Section {
                kind,
                name,
                line,
                keys: HashMap::new(),
            };
            parse_pairs(rest, line, &mut section)?;
            out.push(section);
        } else {
            let section = out.last_mut().ok_or_else(|| CliError::Scene {
                line,
                msg: "key outside of any section".into(),
            })?;
            parse_pairs(text, line, section)?;
        }
    }
    Ok(out)
}

fn parse_field(value: &str, line: usize) -> Result<Field, CliError> {
    let c: u32 = value.parse().map_err(|_| CliError::Scene {
        line,
        msg: format!("bad characteristic `{value}`"),
    })?;
    if c == 0 {
        Ok(Field::Rational)
    } else {
        Field::prime(c).map_err(|e| CliError::Scene { line, msg: e.to_string() })
    }
}

fn at(line: usize) -> impl Fn(String) -> CliError {
    move |msg| CliError::Scene { line, msg }
}

impl Scene {
    /// Parses a scene. `q` reduces a characteristic-zero scene modulo a prime; a
    /// scene already over `F_p` accepts only `q = p`.
    pub fn parse(src: &str, q: Option<u32>) -> Result<Self, CliError> {
        let secs = sections(src)?;
        let declared = match secs.iter().filter(|s| s.kind == "field").collect::<Vec<_>>().as_slice() {
            [] => Field::Rational,
            [s] => {
                let (v, l) = s.get("char")?;
                parse_field(v, l)?
            }
            [_, s, ..] => {
                return Err(CliError::Scene {
                    line: s.line,
                    msg: "more than one [field] section".into(),
                })
            }
        };
        let field = match (declared, q) {
            (f, None) => f,
            (Field::Rational, Some(p)) => Field::prime(p).map_err(|e| CliError::Usage(e.to_string()))?,
            (Field::Prime(p), Some(r)) if p == r => declared,
            (Field::Prime(p), Some(r)) => {
                return Err(CliError::Usage(format!("scene is over F_{p}, cannot count over F_{r}")))
            }
        };
        let mut scene = Scene {
            field,
            varieties: Vec::new(),
            morphisms: Vec::new(),
            subschemes: Vec::new(),
            arcs: Vec::new(),
        };
        for s in &secs {
            if s.kind != "field" && s.name.is_none() {
                return Err(CliError::Scene {
                    line: s.line,
                    msg: format!("[{}] needs a name", s.kind),
                });
            }
            match s.kind.as_str() {
                "field" => {}
                "variety" => {
                    let (vars, _) = s.get("vars")?;
                    let (dim, dl) = s.get("dim")?;
                    let dim: usize = dim.parse().map_err(|_| CliError::Scene {
                        line: dl,
                        msg: format!("bad dimension `{dim}`"),
                    })?;
                    let eqs = s.keys.get("eqs").map(|(v, _)| split_list(v)).unwrap_or_default();
                    let v = AffineVariety::new(s.name(), field, &split_list(vars), &eqs, dim)
                        .map_err(|e| at(s.line)(e.to_string()))?;
                    scene.check_fresh(s)?;
                    scene.varieties.push(v);
                }
                "morphism" => {
                    let (src, sl) = s.get("source")?;
                    let (tgt, tl) = s.get("target")?;
                    let (map, ml) = s.get("map")?;
                    let source = scene.variety_at(src, sl)?.clone();
                    let target = scene.variety_at(tgt, tl)?.clone();
                    let f = MorphismPres::new(s.name(), source, target, &split_list(map))
                        .map_err(|e| at(ml)(e.to_string()))?;
                    scene.check_fresh(s)?;
                    scene.morphisms.push(f);
                }
                "subscheme" => {
                    let (on, ol) = s.get("on")?;
                    let (gens, gl) = s.get("gens")?;
                    let ideal = scene
                        .variety_at(on, ol)?
                        .ideal(s.name(), &split_list(gens))
                        .map_err(|e| at(gl)(e.to_string()))?;
                    scene.check_fresh(s)?;
                    scene.subschemes.push((on.to_string(), ideal));
                }
                "arc" => {
                    let (on, ol) = s.get("on")?;
                    let (coords, cl) = s.get("coords")?;
                    let v = scene.variety_at(on, ol)?;
                    let coords = split_list(coords);
                    if coords.len() != v.ambient_dim() {
                        return Err(at(cl)(format!(
                            "arc has {} coordinates, {} lives in A^{}",
                            coords.len(),
                            v.name,
                            v.ambient_dim()
                        )));
                    }
                    let arc = ArcGen::parse(field, &coords).map_err(|e| at(cl)(e.to_string()))?;
                    validate_arc(v, &arc, LOAD_PRECISION).map_err(|e| at(s.line)(e.to_string()))?;
                    scene.check_fresh(s)?;
                    scene.arcs.push(SceneArc {
                        name: s.name().to_string(),
                        on: on.to_string(),
                        arc,
                    });
                }
                other => {
                    return Err(CliError::Scene {
                        line: s.line,
                        msg: format!("unknown section kind `{other}`"),
                    })
                }
            }
        }
        Ok(scene)
    }

    fn check_fresh(&self, s: &Section) -> Result<(), CliError> {
        let name = s.name();
        let taken = match s.kind.as_str() {
            "variety" => self.varieties.iter().any(|v| v.name == name),
            "morphism" => self.morphisms.iter().any(|m| m.name == name),
            "subscheme" => self.subschemes.iter().any(|(_, z)| z.name == name),
            _ => self.arcs.iter().any(|a| a.name == name),
        };
        if taken {
            return Err(CliError::Scene {
                line: s.line,
                msg: format!("{} `{name}` defined twice", s.kind),
            });
        }
        Ok(())
    }

    fn variety_at(&self, name: &str, line: usize) -> Result<&AffineVariety, CliError> {
        self.variety(name).map_err(|_| CliError::Scene {
            line,
            msg: format!("unknown variety `{name}`"),
        })
    }

    pub fn variety(&self, name: &str) -> Result<&AffineVariety, CliError> {
        self.varieties
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| CliError::Unresolved("variety", name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<&MorphismPres, CliError> {
        self.morphisms
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| CliError::Unresolved("morphism", name.to_string()))
    }

    pub fn subscheme(&self, name: &str) -> Result<&(String, SubschemeIdeal), CliError> {
        self.subschemes
            .iter()
            .find(|(_, z)| z.name == name)
            .ok_or_else(|| CliError::Unresolved("subscheme", name.to_string()))
    }

    pub fn arc(&self, name: &str) -> Result<&SceneArc, CliError> {
        self.arcs
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| CliError::Unresolved("arc", name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUSP: &str = "
# the cuspidal cubic
[field]
char = 0
[variety C] vars = x, y  dim = 1  eqs = y^2 - x^3
[subscheme O]
on = C
gens = x, y
[arc a] on = C  coords = t^2, t^3
";

    #[test]
    fn parses_inline_and_block_keys() {
        let s = Scene::parse(CUSP, None).unwrap();
        assert_eq!(s.field, Field::Rational);
        assert_eq!(s.variety("C").unwrap().dim, 1);
        assert_eq!(s.subscheme("O").unwrap().0, "C");
        assert_eq!(s.arc("a").unwrap().arc.degree(), 3);
    }

    #[test]
    fn reduction_modulo_a_prime() {
        let s = Scene::parse(CUSP, Some(5)).unwrap();
        assert_eq!(s.field, Field::prime(5).unwrap());
        let over_f2 = CUSP.replace("char = 0", "char = 2");
        assert!(matches!(Scene::parse(&over_f2, Some(3)), Err(CliError::Usage(_))));
    }

    #[test]
    fn rejects_bad_scenes() {
        let off = CUSP.replace("t^2, t^3", "t, t");
        assert!(matches!(Scene::parse(&off, None), Err(CliError::Scene { .. })));
        let dangling = "[arc a] on = Y  coords = t";
        assert!(matches!(Scene::parse(dangling, None), Err(CliError::Scene { line: 1, .. })));
        let twice = format!("{CUSP}[variety C] vars = x  dim = 1");
        assert!(Scene::parse(&twice, None).is_err());
        assert!(Scene::parse("x = 1", None).is_err());
    }
}
