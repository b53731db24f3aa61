//! Reports with a fixed key order, rendered as indented text or JSON.

use serde_json::{json, Map, Value};

#[derive(Debug)]
pub struct Report {
    command: String,
    results: Map<String, Value>,
    checks: usize,
    failures: Vec<String>,
    undetermined: usize,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            results: Map::new(),
            checks: 0,
            failures: Vec::new(),
            undetermined: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    /// Appends to the list stored under `key`.
    pub fn push(&mut self, key: &str, item: impl Into<Value>) {
        let slot = self
            .results
            .entry(key.to_string())
            .or_insert_with(|| Value::Array(Vec::new()));
        if let Value::Array(items) = slot {
            items.push(item.into());
        }
    }

    /// Records a check; `witness` describes the failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok {
            self.failures.push(witness());
        }
        ok
    }

    pub fn add_undetermined(&mut self, n: usize) {
        self.undetermined += n;
    }

    pub fn passed(&self, allow_undetermined: bool) -> bool {
        self.failures.is_empty() && (allow_undetermined || self.undetermined == 0)
    }

    fn value(&self, allow_undetermined: bool) -> Value {
        let status = if self.passed(allow_undetermined) { "pass" } else { "fail" };
        json!({
            "command": self.command,
            "results": Value::Object(self.results.clone()),
            "summary": {
                "status": status,
                "checks": self.checks,
                "failures": self.failures,
                "undetermined": self.undetermined,
            },
        })
    }

    pub fn render_json(&self, allow_undetermined: bool) -> String {
        let mut s = serde_json::to_string_pretty(&self.value(allow_undetermined)).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self, allow_undetermined: bool) -> String {
        let mut out = String::new();
        if let Value::Object(top) = self.value(allow_undetermined) {
            write_map(&mut out, &top, 0);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn write_map(out: &mut String, map: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    for (k, v) in map {
        match scalar(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_value(out, v, indent + 2);
            }
        }
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => write_map(out, m, indent),
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        // first key on the dash line, the rest aligned under it
                        let mut block = String::new();
                        write_value(&mut block, item, indent + 2);
                        let trimmed = block.trim_start();
                        out.push_str(&format!("{pad}- {trimmed}"));
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_carry_the_same_content() {
        let mut r = Report::new("verify cov-exact E2");
        r.set("lhs", "(L^2 - 1)/(1 - L^-3)");
        r.push("profiles", json!({"chart": "U1", "ratio": 2}));
        r.push("profiles", json!({"chart": "U2", "ratio": 4}));
        r.set("torsion", json!([3, 4]));
        r.check(true, || unreachable!());
        let text = r.render_text(false);
        assert_eq!(
            text,
            "command: verify cov-exact E2\n\
             results:\n  lhs: (L^2 - 1)/(1 - L^-3)\n  profiles:\n    - chart: U1\n      ratio: 2\n    \
             - chart: U2\n      ratio: 4\n  torsion: [3, 4]\n\
             summary:\n  status: pass\n  checks: 1\n  failures: []\n  undetermined: 0\n"
        );
        let v: Value = serde_json::from_str(&r.render_json(false)).unwrap();
        assert_eq!(v["results"]["profiles"][1]["ratio"], 4);
        assert_eq!(v["summary"]["status"], "pass");
    }

    #[test]
    fn undetermined_outcomes_fail_unless_allowed() {
        let mut r = Report::new("count-jets");
        r.add_undetermined(2);
        assert!(!r.passed(false));
        assert!(r.passed(true));
        r.check(false, || "witness".into());
        assert!(!r.passed(true));
    }
}
