//! Structured command reports with a machine (JSON) and a human rendering.
//!
//! The machine rendering is a JSON object with a `header` carrying the tool
//! name and version and a `report` carrying everything else. Keys are sorted,
//! so identical inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct Header {
    tool: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct Envelope<'a> {
    header: Header,
    report: &'a Report,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.results.insert(key.to_string(), to_value(value));
        self
    }

    /// Adds a note once.
    pub fn note(&mut self, text: &str) -> &mut Self {
        if !self.notes.iter().any(|n| n == text) {
            self.notes.push(text.to_string());
        }
        self
    }

    pub fn render_machine(&self) -> String {
        let env = Envelope {
            header: Header {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            report: self,
        };
        // through Value so that every map, including struct fields, is sorted
        let mut out = serde_json::to_string_pretty(&to_value(env)).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        if !self.inputs.is_empty() {
            out.push_str("inputs:\n");
            for (k, v) in &self.inputs {
                render_entry(&mut out, 1, k, v);
            }
        }
        out.push_str("results:\n");
        for (k, v) in &self.results {
            render_entry(&mut out, 1, k, v);
        }
        if !self.notes.is_empty() {
            out.push_str("notes:\n");
            for n in &self.notes {
                let _ = writeln!(out, "  - {n}");
            }
        }
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_entry(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    if let Some(text) = scalar_text(v) {
        let _ = writeln!(out, "{pad}{key}: {text}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                render_entry(out, depth + 1, k, x);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                render_entry(out, depth + 1, &format!("[{i}]"), x);
            }
        }
        _ => unreachable!(),
    }
}

/// Caveats attached to reports whenever the corresponding computation runs.
pub mod notes {
    pub const FIBRE_LABELS: &str = "wedge fibres of Lambda^k are listed with piece-tagged labels \
        (dx1, dy1, dx2, dy2, ...); a presentation by sums such as dx1(+)dx2 has the same dimension, \
        but no change of basis between the two is fixed";
    pub const WEDGE_1K_SURJECTIVITY: &str = "surjectivity of wedge^k(Lambda^1_x) -> Lambda^k_x is \
        not decided; only the rank of the map is reported";
    pub const SPLITTING_LOW_DEGREE: &str = "for k < 2 the per-piece splitting formula does not apply \
        (H^0 of a piece is R, not 0); the splitting comparison is informational";
    pub const STAR_BASIS: &str = "the fibre star is the formal basis-complement map with the stored \
        basis declared orthonormal; under the 1/2-scaled wedge metric that basis is orthogonal but \
        not orthonormal, and no star is defined for other bases";
    pub const WEDGE_METRIC_SCALING: &str = "the metric at a wedge point is 1/2 (g_1 (+) ... (+) g_m) on \
        the doubled fibre; a reading that transports a single piece's metric is not used";
    pub const CLIFFORD_CROSS_PAIRING: &str = "at a wedge point the induced metric pairs covectors of \
        different pieces to 0, so c(dx1)(dy2) = dx1^dy2 with no scalar term; a scalar -1/2 there \
        would need a different identification of the fibre basis and is not assumed";
    pub const DERHAM_PER_PIECE: &str = "D at a wedge point is computed on each piece and \
        direct-summed; Clifford cross terms between covectors of different pieces are not introduced";
    pub const SINE_REPLACED: &str = "the vanishing-function example uses h(x) = x; it has the same \
        value and derivative at 0 as sin";
}
