//! Machine-readable reports: named residual checks with verdicts, spectra
//! with multiplicities, and computed constants, serialized as canonical JSON
//! (keys sorted, floats printed with 17 significant digits) so identical
//! inputs produce byte-identical output.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl Check {
    /// The verdict is derived from value vs threshold, nowhere else.
    pub fn new(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        let verdict = if value.is_finite() && value <= threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            name: name.into(),
            value,
            threshold,
            verdict,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    pub label: String,
    pub values: Vec<SpectrumEntry>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ConstantsBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_pos: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_ell: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_norm_h1: Option<f64>,
    /// Samples of the bounded-modification norm bound L(z) as (re, im, L).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub l_samples: Vec<(f64, f64, f64)>,
}

impl ConstantsBlock {
    pub fn is_empty(&self) -> bool {
        self.c_pos.is_none()
            && self.c_ell.is_none()
            && self.gamma_norm.is_none()
            && self.gamma_norm_h1.is_none()
            && self.l_samples.is_empty()
    }
}


/// A DtN matrix rendered at one spectral point, row-major entries as
/// (re, im) pairs.
#[derive(Debug, Clone, Serialize)]
pub struct DtnTable {
    pub label: String,
    pub z: (f64, f64),
    pub dim: usize,
    pub entries: Vec<(f64, f64)>,
}

impl DtnTable {
    pub fn from_matrix(label: &str, z: num_complex::Complex64, m: &crate::numcore::CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                entries.push((m[(i, j)].re, m[(i, j)].im));
            }
        }
        Self {
            label: label.into(),
            z: (z.re, z.im),
            dim: m.nrows(),
            entries,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool_version: String,
    pub input_digest: String,
    /// RFC 3339; excluded from the byte-stability guarantee.
    pub timestamp: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub checks: Vec<Check>,
    pub spectra: Vec<SpectrumTable>,
    #[serde(skip_serializing_if = "ConstantsBlock::is_empty")]
    pub constants: ConstantsBlock,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tables: Vec<DtnTable>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(tool_version: &str, input_digest: &str, timestamp: &str) -> Self {
        Self {
            meta: Meta {
                tool_version: tool_version.into(),
                input_digest: input_digest.into(),
                timestamp: timestamp.into(),
            },
            checks: Vec::new(),
            spectra: Vec::new(),
            constants: ConstantsBlock::default(),
            tables: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    /// Canonical JSON: object keys sorted, every float rendered with 17
    /// significant digits, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        write_canonical(&value, 0, &mut out);
        out.push('\n');
        out
    }

    /// Eigenvalue tables as CSV: label,value,multiplicity.
    pub fn spectra_csv(&self) -> String {
        let mut out = String::from("label,value,multiplicity\n");
        for table in &self.spectra {
            for e in &table.values {
                out.push_str(&format!(
                    "{},{},{}\n",
                    csv_escape(&table.label),
                    format_float(e.value),
                    e.multiplicity
                ));
            }
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// 17 significant digits; enough to round-trip any f64 and fixed width-wise
/// for byte stability.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // Collapse -0.0 so equal computations cannot differ in sign-of-zero.
        return "0.0000000000000000e0".into();
    }
    format!("{:.16e}", x)
}

fn write_canonical(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().expect("finite float")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string encodes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_canonical(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            // serde_json's default map is a BTreeMap: iteration order is the
            // sorted key order the canonical form requires.
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push_str(": ");
                write_canonical(val, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(n: usize, out: &mut String) {
    for _ in 0..n {
        out.push_str("  ");
    }
}
