//! Deterministic result records: fixed field order and every float printed
//! with 17 significant digits, so identical inputs give identical bytes.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl From<f64> for Json {
    fn from(x: f64) -> Self {
        Json::Num(x)
    }
}
impl From<usize> for Json {
    fn from(x: usize) -> Self {
        Json::Int(x as i64)
    }
}
impl From<bool> for Json {
    fn from(x: bool) -> Self {
        Json::Bool(x)
    }
}
impl From<&str> for Json {
    fn from(x: &str) -> Self {
        Json::Str(x.to_string())
    }
}
impl From<String> for Json {
    fn from(x: String) -> Self {
        Json::Str(x)
    }
}
impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Json::Arr(v.into_iter().map(Into::into).collect())
    }
}

/// Object literal helper: `obj([("a", 1.0.into()), ...])`.
pub fn obj<const N: usize>(fields: [(&str, Json); N]) -> Json {
    Json::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

/// 17 significant digits; non-finite values become null.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

impl Json {
    pub fn to_pretty(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = |n: usize| "  ".repeat(n);
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Num(x) => out.push_str(&format_float(*x)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("string escapes")),
            Json::Arr(v) if v.is_empty() => out.push_str("[]"),
            Json::Obj(v) if v.is_empty() => out.push_str("{}"),
            Json::Arr(v) => {
                out.push_str("[\n");
                for (i, x) in v.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    x.write(out, indent + 1);
                    out.push_str(if i + 1 < v.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
            Json::Obj(v) => {
                out.push_str("{\n");
                for (i, (k, x)) in v.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    out.push_str(&serde_json::to_string(k).expect("key escapes"));
                    out.push_str(": ");
                    x.write(out, indent + 1);
                    out.push_str(if i + 1 < v.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push('}');
            }
        }
    }

    /// Leaves as (dotted path, text) pairs; array elements use their index.
    pub fn flatten(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        self.flatten_into("", &mut out);
        out
    }

    fn flatten_into(&self, prefix: &str, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match self {
            Json::Arr(v) => v.iter().enumerate().for_each(|(i, x)| x.flatten_into(&join(&i.to_string()), out)),
            Json::Obj(v) => v.iter().for_each(|(k, x)| x.flatten_into(&join(k), out)),
            Json::Str(s) => out.push((prefix.to_string(), s.clone())),
            Json::Num(x) => out.push((prefix.to_string(), format_float(*x))),
            Json::Int(i) => out.push((prefix.to_string(), i.to_string())),
            Json::Bool(b) => out.push((prefix.to_string(), b.to_string())),
            Json::Null => out.push((prefix.to_string(), String::new())),
        }
    }
}

/// One result: what was asked, what came out, and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub inputs: Json,
    pub value: Json,
    pub provenance: &'static str,
    pub tolerances: Json,
    pub paper_anchor: String,
}

impl Record {
    pub fn to_json(&self) -> Json {
        obj([
            ("inputs", self.inputs.clone()),
            ("value", self.value.clone()),
            ("provenance", self.provenance.into()),
            ("tolerances", self.tolerances.clone()),
            ("paper_anchor", self.paper_anchor.clone().into()),
        ])
    }
}

/// CSV with a header row taken from the first record's flattened keys.
pub fn to_csv(records: &[Record]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows: Vec<Vec<(String, String)>> = records.iter().map(|r| r.to_json().flatten()).collect();
    if let Some(first) = rows.first() {
        w.write_record(first.iter().map(|(k, _)| k.as_str())).expect("in-memory write");
    }
    for row in &rows {
        w.write_record(row.iter().map(|(_, v)| v.as_str())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}
