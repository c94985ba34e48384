//! Minimal JSON emitter for the report schema.
//!
//! Reports need three things a general serializer does not promise without
//! ceremony: insertion-ordered keys, one fixed numeric format for reals
//! (17 significant digits, so every `f64` round-trips exactly and repeated
//! runs are byte-identical), and no dependency-driven drift in the output
//! bytes. The value tree below is built by hand and rendered with two-space
//! indentation.

use std::fmt::Write;

#[derive(Debug, Clone)]
pub enum Json {
    Bool(bool),
    /// Integers (counts, orders, seeds) print without an exponent.
    UInt(u64),
    /// Reals always print as `{:.16e}`: 17 significant digits.
    Real(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }
}

pub fn render(value: &Json) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Json, indent: usize, out: &mut String) {
    match value {
        Json::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Json::UInt(u) => {
            let _ = write!(out, "{u}");
        }
        Json::Real(x) => {
            let _ = write!(out, "{x:.16e}");
        }
        Json::Str(s) => write_string(s, out),
        Json::Arr(items) => {
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
                pad(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push(']');
        }
        Json::Obj(fields) => {
            if fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                pad(indent + 1, out);
                write_string(key, out);
                out.push_str(": ");
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Assembles the report envelope: `schema_version`, `command`, `inputs`,
/// `results`, and — for stochastic commands — `seed`, in that key order.
pub fn report(
    command: &str,
    inputs: Vec<(&'static str, Json)>,
    results: Json,
    seed: Option<u64>,
) -> Json {
    let mut fields = vec![
        ("schema_version", Json::str("1")),
        ("command", Json::str(command)),
        ("inputs", Json::Obj(inputs)),
        ("results", results),
    ];
    if let Some(s) = seed {
        fields.push(("seed", Json::UInt(s)));
    }
    Json::Obj(fields)
}
