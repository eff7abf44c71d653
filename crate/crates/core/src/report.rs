//! Deterministic report emission. All generated JSON goes through a small
//! writer with a fixed field order and 17-significant-digit decimal floats,
//! so identical configurations produce byte-identical files. CSV output is
//! RFC 4180 with the same float formatting.

use std::fmt::Write as _;

/// JSON document tree with ordered object fields.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

/// 17 significant decimal digits, enough to round-trip any f64 exactly.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "\"nan\"".into();
    }
    if v.is_infinite() {
        return if v > 0.0 {
            "\"inf\"".into()
        } else {
            "\"-inf\"".into()
        };
    }
    format!("{:.16e}", v)
}

fn escape(s: &str, out: &mut String) {
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

impl Json {
    fn write(&self, out: &mut String, depth: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Num(v) => out.push_str(&fmt_f64(*v)),
            Json::Str(s) => escape(s, out),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    item.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (k, (key, value)) in fields.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    indent(out, depth + 1);
                    escape(key, out);
                    out.push_str(": ");
                    value.write(out, depth + 1);
                }
                out.push('\n');
                indent(out, depth);
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Float cell for CSV rows (plain, never quoted; non-finite values spelled
/// out).
pub fn csv_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.16e}", v)
    }
}

/// Builds one RFC 4180 line from already-formatted fields (quotes any field
/// containing a comma, quote or newline).
pub fn csv_line(fields: &[String]) -> String {
    let mut out = String::new();
    for (k, f) in fields.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        if f.contains(',') || f.contains('"') || f.contains('\n') {
            out.push('"');
            out.push_str(&f.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(f);
        }
    }
    out.push_str("\r\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_17_significant_digits() {
        let s = fmt_f64(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        let parsed: f64 = s.parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }

    #[test]
    fn non_finite_floats_are_quoted() {
        assert_eq!(fmt_f64(f64::INFINITY), "\"inf\"");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "\"-inf\"");
        assert_eq!(fmt_f64(f64::NAN), "\"nan\"");
    }

    #[test]
    fn rendering_is_deterministic_and_ordered() {
        let doc = Json::Obj(vec![
            ("zeta", Json::Int(1)),
            ("alpha", Json::Num(0.5)),
            ("list", Json::Arr(vec![Json::Bool(true), Json::Null])),
        ]);
        let a = doc.render();
        let b = doc.render();
        assert_eq!(a, b);
        // insertion order is preserved, not sorted
        let zi = a.find("zeta").unwrap();
        let ai = a.find("alpha").unwrap();
        assert!(zi < ai);
        // output parses as ordinary JSON
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["zeta"], 1);
    }

    #[test]
    fn csv_quoting() {
        let line = csv_line(&["plain".into(), "with,comma".into(), "q\"uote".into()]);
        assert_eq!(line, "plain,\"with,comma\",\"q\"\"uote\"\r\n");
    }
}
