//! Minimal ordered JSON value with a byte-deterministic serializer: object
//! keys are emitted exactly in insertion order, numbers are integers or
//! exact fraction strings, and no whitespace depends on the environment.

use cychom::exactlin::{rat_str, Rat};
use cychom::SparseMat;

#[derive(Clone, Debug, PartialEq)]
pub enum J {
    Null,
    Bool(bool),
    Int(i64),
    Str(String),
    Arr(Vec<J>),
    Obj(Vec<(String, J)>),
}

impl J {
    pub fn uint(v: usize) -> J {
        J::Int(v as i64)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            J::Null => out.push_str("null"),
            J::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            J::Int(v) => out.push_str(&v.to_string()),
            J::Str(s) => write_str(out, s),
            J::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    newline(out, indent + 1);
                    item.write(out, indent + 1);
                }
                newline(out, indent);
                out.push(']');
            }
            J::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    newline(out, indent + 1);
                    write_str(out, k);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                newline(out, indent);
                out.push('}');
            }
        }
    }
}

fn newline(out: &mut String, indent: usize) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_str(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

pub fn frac(x: &Rat) -> J {
    J::Str(rat_str(x))
}

/// Serializes a matrix as shape plus column-major sparse triplets with
/// exact fraction strings.
pub fn matrix(m: &SparseMat) -> J {
    let mut entries = Vec::new();
    for c in 0..m.cols() {
        for (r, v) in m.col(c) {
            entries.push(J::Arr(vec![J::uint(*r), J::uint(c), frac(v)]));
        }
    }
    J::Obj(vec![
        ("rows".into(), J::uint(m.rows())),
        ("cols".into(), J::uint(m.cols())),
        ("entries".into(), J::Arr(entries)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use cychom::exactlin::{rat, ratio};

    #[test]
    fn stable_rendering() {
        let v = J::Obj(vec![
            ("b".into(), J::Int(1)),
            ("a".into(), J::Arr(vec![J::Bool(true), J::Null, frac(&ratio(1, 2))])),
        ]);
        assert_eq!(
            v.render(),
            "{\n  \"b\": 1,\n  \"a\": [\n    true,\n    null,\n    \"1/2\"\n  ]\n}"
        );
    }

    #[test]
    fn matrix_rendering() {
        let m = SparseMat::from_triplets(2, 2, [(1, 0, rat(3))]);
        let j = matrix(&m);
        assert!(j.render().contains("\"3\""));
    }
}
