//! Input documents: JSON algebra / tower specifications and ideal
//! specifications on the command line.
//!
//! Document grammar (JSON):
//!
//! ```json
//! {"kind": "univariate", "vars": ["x"], "relation": "x^2"}
//! {"kind": "monomial", "vars": ["x", "y"], "gens": ["x^2", "y^2"]}
//! {"kind": "tensor", "factors": [<doc>, <doc>, ...]}
//! {"kind": "structure", "labels": ["1", "e"], "mult": [[<vec>, ...], ...]}
//! {"kind": "tower", "vars": ["x"], "relation": "x"}
//! {"kind": "tower", "vars": ["x", "y"], "gens": ["x", "y"]}
//! ```
//!
//! Polynomial strings use integer coefficients, `^` powers, optional `*`
//! products, and `+` / `-`. For `structure`, `mult[i][j]` is the product
//! e_i·e_j as a list of `[basis_index, "p/q"]` pairs. A `tower` document
//! describes S/I^m truncation levels and is only accepted by `prohkr`.

use cychom::algebras::{FinAlgebra, IdealSpan, TowerSpec};
use cychom::exactlin::{Rat, SparseVec};
use cychom::{Error, Result};
use serde_json::Value;

use crate::poly::{parse_monomial, parse_poly, univariate_coeffs};

pub enum Doc {
    Algebra(FinAlgebra),
    Tower(TowerSpec),
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn obj<'v>(v: &'v Value, what: &str) -> Result<&'v serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| input(format!("{what} must be a JSON object")))
}

fn field<'v>(m: &'v serde_json::Map<String, Value>, key: &str) -> Result<&'v Value> {
    m.get(key).ok_or_else(|| input(format!("missing field \"{key}\"")))
}

fn str_field(m: &serde_json::Map<String, Value>, key: &str) -> Result<String> {
    field(m, key)?
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| input(format!("field \"{key}\" must be a string")))
}

fn str_array(m: &serde_json::Map<String, Value>, key: &str) -> Result<Vec<String>> {
    field(m, key)?
        .as_array()
        .ok_or_else(|| input(format!("field \"{key}\" must be an array")))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(|s| s.to_string())
                .ok_or_else(|| input(format!("field \"{key}\" must contain strings")))
        })
        .collect()
}

fn parse_rat(s: &str) -> Result<Rat> {
    let mk = |n: &str| -> Result<num::BigInt> {
        n.trim()
            .parse()
            .map_err(|_| input(format!("'{s}' is not an exact rational")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = mk(d)?;
            if den == num::BigInt::from(0) {
                return Err(input(format!("'{s}' has a zero denominator")));
            }
            Ok(Rat::new(mk(n)?, den))
        }
        None => Ok(Rat::from_integer(mk(s)?)),
    }
}

fn parse_value(v: &Value) -> Result<Doc> {
    let m = obj(v, "algebra document")?;
    let kind = str_field(m, "kind")?;
    match kind.as_str() {
        "univariate" => {
            let vars = str_array(m, "vars")?;
            if vars.len() != 1 {
                return Err(input("kind \"univariate\" requires exactly one variable"));
            }
            let rel = str_field(m, "relation")?;
            let p = parse_poly(&rel, &vars).map_err(|e| input(e.to_string()))?;
            let coeffs = univariate_coeffs(&p);
            Ok(Doc::Algebra(FinAlgebra::univariate_quotient(&vars[0], &coeffs)?))
        }
        "monomial" => {
            let vars = str_array(m, "vars")?;
            let gens = str_array(m, "gens")?;
            let exps: Result<Vec<Vec<u32>>> = gens
                .iter()
                .map(|g| parse_monomial(g, &vars).map_err(|e| input(e.to_string())))
                .collect();
            Ok(Doc::Algebra(FinAlgebra::monomial_quotient(&vars, &exps?)?))
        }
        "tensor" => {
            let factors = field(m, "factors")?
                .as_array()
                .ok_or_else(|| input("field \"factors\" must be an array"))?;
            if factors.is_empty() {
                return Err(input("kind \"tensor\" requires at least one factor"));
            }
            let mut acc: Option<FinAlgebra> = None;
            for f in factors {
                let Doc::Algebra(a) = parse_value(f)? else {
                    return Err(input("tensor factors must be algebra documents"));
                };
                acc = Some(match acc {
                    None => a,
                    Some(prev) => FinAlgebra::tensor(&prev, &a)?,
                });
            }
            Ok(Doc::Algebra(acc.unwrap()))
        }
        "structure" => {
            let labels = str_array(m, "labels")?;
            let dim = labels.len();
            let rows = field(m, "mult")?
                .as_array()
                .ok_or_else(|| input("field \"mult\" must be an array"))?;
            if rows.len() != dim {
                return Err(input(format!("\"mult\" must have {dim} rows")));
            }
            let mut mult: Vec<Vec<SparseVec>> = Vec::with_capacity(dim);
            for row in rows {
                let row = row
                    .as_array()
                    .ok_or_else(|| input("\"mult\" rows must be arrays"))?;
                if row.len() != dim {
                    return Err(input(format!("\"mult\" rows must have {dim} entries")));
                }
                let mut out_row = Vec::with_capacity(dim);
                for cell in row {
                    let cell = cell
                        .as_array()
                        .ok_or_else(|| input("\"mult\" cells must be arrays of [index, coeff]"))?;
                    let mut vec: SparseVec = Vec::new();
                    for pair in cell {
                        let pair = pair
                            .as_array()
                            .filter(|p| p.len() == 2)
                            .ok_or_else(|| input("\"mult\" entries must be [index, coeff] pairs"))?;
                        let idx = pair[0]
                            .as_u64()
                            .filter(|&i| (i as usize) < dim)
                            .ok_or_else(|| input("basis index out of range in \"mult\""))?
                            as usize;
                        let c = pair[1]
                            .as_str()
                            .ok_or_else(|| input("coefficients must be fraction strings"))?;
                        vec.push((idx, parse_rat(c)?));
                    }
                    vec.sort_by_key(|e| e.0);
                    out_row.push(vec);
                }
                mult.push(out_row);
            }
            Ok(Doc::Algebra(FinAlgebra::from_structure_constants(labels, mult)?))
        }
        "tower" => {
            let vars = str_array(m, "vars")?;
            if m.contains_key("relation") {
                if vars.len() != 1 {
                    return Err(input("a univariate tower requires exactly one variable"));
                }
                let rel = str_field(m, "relation")?;
                let p = parse_poly(&rel, &vars).map_err(|e| input(e.to_string()))?;
                Ok(Doc::Tower(TowerSpec::Univariate {
                    var: vars[0].clone(),
                    relation: univariate_coeffs(&p),
                }))
            } else {
                let gens = str_array(m, "gens")?;
                let exps: Result<Vec<Vec<u32>>> = gens
                    .iter()
                    .map(|g| parse_monomial(g, &vars).map_err(|e| input(e.to_string())))
                    .collect();
                Ok(Doc::Tower(TowerSpec::Monomial { vars, gens: exps? }))
            }
        }
        other => Err(input(format!(
            "unknown kind \"{other}\" (expected univariate, monomial, tensor, structure or tower)"
        ))),
    }
}

pub fn parse_doc(text: &str) -> Result<Doc> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| input(format!("invalid JSON: {e}")))?;
    parse_value(&v)
}

pub fn algebra_from_doc(text: &str) -> Result<FinAlgebra> {
    match parse_doc(text)? {
        Doc::Algebra(a) => Ok(a),
        Doc::Tower(_) => Err(input(
            "this command needs an algebra document; a tower document only works with prohkr",
        )),
    }
}

pub fn tower_from_doc(text: &str) -> Result<TowerSpec> {
    match parse_doc(text)? {
        Doc::Tower(t) => Ok(t),
        Doc::Algebra(_) => Err(input("prohkr needs a tower document (kind \"tower\")")),
    }
}

/// Parses a comma-separated list of polynomial generators into the ideal
/// they generate in `a`.
pub fn parse_ideal(a: &FinAlgebra, spec: &str) -> Result<IdealSpan> {
    let mut gens: Vec<SparseVec> = Vec::new();
    for part in spec.split(',') {
        let part = part.trim().trim_start_matches('(').trim_end_matches(')');
        if part.is_empty() {
            continue;
        }
        let p = parse_poly(part, &a.vars().to_vec())
            .map_err(|e| input(format!("ideal generator '{part}': {e}")))?;
        gens.push(a.reduce_poly(&p));
    }
    if gens.is_empty() {
        return Err(input("empty ideal specification"));
    }
    IdealSpan::generated(a.clone(), &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_doc() {
        let a =
            algebra_from_doc(r#"{"kind":"univariate","vars":["x"],"relation":"x^2"}"#).unwrap();
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn monomial_and_tensor_docs() {
        let a = algebra_from_doc(
            r#"{"kind":"monomial","vars":["x","y"],"gens":["x^2","y^2"]}"#,
        )
        .unwrap();
        assert_eq!(a.dim(), 4);
        let t = algebra_from_doc(
            r#"{"kind":"tensor","factors":[
                {"kind":"univariate","vars":["x"],"relation":"x^2"},
                {"kind":"univariate","vars":["y"],"relation":"y^3"}]}"#,
        )
        .unwrap();
        assert_eq!(t.dim(), 6);
    }

    #[test]
    fn structure_doc_and_corruption() {
        let good = r#"{"kind":"structure","labels":["1","e"],
            "mult":[[[[0,"1"]],[[1,"1"]]],[[[1,"1"]],[]]]}"#;
        let a = algebra_from_doc(good).unwrap();
        assert_eq!(a.dim(), 2);
        // corrupt one structure constant: e*1 = 1 breaks unitality
        let bad = r#"{"kind":"structure","labels":["1","e"],
            "mult":[[[[0,"1"]],[[1,"1"]]],[[[0,"1"]],[]]]}"#;
        assert!(algebra_from_doc(bad).is_err());
    }

    #[test]
    fn parse_error_reports_position() {
        let e = algebra_from_doc(r#"{"kind":"univariate","vars":["x"],"relation":"x^"}"#)
            .err()
            .expect("parse must fail");
        let msg = format!("{e}");
        assert!(msg.contains("column"), "{msg}");
    }

    #[test]
    fn ideal_spec() {
        let a =
            algebra_from_doc(r#"{"kind":"univariate","vars":["x"],"relation":"x^3"}"#).unwrap();
        let i = parse_ideal(&a, "(x)").unwrap();
        assert_eq!(i.dim(), 2);
        let i = parse_ideal(&a, "x^2").unwrap();
        assert_eq!(i.dim(), 1);
    }
}
