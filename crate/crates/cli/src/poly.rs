//! Parser for the polynomial grammar used in input documents and ideal
//! specifications: integer coefficients, variables with `^` powers, `*`
//! products, and `+` / `-` sums. Errors cite line and column.
//!
//! Grammar:
//! ```text
//! poly   := ['+'|'-'] term { ('+'|'-') term }
//! term   := factor { '*' factor }
//! factor := integer | variable ['^' integer]
//! ```

use cychom::algebras::Poly;
use cychom::exactlin::{rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErr {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseErr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseErr {
        ParseErr { line: self.line, col: self.col, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseErr> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                '+' => {
                    self.bump();
                    Tok::Plus
                }
                '-' | '−' => {
                    self.bump();
                    Tok::Minus
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '^' => {
                    self.bump();
                    Tok::Caret
                }
                '0'..='9' => {
                    let mut n: i64 = 0;
                    while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        let d = self.bump().unwrap();
                        n = n
                            .checked_mul(10)
                            .and_then(|x| x.checked_add((d as u8 - b'0') as i64))
                            .ok_or_else(|| self.err("integer literal too large"))?;
                    }
                    Tok::Int(n)
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut name = String::new();
                    while matches!(self.peek(), Some(d) if d.is_alphanumeric() || d == '_') {
                        name.push(self.bump().unwrap());
                    }
                    Tok::Var(name)
                }
                other => return Err(self.err(format!("unexpected character '{other}'"))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end_line: usize,
    end_col: usize,
    vars: Vec<String>,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn err(&self, msg: impl Into<String>) -> ParseErr {
        let (line, col) = self.here();
        ParseErr { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn poly(&mut self) -> Result<Poly, ParseErr> {
        let mut out: Poly = Vec::new();
        let mut sign = rat(1);
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                sign = rat(-1);
            }
            _ => {}
        }
        loop {
            let (c, exps) = self.term()?;
            push_term(&mut out, c * &sign, exps);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    sign = rat(1);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    sign = rat(-1);
                }
                None => break,
                Some(t) => return Err(self.err(format!("expected '+' or '-', found {t:?}"))),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Rat, Vec<u32>), ParseErr> {
        let mut coeff = rat(1);
        let mut exps = vec![0u32; self.vars.len()];
        let mut first = true;
        loop {
            match self.peek() {
                Some(Tok::Int(_)) => {
                    let Some(Tok::Int(n)) = self.bump() else { unreachable!() };
                    coeff *= rat(n);
                }
                Some(Tok::Var(_)) => {
                    let (line, col) = self.here();
                    let Some(Tok::Var(name)) = self.bump() else { unreachable!() };
                    let vi = self
                        .vars
                        .iter()
                        .position(|v| v == &name)
                        .ok_or(ParseErr {
                            line,
                            col,
                            msg: format!("unknown variable '{name}'"),
                        })?;
                    let mut e: u32 = 1;
                    if matches!(self.peek(), Some(Tok::Caret)) {
                        self.bump();
                        match self.bump() {
                            Some(Tok::Int(n)) if n >= 0 && n <= u32::MAX as i64 => {
                                e = n as u32;
                            }
                            _ => return Err(self.err("expected exponent after '^'")),
                        }
                    }
                    exps[vi] = exps[vi]
                        .checked_add(e)
                        .ok_or_else(|| self.err("exponent overflow"))?;
                }
                _ if first => return Err(self.err("expected a coefficient or variable")),
                _ => break,
            }
            first = false;
            // an explicit '*' is optional between factors
            if matches!(self.peek(), Some(Tok::Star)) {
                self.bump();
                first = true; // a factor must follow
            } else if !matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Var(_))) {
                break;
            }
        }
        Ok((coeff, exps))
    }
}

fn push_term(out: &mut Poly, c: Rat, exps: Vec<u32>) {
    use num::Zero;
    if let Some((cc, _)) = out.iter_mut().find(|(_, e)| e == &exps) {
        *cc += c;
    } else {
        out.push((c, exps));
    }
    out.retain(|(c, _)| !c.is_zero());
}

/// Parses a polynomial over the given variables.
pub fn parse_poly(src: &str, vars: &[String]) -> Result<Poly, ParseErr> {
    let lexer = Lexer::new(src);
    let (end_line, end_col) = {
        let mut probe = Lexer::new(src);
        while probe.bump().is_some() {}
        (probe.line, probe.col)
    };
    let toks = lexer.tokens()?;
    let mut p = Parser { toks, pos: 0, end_line, end_col, vars: vars.to_vec() };
    if p.peek().is_none() {
        return Err(p.err("empty polynomial"));
    }
    p.poly()
}

/// Parses a single monomial with coefficient 1 (for monomial ideal
/// generators), returning the exponent vector.
pub fn parse_monomial(src: &str, vars: &[String]) -> Result<Vec<u32>, ParseErr> {
    let p = parse_poly(src, vars)?;
    use num::One;
    match p.as_slice() {
        [(c, exps)] if c.is_one() => Ok(exps.clone()),
        _ => Err(ParseErr {
            line: 1,
            col: 1,
            msg: format!("'{src}' is not a monomial with coefficient 1"),
        }),
    }
}

/// Ascending coefficient vector of a univariate polynomial.
pub fn univariate_coeffs(p: &Poly) -> Vec<Rat> {
    use num::Zero;
    let deg = p.iter().map(|(_, e)| e.first().copied().unwrap_or(0)).max().unwrap_or(0);
    let mut out = vec![Rat::zero(); deg as usize + 1];
    for (c, e) in p {
        out[e.first().copied().unwrap_or(0) as usize] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn univariate_examples() {
        let p = parse_poly("x^2 + 1", &v(&["x"])).unwrap();
        assert_eq!(univariate_coeffs(&p), vec![rat(1), rat(0), rat(1)]);
        let p = parse_poly("x^3", &v(&["x"])).unwrap();
        assert_eq!(univariate_coeffs(&p), vec![rat(0), rat(0), rat(0), rat(1)]);
        let p = parse_poly("-x + 2", &v(&["x"])).unwrap();
        assert_eq!(univariate_coeffs(&p), vec![rat(2), rat(-1)]);
    }

    #[test]
    fn multivariate_and_errors() {
        let p = parse_poly("2*x*y^2 - y", &v(&["x", "y"])).unwrap();
        assert_eq!(p.len(), 2);
        let e = parse_poly("x + z", &v(&["x", "y"])).unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.msg.contains("unknown variable"));
        let e = parse_poly("x +", &v(&["x"])).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_poly("x\n+ $", &v(&["x"])).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn monomials() {
        assert_eq!(parse_monomial("x^2", &v(&["x", "y"])).unwrap(), vec![2, 0]);
        assert!(parse_monomial("2*x", &v(&["x", "y"])).is_err());
        assert!(parse_monomial("x + y", &v(&["x", "y"])).is_err());
    }
}
