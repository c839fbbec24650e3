//! Ring presentation language.
//!
//! ```text
//! file      := ["field" fieldspec ";"] "vars" ident ("," ident)* ";"
//!              "rels" poly ("," poly)* ";" ["trunc" INT ";"]
//! fieldspec := "Q" | "F" INT
//! poly      := ["-"] term (("+" | "-") term)*
//! term      := [INT "*"] factor ("*" factor)*
//! factor    := ident ["^" INT]
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end of
//! the line. The field defaults to `Q`; the truncation degree defaults to two
//! more than the largest relation degree.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::poly::{Exponents, Polynomial};
use crate::arith::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: relation has a nonzero constant term")]
    ConstantTerm { line: usize, col: usize },
    #[error("{0}")]
    Field(String),
}

/// A normalized ring presentation `k[vars]/(rels)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub relations: Vec<Polynomial>,
    pub truncation_degree: u32,
    /// False when the truncation degree was defaulted.
    pub explicit_truncation: bool,
}

impl Presentation {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn max_relation_degree(&self) -> u32 {
        self.relations.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Same presentation over another coefficient field.
    pub fn over(&self, field: FieldSpec) -> Presentation {
        Presentation {
            field,
            ..self.clone()
        }
    }

    /// Canonical text form, parseable by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.render(&self.variables).replace(' ', ""))
            .collect();
        let mut s = format!(
            "field {}; vars {}; rels {};",
            self.field,
            self.variables.join(","),
            rels.join(",")
        );
        if self.explicit_truncation {
            s.push_str(&format!(" trunc {};", self.truncation_degree));
        }
        s
    }

    /// Stable content hash of the canonical text (first 16 hex digits of
    /// SHA-256).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        hex::encode(&digest[..8])
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.render(&self.variables))
            .collect();
        write!(
            f,
            "{}[{}]/({})",
            match self.field {
                FieldSpec::Rationals => "Q".to_string(),
                FieldSpec::PrimeField(p) => format!("F_{p}"),
            },
            self.variables.join(","),
            rels.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                col: c0,
            });
        } else if ";,+-*^".contains(c) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Punct(c),
                line: l0,
                col: c0,
            });
        } else {
            return Err(ParseError::Syntax {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            self.err(&t, format!("expected `{c}`, found {}", describe(&t.tok)))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(()),
            other => self.err(&t, format!("expected `{kw}`, found {}", describe(other))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok(n.clone()),
            other => self.err(&t, format!("expected integer, found {}", describe(other))),
        }
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        let t = self.peek().clone();
        let n = self.int()?;
        u32::try_from(n).or_else(|_| self.err(&t, "integer out of range"))
    }

    fn field_spec(&mut self) -> Result<FieldSpec, ParseError> {
        let (name, t) = self.ident()?;
        match name.as_str() {
            "Q" => Ok(FieldSpec::Rationals),
            "F" => {
                let p = self.small_int()?;
                let spec = FieldSpec::PrimeField(p);
                spec.validate()
                    .map_err(|e| ParseError::Field(format!("{}:{}: {e}", t.line, t.col)))?;
                Ok(spec)
            }
            _ => {
                // allow F101 written without a space
                if let Some(rest) = name.strip_prefix('F') {
                    if let Ok(p) = rest.parse::<u32>() {
                        let spec = FieldSpec::PrimeField(p);
                        spec.validate()
                            .map_err(|e| ParseError::Field(format!("{}:{}: {e}", t.line, t.col)))?;
                        return Ok(spec);
                    }
                }
                self.err(&t, format!("unknown field `{name}` (expected Q or F <prime>)"))
            }
        }
    }

    fn poly(&mut self, vars: &[String]) -> Result<(Polynomial, Token), ParseError> {
        let start = self.peek().clone();
        let mut p = Polynomial::zero(vars.len());
        let mut sign = BigRational::one();
        if self.peek().tok == Tok::Punct('-') {
            self.next();
            sign = -sign;
        } else if self.peek().tok == Tok::Punct('+') {
            self.next();
        }
        loop {
            let (e, c) = self.term(vars)?;
            p.add_term(e, sign * c);
            match self.peek().tok {
                Tok::Punct('+') => {
                    self.next();
                    sign = BigRational::one();
                }
                Tok::Punct('-') => {
                    self.next();
                    sign = -BigRational::one();
                }
                _ => break,
            }
        }
        Ok((p, start))
    }

    fn term(&mut self, vars: &[String]) -> Result<(Exponents, BigRational), ParseError> {
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; vars.len()];
        if let Tok::Int(_) = self.peek().tok {
            coeff = BigRational::from_integer(self.int()?);
            if self.peek().tok != Tok::Punct('*') {
                return Ok((exps, coeff));
            }
            self.next();
        }
        loop {
            let (name, t) = self.ident()?;
            let idx = vars.iter().position(|v| *v == name).ok_or(ParseError::UnknownVariable {
                line: t.line,
                col: t.col,
                name,
            })?;
            let mut pow = 1;
            if self.peek().tok == Tok::Punct('^') {
                self.next();
                pow = self.small_int()?;
            }
            exps[idx] += pow;
            if self.peek().tok == Tok::Punct('*') {
                self.next();
                // integer factors after the first are folded into the coefficient
                if let Tok::Int(_) = self.peek().tok {
                    coeff *= BigRational::from_integer(self.int()?);
                    if self.peek().tok != Tok::Punct('*') {
                        break;
                    }
                    self.next();
                }
            } else {
                break;
            }
        }
        Ok((exps, coeff))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses the presentation language into a normalized [`Presentation`].
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut field = FieldSpec::Rationals;
    if p.at_keyword("field") {
        p.next();
        field = p.field_spec()?;
        p.expect_punct(';')?;
    }
    p.expect_keyword("vars")?;
    let mut variables: Vec<String> = Vec::new();
    loop {
        let (name, _) = p.ident()?;
        if !variables.contains(&name) {
            variables.push(name);
        }
        if p.peek().tok == Tok::Punct(',') {
            p.next();
        } else {
            break;
        }
    }
    p.expect_punct(';')?;
    p.expect_keyword("rels")?;
    let mut relations: Vec<Polynomial> = Vec::new();
    loop {
        let (rel, start) = p.poly(&variables)?;
        if !rel.constant_term().is_zero() {
            return Err(ParseError::ConstantTerm {
                line: start.line,
                col: start.col,
            });
        }
        if !rel.is_zero() && !relations.contains(&rel) {
            relations.push(rel);
        }
        if p.peek().tok == Tok::Punct(',') {
            p.next();
        } else {
            break;
        }
    }
    p.expect_punct(';')?;
    let mut truncation = None;
    if p.at_keyword("trunc") {
        p.next();
        let t = p.peek().clone();
        let d = p.small_int()?;
        if d < 2 {
            return p.err(&t, "truncation degree must be at least 2");
        }
        truncation = Some(d);
        p.expect_punct(';')?;
    }
    let t = p.next();
    if t.tok != Tok::Eof {
        return p.err(&t, format!("unexpected {} after presentation", describe(&t.tok)));
    }
    if relations.is_empty() {
        return Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg: "no nonzero relations".into(),
        });
    }
    let max_deg = relations.iter().map(Polynomial::degree).max().unwrap_or(0);
    Ok(Presentation {
        field,
        variables,
        relations,
        truncation_degree: truncation.unwrap_or(max_deg + 2),
        explicit_truncation: truncation.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_three_variable_example() {
        let p = parse_presentation("field Q; vars x,y,z; rels x^3,y^3,z^3,x*y,x*z^2;").unwrap();
        assert_eq!(p.variables.len(), 3);
        assert_eq!(p.relations.len(), 5);
        assert_eq!(p.truncation_degree, 5);
        assert_eq!(p.field, FieldSpec::Rationals);
    }

    #[test]
    fn parses_prime_field_hypersurface() {
        let p = parse_presentation("field F 101; vars x; rels x^2;").unwrap();
        assert_eq!(p.field, FieldSpec::PrimeField(101));
        assert_eq!(p.relations.len(), 1);
    }

    #[test]
    fn rejects_constant_term() {
        let e = parse_presentation("vars x; rels 1+x;").unwrap_err();
        assert!(matches!(e, ParseError::ConstantTerm { line: 1, col: 14 }), "{e:?}");
    }

    #[test]
    fn reports_unknown_variable_position() {
        let e = parse_presentation("vars x;\nrels x^2, y;").unwrap_err();
        assert_eq!(
            e,
            ParseError::UnknownVariable {
                line: 2,
                col: 11,
                name: "y".into()
            }
        );
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_presentation("vars x; rels x^^2;").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 1, col: 16, .. }), "{e:?}");
    }

    #[test]
    fn comments_coefficients_and_trunc() {
        let text = "# a comment\nfield F 7; vars x, y; # more\nrels x^2 - 3*x*y, y^3 + 2*x*y; trunc 6;";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.truncation_degree, 6);
        assert!(p.explicit_truncation);
        let again = parse_presentation(&p.to_text()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn duplicate_variables_and_relations_collapse() {
        let p = parse_presentation("vars x, y, x; rels x^2, y^2, x^2;").unwrap();
        assert_eq!(p.variables, vec!["x", "y"]);
        assert_eq!(p.relations.len(), 2);
    }
}
