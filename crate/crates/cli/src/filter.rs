//! Boolean filters over scan verdicts: `star && !golod && !fibre`.

use anyhow::{bail, Result};

pub const NAMES: [&str; 7] = [
    "golod",
    "star",
    "fibre",
    "burch",
    "exceptional",
    "gorenstein",
    "hypersurface",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// `None` when some verdict it needs is undecided.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<bool>) -> Option<bool> {
        match self {
            Expr::Var(v) => lookup(v),
            Expr::Not(e) => e.eval(lookup).map(|b| !b),
            Expr::And(a, b) => Some(a.eval(lookup)? && b.eval(lookup)?),
            Expr::Or(a, b) => Some(a.eval(lookup)? || b.eval(lookup)?),
        }
    }

    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Expr::Not(e) => e.vars(out),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        match c {
            ' ' | '\t' => {}
            '!' => out.push(Tok::Not),
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            '&' | '|' => {
                if it.next().map(|(_, d)| d) != Some(c) {
                    bail!("expected `{c}{c}` at column {}", i + 1);
                }
                out.push(if c == '&' { Tok::And } else { Tok::Or });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = c.to_string();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(name));
            }
            _ => bail!("unexpected `{c}` at column {}", i + 1),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut e = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            e = Expr::Or(Box::new(e), Box::new(self.and()?));
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            e = Expr::And(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        let t = self.peek().cloned();
        self.pos += 1;
        match t {
            Some(Tok::Not) => Ok(Expr::Not(Box::new(self.unary()?))),
            Some(Tok::Open) => {
                let e = self.or()?;
                if self.peek() != Some(&Tok::Close) {
                    bail!("missing `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if !NAMES.contains(&name.as_str()) {
                    bail!("unknown verdict `{name}` (known: {})", NAMES.join(", "));
                }
                Ok(Expr::Var(name))
            }
            Some(t) => bail!("unexpected {t:?}"),
            None => bail!("unexpected end of filter"),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
    };
    let e = p.or()?;
    if p.pos != p.toks.len() {
        bail!("trailing input in filter");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_evaluates() {
        let e = parse("star && !golod && !fibre").unwrap();
        let env = |v: &str| Some(v == "star");
        assert_eq!(e.eval(&env), Some(true));
        let e = parse("!(golod || burch)").unwrap();
        assert_eq!(e.eval(&|v: &str| Some(v == "burch")), Some(false));
        assert_eq!(e.eval(&|_: &str| None), None);
        let mut vars = Vec::new();
        parse("golod && (star || golod)").unwrap().vars(&mut vars);
        assert_eq!(vars, ["golod", "star"]);
    }

    #[test]
    fn rejects_bad_filters() {
        assert!(parse("star &").is_err());
        assert!(parse("star && nope").is_err());
        assert!(parse("(star").is_err());
        assert!(parse("star golod").is_err());
    }
}
