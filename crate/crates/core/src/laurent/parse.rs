//! Expression syntax for Laurent polynomials.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' exponent)?
//! base   := variable | parameter | integer | '(' expr ')'
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! ```
//!
//! Variables are `x`, `y`, `z` and `x1`, `x2`, ...; any other identifier is a parameter.
//! Division must be exact in the Laurent ring.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::laurent::param::ParamPolynomial;
use crate::laurent::poly::LaurentPolynomial;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = vec![];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(err_at(text, i, &format!("unexpected character {c:?}")));
        }
    }
    Ok(Lexer { toks })
}

fn err_at(text: &str, offset: usize, msg: &str) -> Error {
    let before: String = text.chars().take(offset).collect();
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    Error::Parse { line, col, msg: msg.to_string() }
}

/// Index of a variable name (0-based), or `None` for a parameter.
pub fn variable_index(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => {
            let rest = name.strip_prefix('x')?;
            let k: usize = rest.parse().ok()?;
            (k >= 1 && !rest.starts_with('0')).then(|| k - 1)
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.text.chars().count(), |t| t.1)
    }

    fn err(&self, msg: &str) -> Error {
        err_at(self.text, self.offset(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPolynomial> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.offset();
                self.pos += 1;
                let d = self.factor()?;
                let q = acc.div_exact(&d).map_err(|e| err_at(self.text, at, &e.to_string()))?;
                acc = q.ok_or_else(|| err_at(self.text, at, "division is not exact in the Laurent ring"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPolynomial> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.eat('^') {
            let at = self.offset();
            let k = self.exponent()?;
            return base.pow_signed(k).map_err(|e| err_at(self.text, at, &e.to_string()));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let v = match self.peek() {
            Some(Tok::Num(n)) => {
                let n = i64::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?;
                self.pos += 1;
                n
            }
            _ => return Err(self.err("expected integer exponent")),
        };
        if paren && !self.eat(')') {
            if self.peek() == Some(&Tok::Sym('/')) {
                return Err(self.err("non-integer exponent"));
            }
            return Err(self.err("expected ')'"));
        }
        Ok(if neg { -v } else { v })
    }

    fn base(&mut self) -> Result<LaurentPolynomial> {
        let n = self.nvars;
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(LaurentPolynomial::constant(n, ParamPolynomial::constant(Rational::from_integer(v))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(match variable_index(&name) {
                    Some(i) => LaurentPolynomial::var(i, n),
                    None => LaurentPolynomial::constant(n, ParamPolynomial::var(&name)),
                })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(_) => Err(self.err("expected variable, parameter, number or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parse in at least `min_vars` variables (more if the text uses a higher variable).
pub fn parse_laurent_in(text: &str, min_vars: usize) -> Result<LaurentPolynomial> {
    let Lexer { toks } = lex(text)?;
    let used = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(s) => variable_index(s).map(|i| i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut p = Parser { text, toks, pos: 0, nvars: used.max(min_vars) };
    if p.toks.is_empty() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(e)
}

/// Parse; the number of variables is the highest one mentioned (at least 1).
pub fn parse_laurent(text: &str) -> Result<LaurentPolynomial> {
    parse_laurent_in(text, 1)
}

pub fn format_laurent(p: &LaurentPolynomial) -> String {
    p.to_string()
}
