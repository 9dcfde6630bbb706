//! Text syntax for fields, elements and polynomials.
//!
//! Polynomials: sums of products of numbers, symbols and parenthesized
//! factors, with `^` taking a nonnegative integer exponent. A number or a
//! closing parenthesis followed by a symbol or `(` multiplies implicitly, so
//! `3x^2`, `2(x+1)` and `(x+1)(x-1)` all parse. Division is allowed only by
//! nonzero constants, which covers coefficients such as `-4/7` or `(t+1)/t`.
//!
//! Fields: `Q`, `F<p>`, `F<p>(<var>)` and `<base>[<sym>]/(<monic poly in sym>)`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::poly::Poly;

const MAX_EXPONENT: u32 = 100_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Num(n), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                let ch = src[start..].chars().next().expect("nonempty");
                return Err(Error::parse(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    field: &'a Field,
    names: Vec<(String, Poly)>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, field: &'a Field, var: Option<&str>) -> Result<Self> {
        let mut names: Vec<(String, Poly)> = field
            .symbols()
            .into_iter()
            .map(|(name, e)| (name, Poly::constant(field, e)))
            .collect();
        if let Some(v) = var {
            if names.iter().any(|(n, _)| n == v) {
                return Err(Error::Malformed(format!(
                    "variable `{v}` clashes with a field symbol"
                )));
            }
            names.push((v.to_string(), Poly::x(field)));
        }
        Ok(Parser {
            toks: tokenize(src)?,
            at: 0,
            end: src.len(),
            field,
            names,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn finish(mut self) -> Result<Poly> {
        if self.toks.is_empty() {
            return Err(Error::parse(0, "empty input"));
        }
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(Error::parse(self.pos(), "unexpected trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let pos = self.pos();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    if d.deg() > 0 {
                        return Err(Error::parse(pos, "division by a non-constant"));
                    }
                    acc = acc.scale(&self.field.inv(&d.coeff(0))?);
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => {
                let e: u32 = n
                    .try_into()
                    .ok()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or_else(|| Error::parse(pos, "exponent too large"))?;
                Ok(pow_poly(&base, e))
            }
            _ => Err(Error::parse(pos, "expected a nonnegative integer exponent")),
        }
    }

    fn primary(&mut self) -> Result<Poly> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Poly::constant(self.field, self.field.from_bigint(&n))),
            Some(Tok::Ident(name)) => self.resolve(&name, pos),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::parse(close, "expected `)`")),
                }
            }
            Some(_) => Err(Error::parse(pos, "expected a number, symbol or `(`")),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }

    /// Resolves a name, splitting it into a product of known names if needed.
    fn resolve(&self, name: &str, pos: usize) -> Result<Poly> {
        if let Some((_, v)) = self.names.iter().find(|(n, _)| n == name) {
            return Ok(v.clone());
        }
        // split[i] holds a factorization of name[..i] into known names.
        let mut split: Vec<Option<Vec<usize>>> = vec![None; name.len() + 1];
        split[0] = Some(Vec::new());
        for i in 0..name.len() {
            let Some(prefix) = split[i].clone() else {
                continue;
            };
            for (k, (n, _)) in self.names.iter().enumerate() {
                if name[i..].starts_with(n.as_str()) && split[i + n.len()].is_none() {
                    let mut next = prefix.clone();
                    next.push(k);
                    split[i + n.len()] = Some(next);
                }
            }
        }
        match &split[name.len()] {
            Some(parts) => Ok(parts
                .iter()
                .fold(Poly::one(self.field), |acc, &k| acc.mul(&self.names[k].1))),
            None => Err(Error::UnknownSymbol {
                name: name.to_string(),
                pos,
            }),
        }
    }
}

fn pow_poly(base: &Poly, mut e: u32) -> Poly {
    let mut acc = Poly::one(base.field());
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b);
        }
        b = b.mul(&b);
        e >>= 1;
    }
    acc
}

/// Parses a polynomial in `x`.
pub fn parse_poly(src: &str, field: &Field) -> Result<Poly> {
    parse_poly_var(src, field, "x")
}

/// Parses a polynomial in the given variable.
pub fn parse_poly_var(src: &str, field: &Field, var: &str) -> Result<Poly> {
    Parser::new(src, field, Some(var))?.finish()
}

/// Parses a field element (no polynomial variable).
pub fn parse_elem(src: &str, field: &Field) -> Result<Elem> {
    let p = Parser::new(src, field, None)?.finish()?;
    Ok(p.coeff(0))
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphabetic() || c == '_')
}

/// Parses a field specification.
pub fn parse_field(spec: &str) -> Result<Field> {
    let spec = spec.trim();
    if let Some(open) = spec.find('[') {
        let base = parse_base(spec[..open].trim(), 0)?;
        let close = spec[open..]
            .find(']')
            .map(|i| open + i)
            .ok_or_else(|| Error::parse(open, "expected `]`"))?;
        let sym = spec[open + 1..close].trim();
        if !is_name(sym) {
            return Err(Error::parse(open + 1, "extension symbol must be a name"));
        }
        if sym == "x" || base.symbol() == Some(sym) {
            return Err(Error::parse(
                open + 1,
                format!("symbol `{sym}` is reserved"),
            ));
        }
        let rest = spec[close + 1..].trim_start();
        let rest_at = spec.len() - rest.len();
        let Some(body) = rest.strip_prefix('/') else {
            return Err(Error::parse(rest_at, "expected `/(` after the symbol"));
        };
        let body = body.trim_start();
        let body_at = spec.len() - body.len();
        let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) else {
            return Err(Error::parse(body_at, "modulus must be parenthesized"));
        };
        if spec[close + 1..].contains('[') {
            return Err(Error::TowerTooDeep);
        }
        let modulus = parse_poly_var(inner, &base, sym).map_err(|e| shift_pos(e, body_at + 1))?;
        return Field::extension(&base, modulus, sym);
    }
    parse_base(spec, 0)
}

fn parse_base(spec: &str, offset: usize) -> Result<Field> {
    if spec == "Q" {
        return Ok(Field::rationals());
    }
    let Some(rest) = spec.strip_prefix('F') else {
        return Err(Error::parse(offset, format!("unknown field `{spec}`")));
    };
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return Err(Error::parse(offset + 1, "expected a prime after `F`"));
    }
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::parse(offset + 1, "characteristic too large"))?;
    let tail = rest[digits.len()..].trim();
    if tail.is_empty() {
        return Field::prime(p);
    }
    let var = tail
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .map(str::trim)
        .filter(|v| is_name(v))
        .ok_or_else(|| Error::parse(offset + 1 + digits.len(), "expected `(<var>)`"))?;
    if var == "x" {
        return Err(Error::parse(
            offset + 2 + digits.len(),
            "variable `x` is reserved for polynomials",
        ));
    }
    Field::rational_functions(p, var)
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        Error::UnknownSymbol { name, pos } => Error::UnknownSymbol {
            name,
            pos: pos + by,
        },
        other => other,
    }
}
