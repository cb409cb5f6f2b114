//! Text grammar for polynomials and scalars.
//!
//! Variables are `z1..zN` (and `w1..wN` in operator-symbol contexts, or
//! block names like `z1_2` for polarized polynomials). Literals are
//! integers `3`, rationals `3/2`, the imaginary unit `i` and imaginary
//! literals `2i`, `2/3i`. Operators are `+ - * ^`; division is only
//! allowed by integer literals and of constant subexpressions, as in
//! `(1+2i)/3`. Implicit multiplication is a syntax error.
//!
//! [`MPoly::to_canonical_string`] emits graded-lex ordered terms that this
//! parser maps back to the identical polynomial.

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, VarNames};
use crate::scalar::{Rat, Scalar};
use num_bigint::BigInt;
use num_traits::Zero;

/// Hard limits applied while parsing untrusted input.
#[derive(Clone, Debug)]
pub struct ParseLimits {
    pub max_pow: u32,
    pub max_terms: usize,
    pub max_work: usize,
    pub max_depth: usize,
    pub max_vars: usize,
}

impl Default for ParseLimits {
    fn default() -> Self {
        ParseLimits {
            max_pow: 64,
            max_terms: 1 << 13,
            max_work: 1 << 18,
            max_depth: 64,
            max_vars: 64,
        }
    }
}

/// Variable universe the parser accepts.
#[derive(Clone, Debug)]
pub enum VarMode {
    /// `z1..zN`; `nvars` fixes N, otherwise the largest index used wins.
    Z { nvars: Option<usize> },
    /// `z1..zN, w1..wN` flattened as `[z..., w...]`.
    ZW { n: Option<usize> },
    /// Exact name list.
    Named(VarNames),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Imag(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().unwrap();
                // Optional /digits immediately following makes a rational
                // literal; an immediately following 'i' makes it imaginary.
                let mut value = Rat::from(num);
                if i < bytes.len() && bytes[i] == b'/' {
                    let mut j = i + 1;
                    let dstart = j;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j > dstart {
                        let den: BigInt = text[dstart..j].parse().unwrap();
                        if den.is_zero() {
                            return Err(err(dstart, "zero denominator"));
                        }
                        value /= Rat::from(den);
                        i = j;
                    }
                }
                if i < bytes.len() && bytes[i] == b'i' {
                    i += 1;
                    toks.push((start, Tok::Imag(value)));
                } else {
                    toks.push((start, Tok::Num(value)));
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &text[start..i];
                if name == "i" {
                    toks.push((start, Tok::Imag(Rat::from(BigInt::from(1)))));
                } else {
                    toks.push((start, Tok::Ident(name.to_string())));
                }
            }
            _ => return Err(err(i, format!("unexpected character '{}'", b as char))),
        }
    }
    Ok(toks)
}

/// Resolve the variable table for the given mode by pre-scanning tokens.
fn resolve_names(toks: &[(usize, Tok)], mode: &VarMode, limits: &ParseLimits) -> Result<VarNames> {
    match mode {
        VarMode::Named(names) => Ok(names.clone()),
        VarMode::Z { nvars } => {
            let mut max_z = 0usize;
            for (pos, t) in toks {
                if let Tok::Ident(name) = t {
                    let k = parse_indexed(name, "z").ok_or_else(|| {
                        err(*pos, format!("unknown variable '{}'", name))
                    })?;
                    max_z = max_z.max(k);
                }
            }
            let n = nvars.unwrap_or(max_z);
            if max_z > n {
                return Err(err(0, format!("variable z{} exceeds nvars={}", max_z, n)));
            }
            if n > limits.max_vars {
                return Err(err(0, "too many variables"));
            }
            Ok(VarNames::z(n))
        }
        VarMode::ZW { n } => {
            let mut max_i = 0usize;
            for (pos, t) in toks {
                if let Tok::Ident(name) = t {
                    let k = parse_indexed(name, "z")
                        .or_else(|| parse_indexed(name, "w"))
                        .ok_or_else(|| err(*pos, format!("unknown variable '{}'", name)))?;
                    max_i = max_i.max(k);
                }
            }
            let n = n.unwrap_or(max_i);
            if max_i > n {
                return Err(err(0, format!("variable index {} exceeds n={}", max_i, n)));
            }
            if 2 * n > limits.max_vars {
                return Err(err(0, "too many variables"));
            }
            Ok(VarNames::zw(n))
        }
    }
}

fn parse_indexed(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || rest.starts_with('0') {
        return None;
    }
    let k: usize = rest.parse().ok()?;
    if k == 0 {
        None
    } else {
        Some(k)
    }
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    names: VarNames,
    limits: ParseLimits,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn budget(&self, p: &MPoly) -> Result<()> {
        if p.num_terms() > self.limits.max_terms {
            return Err(err(self.here(), "term budget exceeded"));
        }
        Ok(())
    }

    fn checked_mul(&self, a: &MPoly, b: &MPoly) -> Result<MPoly> {
        if a.num_terms().saturating_mul(b.num_terms()) > self.limits.max_work {
            return Err(err(self.here(), "work budget exceeded"));
        }
        let p = a.mul(b).map_err(|e| err(self.here(), e.to_string()))?;
        self.budget(&p)?;
        Ok(p)
    }

    fn expr(&mut self, depth: usize) -> Result<MPoly> {
        if depth > self.limits.max_depth {
            return Err(err(self.here(), "nesting too deep"));
        }
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = self.term(depth)?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term(depth)?;
                    acc = acc.add(&t).unwrap();
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term(depth)?;
                    acc = acc.sub(&t).unwrap();
                }
                _ => break,
            }
            self.budget(&acc)?;
        }
        Ok(acc)
    }

    fn term(&mut self, depth: usize) -> Result<MPoly> {
        let mut acc = self.factor(depth)?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            let f = self.factor(depth)?;
            acc = self.checked_mul(&acc, &f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self, depth: usize) -> Result<MPoly> {
        let mut base = self.atom(depth)?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let p = self.here();
            let e = match self.bump() {
                Some(Tok::Num(r)) if r.denom() == &BigInt::from(1) => {
                    let n = r.numer();
                    if n.sign() == num_bigint::Sign::Minus {
                        return Err(err(p, "negative exponent"));
                    }
                    u32::try_from(n).map_err(|_| err(p, "exponent too large"))?
                }
                _ => return Err(err(p, "expected a natural number after '^'")),
            };
            if e > self.limits.max_pow {
                return Err(err(p, "exponent exceeds limit"));
            }
            // Square-and-multiply through the budget checks so adversarial
            // powers fail fast instead of expanding.
            let mut acc = MPoly::one(base.nvars());
            let mut sq = base;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.checked_mul(&acc, &sq)?;
                }
                e >>= 1;
                if e > 0 {
                    sq = self.checked_mul(&sq, &sq)?;
                }
            }
            base = acc;
        }
        if matches!(self.peek(), Some(Tok::Slash)) {
            self.bump();
            let p = self.here();
            let den = match self.bump() {
                Some(Tok::Num(r)) => Scalar::from_rat(r.clone()),
                Some(Tok::Imag(r)) => Scalar::new(Rat::zero(), r.clone()),
                _ => return Err(err(p, "expected a numeric literal after '/'")),
            };
            if den.is_zero() {
                return Err(err(p, "division by zero"));
            }
            if !base.is_constant() {
                return Err(err(p, "division is only allowed for constant expressions"));
            }
            base = base.scalar_mul(&den.inv());
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<MPoly> {
        let n = self.names.len();
        let p = self.here();
        match self.bump().cloned() {
            Some(Tok::Num(r)) => Ok(MPoly::constant(n, Scalar::from_rat(r))),
            Some(Tok::Imag(r)) => Ok(MPoly::constant(n, Scalar::new(Rat::zero(), r))),
            Some(Tok::Ident(name)) => match self.names.index_of(&name) {
                Some(idx) => Ok(MPoly::var(n, idx)),
                None => Err(err(p, format!("unknown variable '{}'", name))),
            },
            Some(Tok::Minus) => {
                let a = self.atom(depth + 1)?;
                Ok(a.neg())
            }
            Some(Tok::LParen) => {
                let inner = self.expr(depth + 1)?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err(self.here(), "expected ')'")),
                }
            }
            Some(t) => Err(err(p, format!("unexpected token {:?}", t))),
            None => Err(err(p, "unexpected end of input")),
        }
    }
}

/// Parse a polynomial in the given variable universe.
pub fn parse_mpoly_with(
    text: &str,
    mode: VarMode,
    limits: &ParseLimits,
) -> Result<(MPoly, VarNames)> {
    let toks = lex(text)?;
    let names = resolve_names(&toks, &mode, limits)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        names: names.clone(),
        limits: limits.clone(),
        end: text.len(),
    };
    let poly = p.expr(0)?;
    if p.pos != toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok((poly, names))
}

/// Parse with `z1..zN` variables, inferring N from the input.
pub fn parse_mpoly(text: &str) -> Result<(MPoly, VarNames)> {
    parse_mpoly_with(text, VarMode::Z { nvars: None }, &ParseLimits::default())
}

/// Parse with a fixed number of `z` variables.
pub fn parse_mpoly_n(text: &str, nvars: usize) -> Result<MPoly> {
    parse_mpoly_with(text, VarMode::Z { nvars: Some(nvars) }, &ParseLimits::default())
        .map(|(p, _)| p)
}

/// Parse a symbol polynomial in `z1..zn, w1..wn`.
pub fn parse_symbol_mpoly(text: &str) -> Result<(MPoly, VarNames)> {
    parse_mpoly_with(text, VarMode::ZW { n: None }, &ParseLimits::default())
}

/// Parse a constant expression into a scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let (p, _) = parse_mpoly_with(
        text,
        VarMode::Named(VarNames(Vec::new())),
        &ParseLimits::default(),
    )?;
    Ok(p.constant_term())
}
