//! Expression parser for polynomial input.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'x' | 'y' | 'z' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. The result is expanded and must be homogeneous.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{Exponent, HomogeneousPolynomial, PolyError, Rat, Var};

pub(crate) const MAX_EXPONENT: u64 = 256;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut n = 0;
    while n < chars.len() {
        let (pos, c) = chars[n];
        n += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                let mut s = String::from(c);
                while n < chars.len() && chars[n].1.is_ascii_digit() {
                    s.push(chars[n].1);
                    n += 1;
                }
                Tok::Int(s.parse().expect("digits"))
            }
            'x' | 'X' => Tok::Var(Var::X),
            'y' | 'Y' => Tok::Var(Var::Y),
            'z' | 'Z' => Tok::Var(Var::Z),
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(PolyError::Syntax { pos, msg: format!("unexpected character '{other}'") })
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

/// Sparse polynomial with no homogeneity constraint, used while parsing.
type Sparse = BTreeMap<Exponent, Rat>;

fn constant(c: Rat) -> Sparse {
    let mut m = Sparse::new();
    if !c.is_zero() {
        m.insert([0, 0, 0], c);
    }
    m
}

fn add_into(acc: &mut Sparse, rhs: Sparse, negate: bool) {
    for (e, c) in rhs {
        let entry = acc.entry(e).or_insert_with(Rat::zero);
        if negate {
            *entry -= c;
        } else {
            *entry += c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            *out.entry(e).or_insert_with(Rat::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    add_into(&mut acc, t, false);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    add_into(&mut acc, t, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let rhs = self.unary()?;
            acc = mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Sparse, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                let inner = self.unary()?;
                Ok(inner.into_iter().map(|(e, c)| (e, -c)).collect())
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Sparse, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let n = match self.bump() {
                Some(Tok::Int(n)) => n,
                _ => {
                    self.at -= 1;
                    return self.err("expected a non-negative integer exponent");
                }
            };
            let n = n.to_u64().unwrap_or(u64::MAX);
            if n > MAX_EXPONENT {
                return Err(PolyError::ExponentTooLarge(n));
            }
            let mut acc = constant(Rat::one());
            for _ in 0..n {
                acc = mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse, PolyError> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => Ok(constant(Rat::new(n, d))),
                        Some(Tok::Int(_)) => {
                            self.at -= 1;
                            self.err("zero denominator")
                        }
                        _ => {
                            self.at -= 1;
                            self.err("expected an integer denominator")
                        }
                    }
                } else {
                    Ok(constant(Rat::from_integer(n)))
                }
            }
            Some(Tok::Var(v)) => {
                let mut e = [0; 3];
                e[v.index()] = 1;
                Ok(Sparse::from([(e, Rat::one())]))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.at -= 1;
                        self.err("expected ')'")
                    }
                }
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a number, variable or '('")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

fn to_homogeneous(s: Sparse) -> Result<HomogeneousPolynomial, PolyError> {
    let mut degrees: Vec<u32> = s.keys().map(|e| e[0] + e[1] + e[2]).collect();
    degrees.sort_unstable();
    degrees.dedup();
    match degrees.as_slice() {
        [] => Ok(HomogeneousPolynomial::zero(0)),
        [d] => HomogeneousPolynomial::from_terms(*d, s),
        _ => Err(PolyError::NonHomogeneous { found: degrees }),
    }
}

fn parser_for(text: &str) -> Result<Parser, PolyError> {
    Ok(Parser { toks: lex(text)?, at: 0, end: text.len() })
}

/// Parses and expands a homogeneous polynomial expression.
pub fn parse_polynomial(text: &str) -> Result<HomogeneousPolynomial, PolyError> {
    let mut p = parser_for(text)?;
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let s = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    to_homogeneous(s)
}

/// Splits a top-level product `A*B*...` into its expanded factors.
///
/// Returns a single factor when the expression is not a product at the top
/// level. Numeric factors are folded into the first polynomial factor.
pub fn parse_factors(text: &str) -> Result<Vec<HomogeneousPolynomial>, PolyError> {
    let mut p = parser_for(text)?;
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let mut factors = vec![p.unary()?];
    while let Some(Tok::Star) = p.peek() {
        p.bump();
        factors.push(p.unary()?);
    }
    if p.at < p.toks.len() {
        // not a pure product; fall back to a single factor
        return Ok(vec![parse_polynomial(text)?]);
    }
    let mut scalar = Rat::one();
    let mut out = Vec::new();
    for f in factors {
        let h = to_homogeneous(f)?;
        if h.degree() == 0 {
            scalar *= h.coeff(&[0, 0, 0]);
        } else {
            out.push(h);
        }
    }
    if out.is_empty() {
        return Ok(vec![HomogeneousPolynomial::monomial([0, 0, 0], scalar)]);
    }
    out[0] = out[0].scale(&scalar);
    Ok(out)
}
