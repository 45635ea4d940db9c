//! Textual syntax shared by the CLI and the JSON reports.
//!
//! Expressions are `+`-separated products of factors:
//!
//! ```text
//! 2*pi^-3*u1^2*u2 + u1 + 4
//! ```
//!
//! `pi` is the reserved uniformizer (integer exponents, possibly negative);
//! any other identifier is a ring variable (nonnegative exponents). A `-`
//! separator or leading `-` negates the following term. The printer emits
//! the canonical subset of this grammar (scalars in `0..p`, `+` only,
//! canonical term order) and parsing a printed value round-trips bit-exactly.

use std::collections::BTreeSet;

use crate::base::BaseElement;
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Vars};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Int(u64),
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            b'^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &src[start..i];
                let n = lit.parse::<u64>().map_err(|_| Error::Parse {
                    at: start,
                    msg: format!("integer literal `{lit}` too large"),
                })?;
                out.push((start, Token::Int(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    at: i,
                    msg: format!("unexpected character `{}`", b as char),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Token)>,
    pos: usize,
    p: u64,
    vars: &'a Vars,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(a, _)| *a)
            .unwrap_or(self.toks.len())
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<u64> {
        match self.bump() {
            Some(Token::Int(n)) => Ok(n),
            _ => Err(Error::Parse {
                at: self.at(),
                msg: format!("expected {what}"),
            }),
        }
    }

    /// exponent := INT | "-" INT
    fn signed_exponent(&mut self) -> Result<i64> {
        let neg = matches!(self.peek(), Some(Token::Minus));
        if neg {
            self.bump();
        }
        let n = self.expect_int("exponent")? as i64;
        Ok(if neg { -n } else { n })
    }

    /// term := factor ("*" factor)*
    fn term(&mut self, negate: bool) -> Result<MPoly> {
        let mut scalar = 1u64 % self.p;
        let mut pi_exp = 0i64;
        let mut exps = vec![0u32; self.vars.len()];
        loop {
            match self.bump() {
                Some(Token::Int(n)) => {
                    scalar = (scalar as u128 * (n % self.p) as u128 % self.p as u128) as u64;
                }
                Some(Token::Ident(name)) if name == "pi" => {
                    let e = if matches!(self.peek(), Some(Token::Caret)) {
                        self.bump();
                        self.signed_exponent()?
                    } else {
                        1
                    };
                    pi_exp += e;
                }
                Some(Token::Ident(name)) => {
                    let idx = self
                        .vars
                        .index(&name)
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                    let e = if matches!(self.peek(), Some(Token::Caret)) {
                        self.bump();
                        let n = self.expect_int("variable exponent")?;
                        u32::try_from(n).map_err(|_| Error::Parse {
                            at: self.at(),
                            msg: "variable exponent too large".into(),
                        })?
                    } else {
                        1
                    };
                    exps[idx] += e;
                }
                other => {
                    return Err(Error::Parse {
                        at: self.at(),
                        msg: format!("expected factor, got {other:?}"),
                    })
                }
            }
            if matches!(self.peek(), Some(Token::Star)) {
                self.bump();
            } else {
                break;
            }
        }
        let scalar = if negate {
            (self.p - scalar) % self.p
        } else {
            scalar
        };
        let coeff = BaseElement::monomial(self.p, scalar, pi_exp);
        Ok(MPoly::monomial(coeff, self.vars, exps))
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut negate = false;
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = self.term(negate)?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term(false)?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.add(&self.term(true)?);
                }
                None => return Ok(acc),
                _ => {
                    return Err(Error::Parse {
                        at: self.at(),
                        msg: "expected `+`, `-` or end of input".into(),
                    })
                }
            }
        }
    }
}

/// Parse an expression in the ambient ring `vars`.
pub fn parse_mpoly(p: u64, vars: &Vars, src: &str) -> Result<MPoly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            at: 0,
            msg: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        p,
        vars,
    };
    parser.expr()
}

/// Parse a base-ring element (only `pi` and integers allowed).
pub fn parse_base(p: u64, src: &str) -> Result<BaseElement> {
    let empty = crate::mpoly::VarSet::new(Vec::<String>::new())?;
    let poly = parse_mpoly(p, &empty, src)?;
    Ok(poly.constant_coefficient())
}

/// Collect the non-`pi` identifiers of an expression (CLI ring inference).
pub fn collect_idents(src: &str) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for (_, t) in tokenize(src)? {
        if let Token::Ident(name) = t {
            if name != "pi" {
                out.insert(name);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarSet;

    #[test]
    fn parses_spec_syntax() {
        let p = 5;
        let vars = VarSet::new(vec!["u1", "u2"]).unwrap();
        let q = parse_mpoly(p, &vars, "2*pi^-3*u1^2*u2").unwrap();
        assert_eq!(q.to_string(), "2*pi^-3*u1^2*u2");
        let r = parse_mpoly(p, &vars, " u1 + 7 * u2^2 + pi ").unwrap();
        assert_eq!(r.to_string(), "pi + 2*u2^2 + u1");
    }

    #[test]
    fn minus_and_coefficient_reduction() {
        let p = 3;
        let vars = VarSet::new(vec!["x"]).unwrap();
        let q = parse_mpoly(p, &vars, "-x + 5").unwrap();
        assert_eq!(q.to_string(), "2 + 2*x");
        // constant 5 reduces to 2 mod 3
        assert_eq!(parse_base(p, "5").unwrap(), BaseElement::scalar(p, 2));
    }

    #[test]
    fn round_trips_bit_exactly() {
        let p = 7;
        let vars = VarSet::new(vec!["w", "Z1", "Z2"]).unwrap();
        for src in [
            "0",
            "1",
            "pi",
            "3*pi^-2",
            "Z1 + w",
            "2*pi^4*Z1^2*Z2 + 6*w^3",
            "pi^-1 + 1 + pi + Z1*Z2",
        ] {
            let q = parse_mpoly(p, &vars, src).unwrap();
            let printed = q.to_string();
            assert_eq!(printed, src, "canonical input should print as itself");
            let q2 = parse_mpoly(p, &vars, &printed).unwrap();
            assert_eq!(q, q2);
        }
    }

    #[test]
    fn rejects_garbage() {
        let p = 3;
        let vars = VarSet::new(vec!["x"]).unwrap();
        assert!(parse_mpoly(p, &vars, "").is_err());
        assert!(parse_mpoly(p, &vars, "x +").is_err());
        assert!(parse_mpoly(p, &vars, "y").is_err());
        assert!(parse_mpoly(p, &vars, "x^-1").is_err());
        assert!(parse_mpoly(p, &vars, "x ? 1").is_err());
    }
}
