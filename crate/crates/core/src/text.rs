//! Shared polynomial text syntax: signed sums of `c*v^e*...` terms.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rat;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    offset: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            msg: msg.into(),
        })
    }

    fn small_exponent(&mut self) -> Result<u32> {
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                u32::try_from(n).or_else(|_| self.err("exponent out of range"))
            }
            _ => self.err("expected an exponent"),
        }
    }

    fn factor(&mut self, coeff: &mut Rat, exps: &mut [u32]) -> Result<()> {
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                let mut value = Rat::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.toks.get(self.pos).cloned() {
                        Some((_, Tok::Num(d))) if !d.is_zero() => {
                            self.pos += 1;
                            value /= Rat::from_integer(d);
                        }
                        Some((_, Tok::Num(_))) => return self.err("zero denominator"),
                        _ => return self.err("expected a denominator"),
                    }
                }
                *coeff *= value;
                Ok(())
            }
            Some((_, Tok::Ident(name))) => {
                let Some(idx) = self.vars.iter().position(|v| *v == name) else {
                    return self.err(format!(
                        "unknown variable {name:?} (expected one of {:?})",
                        self.vars
                    ));
                };
                self.pos += 1;
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.small_exponent()?
                } else {
                    1
                };
                exps[idx] += e;
                Ok(())
            }
            _ => self.err("expected a number or a variable"),
        }
    }

    fn term(&mut self, sign: bool) -> Result<(Rat, Vec<u32>)> {
        let mut coeff = if sign { -Rat::one() } else { Rat::one() };
        let mut exps = vec![0; self.vars.len()];
        self.factor(&mut coeff, &mut exps)?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            self.factor(&mut coeff, &mut exps)?;
        }
        Ok((coeff, exps))
    }
}

/// Parses a polynomial over the given variable names into raw (possibly
/// repeated) terms.
pub(crate) fn parse_terms(src: &str, vars: &[&str]) -> Result<Vec<(Rat, Vec<u32>)>> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        vars,
        len: src.len(),
    };
    if p.toks.is_empty() {
        return p.err("empty polynomial");
    }
    let mut terms = Vec::new();
    let mut negative = match p.peek() {
        Some(Tok::Minus) => {
            p.pos += 1;
            true
        }
        Some(Tok::Plus) => {
            p.pos += 1;
            false
        }
        _ => false,
    };
    loop {
        terms.push(p.term(negative)?);
        match p.peek() {
            None => break,
            Some(Tok::Plus) => negative = false,
            Some(Tok::Minus) => negative = true,
            Some(_) => return p.err("expected '+' or '-'"),
        }
        p.pos += 1;
    }
    Ok(terms)
}

/// Renders terms (already in display order, nonzero coefficients) using the
/// canonical spacing `a - b + c`.
pub(crate) fn render_terms<'a, I>(terms: I, vars: &[&str]) -> String
where
    I: IntoIterator<Item = (&'a Rat, &'a [u32])>,
{
    let mut out = String::new();
    for (k, (c, exps)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mag = c.abs();
        let mut factors: Vec<String> = Vec::new();
        let constant = exps.iter().all(|&e| e == 0);
        if !mag.is_one() || constant {
            factors.push(mag.to_string());
        }
        for (name, &e) in vars.iter().zip(exps) {
            match e {
                0 => {}
                1 => factors.push((*name).to_string()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        let _ = write!(out, "{}", factors.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_rational_terms() {
        let t = parse_terms(" -3/4*x^2*y + x - 2 ", &["x", "y"]).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].0, Rat::new((-3).into(), 4.into()));
        assert_eq!(t[0].1, vec![2, 1]);
        assert_eq!(t[2].0, Rat::from_integer((-2).into()));
        assert_eq!(t[2].1, vec![0, 0]);
    }

    #[test]
    fn repeated_factors_multiply() {
        let t = parse_terms("2*x*x*3", &["x"]).unwrap();
        assert_eq!(t, vec![(Rat::from_integer(6.into()), vec![2])]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("", &["x"]).is_err());
        assert!(parse_terms("x +", &["x"]).is_err());
        assert!(parse_terms("z", &["x"]).is_err());
        assert!(parse_terms("1/0", &["x"]).is_err());
        assert!(parse_terms("x y", &["x", "y"]).is_err());
        assert!(parse_terms("x^", &["x"]).is_err());
    }
}
