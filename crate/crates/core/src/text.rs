//! Text grammar for scalars and generator expressions, shared by the CLI
//! and the table file format.
//!
//! Atoms: rational literals ("3", "-3/2"), parameters with optional integer
//! powers ("q12^-1", "p^2"), generators ("E(1,2)", "V(1)", "Vb(2)").
//! Products bind with "*" (juxtaposition of a parenthesized factor also
//! multiplies), "/" divides at the same precedence, and "+"/"-" bind last.
//! Whitespace is insignificant.

use crate::error::{Error, Result};
use crate::generator::{Expression, Generator, Word};
use crate::param::Param;
use crate::rational::Rat;
use crate::scalar::Scalar;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(Rat),
    Ident(String),
    Gen(Generator),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    toks: Vec<(usize, Tok)>,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
            toks: Vec::new(),
        };
        while lx.pos < lx.src.len() {
            let start = lx.pos;
            let c = lx.src[lx.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => lx.pos += 1,
                b'+' => lx.push1(Tok::Plus),
                b'*' => lx.push1(Tok::Star),
                b'/' => lx.push1(Tok::Slash),
                b'^' => lx.push1(Tok::Caret),
                b'(' => lx.push1(Tok::LParen),
                b')' => lx.push1(Tok::RParen),
                b'-' => lx.push1(Tok::Minus),
                b'0'..=b'9' => {
                    let n = lx.take_while(|c| c.is_ascii_digit());
                    // a rational literal "a/b" is one token when written
                    // digits-slash-digits with no space
                    if lx.pos < lx.src.len()
                        && lx.src[lx.pos] == b'/'
                        && lx.pos + 1 < lx.src.len()
                        && lx.src[lx.pos + 1].is_ascii_digit()
                    {
                        lx.pos += 1;
                        let d = lx.take_while(|c| c.is_ascii_digit());
                        let lit = format!("{n}/{d}");
                        let r = Rat::from_str(&lit)
                            .map_err(|_| syntax(start, format!("bad rational {lit:?}")))?;
                        lx.toks.push((start, Tok::Number(r)));
                    } else {
                        let r = Rat::from_str(&n)
                            .map_err(|_| syntax(start, format!("bad integer {n:?}")))?;
                        lx.toks.push((start, Tok::Number(r)));
                    }
                }
                b'a'..=b'z' | b'A'..=b'Z' => {
                    let word = lx.take_while(|c| c.is_ascii_alphanumeric());
                    // generator heads are followed by an index list
                    if matches!(word.as_str(), "E" | "V" | "Vb")
                        && lx.pos < lx.src.len()
                        && lx.src[lx.pos] == b'('
                    {
                        let close = lx.src[lx.pos..]
                            .iter()
                            .position(|&c| c == b')')
                            .ok_or_else(|| syntax(start, "unterminated generator index list"))?;
                        let text = std::str::from_utf8(&lx.src[start..lx.pos + close + 1])
                            .expect("ascii");
                        let g = Generator::parse(text)
                            .map_err(|_| syntax(start, format!("bad generator {text:?}")))?;
                        lx.pos += close + 1;
                        lx.toks.push((start, Tok::Gen(g)));
                    } else {
                        lx.toks.push((start, Tok::Ident(word)));
                    }
                }
                other => {
                    return Err(syntax(start, format!("unexpected character {:?}", other as char)))
                }
            }
        }
        Ok(lx.toks)
    }

    fn push1(&mut self, t: Tok) {
        self.toks.push((self.pos, t));
        self.pos += 1;
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && pred(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii")
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let off = self.offset();
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(syntax(off, format!("expected {t:?}, found {got:?}"))),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expression> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := ['-'] factor (('*'|'/') factor | juxtaposed '(' expr ')')*
    fn term(&mut self) -> Result<Expression> {
        let mut neg = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            neg = !neg;
        }
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    let off = self.offset();
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let scalar = expression_as_scalar(&rhs).ok_or_else(|| {
                        syntax(off, "division by a generator expression")
                    })?;
                    if scalar.is_zero() {
                        return Err(syntax(off, "division by zero"));
                    }
                    acc = acc.scale(&scalar.inv().expect("nonzero"));
                }
                Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => break,
            }
        }
        if neg {
            acc = acc.neg();
        }
        Ok(acc)
    }

    // factor := number | ident ['^' int] | generator | '(' expr ')' ['^' int]
    fn factor(&mut self) -> Result<Expression> {
        let off = self.offset();
        match self.next() {
            Some(Tok::Number(r)) => Ok(Expression::term(Word::unit(), Scalar::from_rat(r))),
            Some(Tok::Ident(name)) => {
                let p = Param::parse(&name)
                    .ok_or_else(|| syntax(off, format!("unknown parameter {name:?}")))?;
                let e = self.power()?;
                Ok(Expression::term(
                    Word::unit(),
                    Scalar::param(p).pow(e).expect("nonzero"),
                ))
            }
            Some(Tok::Gen(g)) => Ok(Expression::from_generator(g)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                let e = self.power()?;
                if e == 1 {
                    Ok(inner)
                } else {
                    let scalar = expression_as_scalar(&inner)
                        .ok_or_else(|| syntax(off, "powers apply to scalar factors only"))?;
                    Ok(Expression::term(
                        Word::unit(),
                        scalar.pow(e).map_err(|_| syntax(off, "inverse of zero"))?,
                    ))
                }
            }
            got => Err(syntax(off, format!("expected a factor, found {got:?}"))),
        }
    }

    fn power(&mut self) -> Result<i64> {
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(1);
        }
        self.pos += 1;
        let off = self.offset();
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Number(r)) if r.is_integer() => {
                let e: i64 = r
                    .numer()
                    .try_into()
                    .map_err(|_| syntax(off, "exponent out of range"))?;
                Ok(if neg { -e } else { e })
            }
            _ => Err(syntax(off, "expected an integer exponent")),
        }
    }
}

fn expression_as_scalar(e: &Expression) -> Option<Scalar> {
    if e.is_zero() {
        return Some(Scalar::zero());
    }
    if e.num_terms() == 1 {
        let (w, c) = e.terms().next().unwrap();
        if w.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

/// Parses a generator expression in the published grammar.
pub fn parse_expression(src: &str) -> Result<Expression> {
    let toks = Lexer::run(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(e)
}

/// Parses a scalar (no generators allowed).
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    let e = parse_expression(src)?;
    expression_as_scalar(&e).ok_or_else(|| syntax(0, "expected a scalar, found generators"))
}

/// Validates that every generator index in an expression lies within 1..=N.
pub fn check_indices(e: &Expression, n: u8) -> Result<()> {
    for (w, _) in e.terms() {
        for g in &w.0 {
            if !g.indices_within(n) {
                return Err(Error::IndexOutOfRange(g.to_string(), n));
            }
        }
    }
    Ok(())
}

/// Deterministic rendering of an expression; parses back to an equal value.
pub fn render_expression(e: &Expression) -> String {
    e.to_string()
}

pub fn render_scalar(s: &Scalar) -> String {
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_sums() {
        let e = parse_expression("V(2)*V(1)").unwrap();
        assert_eq!(e.num_terms(), 1);
        let (w, c) = e.terms().next().unwrap();
        assert_eq!(*w, Word::of(&[Generator::V(2), Generator::V(1)]));
        assert!(c.is_one());

        let e = parse_expression("E(1,2)*Vb(1) - 3/2*V(1)").unwrap();
        assert_eq!(e.num_terms(), 2);
        let c = e.coeff(&Word::single(Generator::V(1))).unwrap();
        assert_eq!(*c, Scalar::from_rat(Rat::new(-3, 2)));
    }

    #[test]
    fn index_validation() {
        let e = parse_expression("V(3)").unwrap();
        match check_indices(&e, 2) {
            Err(Error::IndexOutOfRange(g, 2)) => assert_eq!(g, "V(3)"),
            other => panic!("expected index error, got {other:?}"),
        }
    }

    #[test]
    fn scalar_literals() {
        let s = parse_scalar("q12^-1 * 3/2").unwrap();
        let expected = &Scalar::from_rat(Rat::new(3, 2))
            * &Scalar::param(Param::QPair(1, 2)).inv().unwrap();
        assert_eq!(s, expected);

        let s = parse_scalar("(1 - q^3)/(1 - q)").unwrap();
        let q = Scalar::param(Param::Q);
        let geo = &(&Scalar::one() + &q) + &q.pow(2).unwrap();
        assert_eq!(s, geo);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_expression("V(1) + @") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_expression("W(1)").is_err());
        assert!(parse_expression("V(1").is_err());
    }

    #[test]
    fn rendering_round_trips() {
        for src in [
            "V(2)*V(1)",
            "E(1,2)*Vb(1) - 3/2*V(1)",
            "2*E(1,1) + q12*Vb(1)*V(2) - 1",
            "(1 - q)*V(1) + p^2*r^-1*E(2,1)",
        ] {
            let e = parse_expression(src).unwrap();
            let rendered = render_expression(&e);
            let back = parse_expression(&rendered).unwrap();
            assert_eq!(e, back, "round trip through {rendered:?}");
        }
    }
}
