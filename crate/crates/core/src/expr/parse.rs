//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := base ("^" integer)?
//! base   := number | ident | ident "(" expr ")" | "(" expr ")" | "-" factor
//! ```
//!
//! Literal constants are folded while parsing (`1/2` becomes the rational
//! one half, `-i` the constant minus i), so that printing a canonical tree and
//! parsing it back reproduces the same tree.

use num::bigint::BigInt;
use num::rational::BigRational;

use super::{Coeff, Expr, ExprError, Func, Node, SymbolTable};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { offset, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, i)),
            b'-' => out.push((Tok::Minus, i)),
            b'*' if bytes.get(i + 1) == Some(&b'*') => {
                return Err(syntax(i, "unsupported operator `**` (use `^`)"));
            }
            b'*' => out.push((Tok::Star, i)),
            b'/' => out.push((Tok::Slash, i)),
            b'^' => out.push((Tok::Caret, i)),
            b'(' => out.push((Tok::LParen, i)),
            b')' => out.push((Tok::RParen, i)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part = &text[start..i];
                let mut value = BigRational::from_integer(int_part.parse::<BigInt>().unwrap());
                if i < bytes.len() && bytes[i] == b'.' {
                    let frac_start = i + 1;
                    let mut j = frac_start;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == frac_start {
                        return Err(syntax(i, "expected digits after decimal point"));
                    }
                    let frac: BigInt = text[frac_start..j].parse().unwrap();
                    let scale = num::pow(BigInt::from(10), j - frac_start);
                    value += BigRational::new(frac, scale);
                    i = j;
                }
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

pub(super) fn negate(e: &Expr) -> Expr {
    match e.node() {
        Node::Const(c) => Expr::constant(-c),
        Node::Mul(xs) => {
            if let Some(c) = xs[0].as_const() {
                let c = -c;
                let mut rest: Vec<Expr> = xs[1..].to_vec();
                if !c.is_one() {
                    rest.insert(0, Expr::constant(c));
                }
                Expr::product(rest)
            } else {
                let mut v = Vec::with_capacity(xs.len() + 1);
                v.push(Expr::int(-1));
                v.extend(xs.iter().cloned());
                Expr::from_node(Node::Mul(v))
            }
        }
        _ => Expr::from_node(Node::Mul(vec![Expr::int(-1), e.clone()])),
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = Vec::new();
        push_term(&mut terms, self.term()?);
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    push_term(&mut terms, t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    push_term(&mut terms, negate(&t));
                }
                _ => break,
            }
        }
        if terms.len() > 1 && terms.iter().all(|t| t.as_const().is_some()) {
            let total = terms.iter().fold(Coeff::zero(), |acc, t| &acc + t.as_const().unwrap());
            return Ok(Expr::constant(total));
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let f = self.factor()?;
                    acc = match (acc.as_const(), f.as_const()) {
                        (Some(a), Some(b)) => Expr::constant(a * b),
                        _ => {
                            let mut v = Vec::new();
                            for x in [&acc, &f] {
                                match x.node() {
                                    Node::Mul(xs) => v.extend(xs.iter().cloned()),
                                    _ => v.push(x.clone()),
                                }
                            }
                            Expr::from_node(Node::Mul(v))
                        }
                    };
                }
                Tok::Slash => {
                    self.bump();
                    let f = self.factor()?;
                    acc = match (acc.as_const(), f.as_const()) {
                        (Some(a), Some(b)) if !b.is_zero() => Expr::constant(a / b),
                        _ => Expr::quotient(acc, f),
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let off = self.offset();
        let exp = match self.bump() {
            Tok::Num(r) if r.is_integer() => {
                let k: i64 = r.to_integer().try_into().map_err(|_| syntax(off, "exponent out of range"))?;
                if negative {
                    -k
                } else {
                    k
                }
            }
            _ => return Err(syntax(off, "expected integer exponent")),
        };
        if let Some(c) = base.as_const() {
            if exp >= 0 {
                return Ok(Expr::constant(c.pow(exp as u32)));
            }
            if !c.is_zero() {
                return Ok(Expr::constant(c.inv().unwrap().pow(exp.unsigned_abs() as u32)));
            }
        }
        Ok(Expr::pow(base, exp))
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        let off = self.offset();
        match self.bump() {
            Tok::Num(r) => Ok(Expr::constant(Coeff::real(r))),
            Tok::Minus => Ok(negate(&self.factor()?)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    let f = Func::from_name(&name).ok_or_else(|| ExprError::UnknownSymbol(name.clone()))?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::apply(f, arg));
                }
                if name == "i" {
                    return Ok(Expr::imag());
                }
                self.symbols.lookup(&name).map(|s| Expr::symbol(&s)).ok_or(ExprError::UnknownSymbol(name))
            }
            Tok::End => Err(syntax(off, "unexpected end of input")),
            t => Err(syntax(off, format!("unexpected token {}", describe(&t)))),
        }
    }
}

fn push_term(terms: &mut Vec<Expr>, t: Expr) {
    match t.node() {
        Node::Add(xs) => terms.extend(xs.iter().cloned()),
        _ => terms.push(t),
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Num(_) => "number",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

pub(super) fn parse(text: &str, symbols: &SymbolTable) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, symbols };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let t = p.peek().clone();
        return Err(syntax(p.offset(), format!("unexpected token {}", describe(&t))));
    }
    Ok(e)
}
