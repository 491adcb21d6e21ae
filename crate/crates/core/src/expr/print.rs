//! Printing in the parser's grammar.

use std::fmt::{self, Write};

use num::Zero;

use super::parse::negate;
use super::{Expr, Node};

pub(super) fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        Node::Add(xs) => write_sum(xs, f),
        Node::Const(c) => write!(f, "{c}"),
        _ => write_product_level(e, f),
    }
}

fn is_negative_leading(e: &Expr) -> bool {
    match e.node() {
        Node::Const(c) => c.is_negative_leading(),
        Node::Mul(xs) => xs[0].as_const().is_some_and(|c| c.is_negative_leading()),
        Node::Div(a, _) => is_negative_leading(a),
        _ => false,
    }
}

fn is_compound_const(e: &Expr) -> bool {
    e.as_const().is_some_and(|c| !c.re().is_zero() && !c.im().is_zero())
}

fn write_sum(xs: &[Expr], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (k, t) in xs.iter().enumerate() {
        if k == 0 {
            write_sum_term(t, f)?;
        } else if is_negative_leading(t) {
            f.write_str(" - ")?;
            write_sum_term(&negate(t), f)?;
        } else {
            f.write_str(" + ")?;
            write_sum_term(t, f)?;
        }
    }
    Ok(())
}

fn write_sum_term(t: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t.node() {
        Node::Add(_) => write!(f, "({t})"),
        Node::Const(c) if is_compound_const(t) => write!(f, "({c})"),
        Node::Const(c) => write!(f, "{c}"),
        _ => write_product_level(t, f),
    }
}

/// Atoms that never need parentheses as a factor or power base.
fn is_atomic(e: &Expr) -> bool {
    match e.node() {
        Node::Sym(_) | Node::Apply(..) => true,
        Node::Const(c) => c.is_real() && c.re().is_integer() && !c.is_negative_leading(),
        _ => false,
    }
}

fn write_factor(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        Node::Pow(..) => write_product_level(e, f),
        _ if is_atomic(e) => write_product_level(e, f),
        _ => write!(f, "({e})"),
    }
}

fn write_product_level(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        Node::Const(c) => write!(f, "{c}"),
        Node::Sym(s) => write!(f, "{s}"),
        Node::Apply(func, arg) => write!(f, "{}({arg})", func.name()),
        Node::Add(_) => write!(f, "({e})"),
        Node::Pow(b, k) => {
            if is_atomic(b) {
                write_product_level(b, f)?;
            } else {
                write!(f, "({b})")?;
            }
            write!(f, "^{k}")
        }
        Node::Mul(xs) => {
            let mut rest = &xs[..];
            if let Some(c) = xs[0].as_const() {
                if xs.len() > 1 {
                    rest = &xs[1..];
                    if (-c).is_one() {
                        f.write_char('-')?;
                    } else if is_compound_const(&xs[0]) {
                        write!(f, "({c})*")?;
                    } else {
                        write!(f, "{c}*")?;
                    }
                }
            }
            for (k, x) in rest.iter().enumerate() {
                if k > 0 {
                    f.write_char('*')?;
                }
                write_factor(x, f)?;
            }
            Ok(())
        }
        Node::Div(a, b) => {
            match a.node() {
                Node::Add(_) => write!(f, "({a})")?,
                _ if is_compound_const(a) => write!(f, "({a})")?,
                _ => write_product_level(a, f)?,
            }
            f.write_char('/')?;
            match b.node() {
                Node::Pow(..) => write_product_level(b, f),
                _ if is_atomic(b) => write_product_level(b, f),
                _ => write!(f, "({b})"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::{Expr, SymbolTable};

    fn roundtrip(text: &str) -> String {
        let t = SymbolTable::with_coordinates(&["q", "p"]).unwrap().with_parameter("hbar", Some(1.0)).unwrap();
        Expr::parse(text, &t).unwrap().canonicalize().unwrap().to_string()
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(roundtrip("q^2*p*(-2)/q"), "-2*p*q");
        assert_eq!(roundtrip("p^2/2 + q^2/2"), "1/2*p^2 + 1/2*q^2");
        assert_eq!(roundtrip("-i*hbar"), "-i*hbar");
        assert_eq!(roundtrip("i*hbar*(1+i)"), "(-1 + i)*hbar");
        assert_eq!(roundtrip("1/(q+1) - 1/q"), "-1/(q^2 + q)");
        assert_eq!(roundtrip("sin(q)^2 - q + 1"), "sin(q)^2 - q + 1");
        assert_eq!(roundtrip("(1 + i) - p"), "-p + (1 + i)");
    }
}
