//! Conversion between expression trees and the rational-function normal form.

use num::bigint::Sign;
use num::rational::BigRational;
use num::{One, Zero};

use super::{Atom, Coeff, Expr, ExprError, Func, Node, Poly, RatFunc};

pub(super) fn to_ratfunc(e: &Expr) -> Result<RatFunc, ExprError> {
    match e.node() {
        Node::Const(c) => Ok(RatFunc::constant(c.clone())),
        Node::Sym(s) => Ok(RatFunc::atom(Atom::Sym(s.clone()))),
        Node::Add(xs) => {
            let mut acc = RatFunc::zero();
            for x in xs {
                acc = acc.add(&to_ratfunc(x)?);
            }
            Ok(acc)
        }
        Node::Mul(xs) => {
            let mut acc = RatFunc::one();
            for x in xs {
                acc = acc.mul(&to_ratfunc(x)?);
                if acc.is_zero() {
                    // Remaining factors must still be well defined.
                    for y in xs {
                        to_ratfunc(y)?;
                    }
                    return Ok(acc);
                }
            }
            Ok(acc)
        }
        Node::Pow(b, k) => to_ratfunc(b)?.pow(*k),
        Node::Div(a, b) => to_ratfunc(a)?.div(&to_ratfunc(b)?),
        Node::Apply(f, arg) => {
            let arg = from_ratfunc(&to_ratfunc(arg)?);
            if let Some(v) = fold_function(*f, &arg)? {
                return Ok(RatFunc::constant(v));
            }
            Ok(RatFunc::atom(Atom::Apply(*f, arg)))
        }
    }
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.numer().sign() == Sign::Minus {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Exact values of functions at special rational arguments.
fn fold_function(f: Func, arg: &Expr) -> Result<Option<Coeff>, ExprError> {
    let Some(r) = arg.as_const().and_then(Coeff::as_real) else {
        return Ok(None);
    };
    Ok(match f {
        Func::Exp | Func::Cos if r.is_zero() => Some(Coeff::one()),
        Func::Sin if r.is_zero() => Some(Coeff::zero()),
        Func::Ln if r.is_one() => Some(Coeff::zero()),
        Func::Ln if r.is_zero() => return Err(ExprError::Domain("ln(0)".into())),
        Func::Sqrt => exact_sqrt(r).map(Coeff::real),
        _ => None,
    })
}

fn term_expr(m: &super::Monomial, c: &Coeff) -> Expr {
    let mut factors: Vec<Expr> = m
        .factors()
        .iter()
        .map(|(a, e)| if *e == 1 { a.to_expr() } else { Expr::pow(a.to_expr(), i64::from(*e)) })
        .collect();
    if factors.is_empty() {
        return Expr::constant(c.clone());
    }
    if !c.is_one() {
        factors.insert(0, Expr::constant(c.clone()));
    }
    Expr::product(factors)
}

pub(super) fn from_poly(p: &Poly) -> Expr {
    let terms: Vec<Expr> = p.sorted_terms().into_iter().map(|(m, c)| term_expr(m, c)).collect();
    Expr::sum(terms)
}

pub(super) fn from_ratfunc(r: &RatFunc) -> Expr {
    let num = from_poly(r.numer());
    if r.denom().is_one() {
        num
    } else {
        Expr::quotient(num, from_poly(r.denom()))
    }
}
