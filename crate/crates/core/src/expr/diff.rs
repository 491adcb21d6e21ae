//! Tree-level differentiation; callers canonicalize the result.

use super::{Expr, Func, Node, Symbol};

pub(super) fn derivative(e: &Expr, x: &Symbol) -> Expr {
    if !e.contains_symbol(x) {
        return Expr::zero();
    }
    match e.node() {
        Node::Const(_) => Expr::zero(),
        Node::Sym(s) => Expr::int(i64::from(s == x)),
        Node::Add(xs) => Expr::sum(xs.iter().map(|t| derivative(t, x)).collect()),
        Node::Mul(xs) => {
            let mut terms = Vec::new();
            for (i, xi) in xs.iter().enumerate() {
                if !xi.contains_symbol(x) {
                    continue;
                }
                let mut factors: Vec<Expr> = Vec::with_capacity(xs.len());
                factors.extend(xs[..i].iter().cloned());
                factors.push(derivative(xi, x));
                factors.extend(xs[i + 1..].iter().cloned());
                terms.push(Expr::product(factors));
            }
            Expr::sum(terms)
        }
        Node::Pow(b, k) => Expr::product(vec![Expr::int(*k), Expr::pow(b.clone(), k - 1), derivative(b, x)]),
        Node::Div(a, b) => {
            // (a'b - ab') / b^2
            let num = &(&derivative(a, x) * b) - &(a * &derivative(b, x));
            Expr::quotient(num, Expr::pow(b.clone(), 2))
        }
        Node::Apply(f, u) => {
            let du = derivative(u, x);
            let outer = match f {
                Func::Exp => e.clone(),
                Func::Ln => Expr::quotient(Expr::one(), u.clone()),
                Func::Sin => Expr::apply(Func::Cos, u.clone()),
                Func::Cos => -&Expr::apply(Func::Sin, u.clone()),
                Func::Sqrt => Expr::quotient(Expr::one(), &Expr::int(2) * e),
            };
            &outer * &du
        }
    }
}
