//! Immutable symbolic expressions over chart coordinates and parameters.
//!
//! An [`Expr`] is a cheaply clonable, reference-counted tree. Trees built by
//! hand or by the parser are "raw"; [`Expr::canonicalize`] maps any tree to
//! its normal form, which is unique for polynomial and rational input:
//! numerator and denominator are expanded over exact Gaussian-rational
//! coefficients, reduced by their gcd, and the denominator is made monic.
//! Elementary-function applications are treated as opaque atoms whose
//! arguments are themselves canonical.

mod canon;
mod coeff;
mod diff;
mod eval;
mod parse;
mod poly;
mod print;
mod ratfunc;
mod symbols;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use coeff::Coeff;
pub use eval::{CompiledExpr, Verdict, DEFAULT_EQUALITY_SAMPLES, DEFAULT_SEED};
pub use poly::{Atom, Monomial, Poly};
pub use ratfunc::RatFunc;
pub use symbols::SymbolTable;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("expression has a non-real value")]
    NonReal,
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("no valid sample point found after {0} attempts")]
    SamplingFailed(usize),
}

/// A named coordinate or parameter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Self(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Self::new(name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Recognized elementary functions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Ln, Func::Sin, Func::Cos, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Node {
    Const(Coeff),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
    Div(Expr, Expr),
    Apply(Func, Expr),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn from_node(node: Node) -> Self {
        Self(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_node(Node::Const(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Coeff::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(Coeff::from_ratio(num, den))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The imaginary unit `i`.
    pub fn imag() -> Self {
        Self::constant(Coeff::i())
    }

    pub fn symbol(s: &Symbol) -> Self {
        Self::from_node(Node::Sym(s.clone()))
    }

    pub fn var(name: &str) -> Self {
        Self::symbol(&Symbol::new(name))
    }

    pub fn sum(terms: Vec<Expr>) -> Self {
        match terms.len() {
            0 => Self::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Add(terms)),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Self {
        match factors.len() {
            0 => Self::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Mul(factors)),
        }
    }

    pub fn pow(base: Expr, exp: i64) -> Self {
        Self::from_node(Node::Pow(base, exp))
    }

    pub fn quotient(num: Expr, den: Expr) -> Self {
        Self::from_node(Node::Div(num, den))
    }

    pub fn apply(f: Func, arg: Expr) -> Self {
        Self::from_node(Node::Apply(f, arg))
    }

    pub fn as_const(&self) -> Option<&Coeff> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Structural test for the constant zero. Canonicalize first to decide
    /// whether an arbitrary tree is zero.
    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Coeff::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(Coeff::is_one)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self.node() {
            Node::Const(_) => {}
            Node::Sym(s) => {
                out.insert(s.clone());
            }
            Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
            Node::Pow(b, _) => b.collect_symbols(out),
            Node::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Node::Apply(_, a) => a.collect_symbols(out),
        }
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Sym(t) => t == s,
            Node::Add(xs) | Node::Mul(xs) => xs.iter().any(|x| x.contains_symbol(s)),
            Node::Pow(b, _) => b.contains_symbol(s),
            Node::Div(a, b) => a.contains_symbol(s) || b.contains_symbol(s),
            Node::Apply(_, a) => a.contains_symbol(s),
        }
    }

    /// True when some constant in the tree has a nonzero imaginary part.
    pub fn has_imaginary(&self) -> bool {
        match self.node() {
            Node::Const(c) => !c.is_real(),
            Node::Sym(_) => false,
            Node::Add(xs) | Node::Mul(xs) => xs.iter().any(Expr::has_imaginary),
            Node::Pow(b, _) => b.has_imaginary(),
            Node::Div(a, b) => a.has_imaginary() || b.has_imaginary(),
            Node::Apply(_, a) => a.has_imaginary(),
        }
    }

    /// Complex conjugate, assuming every symbol is real.
    pub fn conj(&self) -> Expr {
        self.map_leaves(&|e| match e.node() {
            Node::Const(c) if !c.is_real() => Some(Expr::constant(c.conj())),
            _ => None,
        })
    }

    /// Replaces every occurrence of `s` by `value`. The result is raw.
    pub fn substitute(&self, s: &Symbol, value: &Expr) -> Expr {
        self.map_leaves(&|e| match e.node() {
            Node::Sym(t) if t == s => Some(value.clone()),
            _ => None,
        })
    }

    fn map_leaves(&self, f: &dyn Fn(&Expr) -> Option<Expr>) -> Expr {
        if let Some(r) = f(self) {
            return r;
        }
        match self.node() {
            Node::Const(_) | Node::Sym(_) => self.clone(),
            Node::Add(xs) => Expr::from_node(Node::Add(xs.iter().map(|x| x.map_leaves(f)).collect())),
            Node::Mul(xs) => Expr::from_node(Node::Mul(xs.iter().map(|x| x.map_leaves(f)).collect())),
            Node::Pow(b, k) => Expr::pow(b.map_leaves(f), *k),
            Node::Div(a, b) => Expr::quotient(a.map_leaves(f), b.map_leaves(f)),
            Node::Apply(g, a) => Expr::apply(*g, a.map_leaves(f)),
        }
    }

    /// Parses `text` against `symbols`; see the crate README for the grammar.
    pub fn parse(text: &str, symbols: &SymbolTable) -> Result<Expr, ExprError> {
        parse::parse(text, symbols)
    }

    /// Normal form of the expression.
    pub fn canonicalize(&self) -> Result<Expr, ExprError> {
        Ok(canon::from_ratfunc(&self.to_ratfunc()?))
    }

    pub fn to_ratfunc(&self) -> Result<RatFunc, ExprError> {
        canon::to_ratfunc(self)
    }

    pub fn from_ratfunc(r: &RatFunc) -> Expr {
        canon::from_ratfunc(r)
    }

    /// `∂self/∂coord`, canonicalized.
    pub fn differentiate(&self, coord: &Symbol) -> Result<Expr, ExprError> {
        diff::derivative(self, coord).canonicalize()
    }

    /// Canonical `self - other == 0`.
    pub fn is_identically(&self, other: &Expr) -> Result<bool, ExprError> {
        Ok((self - other).canonicalize()?.is_zero())
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

fn push_flat(out: &mut Vec<Expr>, e: &Expr, add: bool) {
    match (e.node(), add) {
        (Node::Add(xs), true) | (Node::Mul(xs), false) => out.extend(xs.iter().cloned()),
        _ => out.push(e.clone()),
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut v = Vec::new();
        push_flat(&mut v, self, true);
        push_flat(&mut v, rhs, true);
        Expr::sum(v)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut v = Vec::new();
        push_flat(&mut v, self, false);
        push_flat(&mut v, rhs, false);
        Expr::product(v)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        parse::negate(self)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr { (&self).$m(&rhs) }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(self, f)
    }
}

/// Serializes as the printed expression string.
impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
