//! Numeric evaluation and the sampling-based equality decision.

use std::collections::HashMap;

use num::complex::Complex64;
use num::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expr, ExprError, Func, Node, Symbol};

/// Seed used for equality sampling unless a caller supplies one.
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_EQUALITY_SAMPLES: usize = 8;
const SAMPLE_RADIUS: f64 = 2.0;
const RETRIES_PER_SAMPLE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ProvedEqual,
    ProvedUnequal,
    NumericallyEqual,
}

fn domain(msg: impl Into<String>) -> ExprError {
    ExprError::Domain(msg.into())
}

fn real_apply(f: Func, x: f64) -> Result<f64, ExprError> {
    Ok(match f {
        Func::Exp => x.exp(),
        Func::Ln if x <= 0.0 => return Err(domain(format!("ln({x})"))),
        Func::Ln => x.ln(),
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Sqrt if x < 0.0 => return Err(domain(format!("sqrt({x})"))),
        Func::Sqrt => x.sqrt(),
    })
}

fn complex_apply(f: Func, z: Complex64) -> Result<Complex64, ExprError> {
    Ok(match f {
        Func::Exp => z.exp(),
        Func::Ln if z == Complex64::new(0.0, 0.0) => return Err(domain("ln(0)")),
        Func::Ln => z.ln(),
        Func::Sin => z.sin(),
        Func::Cos => z.cos(),
        Func::Sqrt => z.sqrt(),
    })
}

impl Expr {
    /// Real evaluation by tree walk.
    pub fn evaluate(&self, point: &HashMap<Symbol, f64>) -> Result<f64, ExprError> {
        match self.node() {
            Node::Const(c) => {
                if !c.is_real() {
                    return Err(ExprError::NonReal);
                }
                Ok(c.re().to_f64().unwrap_or(f64::NAN))
            }
            Node::Sym(s) => point.get(s).copied().ok_or_else(|| ExprError::Unbound(s.name().to_string())),
            Node::Add(xs) => xs.iter().try_fold(0.0, |acc, x| Ok(acc + x.evaluate(point)?)),
            Node::Mul(xs) => xs.iter().try_fold(1.0, |acc, x| Ok(acc * x.evaluate(point)?)),
            Node::Pow(b, k) => {
                let v = b.evaluate(point)?;
                if v == 0.0 && *k < 0 {
                    return Err(domain("division by zero"));
                }
                Ok(v.powi(*k as i32))
            }
            Node::Div(a, b) => {
                let d = b.evaluate(point)?;
                if d == 0.0 {
                    return Err(domain("division by zero"));
                }
                Ok(a.evaluate(point)? / d)
            }
            Node::Apply(f, a) => real_apply(*f, a.evaluate(point)?),
        }
    }

    /// Complex evaluation with principal branches; symbols take real values.
    pub fn evaluate_complex(&self, point: &HashMap<Symbol, f64>) -> Result<Complex64, ExprError> {
        match self.node() {
            Node::Const(c) => Ok(c.to_complex()),
            Node::Sym(s) => {
                point.get(s).map(|&x| Complex64::new(x, 0.0)).ok_or_else(|| ExprError::Unbound(s.name().to_string()))
            }
            Node::Add(xs) => {
                xs.iter().try_fold(Complex64::new(0.0, 0.0), |acc, x| Ok(acc + x.evaluate_complex(point)?))
            }
            Node::Mul(xs) => {
                xs.iter().try_fold(Complex64::new(1.0, 0.0), |acc, x| Ok(acc * x.evaluate_complex(point)?))
            }
            Node::Pow(b, k) => {
                let v = b.evaluate_complex(point)?;
                if v.norm() == 0.0 && *k < 0 {
                    return Err(domain("division by zero"));
                }
                Ok(v.powi(*k as i32))
            }
            Node::Div(a, b) => {
                let d = b.evaluate_complex(point)?;
                if d.norm() == 0.0 {
                    return Err(domain("division by zero"));
                }
                Ok(a.evaluate_complex(point)? / d)
            }
            Node::Apply(f, a) => complex_apply(*f, a.evaluate_complex(point)?),
        }
    }

    /// Decides `self == other` with the default seed.
    pub fn equals(&self, other: &Expr, samples: usize) -> Result<Verdict, ExprError> {
        self.equals_seeded(other, samples, DEFAULT_SEED)
    }

    /// `ProvedEqual` when the canonical difference is zero. Otherwise the two
    /// sides are compared at `samples` random points of `[-2, 2]^k`; any
    /// point with `|a - b| > 1e-9 (1 + |a| + |b|)` proves them unequal.
    pub fn equals_seeded(&self, other: &Expr, samples: usize, seed: u64) -> Result<Verdict, ExprError> {
        if (self - other).canonicalize()?.is_zero() {
            return Ok(Verdict::ProvedEqual);
        }
        let mut vars = self.symbols();
        vars.extend(other.symbols());
        let vars: Vec<Symbol> = vars.into_iter().collect();
        let complex = self.has_imaginary() || other.has_imaginary();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_attempts = samples.max(1) * RETRIES_PER_SAMPLE;
        let mut attempts = 0;
        let mut accepted = 0;
        while accepted < samples.max(1) {
            if attempts == max_attempts {
                return Err(ExprError::SamplingFailed(attempts));
            }
            attempts += 1;
            let point: HashMap<Symbol, f64> =
                vars.iter().map(|s| (s.clone(), rng.gen_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS))).collect();
            let pair = if complex {
                self.evaluate_complex(&point).and_then(|a| Ok((a, other.evaluate_complex(&point)?)))
            } else {
                self.evaluate(&point)
                    .and_then(|a| Ok((Complex64::new(a, 0.0), Complex64::new(other.evaluate(&point)?, 0.0))))
            };
            let (a, b) = match pair {
                Ok(v) => v,
                Err(ExprError::Domain(_)) => continue,
                Err(e) => return Err(e),
            };
            if !a.is_finite() || !b.is_finite() {
                continue;
            }
            accepted += 1;
            if (a - b).norm() > 1e-9 * (1.0 + a.norm() + b.norm()) {
                return Ok(Verdict::ProvedUnequal);
            }
        }
        Ok(Verdict::NumericallyEqual)
    }

    /// Compiles a real-valued expression over positional variables. Symbols
    /// not in `vars` must be bound in `fixed`.
    pub fn compile(&self, vars: &[Symbol], fixed: &HashMap<Symbol, f64>) -> Result<CompiledExpr, ExprError> {
        Ok(CompiledExpr { root: compile_node(self, vars, fixed)? })
    }
}

#[derive(Clone, Debug)]
enum CNode {
    Const(f64),
    Var(usize),
    Add(Vec<CNode>),
    Mul(Vec<CNode>),
    Pow(Box<CNode>, i32),
    Div(Box<CNode>, Box<CNode>),
    Apply(Func, Box<CNode>),
}

/// Real expression with variables resolved to slots, for hot loops.
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    root: CNode,
}

fn compile_node(e: &Expr, vars: &[Symbol], fixed: &HashMap<Symbol, f64>) -> Result<CNode, ExprError> {
    Ok(match e.node() {
        Node::Const(c) => {
            if !c.is_real() {
                return Err(ExprError::NonReal);
            }
            CNode::Const(c.re().to_f64().unwrap_or(f64::NAN))
        }
        Node::Sym(s) => match vars.iter().position(|v| v == s) {
            Some(i) => CNode::Var(i),
            None => CNode::Const(*fixed.get(s).ok_or_else(|| ExprError::Unbound(s.name().to_string()))?),
        },
        Node::Add(xs) => CNode::Add(xs.iter().map(|x| compile_node(x, vars, fixed)).collect::<Result<_, _>>()?),
        Node::Mul(xs) => CNode::Mul(xs.iter().map(|x| compile_node(x, vars, fixed)).collect::<Result<_, _>>()?),
        Node::Pow(b, k) => CNode::Pow(
            Box::new(compile_node(b, vars, fixed)?),
            i32::try_from(*k).map_err(|_| domain("exponent out of range"))?,
        ),
        Node::Div(a, b) => CNode::Div(Box::new(compile_node(a, vars, fixed)?), Box::new(compile_node(b, vars, fixed)?)),
        Node::Apply(f, a) => CNode::Apply(*f, Box::new(compile_node(a, vars, fixed)?)),
    })
}

fn eval_node(n: &CNode, args: &[f64]) -> Result<f64, ExprError> {
    Ok(match n {
        CNode::Const(c) => *c,
        CNode::Var(i) => args[*i],
        CNode::Add(xs) => {
            let mut s = 0.0;
            for x in xs {
                s += eval_node(x, args)?;
            }
            s
        }
        CNode::Mul(xs) => {
            let mut s = 1.0;
            for x in xs {
                s *= eval_node(x, args)?;
            }
            s
        }
        CNode::Pow(b, k) => {
            let v = eval_node(b, args)?;
            if v == 0.0 && *k < 0 {
                return Err(domain("division by zero"));
            }
            v.powi(*k)
        }
        CNode::Div(a, b) => {
            let d = eval_node(b, args)?;
            if d == 0.0 {
                return Err(domain("division by zero"));
            }
            eval_node(a, args)? / d
        }
        CNode::Apply(f, a) => real_apply(*f, eval_node(a, args)?)?,
    })
}

impl CompiledExpr {
    pub fn eval(&self, args: &[f64]) -> Result<f64, ExprError> {
        eval_node(&self.root, args)
    }
}
