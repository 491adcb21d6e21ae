//! Darboux charts with the canonical symplectic form, Hamiltonian vector
//! fields and Poisson brackets.
//!
//! Conventions: `ω = Σ dpⱼ∧dqʲ`, `ω(·, X_f) = df`, so `X_f` has components
//! `∂f/∂pⱼ` along `∂/∂qʲ` and `−∂f/∂qʲ` along `∂/∂pⱼ`, and
//! `{f,g} = ω(X_f, X_g) = Σ (∂f/∂pⱼ ∂g/∂qʲ − ∂f/∂qʲ ∂g/∂pⱼ)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Symbol, SymbolTable};

pub const HBAR: &str = "hbar";

/// A chart `(q¹..qⁿ, p₁..pₙ)` on `T*ℝⁿ` with a symplectic potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    q: Vec<Symbol>,
    p: Vec<Symbol>,
    theta: Vec<Expr>,
    symbols: SymbolTable,
}

/// JSON form of a chart.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChartDescriptor {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<String>>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

fn default_names(n: usize) -> (Vec<String>, Vec<String>) {
    if n == 1 {
        (vec!["q".into()], vec!["p".into()])
    } else {
        ((1..=n).map(|j| format!("q{j}")).collect(), (1..=n).map(|j| format!("p{j}")).collect())
    }
}

impl Chart {
    /// Canonical chart with default names, `θ = Σ pⱼ dqʲ` and `ℏ = 1`.
    pub fn canonical(n: usize) -> Result<Chart> {
        let (q, p) = default_names(n);
        Chart::new(&q, &p, &BTreeMap::new())
    }

    /// Chart with the canonical potential; `hbar` defaults to 1 unless given.
    pub fn new(q: &[String], p: &[String], params: &BTreeMap<String, f64>) -> Result<Chart> {
        if q.is_empty() || q.len() != p.len() {
            return Err(Error::InvalidChart(format!(
                "need n ≥ 1 positions and as many momenta, got {} and {}",
                q.len(),
                p.len()
            )));
        }
        let mut symbols = SymbolTable::new();
        let mut add = |name: &str| symbols.add_coordinate(name).map_err(|e| Error::InvalidChart(e.to_string()));
        let q: Vec<Symbol> = q.iter().map(|s| add(s)).collect::<Result<_>>()?;
        let p: Vec<Symbol> = p.iter().map(|s| add(s)).collect::<Result<_>>()?;
        for (name, value) in params {
            if !value.is_finite() {
                return Err(Error::InvalidChart(format!("parameter `{name}` is not finite")));
            }
            symbols.add_parameter(name, Some(*value)).map_err(|e| Error::InvalidChart(e.to_string()))?;
        }
        if !symbols.contains(HBAR) {
            symbols.add_parameter(HBAR, Some(1.0)).expect("hbar is a valid fresh name");
        }
        let hbar = symbols.parameter_value(HBAR).unwrap_or(1.0);
        if hbar <= 0.0 {
            return Err(Error::InvalidChart(format!("hbar must be positive, got {hbar}")));
        }
        let mut theta: Vec<Expr> = p.iter().map(Expr::symbol).collect();
        theta.extend(std::iter::repeat_n(Expr::zero(), q.len()));
        Ok(Chart { q, p, theta, symbols })
    }

    pub fn from_descriptor(d: &ChartDescriptor) -> Result<Chart> {
        let (dq, dp) = default_names(d.n.max(1));
        let q = d.q.clone().unwrap_or(dq);
        let p = d.p.clone().unwrap_or(dp);
        if d.n == 0 || q.len() != d.n || p.len() != d.n {
            return Err(Error::InvalidChart(format!(
                "n = {} does not match {} positions and {} momenta",
                d.n,
                q.len(),
                p.len()
            )));
        }
        let chart = Chart::new(&q, &p, &d.params)?;
        match &d.theta {
            None => Ok(chart),
            Some(texts) => {
                let theta = texts.iter().map(|t| chart.parse(t)).collect::<Result<Vec<_>>>()?;
                chart.with_theta(theta)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Chart> {
        let d: ChartDescriptor = serde_json::from_str(text).map_err(|e| Error::InvalidChart(e.to_string()))?;
        Chart::from_descriptor(&d)
    }

    pub fn descriptor(&self) -> ChartDescriptor {
        ChartDescriptor {
            n: self.n(),
            q: Some(self.q.iter().map(|s| s.name().to_string()).collect()),
            p: Some(self.p.iter().map(|s| s.name().to_string()).collect()),
            theta: Some(self.theta.iter().map(Expr::to_string).collect()),
            params: self.symbols.parameters().filter_map(|(s, v)| v.map(|v| (s.name().to_string(), v))).collect(),
        }
    }

    /// Replaces `θ` after checking `dθ = ω`.
    pub fn with_theta(mut self, theta: Vec<Expr>) -> Result<Chart> {
        if theta.len() != self.dim() {
            return Err(Error::InvalidChart(format!("theta needs {} components, got {}", self.dim(), theta.len())));
        }
        let theta = theta
            .iter()
            .map(|t| {
                self.check_symbols(t)?;
                Ok(t.canonicalize()?)
            })
            .collect::<Result<Vec<_>>>()?;
        let x = self.coordinates();
        let n = self.n();
        for k in 0..self.dim() {
            for l in k + 1..self.dim() {
                let d = (&theta[l].differentiate(&x[k])? - &theta[k].differentiate(&x[l])?).canonicalize()?;
                let expected = if k < n && l == k + n { Expr::int(-1) } else { Expr::zero() };
                if d != expected {
                    return Err(Error::InvalidChart(format!(
                        "dθ ≠ ω: coefficient of d{}∧d{} is {d}, expected {expected}",
                        x[k], x[l]
                    )));
                }
            }
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn with_hbar(mut self, value: f64) -> Result<Chart> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidChart(format!("hbar must be positive, got {value}")));
        }
        self.symbols.bind(HBAR, value)?;
        Ok(self)
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.q.len()
    }

    pub fn q(&self) -> &[Symbol] {
        &self.q
    }

    pub fn p(&self) -> &[Symbol] {
        &self.p
    }

    /// All coordinates, positions first.
    pub fn coordinates(&self) -> Vec<Symbol> {
        self.q.iter().chain(&self.p).cloned().collect()
    }

    pub fn theta(&self) -> &[Expr] {
        &self.theta
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    /// The symbol `ℏ`.
    pub fn hbar(&self) -> Expr {
        Expr::var(HBAR)
    }

    pub fn hbar_value(&self) -> f64 {
        self.symbols.parameter_value(HBAR).unwrap_or(1.0)
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        Ok(Expr::parse(text, &self.symbols)?)
    }

    pub fn check_symbols(&self, e: &Expr) -> Result<()> {
        match e.symbols().into_iter().find(|s| !self.symbols.contains(s.name())) {
            Some(s) => Err(Error::ForeignSymbol(s.name().to_string())),
            None => Ok(()),
        }
    }

    pub fn is_position(&self, s: &Symbol) -> bool {
        self.q.contains(s)
    }

    pub fn is_momentum(&self, s: &Symbol) -> bool {
        self.p.contains(s)
    }

    /// `θ(X)`, canonicalized.
    pub fn theta_of(&self, x: &VectorField) -> Result<Expr> {
        let terms = self.theta.iter().zip(&x.components).map(|(t, c)| t * c).collect();
        Ok(Expr::sum(terms).canonicalize()?)
    }

    /// `ω(X, Y) = Σ (Xᵖʲ Yᑫʲ − Xᑫʲ Yᵖʲ)`, canonicalized.
    pub fn omega(&self, x: &VectorField, y: &VectorField) -> Result<Expr> {
        same_chart(&x.chart, &y.chart)?;
        let n = self.n();
        let mut terms = Vec::with_capacity(2 * n);
        for j in 0..n {
            terms.push(&x.components[n + j] * &y.components[j]);
            terms.push(-(&x.components[j] * &y.components[n + j]));
        }
        Ok(Expr::sum(terms).canonicalize()?)
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

/// A vector field with components along `(∂/∂q¹..∂/∂qⁿ, ∂/∂p₁..∂/∂pₙ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    chart: Arc<Chart>,
    components: Vec<Expr>,
}

impl VectorField {
    /// Field with canonicalized components.
    pub fn new(chart: &Arc<Chart>, components: Vec<Expr>) -> Result<VectorField> {
        if components.len() != chart.dim() {
            return Err(Error::InvalidChart(format!(
                "vector field needs {} components, got {}",
                chart.dim(),
                components.len()
            )));
        }
        let components = components
            .iter()
            .map(|c| {
                chart.check_symbols(c)?;
                Ok(c.canonicalize()?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { chart: chart.clone(), components })
    }

    pub fn zero(chart: &Arc<Chart>) -> VectorField {
        VectorField { chart: chart.clone(), components: vec![Expr::zero(); chart.dim()] }
    }

    /// The coordinate field `∂/∂xᵏ`.
    pub fn coordinate(chart: &Arc<Chart>, k: usize) -> VectorField {
        let mut v = VectorField::zero(chart);
        v.components[k] = Expr::one();
        v
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    /// `X(f) = Σ Xᵏ ∂f/∂xᵏ`, canonicalized.
    pub fn apply(&self, f: &Expr) -> Result<Expr> {
        self.chart.check_symbols(f)?;
        let mut terms = Vec::new();
        for (c, x) in self.components.iter().zip(self.chart.coordinates()) {
            if !c.is_zero() {
                terms.push(c * &f.differentiate(&x)?);
            }
        }
        Ok(Expr::sum(terms).canonicalize()?)
    }

    /// Component-wise complex conjugate.
    pub fn conj(&self) -> VectorField {
        VectorField { chart: self.chart.clone(), components: self.components.iter().map(Expr::conj).collect() }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, x) in self.components.iter().zip(self.chart.coordinates()) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "d/d{x}")?;
            } else {
                write!(f, "({c})*d/d{x}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `X_f`.
pub fn hamiltonian_vector_field(f: &Expr, chart: &Arc<Chart>) -> Result<VectorField> {
    chart.check_symbols(f)?;
    let mut comps = Vec::with_capacity(chart.dim());
    for pj in chart.p() {
        comps.push(f.differentiate(pj)?);
    }
    for qj in chart.q() {
        comps.push(-f.differentiate(qj)?);
    }
    VectorField::new(chart, comps)
}

/// `{f, g}`, canonicalized.
pub fn poisson_bracket(f: &Expr, g: &Expr, chart: &Chart) -> Result<Expr> {
    chart.check_symbols(f)?;
    chart.check_symbols(g)?;
    let mut terms = Vec::with_capacity(2 * chart.n());
    for (qj, pj) in chart.q().iter().zip(chart.p()) {
        terms.push(&f.differentiate(pj)? * &g.differentiate(qj)?);
        terms.push(-(&f.differentiate(qj)? * &g.differentiate(pj)?));
    }
    Ok(Expr::sum(terms).canonicalize()?)
}

/// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`, canonicalized.
pub fn jacobi_residual(f: &Expr, g: &Expr, h: &Expr, chart: &Chart) -> Result<Expr> {
    let a = poisson_bracket(f, &poisson_bracket(g, h, chart)?, chart)?;
    let b = poisson_bracket(g, &poisson_bracket(h, f, chart)?, chart)?;
    let c = poisson_bracket(h, &poisson_bracket(f, g, chart)?, chart)?;
    Ok(Expr::sum(vec![a, b, c]).canonicalize()?)
}

/// Right-hand side of Hamilton's equations: `dqʲ/dt = ∂H/∂pⱼ`,
/// `dpⱼ/dt = −∂H/∂qʲ`. Coincides with `X_H`.
pub fn hamilton_rhs(h: &Expr, chart: &Arc<Chart>) -> Result<VectorField> {
    hamiltonian_vector_field(h, chart)
}

/// `[X,Y]ᵏ = Σᵢ (Xⁱ ∂ᵢYᵏ − Yⁱ ∂ᵢXᵏ)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    same_chart(&x.chart, &y.chart)?;
    let chart = &x.chart;
    let comps = (0..chart.dim())
        .map(|k| Ok(&x.apply(&y.components[k])? - &y.apply(&x.components[k])?))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(chart, comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Arc<Chart> {
        Arc::new(Chart::canonical(1).unwrap())
    }

    #[test]
    fn canonical_names() {
        assert_eq!(chart().coordinates(), vec![Symbol::new("q"), Symbol::new("p")]);
        let c2 = Chart::canonical(2).unwrap();
        let names: Vec<_> = c2.coordinates().iter().map(|s| s.name().to_string()).collect();
        assert_eq!(names, ["q1", "q2", "p1", "p2"]);
    }

    #[test]
    fn theta_must_be_a_potential() {
        let c = Chart::canonical(1).unwrap();
        let minus_q_dp = vec![Expr::zero(), c.parse("-q").unwrap()];
        assert!(c.clone().with_theta(minus_q_dp).is_ok());
        let minus_p_dq = vec![c.parse("-p").unwrap(), Expr::zero()];
        assert!(matches!(c.with_theta(minus_p_dq), Err(Error::InvalidChart(_))));
    }

    #[test]
    fn foreign_symbols_are_rejected() {
        let c = chart();
        let f = Expr::var("z");
        assert_eq!(poisson_bracket(&f, &Expr::var("q"), &c), Err(Error::ForeignSymbol("z".into())));
    }

    #[test]
    fn descriptor_round_trip() {
        let c = Chart::from_json(r#"{"n":1,"params":{"hbar":0.5,"m":2}}"#).unwrap();
        assert_eq!(c.hbar_value(), 0.5);
        let again = Chart::from_descriptor(&c.descriptor()).unwrap();
        assert_eq!(again, c);
        assert!(Chart::from_json(r#"{"n":2,"q":["x"]}"#).is_err());
        assert!(Chart::from_json("{").is_err());
    }

    #[test]
    fn display_of_fields() {
        let c = chart();
        let x = hamiltonian_vector_field(&c.parse("(p^2+q^2)/2").unwrap(), &c).unwrap();
        assert_eq!(x.to_string(), "(p)*d/dq + (-q)*d/dp");
    }
}
