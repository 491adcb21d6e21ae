//! Distributions on a chart, Lagrangian and involutivity tests, and the
//! observables compatible with the vertical polarization.
//!
//! Span membership is decided over the field of rational functions in the
//! chart symbols, i.e. at the generic point.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Atom, Expr, Monomial, Poly, RatFunc, Symbol};
use crate::symplectic::{hamiltonian_vector_field, lie_bracket, Chart, VectorField};

/// Rank of a matrix over the rational-function field.
#[allow(clippy::needless_range_loop)]
fn rank(rows: &[Vec<RatFunc>]) -> usize {
    let mut m: Vec<Vec<RatFunc>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][col].inv().expect("pivot is nonzero");
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].mul(&inv);
            for j in col..cols {
                let delta = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn matrix(fields: &[&VectorField]) -> Result<Vec<Vec<RatFunc>>> {
    fields.iter().map(|v| v.components().iter().map(|c| Ok(c.to_ratfunc()?)).collect()).collect()
}

/// Spanning set of a (possibly complex) distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    chart: Arc<Chart>,
    span: Vec<VectorField>,
}

#[derive(Deserialize)]
struct DistributionDescriptor {
    span: Vec<Vec<String>>,
}

impl Distribution {
    /// Checks that the fields live on `chart` and are generically independent.
    pub fn new(chart: &Arc<Chart>, span: Vec<VectorField>) -> Result<Distribution> {
        if span.is_empty() {
            return Err(Error::InvalidDistribution("empty spanning set".into()));
        }
        if span.iter().any(|v| v.chart() != chart) {
            return Err(Error::ChartMismatch);
        }
        let refs: Vec<&VectorField> = span.iter().collect();
        let r = rank(&matrix(&refs)?);
        if r != span.len() {
            return Err(Error::InvalidDistribution(format!(
                "declared rank {} but the spanning fields have rank {r}",
                span.len()
            )));
        }
        Ok(Distribution { chart: chart.clone(), span })
    }

    /// Parses `{"span": [[2n expression strings], ...]}`.
    pub fn from_json(chart: &Arc<Chart>, text: &str) -> Result<Distribution> {
        let d: DistributionDescriptor =
            serde_json::from_str(text).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        let fields = d
            .span
            .iter()
            .map(|comps| {
                let exprs = comps.iter().map(|t| chart.parse(t)).collect::<Result<Vec<_>>>()?;
                VectorField::new(chart, exprs)
            })
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(chart, fields)
    }

    /// The vertical polarization `span{∂/∂p₁, …, ∂/∂pₙ}`.
    pub fn vertical(chart: &Arc<Chart>) -> Distribution {
        let n = chart.n();
        let span = (0..n).map(|j| VectorField::coordinate(chart, n + j)).collect();
        Distribution { chart: chart.clone(), span }
    }

    /// The horizontal polarization `span{∂/∂q¹, …, ∂/∂qⁿ}`.
    pub fn horizontal(chart: &Arc<Chart>) -> Distribution {
        let span = (0..chart.n()).map(|j| VectorField::coordinate(chart, j)).collect();
        Distribution { chart: chart.clone(), span }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn span(&self) -> &[VectorField] {
        &self.span
    }

    pub fn rank(&self) -> usize {
        self.span.len()
    }

    pub fn contains(&self, v: &VectorField) -> Result<bool> {
        if v.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        if v.is_zero() {
            return Ok(true);
        }
        let mut refs: Vec<&VectorField> = self.span.iter().collect();
        refs.push(v);
        Ok(rank(&matrix(&refs)?) == self.span.len())
    }

    pub fn conj(&self) -> Distribution {
        Distribution { chart: self.chart.clone(), span: self.span.iter().map(VectorField::conj).collect() }
    }

    /// Rank `n` and `ω` vanishing on all spanning pairs.
    pub fn is_lagrangian(&self) -> Result<bool> {
        if self.rank() != self.chart.n() {
            return Ok(false);
        }
        for (i, x) in self.span.iter().enumerate() {
            for y in &self.span[i + 1..] {
                if !self.chart.omega(x, y)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// First bracket of spanning fields that leaves the span, if any.
    pub fn involutivity_witness(&self) -> Result<Option<VectorField>> {
        for (i, x) in self.span.iter().enumerate() {
            for y in &self.span[i + 1..] {
                let b = lie_bracket(x, y)?;
                if !self.contains(&b)? {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }

    pub fn is_involutive(&self) -> Result<bool> {
        Ok(self.involutivity_witness()?.is_none())
    }

    /// `F = F̄`.
    pub fn is_real(&self) -> Result<bool> {
        let bar = self.conj();
        for (v, w) in self.span.iter().zip(&bar.span) {
            if !self.contains(w)? || !bar.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First `[X_f, Xᵢ]` that leaves the span, if any.
    pub fn preservation_witness(&self, f: &Expr) -> Result<Option<VectorField>> {
        let xf = hamiltonian_vector_field(f, &self.chart)?;
        for x in &self.span {
            let b = lie_bracket(&xf, x)?;
            if !self.contains(&b)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    /// `[X_f, P] ⊂ P`.
    pub fn preserved_by(&self, f: &Expr) -> Result<bool> {
        Ok(self.preservation_witness(f)?.is_none())
    }
}

/// `[X_f, P] ⊂ P`.
pub fn preserves_polarization(f: &Expr, p: &Distribution) -> Result<bool> {
    p.preserved_by(f)
}

/// `f = Σ vᵃ yₐ + u` with `vᵃ`, `u` free of the fiber variables `y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearDecomposition {
    pub v: Vec<Expr>,
    pub u: Expr,
}

fn atom_involves(a: &Atom, vars: &[Symbol]) -> bool {
    match a {
        Atom::Sym(s) => vars.contains(s),
        Atom::Apply(_, arg) => vars.iter().any(|v| arg.contains_symbol(v)),
    }
}

fn monomial_text(m: &Monomial) -> String {
    Expr::from_ratfunc(&RatFunc::from_poly(Poly::monomial(m.clone(), crate::expr::Coeff::one()))).to_string()
}

/// Decomposes `f` as affine in `fiber` with coefficients free of `fiber`.
pub fn linear_decompose(f: &Expr, chart: &Chart, fiber: &[Symbol]) -> Result<LinearDecomposition> {
    chart.check_symbols(f)?;
    let r = f.to_ratfunc()?;
    let reject =
        |m: &Monomial, reason: &str| Error::NotQuantizable { monomial: monomial_text(m), reason: reason.to_string() };
    for (m, _) in r.denom().terms() {
        if m.factors().iter().any(|(a, _)| atom_involves(a, fiber)) {
            return Err(reject(m, "has a denominator depending on the fiber variables"));
        }
    }
    for (m, _) in r.numer().sorted_terms() {
        let mut degree = 0;
        for (a, e) in m.factors() {
            match a {
                Atom::Sym(s) if fiber.contains(s) => degree += e,
                Atom::Apply(..) if atom_involves(a, fiber) => {
                    return Err(reject(m, "is not polynomial in the fiber variables"))
                }
                _ => {}
            }
        }
        if degree > 1 {
            let names: Vec<&str> = fiber.iter().map(Symbol::name).collect();
            return Err(reject(m, &format!("has degree {degree} in {}", names.join(", "))));
        }
    }
    let v = fiber.iter().map(|y| f.differentiate(y)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut u = f.clone();
    for y in fiber {
        u = u.substitute(y, &Expr::zero());
    }
    Ok(LinearDecomposition { v, u: u.canonicalize()? })
}

/// `f = vᵃ(q) p_a + u(q)`, or a rejection naming the offending monomial.
pub fn polarized_decompose(f: &Expr, chart: &Chart) -> Result<LinearDecomposition> {
    linear_decompose(f, chart, chart.p())
}

/// `f = wₐ(p) qᵃ + z(p)`.
pub fn position_linear_decompose(f: &Expr, chart: &Chart) -> Result<LinearDecomposition> {
    linear_decompose(f, chart, chart.q())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_rational_functions() {
        let c = Arc::new(Chart::canonical(1).unwrap());
        let v = |a: &str, b: &str| VectorField::new(&c, vec![c.parse(a).unwrap(), c.parse(b).unwrap()]).unwrap();
        // (q, p) and (q², qp) are proportional by the factor q.
        assert!(Distribution::new(&c, vec![v("q", "p"), v("q^2", "q*p")]).is_err());
        assert!(Distribution::new(&c, vec![v("q", "p"), v("p", "q")]).is_ok());
    }

    #[test]
    fn rejection_names_monomial() {
        let c = Chart::canonical(1).unwrap();
        let err = polarized_decompose(&c.parse("3*q*p^2 + p").unwrap(), &c).unwrap_err();
        assert_eq!(err, Error::NotQuantizable { monomial: "p^2*q".into(), reason: "has degree 2 in p".into() });
        assert!(polarized_decompose(&c.parse("sin(p)").unwrap(), &c).is_err());
        assert!(polarized_decompose(&c.parse("q/p").unwrap(), &c).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        let c = Arc::new(Chart::canonical(1).unwrap());
        let d = Distribution::from_json(&c, r#"{"span": [["0", "1"]]}"#).unwrap();
        assert_eq!(d, Distribution::vertical(&c));
        assert!(Distribution::from_json(&c, r#"{"span": [["0"]]}"#).is_err());
        assert!(Distribution::from_json(&c, r#"{"span": []}"#).is_err());
    }
}
