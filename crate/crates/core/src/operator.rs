//! Linear differential operators with symbolic coefficients on a chart.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::expr::{Expr, Symbol};
use crate::symplectic::{same_chart, Chart, VectorField};

/// Orders of differentiation in each chart coordinate, positions first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> MultiIndex {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, k: usize) -> MultiIndex {
        let mut v = vec![0; dim];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn from_orders(orders: Vec<u32>) -> MultiIndex {
        MultiIndex(orders)
    }

    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    /// Total order `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when `other ≤ self` componentwise.
    pub fn sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MultiIndex)
    }

    /// All `γ ≤ self` componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=a).map(move |g| {
                        let mut v = prefix.clone();
                        v.push(g);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// `Π C(αᵢ, γᵢ)`.
    pub fn binomial(&self, gamma: &MultiIndex) -> i64 {
        self.0.iter().zip(&gamma.0).map(|(&a, &g)| binomial(a, g)).product()
    }

    /// Label such as `(q:1,p:2)`; the identity index is `()`.
    pub fn label(&self, coords: &[Symbol]) -> String {
        let parts: Vec<String> =
            coords.iter().zip(&self.0).filter(|(_, &a)| a > 0).map(|(s, a)| format!("{s}:{a}")).collect();
        format!("({})", parts.join(","))
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * i64::from(n - i) / i64::from(i + 1))
}

/// `∂^α e`, canonicalized.
pub fn partial(e: &Expr, alpha: &MultiIndex, coords: &[Symbol]) -> Result<Expr> {
    let mut out = e.clone();
    for (x, &a) in coords.iter().zip(alpha.orders()) {
        for _ in 0..a {
            if out.is_zero() {
                return Ok(out);
            }
            out = out.differentiate(x)?;
        }
    }
    Ok(out.canonicalize()?)
}

/// `Σ_α a_α ∂^α` with canonical, nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    chart: Arc<Chart>,
    terms: BTreeMap<MultiIndex, Expr>,
}

impl DiffOperator {
    pub fn zero(chart: &Arc<Chart>) -> DiffOperator {
        DiffOperator { chart: chart.clone(), terms: BTreeMap::new() }
    }

    /// Builds an operator, summing repeated indices and dropping zeros.
    pub fn from_terms(chart: &Arc<Chart>, terms: impl IntoIterator<Item = (MultiIndex, Expr)>) -> Result<DiffOperator> {
        let mut grouped: BTreeMap<MultiIndex, Vec<Expr>> = BTreeMap::new();
        for (alpha, c) in terms {
            assert_eq!(alpha.orders().len(), chart.dim(), "multi-index length must match the chart");
            chart.check_symbols(&c)?;
            grouped.entry(alpha).or_default().push(c);
        }
        let mut out = BTreeMap::new();
        for (alpha, cs) in grouped {
            let c = Expr::sum(cs).canonicalize()?;
            if !c.is_zero() {
                out.insert(alpha, c);
            }
        }
        Ok(DiffOperator { chart: chart.clone(), terms: out })
    }

    /// Multiplication by `f`.
    pub fn multiplication(chart: &Arc<Chart>, f: &Expr) -> Result<DiffOperator> {
        DiffOperator::from_terms(chart, [(MultiIndex::zero(chart.dim()), f.clone())])
    }

    pub fn identity(chart: &Arc<Chart>) -> DiffOperator {
        DiffOperator::multiplication(chart, &Expr::one()).expect("identity is well formed")
    }

    /// `∂/∂xᵏ`.
    pub fn derivative(chart: &Arc<Chart>, k: usize) -> DiffOperator {
        DiffOperator::from_terms(chart, [(MultiIndex::unit(chart.dim(), k), Expr::one())])
            .expect("coordinate derivative is well formed")
    }

    /// The first-order operator `Σ Xᵏ ∂ₖ`.
    pub fn from_vector_field(x: &VectorField) -> Result<DiffOperator> {
        let chart = x.chart();
        let dim = chart.dim();
        DiffOperator::from_terms(
            chart,
            x.components().iter().enumerate().map(|(k, c)| (MultiIndex::unit(dim, k), c.clone())),
        )
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Expr> {
        &self.terms
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Expr {
        self.terms.get(alpha).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// `Σ a_α ∂^α s`, canonicalized.
    pub fn apply(&self, s: &Expr) -> Result<Expr> {
        self.chart.check_symbols(s)?;
        let coords = self.chart.coordinates();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (alpha, c) in &self.terms {
            terms.push(c * &partial(s, alpha, &coords)?);
        }
        Ok(Expr::sum(terms).canonicalize()?)
    }

    pub fn add(&self, other: &DiffOperator) -> Result<DiffOperator> {
        same_chart(&self.chart, &other.chart)?;
        let all = self.terms.iter().chain(&other.terms).map(|(a, c)| (a.clone(), c.clone()));
        DiffOperator::from_terms(&self.chart, all)
    }

    pub fn sub(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.add(&other.scale(&Expr::int(-1))?)
    }

    /// Left multiplication of every coefficient by `k`.
    pub fn scale(&self, k: &Expr) -> Result<DiffOperator> {
        let scaled = self.terms.iter().map(|(a, c)| (a.clone(), k * c));
        DiffOperator::from_terms(&self.chart, scaled)
    }

    /// `self ∘ other` by the Leibniz rule
    /// `∂^α (b ∂^β) = Σ_{γ≤α} C(α,γ) (∂^γ b) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator> {
        same_chart(&self.chart, &other.chart)?;
        let coords = self.chart.coordinates();
        let mut out = Vec::new();
        for (alpha, a) in &self.terms {
            for (beta, b) in &other.terms {
                for gamma in alpha.below() {
                    let db = partial(b, &gamma, &coords)?;
                    if db.is_zero() {
                        continue;
                    }
                    let index = alpha.sub(&gamma).expect("γ ≤ α").add(beta);
                    out.push((index, Expr::product(vec![Expr::int(alpha.binomial(&gamma)), a.clone(), db])));
                }
            }
        }
        DiffOperator::from_terms(&self.chart, out)
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Formal adjoint with respect to the flat volume on the chart:
    /// `L† s = Σ (−1)^{|α|} ∂^α (conj(a_α) s)`, assuming real coordinates.
    pub fn adjoint(&self) -> Result<DiffOperator> {
        let coords = self.chart.coordinates();
        let mut out = Vec::new();
        for (alpha, a) in &self.terms {
            let sign = if alpha.order() % 2 == 0 { 1 } else { -1 };
            let abar = a.conj();
            for gamma in alpha.below() {
                let da = partial(&abar, &gamma, &coords)?;
                if da.is_zero() {
                    continue;
                }
                let coeff = Expr::product(vec![Expr::int(sign * alpha.binomial(&gamma)), da]);
                out.push((alpha.sub(&gamma).expect("γ ≤ α"), coeff));
            }
        }
        DiffOperator::from_terms(&self.chart, out)
    }

    /// Terms as `(label, coefficient)` pairs in index order.
    pub fn labelled_terms(&self) -> Vec<(String, String)> {
        let coords = self.chart.coordinates();
        self.terms.iter().map(|(a, c)| (a.label(&coords), c.to_string())).collect()
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let coords = self.chart.coordinates();
        for (i, (alpha, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if alpha.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*D{}", alpha.label(&coords))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Arc<Chart> {
        Arc::new(Chart::canonical(1).unwrap())
    }

    #[test]
    fn multi_index_arithmetic() {
        let a = MultiIndex::from_orders(vec![2, 1]);
        assert_eq!(a.below().len(), 6);
        assert_eq!(a.binomial(&MultiIndex::from_orders(vec![1, 1])), 2);
        assert_eq!(a.sub(&MultiIndex::from_orders(vec![3, 0])), None);
        let c = chart();
        assert_eq!(a.label(&c.coordinates()), "(q:2,p:1)");
        assert_eq!(MultiIndex::zero(2).label(&c.coordinates()), "()");
    }

    #[test]
    fn second_order_composition() {
        let c = chart();
        let d = DiffOperator::derivative(&c, 0);
        let q2 = DiffOperator::multiplication(&c, &c.parse("q^2").unwrap()).unwrap();
        // ∂² ∘ q² = q²∂² + 4q∂ + 2
        let op = d.compose(&d).unwrap().compose(&q2).unwrap();
        assert_eq!(op.to_string(), "(2) + (4*q)*D(q:1) + (q^2)*D(q:2)");
    }

    #[test]
    fn adjoint_of_first_order_operator() {
        let c = chart();
        let op = DiffOperator::from_terms(
            &c,
            [(MultiIndex::unit(2, 0), c.parse("i*q").unwrap()), (MultiIndex::zero(2), c.parse("p").unwrap())],
        )
        .unwrap();
        // (i q ∂)† = ∂ (−i q ·)·(−1) = i q ∂ + i
        let adj = op.adjoint().unwrap();
        assert_eq!(adj.to_string(), "(p + i) + (i*q)*D(q:1)");
    }
}
