//! Schrödinger and momentum representations of `T*ℝⁿ` and the Fourier
//! transform relating them.

mod fourier;
mod grid;

use std::sync::Arc;

pub use fourier::{fourier, fourier_intertwine_residual, inverse_fourier, spectral_derivative};
pub use grid::WaveFunctionGrid;

use crate::error::Result;
use crate::expr::{Expr, Symbol};
use crate::operator::{DiffOperator, MultiIndex};
use crate::polarization::{polarized_decompose, position_linear_decompose, LinearDecomposition};
use crate::symplectic::Chart;

/// `scale·(Σ vᵃ ∂_{xₐ} + ½ Σ ∂vᵃ/∂xₐ) + u`, derivatives along the `offset`
/// block of coordinates.
fn half_form_operator(
    d: &LinearDecomposition,
    xs: &[Symbol],
    offset: usize,
    scale: &Expr,
    chart: &Arc<Chart>,
) -> Result<DiffOperator> {
    let dim = chart.dim();
    let mut terms = Vec::with_capacity(xs.len() + 1);
    let mut divergence = Vec::with_capacity(xs.len());
    for (a, (v, x)) in d.v.iter().zip(xs).enumerate() {
        terms.push((MultiIndex::unit(dim, offset + a), scale * v));
        divergence.push(v.differentiate(x)?);
    }
    let half = Expr::ratio(1, 2);
    let identity = &Expr::product(vec![half, scale.clone(), Expr::sum(divergence)]) + &d.u;
    terms.push((MultiIndex::zero(dim), identity));
    DiffOperator::from_terms(chart, terms)
}

/// Half-form corrected Schrödinger quantization of
/// `f = vᵃ(q) p_a + u(q)`: `−iℏ(vᵃ ∂_a + ½ ∂_a vᵃ) + u`.
pub fn quantize_schrodinger(f: &Expr, chart: &Arc<Chart>) -> Result<DiffOperator> {
    let d = polarized_decompose(f, chart)?;
    let minus_i_hbar = &Expr::int(-1) * &(&Expr::imag() * &chart.hbar());
    half_form_operator(&d, chart.q(), 0, &minus_i_hbar, chart)
}

/// Momentum quantization of `f = wₐ(p) qᵃ + z(p)`:
/// `iℏ(wₐ ∂_{p_a} + ½ ∂_{p_a} wₐ) + z`.
pub fn quantize_momentum(f: &Expr, chart: &Arc<Chart>) -> Result<DiffOperator> {
    let d = position_linear_decompose(f, chart)?;
    let i_hbar = &Expr::imag() * &chart.hbar();
    half_form_operator(&d, chart.p(), chart.n(), &i_hbar, chart)
}

/// `compose(a,b) − compose(b,a)`.
pub fn commutator(a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator> {
    a.commutator(b)
}
