use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num::complex::Complex64;
use rustfft::FftPlanner;

use super::{quantize_momentum, quantize_schrodinger, WaveFunctionGrid};
use crate::error::{Error, Result};
use crate::expr::{Expr, Symbol};
use crate::operator::DiffOperator;
use crate::symplectic::{Chart, HBAR};

/// Largest allowed `|ψ|` at the grid ends relative to its peak.
pub const DECAY_TOLERANCE: f64 = 1e-12;

fn fft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    plan.process(data);
}

/// Half-length of the conjugate axis, `πℏN/(2L)`.
fn conjugate_half_length(g: &WaveFunctionGrid) -> f64 {
    PI * g.hbar() * g.len() as f64 / (2.0 * g.half_length())
}

/// `(𝔉ψ)(p) = (2πℏ)^{−1/2} Σⱼ h ψ(qⱼ) e^{−ipqⱼ/ℏ}` on the conjugate grid,
/// or its inverse when `sign = +1`.
fn transform(psi: &WaveFunctionGrid, sign: f64) -> Result<WaveFunctionGrid> {
    let l = psi.half_length();
    let p_half = conjugate_half_length(psi);
    let alt = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut data: Vec<Complex64> = psi.samples().iter().enumerate().map(|(j, z)| z * alt(j)).collect();
    fft(&mut data, sign > 0.0);
    // e^{∓i P L / ℏ} with P L / ℏ = πN/2.
    let phase = Complex64::from_polar(1.0, sign * p_half * l / psi.hbar());
    let scale = psi.spacing() / (2.0 * PI * psi.hbar()).sqrt();
    let out = data.iter().enumerate().map(|(k, z)| z * phase * (scale * alt(k))).collect();
    WaveFunctionGrid::new(p_half, psi.hbar(), out)
}

/// Unitary ℏ-scaled discrete Fourier transform onto the momentum grid of
/// half-length `πℏN/(2L)`.
pub fn fourier(psi: &WaveFunctionGrid) -> Result<WaveFunctionGrid> {
    transform(psi, -1.0)
}

pub fn inverse_fourier(phi: &WaveFunctionGrid) -> Result<WaveFunctionGrid> {
    transform(phi, 1.0)
}

/// Derivative of the periodic trigonometric interpolant; the Nyquist mode
/// is dropped.
pub fn spectral_derivative(g: &WaveFunctionGrid) -> Result<WaveFunctionGrid> {
    let n = g.len();
    let period = 2.0 * g.half_length();
    let mut data = g.samples().to_vec();
    fft(&mut data, false);
    for (m, z) in data.iter_mut().enumerate() {
        let k = if m < n / 2 {
            m as f64
        } else if m == n / 2 {
            0.0
        } else {
            m as f64 - n as f64
        };
        *z *= Complex64::new(0.0, 2.0 * PI * k / period / n as f64);
    }
    fft(&mut data, true);
    g.with_samples(data)
}

/// Applies an operator whose derivatives and coefficients involve only the
/// coordinate `x` (index `k` of the chart) to samples on the `x` axis.
fn apply_on_axis(op: &DiffOperator, g: &WaveFunctionGrid, k: usize, x: &Symbol) -> Result<WaveFunctionGrid> {
    let axis = g.axis();
    let mut total = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut point = HashMap::from([(Symbol::new(HBAR), g.hbar())]);
    for (alpha, coeff) in op.terms() {
        let orders = alpha.orders();
        if orders.iter().enumerate().any(|(i, &a)| i != k && a > 0) {
            return Err(Error::InvalidGrid(format!("operator term {coeff} differentiates off the {x} axis")));
        }
        let mut d = g.clone();
        for _ in 0..orders[k] {
            d = spectral_derivative(&d)?;
        }
        for (j, xj) in axis.iter().enumerate() {
            point.insert(x.clone(), *xj);
            let c = coeff.evaluate_complex(&point).map_err(|e| match e {
                crate::expr::ExprError::Unbound(s) => {
                    Error::InvalidGrid(format!("coefficient {coeff} depends on `{s}` off the {x} axis"))
                }
                other => other.into(),
            })?;
            total[j] += c * d.samples()[j];
        }
    }
    g.with_samples(total)
}

fn distance(a: &WaveFunctionGrid, b: &WaveFunctionGrid) -> f64 {
    let sq: f64 = a.samples().iter().zip(b.samples()).map(|(x, y)| (x - y).norm_sqr()).sum();
    (a.spacing() * sq).sqrt()
}

/// `‖𝔉(f̂_S ψ) − f̂_M (𝔉ψ)‖ / ‖ψ‖` for `f` quantizable in both the
/// Schrödinger and the momentum representation of `T*ℝ`.
pub fn fourier_intertwine_residual(f: &Expr, psi: &WaveFunctionGrid, chart: &Arc<Chart>) -> Result<f64> {
    if chart.n() != 1 {
        return Err(Error::InvalidGrid("grids are one-dimensional; use a chart with n = 1".into()));
    }
    if (chart.hbar_value() - psi.hbar()).abs() > 1e-12 * psi.hbar() {
        return Err(Error::InvalidGrid(format!(
            "grid hbar {} differs from chart hbar {}",
            psi.hbar(),
            chart.hbar_value()
        )));
    }
    let ratio = psi.boundary_ratio();
    if ratio >= DECAY_TOLERANCE {
        return Err(Error::InvalidGrid(format!(
            "|ψ| at the grid ends is {ratio:e} of its peak; need < {DECAY_TOLERANCE:e}"
        )));
    }
    let schrodinger = quantize_schrodinger(f, chart)?;
    let momentum = quantize_momentum(f, chart)?;
    let lhs = fourier(&apply_on_axis(&schrodinger, psi, 0, &chart.q()[0])?)?;
    let rhs = apply_on_axis(&momentum, &fourier(psi)?, 1, &chart.p()[0])?;
    let norm = psi.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(distance(&lhs, &rhs) / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_a_fixed_point() {
        // With L = sqrt(πℏN/2) both axes coincide and the ground state maps to itself.
        let n = 256;
        let l = (PI * n as f64 / 2.0).sqrt();
        let g = WaveFunctionGrid::gaussian(n, l, 1.0).unwrap();
        let f = fourier(&g).unwrap();
        assert!((f.half_length() - l).abs() < 1e-12);
        let err = distance(&f, &g);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn inverse_round_trip() {
        let g = WaveFunctionGrid::from_fn(64, 5.0, 0.7, |x| Complex64::new(x.cos(), x)).unwrap();
        let back = inverse_fourier(&fourier(&g).unwrap()).unwrap();
        assert!(distance(&back, &g) < 1e-12);
    }

    #[test]
    fn spectral_derivative_of_a_mode() {
        let l = PI;
        let g = WaveFunctionGrid::from_fn(32, l, 1.0, |x| Complex64::new((3.0 * x).sin(), 0.0)).unwrap();
        let d = spectral_derivative(&g).unwrap();
        for (x, z) in g.axis().iter().zip(d.samples()) {
            assert!((z.re - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
        }
    }
}
