use std::f64::consts::PI;
use std::fmt::Write as _;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples of a wave function at `xⱼ = −L + j·2L/N`, `j = 0..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunctionGrid {
    half_length: f64,
    hbar: f64,
    samples: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    l: f64,
    hbar: f64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGrid(msg.into())
}

impl WaveFunctionGrid {
    pub fn new(half_length: f64, hbar: f64, samples: Vec<Complex64>) -> Result<WaveFunctionGrid> {
        let n = samples.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(invalid(format!("N must be a power of two ≥ 8, got {n}")));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(invalid(format!("L must be positive, got {half_length}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid(format!("hbar must be positive, got {hbar}")));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("samples must be finite"));
        }
        Ok(WaveFunctionGrid { half_length, hbar, samples })
    }

    pub fn from_fn(n: usize, half_length: f64, hbar: f64, f: impl Fn(f64) -> Complex64) -> Result<WaveFunctionGrid> {
        let h = 2.0 * half_length / n as f64;
        let samples = (0..n).map(|j| f(-half_length + j as f64 * h)).collect();
        WaveFunctionGrid::new(half_length, hbar, samples)
    }

    /// `(πℏ)^{−1/4} exp(−x²/(2ℏ))`, the normalized oscillator ground state.
    pub fn gaussian(n: usize, half_length: f64, hbar: f64) -> Result<WaveFunctionGrid> {
        WaveFunctionGrid::hermite(0, n, half_length, hbar)
    }

    /// Normalized Hermite function of order `k` at scale `√ℏ`.
    pub fn hermite(k: usize, n: usize, half_length: f64, hbar: f64) -> Result<WaveFunctionGrid> {
        let scale = hbar.sqrt();
        WaveFunctionGrid::from_fn(n, half_length, hbar, |x| {
            let t = x / scale;
            let mut prev = 0.0;
            let mut cur = PI.powf(-0.25) * (-t * t / 2.0).exp();
            for j in 0..k {
                let jf = j as f64;
                let next = (2.0 / (jf + 1.0)).sqrt() * t * cur - (jf / (jf + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
            }
            Complex64::new(cur / scale.sqrt(), 0.0)
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.len() as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.len()).map(|j| -self.half_length + j as f64 * h).collect()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Grid with the same axis and new samples.
    pub fn with_samples(&self, samples: Vec<Complex64>) -> Result<WaveFunctionGrid> {
        if samples.len() != self.len() {
            return Err(invalid("sample count changed"));
        }
        WaveFunctionGrid::new(self.half_length, self.hbar, samples)
    }

    /// Discrete L² norm `(h Σ|ψⱼ|²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        (self.spacing() * self.samples.iter().map(Complex64::norm_sqr).sum::<f64>()).sqrt()
    }

    /// Largest endpoint modulus relative to the peak modulus.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let ends = self.samples[0].norm().max(self.samples[self.len() - 1].norm());
        ends / peak
    }

    /// JSON header line followed by `N` lines of `re im`.
    pub fn to_text(&self) -> String {
        let header = Header { n: self.len(), l: self.half_length, hbar: self.hbar };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for z in &self.samples {
            writeln!(out, "{:e} {:e}", z.re, z.im).expect("writing to a String");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<WaveFunctionGrid> {
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        let header: Header = serde_json::from_str(first.trim()).map_err(|e| invalid(format!("bad header: {e}")))?;
        let values = rest
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| invalid(format!("bad number `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != 2 * header.n {
            return Err(invalid(format!("expected {} reals, found {}", 2 * header.n, values.len())));
        }
        let samples = values.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        WaveFunctionGrid::new(header.l, header.hbar, samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_functions_are_orthonormal() {
        let grids: Vec<_> = (0..5).map(|k| WaveFunctionGrid::hermite(k, 512, 12.0, 0.5).unwrap()).collect();
        for (a, ga) in grids.iter().enumerate() {
            for (b, gb) in grids.iter().enumerate() {
                let ip: f64 =
                    ga.samples().iter().zip(gb.samples()).map(|(x, y)| (x.conj() * y).re).sum::<f64>() * ga.spacing();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12, "<{a}|{b}> = {ip}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let g = WaveFunctionGrid::from_fn(8, 2.0, 1.0, |x| Complex64::new(x.sin(), x * 0.1)).unwrap();
        assert_eq!(WaveFunctionGrid::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn invalid_grids() {
        assert!(WaveFunctionGrid::from_fn(12, 1.0, 1.0, |_| Complex64::new(1.0, 0.0)).is_err());
        assert!(WaveFunctionGrid::from_fn(4, 1.0, 1.0, |_| Complex64::new(1.0, 0.0)).is_err());
        assert!(WaveFunctionGrid::from_fn(8, 1.0, 1.0, |_| Complex64::new(f64::NAN, 0.0)).is_err());
        assert!(WaveFunctionGrid::from_text("{\"N\":8,\"L\":1,\"hbar\":1}\n1 2 3").is_err());
    }
}
