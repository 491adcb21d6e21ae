//! Built-in residual corpora: Dirac's axioms for prequantum operators, the
//! Jacobi identity, and Fourier intertwining of the two representations.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::Result;
use crate::expr::Expr;
use crate::operator::DiffOperator;
use crate::prequant::{dirac_q3_residual, prequantum_operator};
use crate::representation::{fourier, fourier_intertwine_residual, WaveFunctionGrid};
use crate::symplectic::{jacobi_residual, Chart};

pub const DIRAC_PAIRS: usize = 30;
pub const JACOBI_TRIPLES: usize = 50;
pub const MAX_DEGREE: u32 = 3;
pub const FOURIER_POINTS: usize = 1024;
pub const FOURIER_HALF_LENGTH: f64 = 12.0;
pub const FOURIER_TOLERANCE: f64 = 1e-8;
pub const UNITARITY_TOLERANCE: f64 = 1e-12;
pub const HERMITE_ORDERS: usize = 5;
/// Random points at which an exact residual is also evaluated numerically.
const PROBE_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dirac,
    Jacobi,
    Fourier,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Dirac => "dirac",
            Suite::Jacobi => "jacobi",
            Suite::Fourier => "fourier",
        }
    }
}

/// Pass/fail tally for one property.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub worst_residual: f64,
    /// Inputs of failing cases.
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Check {
        Check { name: name.into(), cases: 0, passed: 0, worst_residual: 0.0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, residual: f64, input: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(input());
        }
        if residual.is_nan() || residual > self.worst_residual {
            self.worst_residual = residual;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_residual: f64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, checks: Vec<Check>) -> SuiteReport {
        let cases = checks.iter().map(|c| c.cases).sum();
        let passed = checks.iter().map(|c| c.passed).sum();
        let worst_residual = checks.iter().map(|c| c.worst_residual).fold(0.0, f64::max);
        SuiteReport { suite, seed, cases, passed, failed: cases - passed, worst_residual, checks }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<SuiteReport> {
    match suite {
        Suite::Dirac => dirac(seed),
        Suite::Jacobi => jacobi(seed),
        Suite::Fourier => fourier_suite(),
    }
}

fn charts() -> Result<[Arc<Chart>; 2]> {
    Ok([Arc::new(Chart::canonical(1)?), Arc::new(Chart::canonical(2)?)])
}

/// Largest modulus of `e` over seeded points in `[−1, 1]^{2n}`.
fn magnitude(e: &Expr, chart: &Chart, rng: &mut ChaCha8Rng) -> Result<f64> {
    if e.is_zero() {
        return Ok(0.0);
    }
    let mut point = chart.symbols().bindings();
    let mut worst = 0.0f64;
    for _ in 0..PROBE_POINTS {
        for s in chart.coordinates() {
            point.insert(s, rng.gen_range(-1.0..1.0));
        }
        let v = e.evaluate_complex(&point)?.norm();
        worst = if v.is_nan() { v } else { worst.max(v) };
    }
    Ok(worst)
}

fn operator_magnitude(op: &DiffOperator, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in op.terms().values() {
        worst = worst.max(magnitude(c, op.chart(), rng)?);
    }
    Ok(worst)
}

/// Q1 linearity, Q2 constants to scalars and Q3 the bracket condition on
/// random polynomial pairs over `T*ℝ¹` and `T*ℝ²`.
pub fn dirac(seed: u64) -> Result<SuiteReport> {
    let charts = charts()?;
    let mut corpus = Corpus::new(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1AC);
    let mut q1 = Check::new("Q1 linearity");
    let mut q2 = Check::new("Q2 constants");
    let mut q3 = Check::new("Q3 bracket");
    for i in 0..DIRAC_PAIRS {
        let chart = &charts[i % 2];
        let f = corpus.chart_polynomial(chart, MAX_DEGREE);
        let g = corpus.chart_polynomial(chart, MAX_DEGREE);
        let (a, b) = (corpus.rational(), corpus.rational());

        let combined = prequantum_operator(&(&(&a * &f) + &(&b * &g)), chart)?;
        let separate = prequantum_operator(&f, chart)?.scale(&a)?.add(&prequantum_operator(&g, chart)?.scale(&b)?)?;
        let r1 = combined.sub(&separate)?;
        q1.record(r1.is_zero(), operator_magnitude(&r1, &mut rng)?, || format!("a={a}, b={b}, f={f}, g={g}"));

        let r2 = prequantum_operator(&a, chart)?.sub(&DiffOperator::identity(chart).scale(&a)?)?;
        q2.record(r2.is_zero(), operator_magnitude(&r2, &mut rng)?, || format!("alpha={a}"));

        let r3 = dirac_q3_residual(&f, &g, chart)?;
        q3.record(r3.is_zero(), operator_magnitude(&r3, &mut rng)?, || format!("f={f}, g={g}"));
    }
    Ok(SuiteReport::new(Suite::Dirac, seed, vec![q1, q2, q3]))
}

/// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0` on random polynomial triples.
pub fn jacobi(seed: u64) -> Result<SuiteReport> {
    let charts = charts()?;
    let mut corpus = Corpus::new(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1AC0);
    let mut check = Check::new("Jacobi identity");
    for i in 0..JACOBI_TRIPLES {
        let chart = &charts[i % 2];
        let f = corpus.chart_polynomial(chart, MAX_DEGREE);
        let g = corpus.chart_polynomial(chart, MAX_DEGREE);
        let h = corpus.chart_polynomial(chart, MAX_DEGREE);
        let r = jacobi_residual(&f, &g, &h, chart)?;
        check.record(r.is_zero(), magnitude(&r, chart, &mut rng)?, || format!("f={f}, g={g}, h={h}"));
    }
    Ok(SuiteReport::new(Suite::Jacobi, seed, vec![check]))
}

/// Intertwining residuals for `f ∈ {q, p, q+p}` on Hermite functions
/// `k = 0..5` with `N = 1024`, `L = 12`, `ℏ = 1`, and DFT unitarity.
pub fn fourier_suite() -> Result<SuiteReport> {
    let chart = Arc::new(Chart::canonical(1)?);
    let hbar = chart.hbar_value();
    let observables: Vec<Expr> = ["q", "p", "q + p"].iter().map(|t| chart.parse(t)).collect::<Result<_>>()?;
    let mut intertwine = Check::new("Fourier intertwining");
    let mut unitarity = Check::new("DFT unitarity");
    for k in 0..HERMITE_ORDERS {
        let psi = WaveFunctionGrid::hermite(k, FOURIER_POINTS, FOURIER_HALF_LENGTH, hbar)?;
        for f in &observables {
            let r = fourier_intertwine_residual(f, &psi, &chart)?;
            intertwine.record(r < FOURIER_TOLERANCE, r, || format!("f={f}, hermite k={k}"));
        }
        let r = (fourier(&psi)?.norm() - psi.norm()).abs() / psi.norm();
        unitarity.record(r < UNITARITY_TOLERANCE, r, || format!("hermite k={k}"));
    }
    Ok(SuiteReport::new(Suite::Fourier, 0, vec![intertwine, unitarity]))
}
