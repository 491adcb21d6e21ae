//! Seeded generators of random polynomials for residual checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Expr, Symbol};
use crate::symplectic::Chart;

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Corpus {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn rational(&mut self) -> Expr {
        let num = *[-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5].choose(&mut self.rng).unwrap();
        Expr::ratio(num, self.rng.gen_range(1..=3))
    }

    fn monomial(&mut self, vars: &[Symbol], degree: u32) -> Expr {
        let mut factors = vec![self.rational()];
        for _ in 0..degree {
            factors.push(Expr::symbol(vars.choose(&mut self.rng).unwrap()));
        }
        Expr::product(factors)
    }

    /// Polynomial in `vars` with 1 to `max_terms` terms of total degree at
    /// most `max_degree`, canonicalized.
    pub fn polynomial(&mut self, vars: &[Symbol], max_degree: u32, max_terms: usize) -> Expr {
        let count = self.rng.gen_range(1..=max_terms);
        let terms = (0..count)
            .map(|_| {
                let d = self.rng.gen_range(0..=max_degree);
                self.monomial(vars, d)
            })
            .collect();
        Expr::sum(terms).canonicalize().expect("polynomials canonicalize")
    }

    /// Polynomial over all coordinates of `chart`.
    pub fn chart_polynomial(&mut self, chart: &Chart, max_degree: u32) -> Expr {
        self.polynomial(&chart.coordinates(), max_degree, 4)
    }

    /// Polynomial whose momentum degree is at most a randomly drawn bound in
    /// `0..=max_p_degree`, with position degree at most `max_q_degree` per term.
    pub fn momentum_graded(&mut self, chart: &Chart, max_p_degree: u32, max_q_degree: u32) -> Expr {
        let bound = self.rng.gen_range(0..=max_p_degree);
        let count = self.rng.gen_range(1..=4);
        let mut terms: Vec<Expr> = (0..count)
            .map(|_| {
                let dp = self.rng.gen_range(0..=bound);
                let dq = self.rng.gen_range(0..=max_q_degree);
                &self.monomial(chart.p(), dp) * &self.monomial(chart.q(), dq)
            })
            .collect();
        // Make sure the drawn bound is attained.
        terms.push(self.monomial(chart.p(), bound));
        Expr::sum(terms).canonicalize().expect("polynomials canonicalize")
    }

    /// `Σ vᵃ(q) p_a + u(q)` with polynomial coefficients of degree at most
    /// `max_q_degree`.
    pub fn momentum_linear(&mut self, chart: &Chart, max_q_degree: u32) -> Expr {
        let mut terms = Vec::with_capacity(chart.n() + 1);
        for pa in chart.p() {
            let v = self.polynomial(chart.q(), max_q_degree, 3);
            terms.push(&v * &Expr::symbol(pa));
        }
        terms.push(self.polynomial(chart.q(), max_q_degree, 3));
        Expr::sum(terms).canonicalize().expect("polynomials canonicalize")
    }
}
