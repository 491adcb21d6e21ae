//! Finite-difference eigenvalues of `−ℏ²/(2m) d²/dq² + V` with Dirichlet
//! walls at `±L`.

use super::OneDofSystem;
use crate::error::{Error, Result};

/// Largest eigenvector mass allowed in the outer 5% of the grid on each side.
pub const TAIL_MASS_LIMIT: f64 = 1e-8;
pub const MIN_GRID_POINTS: usize = 200;

/// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let e2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + self.off.abs());
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - x } else { a - x - e2 / d };
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().copied().fold(f64::INFINITY, f64::min) - r;
        let hi = self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max) + r;
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by Sturm bisection.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Solves `(T − λI) x = b` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, lambda: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        // Row i holds (sub, main, sup, sup2) after pivoting.
        let mut main: Vec<f64> = self.diag.iter().map(|d| d - lambda).collect();
        let mut sub = vec![self.off; n];
        let mut sup = vec![self.off; n];
        let mut sup2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        sup[n - 1] = 0.0;
        for i in 0..n - 1 {
            let below = sub[i + 1];
            if below.abs() > main[i].abs() {
                // Swap rows i and i+1.
                let (m0, s0, t0) = (main[i], sup[i], sup2[i]);
                main[i] = below;
                sup[i] = main[i + 1];
                sup2[i] = sup[i + 1];
                main[i + 1] = s0;
                sup[i + 1] = t0;
                sub[i + 1] = m0;
                rhs.swap(i, i + 1);
            }
            let pivot = if main[i] == 0.0 { f64::EPSILON * self.off.abs() } else { main[i] };
            main[i] = pivot;
            let factor = sub[i + 1] / pivot;
            main[i + 1] -= factor * sup[i];
            sup[i + 1] -= factor * sup2[i];
            rhs[i + 1] -= factor * rhs[i];
        }
        if main[n - 1] == 0.0 {
            main[n - 1] = f64::EPSILON * self.off.abs();
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= sup[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= sup2[i] * x[i + 2];
            }
            x[i] = s / main[i];
        }
        x
    }

    /// Normalized eigenvector for an accurate eigenvalue by inverse iteration.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..3 {
            x = self.solve_shifted(lambda, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// Lowest `count` eigenvalues of the central-difference Hamiltonian on
/// `gridN` interior nodes of `[−L, L]`.
pub fn oracle_spectrum(sys: &OneDofSystem, count: usize, grid_n: usize, half_length: f64) -> Result<Vec<f64>> {
    if grid_n < MIN_GRID_POINTS {
        return Err(Error::InvalidGrid(format!("gridN must be at least {MIN_GRID_POINTS}, got {grid_n}")));
    }
    if !(half_length > 0.0 && half_length.is_finite()) {
        return Err(Error::InvalidGrid(format!("L must be positive, got {half_length}")));
    }
    if count == 0 || count > grid_n {
        return Err(Error::InvalidGrid(format!("count must be in 1..={grid_n}, got {count}")));
    }
    let h = 2.0 * half_length / (grid_n + 1) as f64;
    let kinetic = sys.hbar() * sys.hbar() / (sys.mass() * h * h);
    let diag = (1..=grid_n)
        .map(|i| {
            let x = -half_length + i as f64 * h;
            let v = sys.potential_at(x);
            if v.is_finite() {
                Ok(kinetic + v)
            } else {
                Err(Error::InvalidSystem(format!("potential is not finite at q = {x}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let t = Tridiagonal { diag, off: -kinetic / 2.0 };
    let tail = grid_n / 20;
    (0..count)
        .map(|k| {
            let lambda = t.eigenvalue(k);
            let v = t.eigenvector(lambda);
            let mass: f64 = v[..tail].iter().chain(&v[grid_n - tail..]).map(|x| x * x).sum();
            if mass > TAIL_MASS_LIMIT {
                return Err(Error::InsufficientDecay { index: k, mass });
            }
            Ok(lambda)
        })
        .collect()
}
