//! Bohr–Sommerfeld spectra of one-degree-of-freedom systems
//! `H = p²/(2m) + V(q)` with a Maslov offset, and a finite-difference
//! oracle to compare against.

mod oracle;
mod quadrature;

use std::collections::HashMap;
use std::f64::consts::PI;

use num::complex::Complex64;
use serde::Serialize;

pub use oracle::{oracle_spectrum, MIN_GRID_POINTS, TAIL_MASS_LIMIT};
pub use quadrature::{gauss_legendre, AdaptiveQuadrature};

use crate::error::{Error, Result};
use crate::expr::{CompiledExpr, Expr, Symbol};

pub const DEFAULT_WINDOW: (f64, f64) = (-100.0, 100.0);
pub const DEFAULT_SCAN_POINTS: usize = 20001;
pub const QUADRATURE_POINTS: usize = 20;
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;
/// Relative width at which the level bisection stops.
pub const ENERGY_TOLERANCE: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
struct Well {
    q_min: f64,
    v_min: f64,
    /// Smallest potential value at the two window ends.
    rim: f64,
    xs: Vec<f64>,
    vs: Vec<f64>,
}

/// `H = p²/(2m) + V(q)` with `ℏ` and a Maslov offset `d`.
#[derive(Clone, Debug)]
pub struct OneDofSystem {
    potential: Expr,
    compiled: CompiledExpr,
    mass: f64,
    hbar: f64,
    maslov: f64,
    window: (f64, f64),
    well: std::result::Result<Well, Error>,
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidSystem(format!("{name} must be positive, got {x}")))
    }
}

impl OneDofSystem {
    /// `potential` may only involve `coordinate` and symbols bound in `fixed`.
    /// Defaults: `m = 1`, `ℏ = 1`, `d = ½`.
    pub fn new(potential: &Expr, coordinate: &Symbol, fixed: &HashMap<Symbol, f64>) -> Result<OneDofSystem> {
        let potential = potential.canonicalize()?;
        if potential.has_imaginary() {
            return Err(Error::InvalidSystem("potential must be real".into()));
        }
        let compiled = potential.compile(std::slice::from_ref(coordinate), fixed)?;
        let mut sys = OneDofSystem {
            potential,
            compiled,
            mass: 1.0,
            hbar: 1.0,
            maslov: 0.5,
            window: DEFAULT_WINDOW,
            well: Err(Error::InvalidSystem("not analysed".into())),
        };
        sys.well = sys.analyse(DEFAULT_SCAN_POINTS);
        if let Err(e @ Error::InvalidSystem(_)) = &sys.well {
            return Err(e.clone());
        }
        Ok(sys)
    }

    /// Parses `V` as an expression in `q`.
    pub fn parse(text: &str) -> Result<OneDofSystem> {
        let table = crate::expr::SymbolTable::with_coordinates(&["q"])?;
        let v = Expr::parse(text, &table)?;
        OneDofSystem::new(&v, &Symbol::new("q"), &HashMap::new())
    }

    pub fn with_mass(mut self, m: f64) -> Result<OneDofSystem> {
        self.mass = positive("mass", m)?;
        Ok(self)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<OneDofSystem> {
        self.hbar = positive("hbar", hbar)?;
        Ok(self)
    }

    pub fn with_maslov(mut self, d: f64) -> Result<OneDofSystem> {
        if !d.is_finite() {
            return Err(Error::InvalidSystem(format!("Maslov offset must be finite, got {d}")));
        }
        self.maslov = d;
        Ok(self)
    }

    pub fn with_window(mut self, lo: f64, hi: f64, scan_points: usize) -> Result<OneDofSystem> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) || scan_points < 3 {
            return Err(Error::InvalidSystem(format!("bad search window [{lo}, {hi}]")));
        }
        self.window = (lo, hi);
        self.well = self.analyse(scan_points);
        if let Err(e @ Error::InvalidSystem(_)) = &self.well {
            return Err(e.clone());
        }
        Ok(self)
    }

    pub fn potential(&self) -> &Expr {
        &self.potential
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn maslov(&self) -> f64 {
        self.maslov
    }

    /// `V(q)`, or NaN outside its domain.
    pub fn potential_at(&self, q: f64) -> f64 {
        self.compiled.eval(&[q]).unwrap_or(f64::NAN)
    }

    /// Location and value of the bottom of the well.
    pub fn minimum(&self) -> Result<(f64, f64)> {
        let w = self.well.as_ref().map_err(Clone::clone)?;
        Ok((w.q_min, w.v_min))
    }

    fn analyse(&self, points: usize) -> std::result::Result<Well, Error> {
        let (lo, hi) = self.window;
        let step = (hi - lo) / (points - 1) as f64;
        let xs: Vec<f64> = (0..points).map(|i| lo + i as f64 * step).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| self.potential_at(x)).collect();
        if let Some(i) = vs.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSystem(format!("potential is not finite at q = {}", xs[i])));
        }
        // Count valleys: sign changes of the slope from − to +.
        let mut wells = 0;
        let mut last = 0i8;
        for w in vs.windows(2) {
            let s = match w[1].partial_cmp(&w[0]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
            if s != 0 {
                if last == -1 && s == 1 {
                    wells += 1;
                }
                last = s;
            }
        }
        if wells > 1 {
            return Err(Error::MultiWell { wells });
        }
        let min_index = (0..points).min_by(|&a, &b| vs[a].total_cmp(&vs[b])).expect("scan is nonempty");
        let rim = vs[0].min(vs[points - 1]);
        if wells == 0 || min_index == 0 || min_index == points - 1 {
            return Err(Error::NonCompactLeaf { energy: rim });
        }
        let (q_min, v_min) = self.golden_min(xs[min_index - 1], xs[min_index + 1]);
        let (q_min, v_min) = if v_min <= vs[min_index] { (q_min, v_min) } else { (xs[min_index], vs[min_index]) };
        Ok(Well { q_min, v_min, rim, xs, vs })
    }

    fn golden_min(&self, mut a: f64, mut b: f64) -> (f64, f64) {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (self.potential_at(c), self.potential_at(d));
        for _ in 0..200 {
            if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = self.potential_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = self.potential_at(d);
            }
        }
        let x = (a + b) / 2.0;
        (x, self.potential_at(x))
    }

    /// Root of `V − E` in `[a, b]` given opposite signs at the ends.
    fn bisect_turning_point(&self, mut a: f64, mut b: f64, energy: f64) -> f64 {
        let below_at_a = self.potential_at(a) < energy;
        loop {
            let m = 0.5 * (a + b);
            if m <= a.min(b) || m >= a.max(b) {
                return m;
            }
            if (self.potential_at(m) < energy) == below_at_a {
                a = m;
            } else {
                b = m;
            }
        }
    }

    /// Turning points `q₋ < q₊` of the level `H = E`.
    pub fn turning_points(&self, energy: f64) -> Result<(f64, f64)> {
        let w = self.well.as_ref().map_err(Clone::clone)?;
        if energy < w.v_min {
            return Err(Error::EnergyBelowMinimum { energy, minimum: w.v_min });
        }
        if energy >= w.rim {
            return Err(Error::NonCompactLeaf { energy });
        }
        if energy == w.v_min {
            return Ok((w.q_min, w.q_min));
        }
        // Nearest grid points outside the level on each side of the refined minimum.
        let left = (0..w.xs.len()).rev().find(|&j| w.xs[j] < w.q_min && w.vs[j] >= energy);
        let right = (0..w.xs.len()).find(|&j| w.xs[j] > w.q_min && w.vs[j] >= energy);
        let (Some(left), Some(right)) = (left, right) else {
            return Err(Error::NonCompactLeaf { energy });
        };
        let q_minus = self.bisect_turning_point(w.xs[left], w.q_min, energy);
        let q_plus = self.bisect_turning_point(w.q_min, w.xs[right], energy);
        Ok((q_minus, q_plus))
    }

    /// `∮ p dq = 2∫_{q₋}^{q₊} √(2m(E − V)) dq`.
    pub fn action_integral(&self, energy: f64) -> Result<f64> {
        let (a, b) = self.turning_points(energy)?;
        if a == b {
            return Ok(0.0);
        }
        let quad = AdaptiveQuadrature::new(QUADRATURE_POINTS, QUADRATURE_TOLERANCE);
        let two_m = 2.0 * self.mass;
        let p = |q: f64| (two_m * (energy - self.potential_at(q))).max(0.0).sqrt();
        let c = 0.5 * (a + b);
        // q = a + t² and q = b − t² remove the square-root endpoint behaviour.
        let left = quad.integrate(|t| 2.0 * t * p(a + t * t), 0.0, (c - a).sqrt());
        let right = quad.integrate(|t| 2.0 * t * p(b - t * t), 0.0, (b - c).sqrt());
        let action = 2.0 * (left + right);
        if !action.is_finite() {
            return Err(Error::InvalidSystem(format!("action at E = {energy} is not finite")));
        }
        Ok(action)
    }

    /// `exp(iℏ⁻¹ ∮ p dq)`.
    pub fn holonomy(&self, energy: f64) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, self.action_integral(energy)? / self.hbar))
    }

    /// Energy with `∮ p dq = 2πℏ(n + d)`.
    fn level(&self, n: usize, floor: f64) -> Result<Level> {
        let (_, v_min) = self.minimum()?;
        let target = 2.0 * PI * self.hbar * (n as f64 + self.maslov);
        if target < 0.0 {
            return Err(Error::NotBracketed { n });
        }
        if target == 0.0 {
            return Ok(Level::new(n, 0.0, v_min, true));
        }
        let mut lo = floor.max(v_min);
        let mut step = (lo - v_min).max(self.hbar).max(1e-3);
        let mut hi = lo + step;
        loop {
            match self.action_integral(hi) {
                Ok(a) if a >= target => break,
                Ok(_) => {
                    lo = hi;
                    step *= 2.0;
                    hi = lo + step;
                }
                Err(Error::NonCompactLeaf { .. }) => return Err(Error::NotBracketed { n }),
                Err(e) => return Err(e),
            }
        }
        while hi - lo > ENERGY_TOLERANCE * hi.abs().max(lo.abs()) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.action_integral(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let energy = 0.5 * (lo + hi);
        Ok(Level::new(n, self.action_integral(energy)?, energy, false))
    }

    /// Bohr–Sommerfeld levels `n = 0..=n_max`.
    pub fn bs_levels(&self, n_max: usize) -> Result<SpectrumReport> {
        let mut levels: Vec<Level> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let floor = levels.last().map_or(f64::NEG_INFINITY, |l| l.e_bs);
            levels.push(self.level(n, floor)?);
        }
        Ok(SpectrumReport {
            levels,
            quadrature: QuadratureInfo { nodes: QUADRATURE_POINTS, tolerance: QUADRATURE_TOLERANCE },
            oracle: None,
            hbar: self.hbar,
            mass: self.mass,
            maslov: self.maslov,
            potential: self.potential.to_string(),
        })
    }

    /// Bohr–Sommerfeld levels joined with finite-difference eigenvalues.
    pub fn bs_report(&self, n_max: usize, grid_n: usize, half_length: f64) -> Result<SpectrumReport> {
        let mut report = self.bs_levels(n_max)?;
        let oracle = oracle_spectrum(self, n_max + 1, grid_n, half_length)?;
        for (level, e) in report.levels.iter_mut().zip(oracle) {
            level.e_oracle = Some(e);
            level.rel_error = Some((level.e_bs - e).abs() / e.abs());
        }
        report.oracle = Some(OracleInfo { grid_n, half_length });
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub n: usize,
    pub action: f64,
    #[serde(rename = "E_bs")]
    pub e_bs: f64,
    #[serde(rename = "E_oracle")]
    pub e_oracle: Option<f64>,
    #[serde(rename = "relError")]
    pub rel_error: Option<f64>,
    /// Zero-area orbit at the bottom of the well.
    pub degenerate: bool,
}

impl Level {
    fn new(n: usize, action: f64, e_bs: f64, degenerate: bool) -> Level {
        Level { n, action, e_bs, e_oracle: None, rel_error: None, degenerate }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureInfo {
    pub nodes: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleInfo {
    #[serde(rename = "gridN")]
    pub grid_n: usize,
    #[serde(rename = "L")]
    pub half_length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub levels: Vec<Level>,
    pub quadrature: QuadratureInfo,
    pub oracle: Option<OracleInfo>,
    pub hbar: f64,
    pub mass: f64,
    pub maslov: f64,
    pub potential: String,
}
