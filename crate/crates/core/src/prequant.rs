//! Integrality of the symplectic class and the prequantum operators
//! `f̂ = −iℏ X_f − θ(X_f) + f`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::operator::{DiffOperator, MultiIndex};
use crate::symplectic::{hamiltonian_vector_field, poisson_bracket, Chart};

const INTEGRALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ManifoldKind {
    CotangentBundle { n: usize },
    Sphere { area: f64 },
    Torus2 { area: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    #[serde(flatten)]
    pub kind: ManifoldKind,
    pub hbar: f64,
}

impl ManifoldDescriptor {
    pub fn new(kind: ManifoldKind, hbar: f64) -> Result<ManifoldDescriptor> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidChart(format!("hbar must be positive, got {hbar}")));
        }
        match kind {
            ManifoldKind::CotangentBundle { n: 0 } => {
                return Err(Error::InvalidChart("cotangent bundle needs n ≥ 1".into()))
            }
            ManifoldKind::Sphere { area } | ManifoldKind::Torus2 { area } if !(area > 0.0 && area.is_finite()) => {
                return Err(Error::InvalidChart(format!("area must be positive, got {area}")))
            }
            _ => {}
        }
        Ok(ManifoldDescriptor { kind, hbar })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Integrality {
    pub quantizable: bool,
    pub integer_class: Option<i64>,
    /// `[ω]/(2πℏ)` evaluated on the fundamental class.
    pub class_value: f64,
}

/// Whether `[ω/(2πℏ)]` is integral, within relative tolerance `1e−9`.
pub fn check_integrality(m: &ManifoldDescriptor) -> Integrality {
    match m.kind {
        ManifoldKind::CotangentBundle { .. } => {
            Integrality { quantizable: true, integer_class: Some(0), class_value: 0.0 }
        }
        ManifoldKind::Sphere { area } | ManifoldKind::Torus2 { area } => {
            let x = area / (2.0 * PI * m.hbar);
            let k = x.round();
            let ok = k >= 1.0 && (x - k).abs() <= INTEGRALITY_TOL * x.abs();
            Integrality { quantizable: ok, integer_class: ok.then_some(k as i64), class_value: x }
        }
    }
}

/// `−iℏ X_f − θ(X_f) + f`.
pub fn prequantum_operator(f: &Expr, chart: &Arc<Chart>) -> Result<DiffOperator> {
    let x = hamiltonian_vector_field(f, chart)?;
    let minus_i_hbar = &Expr::int(-1) * &(&Expr::imag() * &chart.hbar());
    let dim = chart.dim();
    let mut terms: Vec<(MultiIndex, Expr)> =
        x.components().iter().enumerate().map(|(k, c)| (MultiIndex::unit(dim, k), &minus_i_hbar * c)).collect();
    terms.push((MultiIndex::zero(dim), f - &chart.theta_of(&x)?));
    DiffOperator::from_terms(chart, terms)
}

/// `[f̂₁, f̂₂] + iℏ·\widehat{{f₁,f₂}}`; zero exactly when Dirac's bracket
/// condition holds.
pub fn dirac_q3_residual(f1: &Expr, f2: &Expr, chart: &Arc<Chart>) -> Result<DiffOperator> {
    let a = prequantum_operator(f1, chart)?;
    let b = prequantum_operator(f2, chart)?;
    let bracket = prequantum_operator(&poisson_bracket(f1, f2, chart)?, chart)?;
    let i_hbar = &Expr::imag() * &chart.hbar();
    a.commutator(&b)?.add(&bracket.scale(&i_hbar)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_and_tolerance() {
        let t = ManifoldDescriptor::new(ManifoldKind::Torus2 { area: 2.0 * PI * 3.0 }, 1.0).unwrap();
        assert_eq!(check_integrality(&t).integer_class, Some(3));
        let near = ManifoldDescriptor::new(ManifoldKind::Sphere { area: 4.0 * PI * (1.0 + 1e-7) }, 1.0).unwrap();
        assert!(!check_integrality(&near).quantizable);
        assert!(ManifoldDescriptor::new(ManifoldKind::Sphere { area: -1.0 }, 1.0).is_err());
        assert!(ManifoldDescriptor::new(ManifoldKind::Sphere { area: 1.0 }, 0.0).is_err());
    }

    #[test]
    fn small_area_is_not_class_zero() {
        let s = ManifoldDescriptor::new(ManifoldKind::Sphere { area: 1e-12 }, 1.0).unwrap();
        assert!(!check_integrality(&s).quantizable);
    }

    #[test]
    fn descriptor_json() {
        let m: ManifoldDescriptor = serde_json::from_str(r#"{"kind":"sphere","area":5.0,"hbar":1.0}"#).unwrap();
        assert_eq!(m.kind, ManifoldKind::Sphere { area: 5.0 });
    }
}
