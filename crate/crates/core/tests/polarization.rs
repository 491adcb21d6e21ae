use std::sync::Arc;

use geoquant::corpus::Corpus;
use geoquant::expr::Expr;
use geoquant::polarization::{polarized_decompose, preserves_polarization, Distribution};
use geoquant::symplectic::{Chart, VectorField};
use geoquant::Error;
use proptest::prelude::*;

fn chart(n: usize) -> Arc<Chart> {
    Arc::new(Chart::canonical(n).unwrap())
}

fn dist(c: &Arc<Chart>, span: &[&[&str]]) -> Distribution {
    let fields = span
        .iter()
        .map(|comps| VectorField::new(c, comps.iter().map(|t| c.parse(t).unwrap()).collect()).unwrap())
        .collect();
    Distribution::new(c, fields).unwrap()
}

#[test]
fn lagrangian_examples() {
    let c = chart(1);
    assert!(dist(&c, &[&["0", "1"]]).is_lagrangian().unwrap());
    assert!(!dist(&c, &[&["1", "0"], &["0", "1"]]).is_lagrangian().unwrap());
    assert!(dist(&c, &[&["1", "1"]]).is_lagrangian().unwrap());
    // A rank-2 isotropic test on T*ℝ²: span{∂q1, ∂p1} is not Lagrangian.
    let c2 = chart(2);
    assert!(!dist(&c2, &[&["1", "0", "0", "0"], &["0", "0", "1", "0"]]).is_lagrangian().unwrap());
}

#[test]
fn vertical_is_lagrangian_in_low_dimensions() {
    for n in 1..=3 {
        assert!(Distribution::vertical(&chart(n)).is_lagrangian().unwrap(), "n = {n}");
    }
}

#[test]
fn involutive_examples() {
    let c2 = chart(2);
    assert!(Distribution::vertical(&c2).is_involutive().unwrap());
    // [∂q1, q1·∂p1] = ∂p1 = (1/q1)·(q1·∂p1) lies in the span at the generic point.
    let d = dist(&c2, &[&["1", "0", "0", "0"], &["0", "0", "q1", "0"]]);
    assert!(d.is_involutive().unwrap());
    // [∂q1, ∂q2 + q1·∂p1] = ∂p1 has no component along the span.
    let d = dist(&c2, &[&["1", "0", "0", "0"], &["0", "1", "q1", "0"]]);
    assert!(!d.is_involutive().unwrap());
    let w = d.involutivity_witness().unwrap().unwrap();
    assert_eq!(w, VectorField::coordinate(&c2, 2));
    let c = chart(1);
    assert!(dist(&c, &[&["q*p^2", "exp(q)"]]).is_involutive().unwrap());
}

#[test]
fn real_examples() {
    let c = chart(1);
    assert!(dist(&c, &[&["0", "1"]]).is_real().unwrap());
    assert!(!dist(&c, &[&["1", "i"]]).is_real().unwrap());
    assert!(dist(&c, &[&["0", "i"]]).is_real().unwrap());
}

#[test]
fn rank_deficient_spans_are_rejected() {
    let c = chart(2);
    let v = |t: [&str; 4]| VectorField::new(&c, t.iter().map(|s| c.parse(s).unwrap()).collect()).unwrap();
    let r = Distribution::new(&c, vec![v(["1", "q1", "0", "0"]), v(["p2", "q1*p2", "0", "0"])]);
    assert!(matches!(r, Err(Error::InvalidDistribution(_))));
}

#[test]
fn decompose_examples() {
    let c = chart(1);
    let err = polarized_decompose(&c.parse("p^2").unwrap(), &c).unwrap_err();
    assert!(matches!(err, Error::NotQuantizable { ref monomial, .. } if monomial == "p^2"));
    let d = polarized_decompose(&c.parse("q^3").unwrap(), &c).unwrap();
    assert_eq!(d.v, vec![Expr::zero()]);
    assert_eq!(d.u.to_string(), "q^3");
    let d = polarized_decompose(&c.parse("q*p + sin(q)").unwrap(), &c).unwrap();
    assert_eq!(d.v, vec![c.parse("q").unwrap()]);
    assert_eq!(d.u.to_string(), "sin(q)");
}

#[test]
fn preservation_examples() {
    let c = chart(1);
    let vertical = Distribution::vertical(&c);
    assert!(!preserves_polarization(&c.parse("p^2").unwrap(), &vertical).unwrap());
    let w = vertical.preservation_witness(&c.parse("p^2").unwrap()).unwrap().unwrap();
    assert_eq!(w, VectorField::new(&c, vec![Expr::int(-2), Expr::zero()]).unwrap());
    assert!(preserves_polarization(&c.parse("q*p").unwrap(), &vertical).unwrap());
    assert!(preserves_polarization(&c.parse("q^5 - cos(q)").unwrap(), &vertical).unwrap());
}

#[test]
fn polarized_conditions_are_equivalent_on_corpus() {
    let mut corpus = Corpus::new(0x5EED);
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..40 {
        let c = chart(1 + i % 2);
        let f = corpus.momentum_graded(&c, 3, 2);
        let decomposes = polarized_decompose(&f, &c).is_ok();
        let preserves = preserves_polarization(&f, &Distribution::vertical(&c)).unwrap();
        assert_eq!(decomposes, preserves, "f = {f}");
        if decomposes {
            accepted += 1;
        } else {
            rejected += 1;
        }
    }
    // Both branches of the equivalence are exercised.
    assert!(accepted >= 5 && rejected >= 5, "{accepted} accepted, {rejected} rejected");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn conjugation_preserves_involutivity_of_real_distributions(
        seed in any::<u64>(),
        imaginary in any::<bool>(),
    ) {
        let c = chart(2);
        let mut corpus = Corpus::new(seed);
        let mut comps: Vec<Expr> = (0..4).map(|_| corpus.chart_polynomial(&c, 2)).collect();
        if imaginary {
            comps = comps.iter().map(|e| (&Expr::imag() * e).canonicalize().unwrap()).collect();
        }
        let v = VectorField::new(&c, comps).unwrap();
        prop_assume!(!v.is_zero());
        let w = VectorField::coordinate(&c, (seed % 4) as usize);
        let Ok(d) = Distribution::new(&c, vec![v, w]) else { return Ok(()); };
        if d.is_real().unwrap() {
            prop_assert_eq!(d.is_involutive().unwrap(), d.conj().is_involutive().unwrap());
        }
    }
}
