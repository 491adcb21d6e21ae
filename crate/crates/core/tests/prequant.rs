use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use geoquant::corpus::Corpus;
use geoquant::expr::{Expr, Symbol};
use geoquant::operator::{DiffOperator, MultiIndex};
use geoquant::prequant::{check_integrality, dirac_q3_residual, prequantum_operator, ManifoldDescriptor, ManifoldKind};
use geoquant::symplectic::Chart;
use proptest::prelude::*;

fn chart() -> Arc<Chart> {
    Arc::new(Chart::canonical(1).unwrap())
}

fn op(c: &Arc<Chart>, terms: &[(&[u32], &str)]) -> DiffOperator {
    DiffOperator::from_terms(c, terms.iter().map(|(a, t)| (MultiIndex::from_orders(a.to_vec()), c.parse(t).unwrap())))
        .unwrap()
}

#[test]
fn integrality_examples() {
    let check = |kind, hbar| check_integrality(&ManifoldDescriptor::new(kind, hbar).unwrap());
    let t = check(ManifoldKind::CotangentBundle { n: 1 }, 0.37);
    assert!(t.quantizable);
    assert_eq!(t.integer_class, Some(0));
    let s = check(ManifoldKind::Sphere { area: 4.0 * PI }, 1.0);
    assert!(s.quantizable);
    assert_eq!(s.integer_class, Some(2));
    let bad = check(ManifoldKind::Sphere { area: 5.0 }, 1.0);
    assert!(!bad.quantizable);
    assert_eq!(bad.integer_class, None);
    assert!((bad.class_value - 5.0 / (2.0 * PI)).abs() < 1e-15);
}

#[test]
fn prequantum_operator_examples() {
    let c = chart();
    let p_hat = prequantum_operator(&c.parse("p").unwrap(), &c).unwrap();
    assert_eq!(p_hat, op(&c, &[(&[1, 0], "-i*hbar")]));
    // Applied to exp(q): −iℏ·exp(q), checked by sampling as well.
    let s = c.parse("exp(q)").unwrap();
    let out = p_hat.apply(&s).unwrap();
    assert_eq!(out.to_string(), "-i*hbar*exp(q)");
    let at = HashMap::from([(Symbol::new("q"), 0.3), (Symbol::new("p"), -1.1), (Symbol::new("hbar"), 0.7)]);
    let z = out.evaluate_complex(&at).unwrap();
    assert!((z.im + 0.7 * 0.3f64.exp()).abs() < 1e-14 && z.re.abs() < 1e-14);

    let q_hat = prequantum_operator(&c.parse("q").unwrap(), &c).unwrap();
    assert_eq!(q_hat, op(&c, &[(&[0, 1], "i*hbar"), (&[0, 0], "q")]));

    let alpha = prequantum_operator(&c.parse("-7/3").unwrap(), &c).unwrap();
    assert_eq!(alpha, DiffOperator::identity(&c).scale(&Expr::ratio(-7, 3)).unwrap());
}

#[test]
fn prequantum_operator_depends_on_theta() {
    let c = Chart::canonical(1).unwrap();
    let theta = vec![Expr::zero(), c.parse("-q").unwrap()];
    let c = Arc::new(c.with_theta(theta).unwrap());
    // With θ = −q dp: p̂ = −iℏ∂_q + p, q̂ = iℏ∂_p.
    let p_hat = prequantum_operator(&c.parse("p").unwrap(), &c).unwrap();
    assert_eq!(p_hat, op(&c, &[(&[1, 0], "-i*hbar"), (&[0, 0], "p")]));
    let q_hat = prequantum_operator(&c.parse("q").unwrap(), &c).unwrap();
    assert_eq!(q_hat, op(&c, &[(&[0, 1], "i*hbar")]));
    assert!(dirac_q3_residual(&c.parse("q^2*p").unwrap(), &c.parse("p^3").unwrap(), &c).unwrap().is_zero());
}

#[test]
fn apply_examples() {
    let c = chart();
    let psi = c.parse("sin(q)*p + q^3").unwrap();
    assert_eq!(DiffOperator::identity(&c).apply(&psi).unwrap(), psi.canonicalize().unwrap());
    let a = op(&c, &[(&[0, 0], "q"), (&[0, 1], "1")]);
    let out = a.apply(&c.parse("q*p").unwrap()).unwrap();
    assert!(out.is_identically(&c.parse("q^2*p + q").unwrap()).unwrap());
}

#[test]
fn compose_examples() {
    let c = chart();
    let a = op(&c, &[(&[1, 0], "q*p"), (&[0, 2], "3")]);
    assert_eq!(DiffOperator::identity(&c).compose(&a).unwrap(), a);

    let dq = DiffOperator::derivative(&c, 0);
    let dp = DiffOperator::derivative(&c, 1);
    let q = DiffOperator::multiplication(&c, &c.parse("q").unwrap()).unwrap();
    let composed = dq.compose(&q).unwrap();
    assert_eq!(composed, op(&c, &[(&[1, 0], "q"), (&[0, 0], "1")]));
    let s = c.parse("q^2").unwrap();
    assert_eq!(composed.apply(&s).unwrap(), dq.apply(&q.apply(&s).unwrap()).unwrap());
    assert_eq!(dq.compose(&dp).unwrap(), dp.compose(&dq).unwrap());
}

#[test]
fn q3_examples() {
    let c = chart();
    for (f1, f2) in [("q", "p"), ("(p^2+q^2)/2", "q"), ("1", "q^3*p^2 - p")] {
        let r = dirac_q3_residual(&c.parse(f1).unwrap(), &c.parse(f2).unwrap(), &c).unwrap();
        assert!(r.is_zero(), "({f1}, {f2}): {r}");
    }
    // Equivalently [q̂, p̂] = iℏ·Id.
    let qh = prequantum_operator(&c.parse("q").unwrap(), &c).unwrap();
    let ph = prequantum_operator(&c.parse("p").unwrap(), &c).unwrap();
    assert_eq!(qh.commutator(&ph).unwrap(), op(&c, &[(&[0, 0], "i*hbar")]));
}

fn random_operator(corpus: &mut Corpus, c: &Arc<Chart>) -> DiffOperator {
    let terms = (0..3).map(|k| {
        let alpha = MultiIndex::from_orders(vec![k % 2, (k + 1) % 3]);
        (alpha, corpus.chart_polynomial(c, 2))
    });
    DiffOperator::from_terms(c, terms.collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn q1_linearity(seed in any::<u64>()) {
        let c = Arc::new(Chart::canonical(2).unwrap());
        let mut corpus = Corpus::new(seed);
        let (alpha, beta) = (corpus.rational(), corpus.rational());
        let f = corpus.chart_polynomial(&c, 3);
        let g = corpus.chart_polynomial(&c, 3);
        let lhs = prequantum_operator(&(&(&alpha * &f) + &(&beta * &g)), &c).unwrap();
        let rhs = prequantum_operator(&f, &c).unwrap().scale(&alpha).unwrap()
            .add(&prequantum_operator(&g, &c).unwrap().scale(&beta).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q2_constants_are_scalars(num in -50i64..50, den in 1i64..20) {
        let c = chart();
        let a = Expr::ratio(num, den);
        prop_assert_eq!(
            prequantum_operator(&a, &c).unwrap(),
            DiffOperator::identity(&c).scale(&a).unwrap()
        );
    }

    #[test]
    fn q3_on_random_pairs(seed in any::<u64>()) {
        let c = Arc::new(Chart::canonical(1 + (seed % 2) as usize).unwrap());
        let mut corpus = Corpus::new(seed);
        let f1 = corpus.chart_polynomial(&c, 3);
        let f2 = corpus.chart_polynomial(&c, 3);
        prop_assert!(dirac_q3_residual(&f1, &f2, &c).unwrap().is_zero());
    }

    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        let c = chart();
        let mut corpus = Corpus::new(seed);
        let (a, b, d) = (
            random_operator(&mut corpus, &c),
            random_operator(&mut corpus, &c),
            random_operator(&mut corpus, &c),
        );
        let s = corpus.chart_polynomial(&c, 3);
        let left = a.compose(&b).unwrap().compose(&d).unwrap();
        let right = a.compose(&b.compose(&d).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let nested = a.apply(&b.apply(&d.apply(&s).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(left.apply(&s).unwrap(), nested);
    }

    #[test]
    fn prequantum_operators_are_formally_symmetric(seed in any::<u64>()) {
        let c = Arc::new(Chart::canonical(1 + (seed % 2) as usize).unwrap());
        let f = Corpus::new(seed).chart_polynomial(&c, 3);
        let fh = prequantum_operator(&f, &c).unwrap();
        prop_assert!(fh.sub(&fh.adjoint().unwrap()).unwrap().is_zero());
    }
}
