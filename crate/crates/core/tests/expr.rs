use std::collections::HashMap;

use geoquant::expr::{Expr, ExprError, Func, Symbol, SymbolTable, Verdict};
use proptest::prelude::*;

fn table() -> SymbolTable {
    SymbolTable::with_coordinates(&["q", "p"]).unwrap().with_parameter("hbar", Some(1.0)).unwrap()
}

fn parse(text: &str) -> Expr {
    Expr::parse(text, &table()).unwrap()
}

fn canon(text: &str) -> String {
    parse(text).canonicalize().unwrap().to_string()
}

#[test]
fn canonicalize_examples() {
    assert_eq!(canon("(q+p)*(q-p) - q^2 + p^2"), "0");
    assert_eq!(canon("q*p - p*q"), "0");
    assert_eq!(canon("2/4*q"), "1/2*q");
}

#[test]
fn canonicalize_rejects_zero_denominator() {
    assert_eq!(parse("q/(p - p)").canonicalize(), Err(ExprError::DivisionByZero));
}

#[test]
fn equality_examples() {
    assert_eq!(parse("q^2").equals(&parse("q*q"), 8).unwrap(), Verdict::ProvedEqual);
    assert_eq!(parse("sin(q)^2 + cos(q)^2").equals(&parse("1"), 8).unwrap(), Verdict::NumericallyEqual);
    assert_eq!(parse("q").equals(&parse("p"), 8).unwrap(), Verdict::ProvedUnequal);
}

#[test]
fn evaluation_examples() {
    let at =
        |pairs: &[(&str, f64)]| -> HashMap<Symbol, f64> { pairs.iter().map(|(k, v)| (Symbol::new(k), *v)).collect() };
    assert_eq!(parse("p^2/2").evaluate(&at(&[("p", 2.0)])).unwrap(), 2.0);
    assert_eq!(parse("exp(0)").evaluate(&at(&[])).unwrap(), 1.0);
    assert!(matches!(parse("ln(q)").evaluate(&at(&[("q", -1.0)])), Err(ExprError::Domain(_))));
    assert!(matches!(parse("q + p").evaluate(&at(&[("q", 1.0)])), Err(ExprError::Unbound(_))));
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::var("q")),
        Just(Expr::var("p")),
        (-3i64..=3).prop_map(Expr::int),
        (-3i64..=3, 1i64..=3).prop_map(|(a, b)| Expr::ratio(a, b)),
    ]
}

fn polynomial() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::product),
            (inner, 0i64..=3).prop_map(|(b, k)| Expr::pow(b, k)),
        ]
    })
}

fn transcendental() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::product),
            (inner.clone(), 0i64..=2).prop_map(|(b, k)| Expr::pow(b, k)),
            inner.clone().prop_map(|a| Expr::apply(Func::Sin, a)),
            inner.clone().prop_map(|a| Expr::apply(Func::Exp, a)),
            inner.prop_map(|a| Expr::apply(Func::Cos, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_partials_commute(e in polynomial()) {
        let (q, p) = (Symbol::new("q"), Symbol::new("p"));
        let qp = e.differentiate(&q).unwrap().differentiate(&p).unwrap();
        let pq = e.differentiate(&p).unwrap().differentiate(&q).unwrap();
        prop_assert_eq!(qp.equals(&pq, 8).unwrap(), Verdict::ProvedEqual);
    }

    #[test]
    fn canonicalize_is_idempotent(e in transcendental()) {
        let once = e.canonicalize().unwrap();
        prop_assert_eq!(once.canonicalize().unwrap(), once);
    }

    #[test]
    fn multiplication_commutes(a in polynomial(), b in polynomial()) {
        prop_assert_eq!((&a * &b).equals(&(&b * &a), 8).unwrap(), Verdict::ProvedEqual);
    }

    #[test]
    fn leibniz_rule(a in polynomial(), b in polynomial()) {
        let q = Symbol::new("q");
        let lhs = (&a * &b).differentiate(&q).unwrap();
        let rhs = &(&a * &b.differentiate(&q).unwrap()) + &(&b * &a.differentiate(&q).unwrap());
        prop_assert_eq!(lhs.equals(&rhs, 8).unwrap(), Verdict::ProvedEqual);
    }

    #[test]
    fn parse_inverts_print_on_canonical_forms(e in transcendental()) {
        let c = e.canonicalize().unwrap();
        let reparsed = Expr::parse(&c.to_string(), &table()).unwrap();
        prop_assert_eq!(reparsed, c);
    }

    #[test]
    fn rational_canonical_forms_are_unique(a in polynomial(), b in polynomial()) {
        // a/b + a and (a + a*b)/b must reach the same normal form.
        prop_assume!(!b.canonicalize().unwrap().is_zero());
        let x = &Expr::quotient(a.clone(), b.clone()) + &a;
        let y = Expr::quotient(&a + &(&a * &b), b);
        prop_assert_eq!(x.canonicalize().unwrap(), y.canonicalize().unwrap());
    }
}
