mod common;

use std::collections::BTreeMap;

use common::rat;
use pproduct::series::Series;
use pproduct::termauto::{antiderivative, closure_combine, Combine, TermKind};
use pproduct::{Limits, ProductRule, Rational, Term, TermAutomaton};
use proptest::prelude::*;

const LETTERS: &[&str] = &["a", "b"];
const VARS: &[&str] = &["x", "y", "z"];
const LEN: usize = 3;

fn leaf() -> impl Strategy<Value = Term> {
    prop::sample::select(VARS).prop_map(Term::var)
}

fn term(depth: u32) -> impl Strategy<Value = Term> {
    leaf().prop_recursive(depth, 12, 2, |inner| {
        prop_oneof![
            ((-3i64..=3).prop_filter("nonzero", |c| *c != 0), inner.clone())
                .prop_map(|(c, t)| Term::scale(rat(c), t)),
            (inner.clone(), inner.clone()).prop_map(|(u, v)| Term::sum(u, v)),
            (inner.clone(), inner).prop_map(|(u, v)| Term::product(u, v)),
        ]
    })
}

fn any_rule() -> impl Strategy<Value = ProductRule> {
    prop::sample::select(vec![
        "hadamard",
        "shuffle",
        "infiltration",
        "xd*y",
        "x*y + xd*yd",
        "x*yd + 2*xd*yd",
    ])
    .prop_map(|r| ProductRule::parse(r).unwrap())
}

fn automaton() -> impl Strategy<Value = TermAutomaton> {
    (
        any_rule(),
        proptest::collection::vec(-2i64..=2, VARS.len()),
        proptest::collection::vec(term(1), VARS.len() * LETTERS.len()),
    )
        .prop_map(|(rule, outs, deltas)| {
            let mut a = TermAutomaton::new(LETTERS, VARS, rule).unwrap();
            for (v, o) in VARS.iter().zip(outs) {
                a.set_output(v, rat(o)).unwrap();
            }
            let mut it = deltas.into_iter();
            for l in LETTERS {
                for v in VARS {
                    a.set_transition(l, v, it.next().unwrap()).unwrap();
                }
            }
            a
        })
}

fn table(a: &TermAutomaton, t: &Term, len: usize) -> Series {
    let lim = Limits::default();
    let coeffs = a.coefficients(t, len, &lim).unwrap().into_iter().map(|(_, c)| c).collect();
    Series::from_table(a.alphabet().len(), len, coeffs)
}

/// Interprets `t` over the series of the variables, using only the
/// defining recursion of the product.
fn interpret(rule: &Term, t: &Term, env: &BTreeMap<String, Series>) -> Series {
    match t.kind() {
        TermKind::Zero => Series::zero(2, LEN),
        TermKind::Var(v) => env[&v.to_string()].clone(),
        TermKind::Scale(c, u) => interpret(rule, u, env).scale(c),
        TermKind::Sum(u, v) => interpret(rule, u, env).add(&interpret(rule, v, env)),
        TermKind::Product(u, v) => Series::product(rule, &interpret(rule, u, env), &interpret(rule, v, env)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn semantics_is_a_homomorphism(a in automaton(), t in term(2)) {
        let env: BTreeMap<String, Series> = VARS.iter().map(|v| (v.to_string(), table(&a, &Term::var(v), LEN))).collect();
        prop_assert_eq!(table(&a, &t, LEN), interpret(a.rule().source(), &t, &env));
    }

    #[test]
    fn extension_is_linear(a in automaton(), s in term(2), t in term(2), c in -3i64..=3, l in prop::sample::select(LETTERS)) {
        let lim = Limits::default();
        let lhs = a.p_extend(l, &Term::sum(Term::scale(rat(c), s.clone()), t.clone()), &lim).unwrap();
        let rhs = Term::sum(Term::scale(rat(c), a.p_extend(l, &s, &lim).unwrap()), a.p_extend(l, &t, &lim).unwrap());
        prop_assert_eq!(table(&a, &lhs, 2), table(&a, &rhs, 2));
    }

    #[test]
    fn derivative_adjunction(a in automaton(), t in term(2), l in 0usize..2) {
        let lim = Limits::default();
        let d = a.p_extend(LETTERS[l], &t, &lim).unwrap();
        prop_assert_eq!(table(&a, &d, 2), table(&a, &t, 3).derivative(l));
    }

    #[test]
    fn closure_operations_match_series(a in automaton(), b in automaton(), s in term(1), t in term(1), c in -3i64..=3) {
        prop_assume!(a.rule() == b.rule());
        let lim = Limits::default();
        let (fs, gt) = (table(&a, &s, LEN), table(&b, &t, LEN));
        let rule = a.rule().source().clone();

        let (u, w) = closure_combine(&Combine::Sum, &[(&a, &s), (&b, &t)], &lim).unwrap();
        prop_assert_eq!(table(&u, &w, LEN), fs.add(&gt));
        let (u, w) = closure_combine(&Combine::Product, &[(&a, &s), (&b, &t)], &lim).unwrap();
        prop_assert_eq!(table(&u, &w, LEN), Series::product(&rule, &fs, &gt));
        let (u, w) = closure_combine(&Combine::Scale(rat(c)), &[(&a, &s)], &lim).unwrap();
        prop_assert_eq!(table(&u, &w, LEN), fs.scale(&rat(c)));
        let (u, w) = closure_combine(&Combine::LeftDerivative("b".into()), &[(&a, &s)], &lim).unwrap();
        prop_assert_eq!(table(&u, &w, LEN - 1), fs.derivative(1));
    }

    #[test]
    fn antiderivative_prescribes_derivatives(a in automaton(), s in term(1), t in term(1), c in -3i64..=3) {
        let family: BTreeMap<String, (TermAutomaton, Term)> =
            [("a".to_string(), (a.clone(), s.clone())), ("b".to_string(), (a.clone(), t.clone()))].into_iter().collect();
        let (g, gt) = antiderivative(&family, rat(c)).unwrap();
        let tab = table(&g, &gt, LEN);
        prop_assert_eq!(tab.get(&[]), &rat(c));
        prop_assert_eq!(tab.derivative(0), table(&a, &s, LEN - 1));
        prop_assert_eq!(tab.derivative(1), table(&a, &t, LEN - 1));
    }
}

fn single(rule: &str, fx: i64, dx: &str) -> TermAutomaton {
    let mut a = TermAutomaton::new(&["a"], &["x"], ProductRule::parse(rule).unwrap()).unwrap();
    a.set_output("x", rat(fx)).unwrap();
    a.set_transition("a", "x", Term::parse(dx).unwrap()).unwrap();
    a
}

#[test]
fn nested_antiderivatives_place_a_word() {
    // g = ∫(a ↦ ∫(b ↦ f, a ↦ 0)); the only nonzero coefficients of g sit after "ab".
    let mut ones = TermAutomaton::new(&["a", "b"], &["x"], ProductRule::shuffle()).unwrap();
    ones.set_output("x", Rational::one()).unwrap();
    for l in ["a", "b"] {
        ones.set_transition(l, "x", Term::var("x")).unwrap();
    }
    let x = Term::var("x");
    let inner: BTreeMap<String, (TermAutomaton, Term)> =
        [("a".to_string(), (ones.clone(), Term::zero())), ("b".to_string(), (ones.clone(), x.clone()))].into_iter().collect();
    let (h, ht) = antiderivative(&inner, Rational::zero()).unwrap();
    let outer: BTreeMap<String, (TermAutomaton, Term)> =
        [("a".to_string(), (h, ht)), ("b".to_string(), (ones.clone(), Term::zero()))].into_iter().collect();
    let (g, gt) = antiderivative(&outer, Rational::zero()).unwrap();
    let tab = table(&g, &gt, LEN);
    for w in pproduct::series::words(2, LEN) {
        let expected = if w.len() >= 2 && w[0] == 0 && w[1] == 1 { 1 } else { 0 };
        assert_eq!(tab.get(&w), &rat(expected), "word {w:?}");
    }
}

#[test]
fn known_sequences() {
    let lim = Limits::default();
    let x = Term::var("x");
    let fact = single("shuffle", 1, "x*x");
    let expected = [1, 1, 2, 6, 24, 120];
    for (n, e) in expected.iter().enumerate() {
        assert_eq!(fact.coefficient(&x, &vec!["a"; n], &lim).unwrap(), rat(*e));
    }
    let dexp = single("hadamard", 2, "x*x");
    for (n, e) in [2i64, 4, 16, 256].iter().enumerate() {
        assert_eq!(dexp.coefficient(&x, &vec!["a"; n], &lim).unwrap(), rat(*e));
    }
}

#[test]
fn node_cap_is_a_resource_limit() {
    let fact = single("shuffle", 1, "x*x");
    let lim = Limits { max_term_nodes: 100, ..Limits::default() };
    let err = fact.coefficient(&Term::var("x"), &["a"; 12], &lim).unwrap_err();
    assert!(matches!(err, pproduct::Error::ResourceLimit(_)), "{err:?}");
}
