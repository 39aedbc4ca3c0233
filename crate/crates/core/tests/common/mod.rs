#![allow(dead_code)]

use proptest::prelude::*;

use pproduct::polyalg::{var, Monomial};
use pproduct::{Poly, PolyAutomaton, ProductRule, Rational};

pub fn rat(n: i64) -> Rational {
    Rational::from(n)
}

pub fn p(s: &str) -> Poly {
    Poly::parse(s).unwrap()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

/// Random polynomial in `vars` with at most `max_terms` terms of total degree
/// at most `max_deg`; `poly0` drops the constant term.
pub fn poly(vars: &'static [&'static str], max_deg: u32, max_terms: usize, poly0: bool) -> impl Strategy<Value = Poly> {
    let term = (
        (-4i64..=4).prop_filter("nonzero", |c| *c != 0),
        proptest::collection::vec(0..=max_deg, vars.len()),
    );
    proptest::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        Poly::from_terms(terms.into_iter().filter_map(|(c, exps)| {
            let total: u32 = exps.iter().sum();
            if total > max_deg || (poly0 && total == 0) {
                return None;
            }
            let m = Monomial::from_pairs(vars.iter().zip(exps).map(|(v, e)| (var(v), e)));
            Some((m, Rational::from(c)))
        }))
    })
}

pub fn special_rule() -> impl Strategy<Value = ProductRule> {
    prop_oneof![
        Just(ProductRule::hadamard()),
        Just(ProductRule::shuffle()),
        Just(ProductRule::infiltration()),
        Just(ProductRule::parse("x*y + 2*x*yd + 2*xd*y + 2*xd*yd").unwrap()),
    ]
}

pub const VARS: &[&str] = &["x", "y", "z"];

/// Random polynomial automaton over `{a, b}` and `x, y, z` with transitions
/// of degree at most `max_deg`.
pub fn automaton(max_deg: u32) -> impl Strategy<Value = PolyAutomaton> {
    (
        special_rule(),
        proptest::collection::vec(-2i64..=2, 3),
        proptest::collection::vec(poly(VARS, max_deg, 2, true), 6),
    )
        .prop_map(|(rule, outs, deltas)| {
            let mut a = PolyAutomaton::new(&["a", "b"], VARS, rule).unwrap();
            for (v, o) in VARS.iter().zip(outs) {
                a.set_output(v, Rational::from(o)).unwrap();
            }
            let mut it = deltas.into_iter();
            for l in ["a", "b"] {
                for v in VARS {
                    a.set_transition(l, v, it.next().unwrap()).unwrap();
                }
            }
            a
        })
}

/// All words over `letters` of length at most `max_len`, length-lexicographically.
pub fn words(letters: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut level: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for l in letters {
                let mut w2 = w.clone();
                w2.push(l.to_string());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}
