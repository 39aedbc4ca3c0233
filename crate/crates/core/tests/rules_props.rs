mod common;

use common::{p, rat, small_rational};
use pproduct::rules::{
    check_special, classify_simple, multiplicative_unit, parse_rule, Bilinear, Identity, Simple,
};
use pproduct::series::Series;
use pproduct::{ProductRule, Rational, Term};
use proptest::prelude::*;

fn simple_triple() -> impl Strategy<Value = Simple> {
    prop_oneof![
        (small_rational().prop_filter("nonzero", |a| !a.is_zero()), small_rational()).prop_map(|(a, b)| {
            let g = &b * &(&b - &Rational::one()) / &a;
            Simple::new(a, b, g)
        }),
        (prop_oneof![Just(0i64), Just(1)], small_rational()).prop_map(|(b, g)| Simple::new(Rational::zero(), rat(b), g)),
    ]
}

fn table(max_len: usize) -> impl Strategy<Value = Series> {
    let n = pproduct::series::word_count(2, max_len);
    proptest::collection::vec(-3i64..=3, n)
        .prop_map(move |v| Series::from_table(2, max_len, v.into_iter().map(Rational::from).collect()))
}

fn notable() -> Vec<Term> {
    ["xd*yd", "xd*y + x*yd", "xd*y + x*yd + xd*yd"]
        .iter()
        .map(|r| parse_rule(r).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simple_triples_are_special(s in simple_triple()) {
        let report = check_special(&s.to_poly());
        prop_assert!(report.is_special());
        prop_assert_eq!(report.simple.as_ref(), Some(&s));
        prop_assert_eq!(report.unit_eta.clone(), multiplicative_unit(&s));
        prop_assert_eq!(report.unit_eta.is_none(), s.is_degenerate());
    }

    #[test]
    fn unit_solves_its_equations(s in simple_triple()) {
        if let Some(eta) = multiplicative_unit(&s) {
            // α + β·η = 0 and β − 1 + γ·η = 0.
            prop_assert!((&s.alpha + &(&s.beta * &eta)).is_zero());
            prop_assert!((&(&s.beta - &Rational::one()) + &(&s.gamma * &eta)).is_zero());
        }
    }

    #[test]
    fn bilinear_rules_follow_the_residues(a in -2i64..=2, b1 in -2i64..=2, b2 in -2i64..=2, g in -2i64..=2) {
        let q = Bilinear { alpha: rat(a), beta1: rat(b1), beta2: rat(b2), gamma: rat(g) };
        let report = check_special(&q.to_poly());
        let residues_vanish = q.associativity_residues().iter().all(|r| r.is_zero());
        prop_assert_eq!(report.assoc_ok, residues_vanish);
        prop_assert_eq!(report.comm_ok, b1 == b2);
        prop_assert_eq!(report.is_special(), residues_vanish && b1 == b2);
        prop_assert!(report.add_ok);
        if !report.is_special() {
            let (which, diff) = report.failing_identity.clone().unwrap();
            prop_assert!(!diff.is_zero());
            prop_assert!(which == Identity::Assoc || which == Identity::Comm);
        }
    }

    #[test]
    fn nonlinear_monomials_break_additivity(c in 1i64..=3) {
        let rule = p(&format!("xd*yd + {c}*xd^2*y"));
        let report = check_special(&rule);
        prop_assert!(!report.add_ok);
        prop_assert_eq!(report.failing_identity.unwrap().0, Identity::Add);
    }

    #[test]
    fn normal_form_ignores_bac_rewriting(s in simple_triple()) {
        let (a, b, g) = (&s.alpha, &s.beta, &s.gamma);
        let plain = ProductRule::parse(&format!("({a})*x*y + ({b})*(x*yd + xd*y) + ({g})*xd*yd")).unwrap();
        let shuffled = ProductRule::parse(&format!("({g})*yd*xd + ({b})*(y*xd) + y*(({a})*x) + ({b})*yd*x")).unwrap();
        prop_assert_eq!(plain.normal_form(), shuffled.normal_form());
        prop_assert_eq!(plain.simple(), Some(&s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn notable_products_are_bac(f in table(4), g in table(4), h in table(4), c in small_rational()) {
        for rule in notable() {
            let prod = |u: &Series, v: &Series| Series::product(&rule, u, v);
            prop_assert_eq!(prod(&f, &g), prod(&g, &f));
            prop_assert_eq!(prod(&prod(&f, &g), &h), prod(&f, &prod(&g, &h)));
            prop_assert_eq!(prod(&f, &g.add(&h)), prod(&f, &g).add(&prod(&f, &h)));
            prop_assert_eq!(prod(&f.scale(&c), &g), prod(&f, &g).scale(&c));
        }
    }

    #[test]
    fn unit_series_is_neutral(f in table(4)) {
        for rule in notable() {
            let s = classify_simple(&rule.to_poly()).unwrap();
            let eta = multiplicative_unit(&s).unwrap();
            let one = Series::from_fn(2, 4, |w| {
                (0..w.len()).fold(Rational::one(), |acc, _| &acc * &eta)
            });
            prop_assert_eq!(Series::product(&rule, &f, &one), f.clone());
        }
    }
}

#[test]
fn non_commutative_rule_is_visible_on_series() {
    let rule = parse_rule("xd*y").unwrap();
    let f = Series::from_fn(2, 2, |w| rat(w.len() as i64 + 1));
    let g = Series::from_fn(2, 2, |w| rat(w.iter().map(|a| *a as i64 * 3).sum::<i64>() - 1));
    assert_ne!(Series::product(&rule, &f, &g), Series::product(&rule, &g, &f));
}

#[test]
fn notable_table() {
    for (name, triple, eta) in [
        ("hadamard", (0, 0, 1), 1),
        ("shuffle", (0, 1, 0), 0),
        ("infiltration", (0, 1, 1), 0),
    ] {
        let r = ProductRule::parse(name).unwrap();
        let s = r.simple().unwrap();
        assert_eq!((s.alpha.clone(), s.beta.clone(), s.gamma.clone()), (rat(triple.0), rat(triple.1), rat(triple.2)));
        assert_eq!(r.unit_eta(), Some(&rat(eta)));
    }
    assert!(ProductRule::trivial0().simple().unwrap().is_degenerate());
}
