mod common;

use common::{p, poly, rat};
use pproduct::polyalg::{buchberger, buchberger_with, ideal_equal, reduce_with_order, var};
use pproduct::{Limits, MonomialOrder, Poly};
use proptest::prelude::*;

const V3: &[&str] = &["x", "y", "z"];
const V5: &[&str] = &["a", "b", "c", "d", "e"];

fn gens() -> impl Strategy<Value = Vec<Poly>> {
    proptest::collection::vec(poly(V3, 3, 3, false), 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws(a in poly(V5, 4, 4, false), b in poly(V5, 4, 4, false), c in poly(V5, 4, 4, false)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn display_round_trips(a in poly(V5, 4, 5, false)) {
        prop_assert_eq!(Poly::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn eval_is_a_homomorphism(a in poly(V3, 3, 4, false), b in poly(V3, 3, 4, false), vals in proptest::collection::vec(-3i64..=3, 3)) {
        let env: std::collections::BTreeMap<_, _> = V3.iter().zip(&vals).map(|(v, n)| (var(v), rat(*n))).collect();
        let ea = a.eval(&env).unwrap();
        let eb = b.eval(&env).unwrap();
        prop_assert_eq!((&a * &b).eval(&env).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&env).unwrap(), &ea + &eb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn combinations_reduce_to_zero(g in gens(), q in proptest::collection::vec(poly(V3, 2, 2, false), 3)) {
        let gb = buchberger(&g).unwrap();
        let combo = g.iter().zip(&q).fold(Poly::zero(), |acc, (gi, qi)| acc + gi * qi);
        prop_assert!(gb.reduce(&combo).is_zero());
        for gi in &g {
            prop_assert!(gb.contains(gi));
        }
        prop_assert!(ideal_equal(&gb, &g));
    }

    #[test]
    fn reduced_basis_is_idempotent(g in gens()) {
        let gb = buchberger(&g).unwrap();
        let again = buchberger(gb.generators()).unwrap();
        prop_assert_eq!(again.generators(), gb.generators());
        for (i, h) in gb.generators().iter().enumerate() {
            let (_, lc) = gb.order().leading_term(h).unwrap();
            prop_assert_eq!(lc, rat(1));
            let others: Vec<Poly> = gb.generators().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
            prop_assert_eq!(&reduce_with_order(h, &others, gb.order()), h);
        }
    }

    #[test]
    fn basis_is_independent_of_generator_order(g in gens()) {
        let gb = buchberger(&g).unwrap();
        let mut rev = g.clone();
        rev.reverse();
        let order = gb.order().clone();
        let gb2 = buchberger_with(&rev, order, &Limits::default()).unwrap();
        prop_assert_eq!(gb.generators(), gb2.generators());
    }

    #[test]
    fn normal_forms_are_canonical(g in gens(), f in poly(V3, 3, 3, false), q in poly(V3, 2, 2, false)) {
        let gb = buchberger(&g).unwrap();
        let shifted = &f + &(&g[0] * &q);
        prop_assert_eq!(gb.reduce(&f), gb.reduce(&shifted));
    }

    #[test]
    fn fresh_variable_is_not_a_member(g in gens()) {
        let gb = buchberger(&g).unwrap();
        prop_assume!(!gb.is_unit_ideal());
        prop_assert!(!gb.contains(&p("w")));
    }

    #[test]
    fn incremental_extension_matches_batch(g in gens(), h in poly(V3, 3, 3, false)) {
        let order = MonomialOrder::grevlex(V3.iter().copied());
        let base = buchberger_with(&g, order.clone(), &Limits::default()).unwrap();
        let inc = base.extend(std::slice::from_ref(&h), &Limits::default()).unwrap();
        let mut all = g.clone();
        all.push(h);
        let batch = buchberger_with(&all, order, &Limits::default()).unwrap();
        prop_assert_eq!(inc.generators(), batch.generators());
    }

    #[test]
    fn multiples_of_basis_elements_are_members(g in gens()) {
        let gb = buchberger(&g).unwrap();
        for h in gb.generators() {
            prop_assert!(gb.reduce(&(h * &p("x + 1"))).is_zero());
        }
    }
}

#[test]
fn circle_and_line() {
    let gb = buchberger(&[p("x^2 + y^2 - 1"), p("x - y")]).unwrap();
    assert!(gb.contains(&p("2*y^2 - 1")));
    assert!(!gb.contains(&p("y - 1")));
}
