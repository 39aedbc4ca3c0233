//! Right derivatives, the commutativity decider, and the reduction of
//! zeroness to commutativity.

use std::collections::BTreeMap;

use super::zeroness::{zeroness, ZeroOptions, ZeronessCertificate};
use super::{extend_poly, Pivot, PolyAutomaton};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polyalg::{Poly, Rational, Var};
use crate::termauto::Word;

fn name_safe(letter: &str) -> bool {
    letter.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Adds a copy `x.R.b` of every variable `x` holding `δ^R_b` of its series.
/// Returns the new automaton and the map `x ↦ x.R.b`.
pub fn right_derivative_automaton(
    a: &PolyAutomaton,
    b: &str,
    limits: &Limits,
) -> Result<(PolyAutomaton, BTreeMap<Var, Var>)> {
    a.known_letter(b)?;
    let suffix = if name_safe(b) {
        b.to_string()
    } else {
        let k = a.alphabet().iter().position(|l| l == b).expect("known letter");
        k.to_string()
    };
    let mut out = a.clone();
    let mut renaming = BTreeMap::new();
    for x in a.variables() {
        let fresh = out.fresh_name(&format!("{x}.R.{suffix}"));
        out.add_variable(fresh.clone());
        renaming.insert(x.clone(), fresh);
    }
    for x in a.variables() {
        let xr = &renaming[x];
        let value = a.output(a.transition(b, x)?)?;
        out.output.insert(xr.clone(), value);
        for l in a.alphabet() {
            let d = right_partial(a, &renaming, a.transition(l, x)?, limits)?;
            out.transitions.get_mut(l).expect("letter").insert(xr.clone(), d);
        }
    }
    Ok((out, renaming))
}

/// The right-derivative operator `∂`: linear, `∂x = x.R.b`, and
/// `∂(αβ) = P(α, ∂α, β, ∂β)`.
pub fn right_partial(
    a: &PolyAutomaton,
    renaming: &BTreeMap<Var, Var>,
    p: &Poly,
    limits: &Limits,
) -> Result<Poly> {
    extend_poly(
        a.simple(),
        &a.rank,
        Pivot::First,
        p,
        |v| {
            renaming
                .get(v)
                .map(|w| Poly::var(w))
                .ok_or_else(|| Error::UnknownVariable(v.to_string()))
        },
        limits,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativityReport {
    pub commutative: bool,
    /// Two permutations of the same word with different coefficients.
    pub witness: Option<(Word, Word)>,
    /// Certificate of the first failing check.
    pub certificate: Option<ZeronessCertificate>,
}

/// Decides whether the coefficient of every word depends only on its
/// letter counts, by checking `δ_a δ_b f = δ_b δ_a f` for every pair of
/// letters and `δ_a f = δ^R_a f` for every letter.
pub fn is_commutative(
    a: &PolyAutomaton,
    p: &Poly,
    opts: &ZeroOptions,
    limits: &Limits,
) -> Result<CommutativityReport> {
    a.check_state(p)?;
    let ok = CommutativityReport {
        commutative: true,
        witness: None,
        certificate: None,
    };
    if a.alphabet().len() <= 1 {
        return Ok(ok);
    }
    let opts = ZeroOptions {
        strict_initial: false,
        ..*opts
    };
    let letters = a.alphabet();
    for (i, x) in letters.iter().enumerate() {
        for y in &letters[i + 1..] {
            let xy = a.delta_word(&[x, y], p, limits)?;
            let yx = a.delta_word(&[y, x], p, limits)?;
            let cert = zeroness(a, &(xy - yx), &opts, limits)?;
            if let Some((w, _)) = &cert.witness {
                let mut u = vec![x.clone(), y.clone()];
                u.extend(w.iter().cloned());
                let mut v = vec![y.clone(), x.clone()];
                v.extend(w.iter().cloned());
                return Ok(CommutativityReport {
                    commutative: false,
                    witness: Some((u, v)),
                    certificate: Some(cert),
                });
            }
        }
    }
    for x in letters {
        let (r, renaming) = right_derivative_automaton(a, x, limits)?;
        let left = r.delta_extend(x, p, limits)?;
        let right = right_partial(a, &renaming, p, limits)?;
        let cert = zeroness(&r, &(left - right), &opts, limits)?;
        if let Some((w, _)) = &cert.witness {
            let mut u = vec![x.clone()];
            u.extend(w.iter().cloned());
            let mut v = w.clone();
            v.push(x.clone());
            return Ok(CommutativityReport {
                commutative: false,
                witness: Some((u, v)),
                certificate: Some(cert),
            });
        }
    }
    Ok(ok)
}

/// Builds `g` over `Σ ∪ {a⁺, b⁺}` such that `g` is commutative iff the
/// series of `p` is zero: `⟦a⁺b⁺w⟧g` is the coefficient of `p` at `w` (with
/// the new letters read as the first letter of `Σ`) and every other
/// coefficient of `g` is zero.
pub fn equivalence_to_commutativity(
    a: &PolyAutomaton,
    p: &Poly,
    fresh_a: &str,
    fresh_b: &str,
) -> Result<(PolyAutomaton, Poly)> {
    a.check_state(p)?;
    for l in [fresh_a, fresh_b] {
        if a.alphabet().iter().any(|m| m == l) {
            return Err(Error::Mismatch(format!("fresh letter `{l}` is already in the alphabet")));
        }
    }
    if fresh_a == fresh_b || fresh_a.is_empty() || fresh_b.is_empty() {
        return Err(Error::Mismatch("the two fresh letters must be distinct and nonempty".into()));
    }
    let mut out = a.clone();
    out.add_letter(fresh_a.to_string());
    out.add_letter(fresh_b.to_string());
    let payload = match a.alphabet().first() {
        Some(first) => {
            for x in a.variables() {
                let d = a.transition(first, x)?.clone();
                for l in [fresh_a, fresh_b] {
                    out.transitions.get_mut(l).expect("letter").insert(x.clone(), d.clone());
                }
            }
            p.clone()
        }
        None => {
            // Without letters the series of p is just its constant term.
            let u = out.fresh_name("u");
            out.add_variable(u.clone());
            out.output.insert(u.clone(), a.output(p)?);
            Poly::var(&u)
        }
    };
    let g = out.fresh_name("g");
    out.add_variable(g.clone());
    let h = out.fresh_name("h");
    out.add_variable(h.clone());
    out.set_transition(fresh_a, &g, Poly::var(&h))?;
    out.set_transition(fresh_b, &h, payload)?;
    out.set_output(&g, Rational::zero())?;
    out.set_output(&h, Rational::zero())?;
    Ok((out, Poly::var(&g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::var;
    use crate::rules::ProductRule;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn right_derivative_of_ones_is_ones() {
        let mut a = PolyAutomaton::new(&["a"], &["x"], ProductRule::shuffle()).unwrap();
        a.set_output("x", Rational::one()).unwrap();
        a.set_transition("a", "x", p("x")).unwrap();
        let (r, ren) = right_derivative_automaton(&a, "a", &lim()).unwrap();
        assert_eq!(&*ren[&var("x")], "x.R.a");
        let xr = Poly::var(&ren[&var("x")]);
        assert_eq!(
            r.coefficients(&xr, 4, &lim()).unwrap(),
            r.coefficients(&p("x"), 4, &lim()).unwrap()
        );
    }

    #[test]
    fn right_derivative_shifts_fibonacci() {
        let mut a = PolyAutomaton::new(&["a"], &["x", "y"], ProductRule::shuffle()).unwrap();
        a.set_output("y", Rational::one()).unwrap();
        a.set_transition("a", "x", p("y")).unwrap();
        a.set_transition("a", "y", p("x + y")).unwrap();
        let (r, ren) = right_derivative_automaton(&a, "a", &lim()).unwrap();
        let d = right_partial(&a, &ren, &p("x"), &lim()).unwrap();
        assert_eq!(r.coefficient(&d, &word("aa"), &lim()).unwrap(), Rational::from(2));
    }

    #[test]
    fn unsafe_letters_use_indices() {
        let a = PolyAutomaton::new(&["a", "#b"], &["x"], ProductRule::shuffle()).unwrap();
        let (_, ren) = right_derivative_automaton(&a, "#b", &lim()).unwrap();
        assert_eq!(&*ren[&var("x")], "x.R.1");
    }

    #[test]
    fn commutativity_examples() {
        let mut a = PolyAutomaton::new(&["a", "b"], &["x"], ProductRule::shuffle()).unwrap();
        a.set_output("x", Rational::one()).unwrap();
        a.set_transition("a", "x", p("x")).unwrap();
        a.set_transition("b", "x", p("2*x")).unwrap();
        let opts = ZeroOptions::default();
        assert!(is_commutative(&a, &p("x"), &opts, &lim()).unwrap().commutative);

        let mut g = PolyAutomaton::new(&["a", "b"], &["x", "y", "z"], ProductRule::shuffle()).unwrap();
        g.set_output("z", Rational::one()).unwrap();
        g.set_transition("a", "x", p("y")).unwrap();
        g.set_transition("b", "y", p("z")).unwrap();
        let rep = is_commutative(&g, &p("x"), &opts, &lim()).unwrap();
        assert!(!rep.commutative);
        assert_eq!(rep.witness, Some((word("ab"), word("ba"))));

        let one = PolyAutomaton::new(&["a"], &["x"], ProductRule::hadamard()).unwrap();
        assert!(is_commutative(&one, &p("x"), &opts, &lim()).unwrap().commutative);
    }

    #[test]
    fn reduction_examples() {
        let mut ones = PolyAutomaton::new(&["a"], &["x"], ProductRule::shuffle()).unwrap();
        ones.set_output("x", Rational::one()).unwrap();
        ones.set_transition("a", "x", p("x")).unwrap();
        let opts = ZeroOptions::default();

        let (b, g) = equivalence_to_commutativity(&ones, &Poly::zero(), "#a", "#b").unwrap();
        assert!(is_commutative(&b, &g, &opts, &lim()).unwrap().commutative);

        let (b, g) = equivalence_to_commutativity(&ones, &p("x"), "#a", "#b").unwrap();
        let ab = vec!["#a".to_string(), "#b".to_string()];
        let ba = vec!["#b".to_string(), "#a".to_string()];
        assert_eq!(b.coefficient(&g, &ab, &lim()).unwrap(), Rational::one());
        assert!(b.coefficient(&g, &ba, &lim()).unwrap().is_zero());
        assert!(!is_commutative(&b, &g, &opts, &lim()).unwrap().commutative);

        assert!(matches!(
            equivalence_to_commutativity(&ones, &p("x"), "a", "#b"),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn reduction_keeps_names_fresh() {
        let mut a = PolyAutomaton::new(&["a"], &["g", "h"], ProductRule::hadamard()).unwrap();
        a.set_output("g", Rational::one()).unwrap();
        let (b, g) = equivalence_to_commutativity(&a, &p("g"), "#a", "#b").unwrap();
        assert_eq!(g, p("g1"));
        assert!(b.has_variable("h1"));
    }

    #[test]
    fn reduction_over_empty_alphabet() {
        let mut a = PolyAutomaton::new::<&str, _>(&[], &["x"], ProductRule::shuffle()).unwrap();
        a.set_output("x", Rational::from(3)).unwrap();
        let opts = ZeroOptions::default();
        let (b, g) = equivalence_to_commutativity(&a, &p("x"), "#a", "#b").unwrap();
        assert!(!is_commutative(&b, &g, &opts, &lim()).unwrap().commutative);
        let (b, g) = equivalence_to_commutativity(&a, &p("x - x"), "#a", "#b").unwrap();
        assert!(is_commutative(&b, &g, &opts, &lim()).unwrap().commutative);
    }
}
