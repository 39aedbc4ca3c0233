//! P-automata whose states are free terms, for arbitrary product rules.

pub mod term;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polyalg::{var, Rational, Var};
use crate::rules::ProductRule;

pub use term::{Extender, Term, TermKind};

/// A finite word; each element is one letter.
pub type Word = Vec<String>;

/// Checks the letters are distinct and returns them.
pub(crate) fn checked_alphabet<S: AsRef<str>>(alphabet: &[S]) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for a in alphabet {
        let a = a.as_ref();
        if a.is_empty() {
            return Err(Error::Document("empty letter".into()));
        }
        if out.iter().any(|b| b == a) {
            return Err(Error::Document(format!("letter `{a}` declared twice")));
        }
        out.push(a.to_string());
    }
    Ok(out)
}

pub(crate) fn checked_variables<S: AsRef<str>>(variables: &[S]) -> Result<Vec<Var>> {
    let mut out: Vec<Var> = Vec::new();
    for v in variables {
        let v = v.as_ref();
        let valid = v
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
        if !valid {
            return Err(Error::Document(format!("`{v}` is not a valid variable name")));
        }
        if out.iter().any(|w| &**w == v) {
            return Err(Error::Document(format!("variable `{v}` declared twice")));
        }
        out.push(var(v));
    }
    Ok(out)
}

/// `⟨X, F, Δ⟩` over free terms. Outputs and transitions that are never set
/// are zero.
#[derive(Debug, Clone)]
pub struct TermAutomaton {
    alphabet: Vec<String>,
    variables: Vec<Var>,
    rule: ProductRule,
    output: BTreeMap<Var, Rational>,
    transitions: BTreeMap<String, BTreeMap<Var, Term>>,
}

impl TermAutomaton {
    pub fn new<A: AsRef<str>, V: AsRef<str>>(
        alphabet: &[A],
        variables: &[V],
        rule: ProductRule,
    ) -> Result<Self> {
        let alphabet = checked_alphabet(alphabet)?;
        let variables = checked_variables(variables)?;
        let output = variables.iter().map(|v| (v.clone(), Rational::zero())).collect();
        let transitions = alphabet
            .iter()
            .map(|a| {
                let row = variables.iter().map(|v| (v.clone(), Term::zero())).collect();
                (a.clone(), row)
            })
            .collect();
        Ok(TermAutomaton {
            alphabet,
            variables,
            rule,
            output,
            transitions,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn variables(&self) -> &[Var] {
        &self.variables
    }

    pub fn rule(&self) -> &ProductRule {
        &self.rule
    }

    fn known_var(&self, v: &str) -> Result<Var> {
        self.variables
            .iter()
            .find(|w| &***w == v)
            .cloned()
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    fn known_letter(&self, a: &str) -> Result<()> {
        if self.transitions.contains_key(a) {
            Ok(())
        } else {
            Err(Error::UnknownLetter(a.to_string()))
        }
    }

    /// Fails unless every variable of `t` is declared.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        for v in t.variables() {
            self.known_var(&v)?;
        }
        Ok(())
    }

    pub fn parse_term(&self, text: &str) -> Result<Term> {
        let t = Term::parse(text)?;
        self.check_term(&t)?;
        Ok(t)
    }

    pub fn set_output(&mut self, v: &str, value: Rational) -> Result<()> {
        let v = self.known_var(v)?;
        self.output.insert(v, value);
        Ok(())
    }

    pub fn set_transition(&mut self, letter: &str, v: &str, t: Term) -> Result<()> {
        self.known_letter(letter)?;
        let v = self.known_var(v)?;
        self.check_term(&t)?;
        self.transitions
            .get_mut(letter)
            .expect("known letter")
            .insert(v, t);
        Ok(())
    }

    pub fn output_of(&self, v: &str) -> Result<&Rational> {
        self.output
            .get(v)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    pub fn transition(&self, letter: &str, v: &str) -> Result<&Term> {
        self.known_letter(letter)?;
        self.transitions[letter]
            .get(v)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    /// `D̃_a t`: the extension of `Δ_a` to all terms through the rule.
    pub fn p_extend(&self, letter: &str, t: &Term, limits: &Limits) -> Result<Term> {
        self.known_letter(letter)?;
        let row = &self.transitions[letter];
        let mut ext = Extender::new(
            self.rule.source(),
            |v: &Var| {
                row.get(v)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            },
            limits.max_term_nodes,
        );
        ext.extend(t)
    }

    /// `Δ_w t`, applying the letters of `w` from left to right.
    pub fn p_extend_word<S: AsRef<str>>(&self, word: &[S], t: &Term, limits: &Limits) -> Result<Term> {
        let mut cur = t.clone();
        for a in word {
            limits.check_deadline()?;
            cur = self.p_extend(a.as_ref(), &cur, limits)?;
        }
        Ok(cur)
    }

    /// `F` extended homomorphically to terms.
    pub fn output(&self, t: &Term) -> Result<Rational> {
        t.eval_with(|v| {
            self.output
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnknownVariable(v.to_string()))
        })
    }

    pub fn coefficient<S: AsRef<str>>(&self, t: &Term, word: &[S], limits: &Limits) -> Result<Rational> {
        self.output(&self.p_extend_word(word, t, limits)?)
    }

    /// Coefficients of every word of length at most `max_len`, in
    /// length-lexicographic order, sharing work between common prefixes.
    pub fn coefficients(&self, t: &Term, max_len: usize, limits: &Limits) -> Result<Vec<(Word, Rational)>> {
        let mut out = Vec::new();
        let mut level: Vec<(Word, Term)> = vec![(Vec::new(), t.clone())];
        for len in 0..=max_len {
            for (w, u) in &level {
                out.push((w.clone(), self.output(u)?));
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::with_capacity(level.len() * self.alphabet.len());
            for (w, u) in &level {
                for a in &self.alphabet {
                    limits.check_deadline()?;
                    let mut w2 = w.clone();
                    w2.push(a.clone());
                    next.push((w2, self.p_extend(a, u, limits)?));
                }
            }
            level = next;
        }
        Ok(out)
    }

    /// Copy with every variable renamed by `prefix`.
    fn prefixed(&self, prefix: &str) -> TermAutomaton {
        let ren = |v: &Var| var(&format!("{prefix}{v}"));
        TermAutomaton {
            alphabet: self.alphabet.clone(),
            variables: self.variables.iter().map(ren).collect(),
            rule: self.rule.clone(),
            output: self.output.iter().map(|(v, c)| (ren(v), c.clone())).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|(a, row)| {
                    let row = row.iter().map(|(v, t)| (ren(v), t.rename(ren))).collect();
                    (a.clone(), row)
                })
                .collect(),
        }
    }

    /// Union of automata over disjoint variable sets.
    fn union(parts: Vec<TermAutomaton>) -> TermAutomaton {
        let mut it = parts.into_iter();
        let mut acc = it.next().expect("at least one automaton");
        for p in it {
            acc.variables.extend(p.variables);
            acc.output.extend(p.output);
            for (a, row) in p.transitions {
                acc.transitions.get_mut(&a).expect("shared alphabet").extend(row);
            }
        }
        acc
    }

    fn check_compatible(&self, other: &TermAutomaton) -> Result<()> {
        if self.rule != other.rule {
            return Err(Error::Mismatch(format!(
                "product rules differ: `{}` vs `{}`",
                self.rule, other.rule
            )));
        }
        if self.alphabet != other.alphabet {
            return Err(Error::Mismatch("alphabets differ".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Scale(Rational),
    Product,
    LeftDerivative(String),
}

/// Realizes sum, scaling, product or a left derivative of series given by
/// automata and initial terms. Binary operations place the operands'
/// variables under the prefixes `l.` and `r.`; unary ones keep the
/// automaton as is.
pub fn closure_combine(
    kind: &Combine,
    inputs: &[(&TermAutomaton, &Term)],
    limits: &Limits,
) -> Result<(TermAutomaton, Term)> {
    let arity = match kind {
        Combine::Sum | Combine::Product => 2,
        Combine::Scale(_) | Combine::LeftDerivative(_) => 1,
    };
    if inputs.len() != arity {
        return Err(Error::Mismatch(format!(
            "{kind:?} takes {arity} operand(s), got {}",
            inputs.len()
        )));
    }
    for (a, t) in inputs {
        a.check_term(t)?;
    }
    match kind {
        Combine::Scale(c) => {
            let (a, t) = inputs[0];
            Ok((a.clone(), Term::scale(c.clone(), t.clone())))
        }
        Combine::LeftDerivative(letter) => {
            let (a, t) = inputs[0];
            Ok((a.clone(), a.p_extend(letter, t, limits)?))
        }
        Combine::Sum | Combine::Product => {
            let (a, u) = inputs[0];
            let (b, v) = inputs[1];
            a.check_compatible(b)?;
            let u = u.rename(|x| var(&format!("l.{x}")));
            let v = v.rename(|x| var(&format!("r.{x}")));
            let joined = TermAutomaton::union(vec![a.prefixed("l."), b.prefixed("r.")]);
            let t = if *kind == Combine::Sum {
                Term::sum(u, v)
            } else {
                Term::product(u, v)
            };
            Ok((joined, t))
        }
    }
}

/// The series `g` with `g(ε) = c` and `δ_a g = family[a]`. Members are
/// placed under the prefixes `i0.`, `i1.`, … in alphabet order and `g` is a
/// new variable named `g`.
pub fn antiderivative(
    family: &BTreeMap<String, (TermAutomaton, Term)>,
    c: Rational,
) -> Result<(TermAutomaton, Term)> {
    let (first, _) = family
        .values()
        .next()
        .ok_or_else(|| Error::Mismatch("anti-derivative of an empty family".into()))?;
    let alphabet = first.alphabet.clone();
    if family.len() != alphabet.len() || alphabet.iter().any(|a| !family.contains_key(a)) {
        return Err(Error::Mismatch(
            "the family must have exactly one member per letter".into(),
        ));
    }
    let mut parts = Vec::new();
    let mut heads = Vec::new();
    for (k, a) in alphabet.iter().enumerate() {
        let (aut, t) = &family[a];
        first.check_compatible(aut)?;
        aut.check_term(t)?;
        let prefix = format!("i{k}.");
        heads.push((a.clone(), t.rename(|x| var(&format!("{prefix}{x}")))));
        parts.push(aut.prefixed(&prefix));
    }
    let mut joined = TermAutomaton::union(parts);
    let g = var("g");
    joined.variables.push(g.clone());
    joined.output.insert(g.clone(), c);
    for (a, head) in heads {
        joined.transitions.get_mut(&a).expect("letter").insert(g.clone(), head);
    }
    Ok((joined, Term::from_var(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> TermAutomaton {
        let mut a = TermAutomaton::new(&["a"], &["x", "y"], ProductRule::shuffle()).unwrap();
        a.set_output("y", Rational::one()).unwrap();
        a.set_transition("a", "x", Term::parse("y").unwrap()).unwrap();
        a.set_transition("a", "y", Term::parse("x + y").unwrap()).unwrap();
        a
    }

    fn squaring(rule: ProductRule, fx: i64) -> TermAutomaton {
        let mut a = TermAutomaton::new(&["a"], &["x"], rule).unwrap();
        a.set_output("x", Rational::from(fx)).unwrap();
        a.set_transition("a", "x", Term::parse("x*x").unwrap()).unwrap();
        a
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn p_extend_examples() {
        let h = squaring(ProductRule::hadamard(), 2);
        let xx = Term::parse("x*x").unwrap();
        assert_eq!(
            h.p_extend("a", &xx, &lim()).unwrap(),
            Term::parse("x*x*(x*x)").unwrap()
        );
        assert!(h.p_extend("a", &Term::zero(), &lim()).unwrap().is_zero());
        let s = squaring(ProductRule::shuffle(), 1);
        assert_eq!(
            s.p_extend("a", &xx, &lim()).unwrap(),
            Term::parse("x*x*x + x*(x*x)").unwrap()
        );
    }

    #[test]
    fn output_examples() {
        let h = squaring(ProductRule::hadamard(), 2);
        assert_eq!(h.output(&Term::parse("x*x").unwrap()).unwrap(), Rational::from(4));
        assert_eq!(fib().output(&fib().parse_term("3*x + 2*y").unwrap()).unwrap(), Rational::from(2));
        assert!(h.output(&Term::zero()).unwrap().is_zero());
    }

    #[test]
    fn coefficient_examples() {
        let x = Term::var("x");
        assert_eq!(fib().coefficient(&x, &["a"; 3], &lim()).unwrap(), Rational::from(2));
        let h = squaring(ProductRule::hadamard(), 2);
        assert_eq!(h.coefficient(&x, &["a"; 2], &lim()).unwrap(), Rational::from(16));
        let s = squaring(ProductRule::shuffle(), 1);
        assert_eq!(s.coefficient(&x, &["a"; 4], &lim()).unwrap(), Rational::from(24));
    }

    #[test]
    fn term_growth_hits_cap() {
        let s = squaring(ProductRule::shuffle(), 1);
        let limits = Limits {
            max_term_nodes: 100,
            ..Limits::default()
        };
        let err = s.coefficient(&Term::var("x"), &["a"; 12], &limits).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn unknown_names_are_rejected() {
        let mut a = fib();
        assert!(matches!(a.set_output("z", Rational::one()), Err(Error::UnknownVariable(_))));
        assert!(matches!(
            a.set_transition("b", "x", Term::var("x")),
            Err(Error::UnknownLetter(_))
        ));
        assert!(matches!(
            a.set_transition("a", "x", Term::var("z")),
            Err(Error::UnknownVariable(_))
        ));
        assert!(TermAutomaton::new(&["a", "a"], &["x"], ProductRule::shuffle()).is_err());
        assert!(TermAutomaton::new(&["a"], &["x", "1x"], ProductRule::shuffle()).is_err());
    }

    #[test]
    fn combine_sum_and_scale_agree() {
        let a = fib();
        let x = Term::var("x");
        let (s, st) = closure_combine(&Combine::Sum, &[(&a, &x), (&a, &x)], &lim()).unwrap();
        let (d, dt) = closure_combine(&Combine::Scale(Rational::from(2)), &[(&a, &x)], &lim()).unwrap();
        assert_eq!(st.to_string(), "l.x + r.x");
        assert_eq!(
            s.coefficients(&st, 4, &lim()).unwrap(),
            d.coefficients(&dt, 4, &lim()).unwrap()
        );
    }

    #[test]
    fn hadamard_square_of_ones() {
        let mut ones = TermAutomaton::new(&["a", "b"], &["x"], ProductRule::hadamard()).unwrap();
        ones.set_output("x", Rational::one()).unwrap();
        for l in ["a", "b"] {
            ones.set_transition(l, "x", Term::var("x")).unwrap();
        }
        let x = Term::var("x");
        let (p, pt) = closure_combine(&Combine::Product, &[(&ones, &x), (&ones, &x)], &lim()).unwrap();
        for (_, c) in p.coefficients(&pt, 4, &lim()).unwrap() {
            assert!(c.is_one());
        }
    }

    #[test]
    fn left_derivative_shifts() {
        let a = fib();
        let x = Term::var("x");
        let (d, dt) =
            closure_combine(&Combine::LeftDerivative("a".into()), &[(&a, &x)], &lim()).unwrap();
        assert_eq!(d.coefficient(&dt, &["a"; 2], &lim()).unwrap(), Rational::from(2));
    }

    #[test]
    fn combine_rejects_mismatch() {
        let a = fib();
        let b = squaring(ProductRule::hadamard(), 1);
        let x = Term::var("x");
        assert!(matches!(
            closure_combine(&Combine::Sum, &[(&a, &x), (&b, &x)], &lim()),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn antiderivative_examples() {
        let zero = TermAutomaton::new(&["a"], &["x"], ProductRule::shuffle()).unwrap();
        let family: BTreeMap<_, _> = [("a".to_string(), (zero, Term::var("x")))].into_iter().collect();
        let (g, gt) = antiderivative(&family, Rational::from(5)).unwrap();
        let table = g.coefficients(&gt, 3, &lim()).unwrap();
        assert_eq!(table[0].1, Rational::from(5));
        assert!(table[1..].iter().all(|(_, c)| c.is_zero()));

        let mut ones = TermAutomaton::new(&["a"], &["x"], ProductRule::shuffle()).unwrap();
        ones.set_output("x", Rational::one()).unwrap();
        ones.set_transition("a", "x", Term::var("x")).unwrap();
        let family: BTreeMap<_, _> = [("a".to_string(), (ones, Term::var("x")))].into_iter().collect();
        let (g, gt) = antiderivative(&family, Rational::zero()).unwrap();
        let coeffs: Vec<Rational> = g.coefficients(&gt, 3, &lim()).unwrap().into_iter().map(|(_, c)| c).collect();
        assert_eq!(coeffs, [0, 1, 1, 1].map(Rational::from));
    }
}
