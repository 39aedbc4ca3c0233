//! Polynomial P-automata for special rules and the decision procedures
//! built on them.

mod commutativity;
mod zeroness;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polyalg::{var, Monomial, MonomialOrder, Poly, Rational, Var};
use crate::rules::{ProductRule, Simple};
use crate::termauto::{checked_alphabet, checked_variables, TermAutomaton};

pub use commutativity::{
    equivalence_to_commutativity, is_commutative, right_derivative_automaton, right_partial,
    CommutativityReport,
};
pub use zeroness::{equivalence, zeroness, ZeroOptions, ZeronessCertificate};

/// Which variable of a monomial `v·m′` is split off when extending it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pivot {
    /// The earliest declared variable.
    #[default]
    First,
    /// The latest declared variable.
    Last,
}

/// Extends `delta` (given on variables) to a constant-free polynomial:
/// linearly, and on monomials by `D(v·m′) = P(v, Dv, m′, Dm′)`.
pub(crate) fn extend_poly<F>(
    rule: &Simple,
    rank: &HashMap<Var, usize>,
    pivot: Pivot,
    p: &Poly,
    mut delta: F,
    limits: &Limits,
) -> Result<Poly>
where
    F: FnMut(&Var) -> Result<Poly>,
{
    if !p.is_poly0() {
        return Err(Error::Precondition(format!(
            "`{p}` has a constant term; automaton states must not"
        )));
    }
    let mut memo: HashMap<Monomial, Poly> = HashMap::new();
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let d = extend_monomial(rule, rank, pivot, m, &mut delta, &mut memo, limits)?;
        out = out + d.scale(c);
    }
    limits.check_degree(out.degree())?;
    Ok(out)
}

fn extend_monomial<F>(
    rule: &Simple,
    rank: &HashMap<Var, usize>,
    pivot: Pivot,
    m: &Monomial,
    delta: &mut F,
    memo: &mut HashMap<Monomial, Poly>,
    limits: &Limits,
) -> Result<Poly>
where
    F: FnMut(&Var) -> Result<Poly>,
{
    if let Some(d) = memo.get(m) {
        return Ok(d.clone());
    }
    let rank_of = |v: &Var| {
        rank.get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    };
    let mut chosen: Option<(usize, &Var)> = None;
    for (v, _) in m.factors() {
        let r = rank_of(v)?;
        let better = match (chosen, pivot) {
            (None, _) => true,
            (Some((best, _)), Pivot::First) => r < best,
            (Some((best, _)), Pivot::Last) => r > best,
        };
        if better {
            chosen = Some((r, v));
        }
    }
    let (_, v) = chosen.expect("non-constant monomial");
    let v = v.clone();
    let dv = delta(&v)?;
    let d = if m.degree() == 1 {
        dv
    } else {
        let rest = m.without_one(&v);
        let drest = extend_monomial(rule, rank, pivot, &rest, delta, memo, limits)?;
        product_step(rule, &v, &dv, &rest, &drest)
    };
    limits.check_degree(d.degree())?;
    limits.check_deadline()?;
    memo.insert(m.clone(), d.clone());
    Ok(d)
}

/// `P(v, Dv, m, Dm)` for the simple rule
/// `α·xy + β·(x·yd + xd·y) + γ·xd·yd`.
fn product_step(rule: &Simple, v: &Var, dv: &Poly, m: &Monomial, dm: &Poly) -> Poly {
    let vm = Monomial::var(v.clone());
    let mut out = Poly::zero();
    if !rule.alpha.is_zero() {
        out.add_term(vm.mul(m), &rule.alpha);
    }
    if !rule.beta.is_zero() {
        out = out + dm.mul_monomial(&vm, &rule.beta) + dv.mul_monomial(m, &rule.beta);
    }
    if !rule.gamma.is_zero() {
        out = out + (dv * dm).scale(&rule.gamma);
    }
    out
}

/// `⟨X, F, Δ⟩` with `Δ` into constant-free polynomials, for a special rule.
/// Outputs and transitions that are never set are zero.
#[derive(Debug, Clone)]
pub struct PolyAutomaton {
    alphabet: Vec<String>,
    variables: Vec<Var>,
    rank: HashMap<Var, usize>,
    rule: ProductRule,
    output: BTreeMap<Var, Rational>,
    transitions: BTreeMap<String, BTreeMap<Var, Poly>>,
}

impl PolyAutomaton {
    pub fn new<A: AsRef<str>, V: AsRef<str>>(
        alphabet: &[A],
        variables: &[V],
        rule: ProductRule,
    ) -> Result<Self> {
        if !rule.is_special() {
            let which = rule
                .speciality()
                .failing_identity
                .as_ref()
                .map(|(i, _)| i.to_string())
                .unwrap_or_default();
            return Err(Error::Precondition(format!(
                "rule `{rule}` is not special (fails {which}); polynomial automata need a special rule"
            )));
        }
        let alphabet = checked_alphabet(alphabet)?;
        let variables = checked_variables(variables)?;
        let mut a = PolyAutomaton {
            alphabet: Vec::new(),
            variables: Vec::new(),
            rank: HashMap::new(),
            rule,
            output: BTreeMap::new(),
            transitions: BTreeMap::new(),
        };
        for l in alphabet {
            a.add_letter(l);
        }
        for v in variables {
            a.add_variable(v);
        }
        Ok(a)
    }

    fn add_letter(&mut self, l: String) {
        let row = self.variables.iter().map(|v| (v.clone(), Poly::zero())).collect();
        self.transitions.insert(l.clone(), row);
        self.alphabet.push(l);
    }

    fn add_variable(&mut self, v: Var) {
        self.rank.insert(v.clone(), self.variables.len());
        self.output.insert(v.clone(), Rational::zero());
        for row in self.transitions.values_mut() {
            row.insert(v.clone(), Poly::zero());
        }
        self.variables.push(v);
    }

    /// Quotient of a term automaton by the commutative-algebra axioms.
    pub fn from_term_automaton(t: &TermAutomaton) -> Result<Self> {
        let mut a = PolyAutomaton::new(t.alphabet(), t.variables(), t.rule().clone())?;
        for v in t.variables() {
            a.set_output(v, t.output_of(v)?.clone())?;
            for l in t.alphabet() {
                a.set_transition(l, v, t.transition(l, v)?.to_poly())?;
            }
        }
        Ok(a)
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

    pub fn simple(&self) -> &Simple {
        self.rule.simple().expect("special rule")
    }

    /// Grevlex with the declaration order as precedence.
    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::grevlex(self.variables.iter())
    }

    pub fn has_variable(&self, v: &str) -> bool {
        self.rank.contains_key(v)
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

    /// Fails unless `p` is constant-free and uses only declared variables.
    pub fn check_state(&self, p: &Poly) -> Result<()> {
        for v in p.variables() {
            self.known_var(&v)?;
        }
        if !p.is_poly0() {
            return Err(Error::Precondition(format!(
                "`{p}` has a constant term; automaton states must not"
            )));
        }
        Ok(())
    }

    /// Parses a state; a constant term is reported as a parse error.
    pub fn parse_state(&self, text: &str) -> Result<Poly> {
        let p = Poly::parse(text)?;
        if !p.is_poly0() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("`{text}` has a nonzero constant term"),
            });
        }
        self.check_state(&p)?;
        Ok(p)
    }

    pub fn set_output(&mut self, v: &str, value: Rational) -> Result<()> {
        let v = self.known_var(v)?;
        self.output.insert(v, value);
        Ok(())
    }

    pub fn set_transition(&mut self, letter: &str, v: &str, p: Poly) -> Result<()> {
        self.known_letter(letter)?;
        let v = self.known_var(v)?;
        self.check_state(&p)?;
        self.transitions
            .get_mut(letter)
            .expect("known letter")
            .insert(v, p);
        Ok(())
    }

    pub fn output_of(&self, v: &str) -> Result<&Rational> {
        self.output
            .get(v)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    pub fn transition(&self, letter: &str, v: &str) -> Result<&Poly> {
        self.known_letter(letter)?;
        self.transitions[letter]
            .get(v)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    /// `D̃_a p`, splitting monomials at the earliest declared variable.
    pub fn delta_extend(&self, letter: &str, p: &Poly, limits: &Limits) -> Result<Poly> {
        self.delta_extend_pivot(letter, p, Pivot::First, limits)
    }

    pub fn delta_extend_pivot(&self, letter: &str, p: &Poly, pivot: Pivot, limits: &Limits) -> Result<Poly> {
        self.known_letter(letter)?;
        let row = &self.transitions[letter];
        extend_poly(
            self.simple(),
            &self.rank,
            pivot,
            p,
            |v| {
                row.get(v)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            },
            limits,
        )
    }

    /// `Δ_w p`, letters applied left to right.
    pub fn delta_word<S: AsRef<str>>(&self, word: &[S], p: &Poly, limits: &Limits) -> Result<Poly> {
        let mut cur = p.clone();
        for a in word {
            limits.check_deadline()?;
            cur = self.delta_extend(a.as_ref(), &cur, limits)?;
        }
        Ok(cur)
    }

    /// `F` extended to polynomials by evaluation.
    pub fn output(&self, p: &Poly) -> Result<Rational> {
        p.eval_with(|v| self.output.get(v)).map_err(|e| match e {
            Error::UnassignedVariable(v) => Error::UnknownVariable(v),
            other => other,
        })
    }

    pub fn coefficient<S: AsRef<str>>(&self, p: &Poly, word: &[S], limits: &Limits) -> Result<Rational> {
        self.output(&self.delta_word(word, p, limits)?)
    }

    /// Coefficients of all words of length at most `max_len` in
    /// length-lexicographic order, sharing prefixes.
    pub fn coefficients(&self, p: &Poly, max_len: usize, limits: &Limits) -> Result<Vec<(Vec<String>, Rational)>> {
        let mut out = Vec::new();
        let mut level: Vec<(Vec<String>, Poly)> = vec![(Vec::new(), p.clone())];
        for len in 0..=max_len {
            for (w, q) in &level {
                out.push((w.clone(), self.output(q)?));
            }
            if len == max_len {
                break;
            }
            level = self.expand(&level, limits)?;
        }
        Ok(out)
    }

    /// All one-letter successors of a level, in length-lexicographic order.
    pub(crate) fn expand(
        &self,
        level: &[(Vec<String>, Poly)],
        limits: &Limits,
    ) -> Result<Vec<(Vec<String>, Poly)>> {
        let mut next = Vec::with_capacity(level.len() * self.alphabet.len());
        for (w, q) in level {
            for a in &self.alphabet {
                let mut w2 = w.clone();
                w2.push(a.clone());
                next.push((w2, self.delta_extend(a, q, limits)?));
            }
        }
        Ok(next)
    }

    fn prefixed(&self, prefix: &str) -> PolyAutomaton {
        let ren = |v: &str| var(&format!("{prefix}{v}"));
        let mut a = PolyAutomaton {
            alphabet: Vec::new(),
            variables: Vec::new(),
            rank: HashMap::new(),
            rule: self.rule.clone(),
            output: BTreeMap::new(),
            transitions: BTreeMap::new(),
        };
        for l in &self.alphabet {
            a.add_letter(l.clone());
        }
        for v in &self.variables {
            let w = ren(v);
            a.add_variable(w.clone());
            a.output.insert(w.clone(), self.output[v].clone());
            for l in &self.alphabet {
                let p = self.transitions[l][v].rename(ren);
                a.transitions.get_mut(l).expect("letter").insert(w.clone(), p);
            }
        }
        a
    }

    /// Disjoint union under the prefixes `l.` and `r.`.
    pub fn disjoint_union(&self, other: &PolyAutomaton) -> Result<PolyAutomaton> {
        if self.rule.normal_form() != other.rule.normal_form() {
            return Err(Error::Mismatch(format!(
                "product rules differ: `{}` vs `{}`",
                self.rule, other.rule
            )));
        }
        let mut mine = self.alphabet.clone();
        let mut theirs = other.alphabet.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::Mismatch("alphabets differ".into()));
        }
        let mut out = self.prefixed("l.");
        let right = other.prefixed("r.");
        for v in &right.variables {
            out.add_variable(v.clone());
            out.output.insert(v.clone(), right.output[v].clone());
            for l in &right.alphabet {
                let p = right.transitions[l][v].clone();
                out.transitions.get_mut(l).expect("letter").insert(v.clone(), p);
            }
        }
        Ok(out)
    }

    /// A name not yet used by any variable, starting from `base`.
    pub(crate) fn fresh_name(&self, base: &str) -> Var {
        let mut k = 0usize;
        loop {
            let cand = if k == 0 {
                base.to_string()
            } else {
                format!("{base}{k}")
            };
            if !self.has_variable(&cand) {
                return var(&cand);
            }
            k += 1;
        }
    }
}
