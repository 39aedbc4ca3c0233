//! Zeroness and equivalence through the ascending chain of ideals
//! `I_n = ⟨Δ_w p₀ : |w| ≤ n⟩`.

use serde_json::{json, Value};

use super::PolyAutomaton;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polyalg::{GroebnerBasis, Poly, Rational};
use crate::termauto::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroOptions {
    /// Only differentiate generators that enlarged the ideal. When off, the
    /// chain is built from every `Δ_w p₀` and the stabilization is
    /// re-checked one level further.
    pub prune: bool,
    /// Require the initial state to be a single declared variable.
    pub strict_initial: bool,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions {
            prune: true,
            strict_initial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeronessCertificate {
    pub verdict: bool,
    /// First level at which the ideal chain stopped growing.
    pub n: usize,
    /// Generators that enlarged the ideal, with the word that produced them.
    pub generators: Vec<(Word, Poly)>,
    /// First word in length-lexicographic order with a nonzero coefficient.
    pub witness: Option<(Word, Rational)>,
    pub words_checked: u64,
}

impl ZeronessCertificate {
    /// JSON form; `word` renders words.
    pub fn to_json(&self, word: impl Fn(&[String]) -> String) -> Value {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|(w, p)| json!({"word": word(w), "poly": p.to_string()}))
            .collect();
        let (ww, wv) = match &self.witness {
            Some((w, c)) => (Value::from(word(w)), Value::from(c.to_string())),
            None => (Value::Null, Value::Null),
        };
        json!({
            "verdict": self.verdict,
            "N": self.n,
            "witness_word": ww,
            "witness_value": wv,
            "words_checked": self.words_checked,
            "generators": gens,
            "limits_hit": false,
        })
    }
}

/// Decides whether the series of `p0` is identically zero.
pub fn zeroness(
    a: &PolyAutomaton,
    p0: &Poly,
    opts: &ZeroOptions,
    limits: &Limits,
) -> Result<ZeronessCertificate> {
    a.check_state(p0)?;
    if opts.strict_initial {
        let single = p0.len() == 1
            && p0
                .terms()
                .all(|(m, c)| c.is_one() && m.degree() == 1);
        if !single {
            return Err(Error::Precondition(format!(
                "strict initial mode needs a single variable, got `{p0}`"
            )));
        }
    }
    let (n, generators) = if opts.prune {
        pruned_chain(a, p0, limits)?
    } else {
        literal_chain(a, p0, limits)?
    };
    let (witness, words_checked) = sweep(a, p0, n, limits)?;
    Ok(ZeronessCertificate {
        verdict: witness.is_none(),
        n,
        generators,
        witness,
        words_checked,
    })
}

fn level_cap(level: usize, limits: &Limits) -> Result<()> {
    if level > limits.max_ideal_levels {
        Err(Error::ResourceLimit(format!(
            "ideal chain still growing after {} levels",
            limits.max_ideal_levels
        )))
    } else {
        Ok(())
    }
}

/// Only generators that were not already in the ideal are differentiated:
/// derivatives of members are covered by the kept generators and their
/// derivatives.
fn pruned_chain(a: &PolyAutomaton, p0: &Poly, limits: &Limits) -> Result<(usize, Vec<(Word, Poly)>)> {
    let mut gb = GroebnerBasis::zero_ideal(a.order());
    let mut kept = Vec::new();
    let mut frontier: Vec<(Word, Poly)> = Vec::new();
    if !p0.is_zero() {
        gb = gb.extend(std::slice::from_ref(p0), limits)?;
        frontier.push((Vec::new(), p0.clone()));
        kept.push((Vec::new(), p0.clone()));
    }
    let mut level = 0;
    loop {
        let mut next = Vec::new();
        for (w, g) in &frontier {
            for l in a.alphabet() {
                limits.check_deadline()?;
                let d = a.delta_extend(l, g, limits)?;
                if !gb.contains(&d) {
                    gb = gb.extend(std::slice::from_ref(&d), limits)?;
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push((w2, d));
                }
            }
        }
        if next.is_empty() {
            return Ok((level, kept));
        }
        level += 1;
        level_cap(level, limits)?;
        kept.extend(next.iter().cloned());
        frontier = next;
    }
}

/// The chain exactly as defined: every word of every length.
fn literal_chain(a: &PolyAutomaton, p0: &Poly, limits: &Limits) -> Result<(usize, Vec<(Word, Poly)>)> {
    let mut level_polys: Vec<(Word, Poly)> = vec![(Vec::new(), p0.clone())];
    let mut gb = GroebnerBasis::zero_ideal(a.order()).extend(std::slice::from_ref(p0), limits)?;
    let mut recorded: Vec<(Word, Poly)> = Vec::new();
    if !p0.is_zero() {
        recorded.push((Vec::new(), p0.clone()));
    }
    let mut level = 0;
    loop {
        limits.check_deadline()?;
        let next = a.expand(&level_polys, limits)?;
        let polys: Vec<Poly> = next.iter().map(|(_, p)| p.clone()).collect();
        if crate::polyalg::ideal_equal(&gb, &polys) {
            let after = a.expand(&next, limits)?;
            let after: Vec<Poly> = after.into_iter().map(|(_, p)| p).collect();
            if !crate::polyalg::ideal_equal(&gb, &after) {
                return Err(Error::Precondition(format!(
                    "ideal chain grew again after stabilizing at level {level}"
                )));
            }
            return Ok((level, recorded));
        }
        for (w, p) in &next {
            if !gb.contains(p) {
                recorded.push((w.clone(), p.clone()));
            }
        }
        gb = gb.extend(&polys, limits)?;
        level += 1;
        level_cap(level, limits)?;
        level_polys = next;
    }
}

/// Coefficients of all words of length at most `n`, stopping at the first
/// nonzero one.
fn sweep(a: &PolyAutomaton, p0: &Poly, n: usize, limits: &Limits) -> Result<(Option<(Word, Rational)>, u64)> {
    let mut checked = 0u64;
    let mut level: Vec<(Word, Poly)> = vec![(Vec::new(), p0.clone())];
    for len in 0..=n {
        for (w, p) in &level {
            checked += 1;
            let c = a.output(p)?;
            if !c.is_zero() {
                return Ok((Some((w.clone(), c)), checked));
            }
        }
        if len == n {
            break;
        }
        limits.check_deadline()?;
        level = a.expand(&level, limits)?;
    }
    Ok((None, checked))
}

/// Whether `p` over `a` and `q` over `b` denote the same series. The two
/// automata are joined with their variables under `l.` and `r.`.
pub fn equivalence(
    a: &PolyAutomaton,
    p: &Poly,
    b: &PolyAutomaton,
    q: &Poly,
    opts: &ZeroOptions,
    limits: &Limits,
) -> Result<ZeronessCertificate> {
    a.check_state(p)?;
    b.check_state(q)?;
    let joined = a.disjoint_union(b)?;
    let lp = p.rename(|v| crate::polyalg::var(&format!("l.{v}")));
    let rq = q.rename(|v| crate::polyalg::var(&format!("r.{v}")));
    let opts = ZeroOptions {
        strict_initial: false,
        ..*opts
    };
    zeroness(&joined, &(lp - rq), &opts, limits)
}
