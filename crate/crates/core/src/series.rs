//! Truncated series as plain coefficient tables, with the P-product computed
//! straight from its defining recursion
//!
//! ```text
//! (f ∗ g)(ε)   = f(ε)·g(ε)
//! δ_a(f ∗ g)   = P(f, δ_a f, g, δ_a g)
//! ```
//!
//! This shares no code with the automata, so it serves as an independent
//! reference for them.

use crate::polyalg::Rational;
use crate::termauto::{Term, TermKind};

/// Coefficients of every word of length at most `max_len` over letters
/// `0..letters`, stored in length-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    letters: usize,
    max_len: usize,
    coeffs: Vec<Rational>,
}

/// Number of words of length at most `max_len` over `letters` letters.
pub fn word_count(letters: usize, max_len: usize) -> usize {
    (0..=max_len).map(|k| letters.pow(k as u32)).sum()
}

/// All words of length at most `max_len`, length-lexicographically.
pub fn words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for a in 0..letters {
                let mut w2: Vec<usize> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

impl Series {
    pub fn from_fn<F: FnMut(&[usize]) -> Rational>(letters: usize, max_len: usize, mut f: F) -> Series {
        let coeffs = words(letters, max_len).iter().map(|w| f(w)).collect();
        Series {
            letters,
            max_len,
            coeffs,
        }
    }

    /// From coefficients listed in length-lexicographic order.
    pub fn from_table(letters: usize, max_len: usize, coeffs: Vec<Rational>) -> Series {
        assert_eq!(coeffs.len(), word_count(letters, max_len), "table size");
        Series {
            letters,
            max_len,
            coeffs,
        }
    }

    pub fn zero(letters: usize, max_len: usize) -> Series {
        Series::from_fn(letters, max_len, |_| Rational::zero())
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn index(&self, w: &[usize]) -> usize {
        let mut offset = word_count(self.letters, w.len()) - self.letters.pow(w.len() as u32);
        let mut rank = 0;
        for &a in w {
            rank = rank * self.letters + a;
        }
        offset += rank;
        offset
    }

    pub fn get(&self, w: &[usize]) -> &Rational {
        assert!(w.len() <= self.max_len, "word longer than the table");
        &self.coeffs[self.index(w)]
    }

    pub fn truncate(&self, max_len: usize) -> Series {
        assert!(max_len <= self.max_len);
        Series::from_fn(self.letters, max_len, |w| self.get(w).clone())
    }

    /// `δ_a f`, one letter shorter.
    pub fn derivative(&self, a: usize) -> Series {
        assert!(self.max_len > 0);
        Series::from_fn(self.letters, self.max_len - 1, |w| {
            let mut aw = vec![a];
            aw.extend_from_slice(w);
            self.get(&aw).clone()
        })
    }

    pub fn add(&self, other: &Series) -> Series {
        Series::from_fn(self.letters, self.max_len, |w| self.get(w) + other.get(w))
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series::from_fn(self.letters, self.max_len, |w| c * self.get(w))
    }

    /// The P-product for the rule with source term `rule`, for any rule.
    pub fn product(rule: &Term, f: &Series, g: &Series) -> Series {
        assert_eq!((f.letters, f.max_len), (g.letters, g.max_len));
        let letters = f.letters;
        let len = f.max_len;
        let mut coeffs = vec![f.get(&[]) * g.get(&[])];
        if len > 0 {
            let (fs, gs) = (f.truncate(len - 1), g.truncate(len - 1));
            let tails: Vec<Series> = (0..letters)
                .map(|a| {
                    let (fa, ga) = (f.derivative(a), g.derivative(a));
                    eval_rule(rule, rule, [&fs, &fa, &gs, &ga])
                })
                .collect();
            for w in words(letters, len).iter().skip(1) {
                coeffs.push(tails[w[0]].get(&w[1..]).clone());
            }
        }
        Series {
            letters,
            max_len: len,
            coeffs,
        }
    }
}

/// Evaluates the subterm `t` of `rule` with `x, xd, y, yd` bound to `args`.
fn eval_rule(rule: &Term, t: &Term, args: [&Series; 4]) -> Series {
    let base = args[0];
    match t.kind() {
        TermKind::Zero => Series::zero(base.letters, base.max_len),
        TermKind::Var(v) => match &**v {
            "x" => args[0].clone(),
            "xd" => args[1].clone(),
            "y" => args[2].clone(),
            "yd" => args[3].clone(),
            other => panic!("`{other}` is not a rule variable"),
        },
        TermKind::Scale(c, u) => eval_rule(rule, u, args).scale(c),
        TermKind::Sum(u, v) => eval_rule(rule, u, args).add(&eval_rule(rule, v, args)),
        TermKind::Product(u, v) => {
            Series::product(rule, &eval_rule(rule, u, args), &eval_rule(rule, v, args))
        }
    }
}
