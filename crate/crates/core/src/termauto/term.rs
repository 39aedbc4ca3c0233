//! Free terms over named variables: `0 | x | c·u | u + v | u ∗ v`.
//!
//! Terms are immutable and share subterms through reference counting, so
//! repeated extension (which copies operands into the rule) stays cheap in
//! memory even when the tree size explodes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyalg::{parse_expr, var, Expr, Poly, Rational, Var};

#[derive(Clone, PartialEq, Eq)]
pub enum TermKind {
    Zero,
    Var(Var),
    Scale(Rational, Term),
    Sum(Term, Term),
    Product(Term, Term),
}

struct Node {
    kind: TermKind,
    size: u64,
}

#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    fn make(kind: TermKind) -> Term {
        let size = match &kind {
            TermKind::Zero | TermKind::Var(_) => 1,
            TermKind::Scale(_, u) => u.size().saturating_add(1),
            TermKind::Sum(u, v) | TermKind::Product(u, v) => {
                u.size().saturating_add(v.size()).saturating_add(1)
            }
        };
        Term(Arc::new(Node { kind, size }))
    }

    pub fn zero() -> Term {
        Term::make(TermKind::Zero)
    }

    pub fn var(name: &str) -> Term {
        Term::make(TermKind::Var(var(name)))
    }

    pub fn from_var(v: Var) -> Term {
        Term::make(TermKind::Var(v))
    }

    pub fn scale(c: Rational, u: Term) -> Term {
        Term::make(TermKind::Scale(c, u))
    }

    pub fn sum(u: Term, v: Term) -> Term {
        Term::make(TermKind::Sum(u, v))
    }

    pub fn product(u: Term, v: Term) -> Term {
        Term::make(TermKind::Product(u, v))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0.kind, TermKind::Zero)
    }

    /// Number of nodes of the tree, counting shared subterms once per
    /// occurrence. Saturates at `u64::MAX`.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Distinct variables in order of first occurrence (left to right).
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            if !seen.insert(t.key()) {
                continue;
            }
            match t.kind() {
                TermKind::Zero => {}
                TermKind::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                TermKind::Scale(_, u) => stack.push(u.clone()),
                TermKind::Sum(u, v) | TermKind::Product(u, v) => {
                    stack.push(v.clone());
                    stack.push(u.clone());
                }
            }
        }
        out
    }

    /// Image in the free commutative algebra: the polynomial the term denotes
    /// once bilinearity, associativity and commutativity are imposed.
    pub fn to_poly(&self) -> Poly {
        fn go(t: &Term, memo: &mut HashMap<usize, (Term, Poly)>) -> Poly {
            if let Some((_, p)) = memo.get(&t.key()) {
                return p.clone();
            }
            let p = match t.kind() {
                TermKind::Zero => Poly::zero(),
                TermKind::Var(v) => Poly::var(v),
                TermKind::Scale(c, u) => go(u, memo).scale(c),
                TermKind::Sum(u, v) => go(u, memo) + go(v, memo),
                TermKind::Product(u, v) => &go(u, memo) * &go(v, memo),
            };
            memo.insert(t.key(), (t.clone(), p.clone()));
            p
        }
        go(self, &mut HashMap::new())
    }

    /// Homomorphic evaluation with `value` giving each variable's value.
    pub fn eval_with<F>(&self, mut value: F) -> Result<Rational>
    where
        F: FnMut(&Var) -> Result<Rational>,
    {
        fn go<F>(t: &Term, value: &mut F, memo: &mut HashMap<usize, (Term, Rational)>) -> Result<Rational>
        where
            F: FnMut(&Var) -> Result<Rational>,
        {
            if let Some((_, r)) = memo.get(&t.key()) {
                return Ok(r.clone());
            }
            let r = match t.kind() {
                TermKind::Zero => Rational::zero(),
                TermKind::Var(v) => value(v)?,
                TermKind::Scale(c, u) => c * go(u, value, memo)?,
                TermKind::Sum(u, v) => go(u, value, memo)? + go(v, value, memo)?,
                TermKind::Product(u, v) => go(u, value, memo)? * go(v, value, memo)?,
            };
            memo.insert(t.key(), (t.clone(), r.clone()));
            Ok(r)
        }
        go(self, &mut value, &mut HashMap::new())
    }

    /// Replaces variables by terms; variables `image` declines are kept.
    pub fn substitute<F>(&self, mut image: F) -> Term
    where
        F: FnMut(&Var) -> Option<Term>,
    {
        fn go<F>(t: &Term, image: &mut F, memo: &mut HashMap<usize, (Term, Term)>) -> Term
        where
            F: FnMut(&Var) -> Option<Term>,
        {
            if let Some((_, r)) = memo.get(&t.key()) {
                return r.clone();
            }
            let r = match t.kind() {
                TermKind::Zero => t.clone(),
                TermKind::Var(v) => image(v).unwrap_or_else(|| t.clone()),
                TermKind::Scale(c, u) => Term::scale(c.clone(), go(u, image, memo)),
                TermKind::Sum(u, v) => Term::sum(go(u, image, memo), go(v, image, memo)),
                TermKind::Product(u, v) => Term::product(go(u, image, memo), go(v, image, memo)),
            };
            memo.insert(t.key(), (t.clone(), r.clone()));
            r
        }
        go(self, &mut image, &mut HashMap::new())
    }

    pub fn rename<F: FnMut(&Var) -> Var>(&self, mut f: F) -> Term {
        self.substitute(|v| Some(Term::from_var(f(v))))
    }

    /// Parses a term. Constants may only appear as scalar factors; a
    /// constant standing alone must be zero.
    pub fn parse(text: &str) -> Result<Term> {
        Term::from_expr(&parse_expr(text)?)
    }

    pub fn from_expr(e: &Expr) -> Result<Term> {
        match lower(e)? {
            Lowered::Const(c) if c.is_zero() => Ok(Term::zero()),
            Lowered::Const(c) => Err(Error::parse(
                0,
                format!("constant `{c}` is not a term; terms have no constant part"),
            )),
            Lowered::Term(t) => Ok(t),
        }
    }
}

enum Lowered {
    Const(Rational),
    Term(Term),
}

fn lower(e: &Expr) -> Result<Lowered> {
    use Lowered::{Const, Term as T};
    let mixed = |c: &Rational| {
        Error::parse(
            0,
            format!("constant `{c}` added to a term; terms have no constant part"),
        )
    };
    Ok(match e {
        Expr::Const(c) => Const(c.clone()),
        Expr::Var(v) => T(Term::var(v)),
        Expr::Neg(a) => match lower(a)? {
            Const(c) => Const(-c),
            T(t) => T(Term::scale(-Rational::one(), t)),
        },
        Expr::Add(a, b) => match (lower(a)?, lower(b)?) {
            (Const(c), Const(d)) => Const(c + d),
            (Const(c), T(t)) | (T(t), Const(c)) => {
                if c.is_zero() {
                    T(t)
                } else {
                    return Err(mixed(&c));
                }
            }
            (T(t), T(u)) => T(Term::sum(t, u)),
        },
        Expr::Sub(a, b) => match (lower(a)?, lower(b)?) {
            (Const(c), Const(d)) => Const(c - d),
            (T(t), Const(c)) => {
                if c.is_zero() {
                    T(t)
                } else {
                    return Err(mixed(&c));
                }
            }
            (Const(c), T(t)) => {
                if c.is_zero() {
                    T(Term::scale(-Rational::one(), t))
                } else {
                    return Err(mixed(&c));
                }
            }
            (T(t), T(u)) => T(Term::sum(t, Term::scale(-Rational::one(), u))),
        },
        Expr::Mul(a, b) => match (lower(a)?, lower(b)?) {
            (Const(c), Const(d)) => Const(c * d),
            (Const(c), T(t)) | (T(t), Const(c)) => T(Term::scale(c, t)),
            (T(t), T(u)) => T(Term::product(t, u)),
        },
        Expr::Pow(a, k) => match lower(a)? {
            Const(c) => Const(c.pow(*k)),
            T(t) => {
                let mut acc = t.clone();
                for _ in 1..*k {
                    acc = Term::product(acc, t.clone());
                }
                T(acc)
            }
        },
    })
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.size == other.0.size && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrapped(t: &Term, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        }
        match self.kind() {
            TermKind::Zero => write!(f, "0"),
            TermKind::Var(v) => write!(f, "{v}"),
            TermKind::Scale(c, u) => {
                write!(f, "{c}*")?;
                wrapped(u, f, !matches!(u.kind(), TermKind::Var(_)))
            }
            TermKind::Sum(u, v) => {
                write!(f, "{u} + ")?;
                wrapped(v, f, matches!(v.kind(), TermKind::Sum(..)))
            }
            TermKind::Product(u, v) => {
                wrapped(u, f, matches!(u.kind(), TermKind::Sum(..)))?;
                write!(f, "*")?;
                wrapped(
                    v,
                    f,
                    matches!(
                        v.kind(),
                        TermKind::Sum(..) | TermKind::Product(..) | TermKind::Scale(..)
                    ),
                )
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

/// Lifts a choice of derivative for each variable to all terms through a
/// product rule: linear on `0`, `c·u`, `u + v`, and
/// `D(u ∗ v) = P(u, Du, v, Dv)` with `P` given by its source term over
/// `x, xd, y, yd`.
///
/// Results are memoized per subterm for the lifetime of the extender, so a
/// shared subterm is extended once. `max_nodes` bounds the number of nodes
/// the extender allocates.
pub struct Extender<'a, F> {
    rule: &'a Term,
    rule_nodes: u64,
    delta: F,
    max_nodes: u64,
    created: u64,
    memo: HashMap<usize, (Term, Term)>,
}

impl<'a, F> Extender<'a, F>
where
    F: FnMut(&Var) -> Result<Term>,
{
    pub fn new(rule: &'a Term, delta: F, max_nodes: u64) -> Self {
        Extender {
            rule,
            rule_nodes: rule.size(),
            delta,
            max_nodes,
            created: 0,
            memo: HashMap::new(),
        }
    }

    pub fn extend(&mut self, t: &Term) -> Result<Term> {
        if let Some((_, r)) = self.memo.get(&t.key()) {
            return Ok(r.clone());
        }
        let r = match t.kind() {
            TermKind::Zero => t.clone(),
            TermKind::Var(v) => (self.delta)(v)?,
            TermKind::Scale(c, u) => {
                let du = self.extend(u)?;
                self.allocate(1)?;
                Term::scale(c.clone(), du)
            }
            TermKind::Sum(u, v) => {
                let (du, dv) = (self.extend(u)?, self.extend(v)?);
                self.allocate(1)?;
                Term::sum(du, dv)
            }
            TermKind::Product(u, v) => {
                let du = self.extend(u)?;
                let dv = self.extend(v)?;
                self.allocate(self.rule_nodes)?;
                self.rule.substitute(|name| match &**name {
                    "x" => Some(u.clone()),
                    "xd" => Some(du.clone()),
                    "y" => Some(v.clone()),
                    "yd" => Some(dv.clone()),
                    _ => None,
                })
            }
        };
        self.memo.insert(t.key(), (t.clone(), r.clone()));
        Ok(r)
    }

    fn allocate(&mut self, n: u64) -> Result<()> {
        self.created = self.created.saturating_add(n);
        if self.created > self.max_nodes {
            return Err(Error::ResourceLimit(format!(
                "term extension allocated more than max_term_nodes {} nodes",
                self.max_nodes
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    #[test]
    fn parse_is_faithful() {
        let u = t("x*yd + yd*x");
        assert_eq!(
            u,
            Term::sum(
                Term::product(Term::var("x"), Term::var("yd")),
                Term::product(Term::var("yd"), Term::var("x"))
            )
        );
        assert_ne!(t("x*y"), t("y*x"));
        assert_eq!(t("0"), Term::zero());
        assert_eq!(t("2*x"), Term::scale(Rational::from(2), Term::var("x")));
        assert_eq!(t("x*3"), Term::scale(Rational::from(3), Term::var("x")));
        assert_eq!(t("x^3"), t("x*x*x"));
        assert_eq!(
            t("x - y"),
            Term::sum(Term::var("x"), Term::scale(-Rational::one(), Term::var("y")))
        );
    }

    #[test]
    fn constants_are_rejected_outside_scalars() {
        assert!(Term::parse("x + 1").is_err());
        assert!(Term::parse("2").is_err());
        assert!(Term::parse("1 - 1").is_ok());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "0",
            "x",
            "x*y*z",
            "x*(y*z)",
            "(x + y)*z",
            "x + (y + z)",
            "x + y + z",
            "-1/2*(x*y)",
            "3*x*(2*y)",
            "l.x*r.y + -1*l.x",
        ] {
            let u = t(s);
            assert_eq!(t(&u.to_string()), u, "{s} printed as {u}");
        }
    }

    #[test]
    fn normalization() {
        assert_eq!(t("x*yd + yd*x").to_poly(), Poly::parse("2*x*yd").unwrap());
        assert_eq!(t("(x + xd)*y - xd*y").to_poly(), Poly::parse("x*y").unwrap());
    }

    #[test]
    fn size_counts_occurrences() {
        let x = Term::var("x");
        let xx = Term::product(x.clone(), x);
        let q = Term::product(xx.clone(), xx);
        assert_eq!(q.size(), 7);
        assert_eq!(q.variables(), vec![var("x")]);
    }

    #[test]
    fn extension_respects_size_cap() {
        let rule = t("xd*yd");
        let mut ext = Extender::new(&rule, |_: &Var| Ok(t("x*x")), 7);
        assert!(ext.extend(&t("x")).is_ok());
        assert!(ext.extend(&t("x*x + x*x")).is_ok());
        let err = ext.extend(&t("x*(x*(x*x))")).unwrap_err();
        assert!(err.is_resource_limit());
    }
}
