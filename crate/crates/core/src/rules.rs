//! Product rules: parsing, the characterisation of rules that give a
//! commutative algebra, the bilinear `(α, β, γ)` classification, units, and
//! the syntactic checks the deciders rely on.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::polyalg::{var, Monomial, Poly, Rational, Var};
use crate::termauto::term::{Extender, Term};

/// The variables a rule may mention: `x`, `ẋ`, `y`, `ẏ`.
pub const RULE_VARIABLES: [&str; 4] = ["x", "xd", "y", "yd"];

pub const PRESETS: [(&str, &str); 4] = [
    ("hadamard", "xd*yd"),
    ("shuffle", "xd*y + x*yd"),
    ("infiltration", "xd*y + x*yd + xd*yd"),
    ("trivial0", "0"),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

/// Parses rule text into its term, without simplification.
pub fn parse_rule(text: &str) -> Result<Term> {
    let t = Term::parse(text)?;
    for v in t.variables() {
        if !RULE_VARIABLES.contains(&&*v) {
            return Err(Error::ForeignVariable(v.to_string()));
        }
    }
    Ok(t)
}

pub fn rule_to_poly(rule: &Term) -> Poly {
    rule.to_poly()
}

/// `P(a, ad, b, bd)`: the rule polynomial with its four variables replaced.
pub fn apply(p: &Poly, a: &Poly, ad: &Poly, b: &Poly, bd: &Poly) -> Poly {
    p.subst_with(|v| match v {
        "x" => Some(a.clone()),
        "xd" => Some(ad.clone()),
        "y" => Some(b.clone()),
        "yd" => Some(bd.clone()),
        other => Some(Poly::var(other)),
    })
    .expect("every variable has an image")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    Add,
    Assoc,
    Comm,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Add => "P-add",
            Identity::Assoc => "P-assoc",
            Identity::Comm => "P-comm",
        })
    }
}

/// Coefficients `(α, β, γ)` of `α·xy + β·(x·yd + xd·y) + γ·xd·yd`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simple {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl Simple {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        Simple { alpha, beta, gamma }
    }

    pub fn is_degenerate(&self) -> bool {
        self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn to_poly(&self) -> Poly {
        Bilinear {
            alpha: self.alpha.clone(),
            beta1: self.beta.clone(),
            beta2: self.beta.clone(),
            gamma: self.gamma.clone(),
        }
        .to_poly()
    }
}

impl fmt::Display for Simple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// General bilinear rule `α·xy + β₁·x·yd + β₂·xd·y + γ·xd·yd`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bilinear {
    pub alpha: Rational,
    pub beta1: Rational,
    pub beta2: Rational,
    pub gamma: Rational,
}

impl Bilinear {
    /// Reads the four coefficients; `None` if any other monomial occurs.
    pub fn of(p: &Poly) -> Option<Bilinear> {
        let mono = |a: &str, b: &str| Monomial::from_pairs([(var(a), 1), (var(b), 1)]);
        let slots = [mono("x", "y"), mono("x", "yd"), mono("xd", "y"), mono("xd", "yd")];
        if p.terms().any(|(m, _)| !slots.contains(m)) {
            return None;
        }
        let [a, b1, b2, g] = slots.map(|m| p.coeff(&m));
        Some(Bilinear {
            alpha: a,
            beta1: b1,
            beta2: b2,
            gamma: g,
        })
    }

    pub fn to_poly(&self) -> Poly {
        let mono = |a: &str, b: &str| Monomial::from_pairs([(var(a), 1), (var(b), 1)]);
        Poly::from_terms([
            (mono("x", "y"), self.alpha.clone()),
            (mono("x", "yd"), self.beta1.clone()),
            (mono("xd", "y"), self.beta2.clone()),
            (mono("xd", "yd"), self.gamma.clone()),
        ])
    }

    /// The four quantities that vanish exactly when the bilinear rule is
    /// associative: `α(β₁−β₂)`, `γ(β₁−β₂)`, `αγ−β₁(β₁−1)`, `αγ−β₂(β₂−1)`.
    pub fn associativity_residues(&self) -> [Rational; 4] {
        let one = Rational::one();
        let d = &self.beta1 - &self.beta2;
        let ag = &self.alpha * &self.gamma;
        [
            &self.alpha * &d,
            &self.gamma * &d,
            &ag - &self.beta1 * (&self.beta1 - &one),
            &ag - &self.beta2 * (&self.beta2 - &one),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialityReport {
    pub add_ok: bool,
    pub assoc_ok: bool,
    pub comm_ok: bool,
    pub simple: Option<Simple>,
    pub unit_eta: Option<Rational>,
    /// First identity that fails, with its nonzero difference polynomial
    /// over `x, xd, y, yd, z, zd`.
    pub failing_identity: Option<(Identity, Poly)>,
}

impl SpecialityReport {
    pub fn is_special(&self) -> bool {
        self.add_ok && self.assoc_ok && self.comm_ok
    }
}

/// Differences `lhs − rhs` of the three defining identities, in order.
pub fn identity_differences(p: &Poly) -> [(Identity, Poly); 3] {
    let v = Poly::var;
    let (x, xd, y, yd, z, zd) = (v("x"), v("xd"), v("y"), v("yd"), v("z"), v("zd"));

    let add = apply(p, &(&x + &y), &(&xd + &yd), &z, &zd)
        - apply(p, &x, &xd, &z, &zd)
        - apply(p, &y, &yd, &z, &zd);

    let left = apply(p, &x, &xd, &(&y * &z), &apply(p, &y, &yd, &z, &zd));
    let right = apply(p, &(&x * &y), &apply(p, &x, &xd, &y, &yd), &z, &zd);
    let assoc = left - right;

    let comm = p - &apply(p, &y, &yd, &x, &xd);

    [
        (Identity::Add, add),
        (Identity::Assoc, assoc),
        (Identity::Comm, comm),
    ]
}

pub fn check_special(p: &Poly) -> SpecialityReport {
    let diffs = identity_differences(p);
    let [add_ok, assoc_ok, comm_ok] = [0, 1, 2].map(|i| diffs[i].1.is_zero());
    let failing_identity = diffs.into_iter().find(|(_, d)| !d.is_zero());
    let simple = if add_ok && assoc_ok && comm_ok {
        simple_form(p)
    } else {
        None
    };
    let unit_eta = simple.as_ref().and_then(multiplicative_unit);
    SpecialityReport {
        add_ok,
        assoc_ok,
        comm_ok,
        simple,
        unit_eta,
        failing_identity,
    }
}

fn simple_form(p: &Poly) -> Option<Simple> {
    let b = Bilinear::of(p)?;
    if b.beta1 != b.beta2 {
        return None;
    }
    let s = Simple::new(b.alpha, b.beta1, b.gamma);
    let one = Rational::one();
    if &s.alpha * &s.gamma != &s.beta * (&s.beta - &one) {
        return None;
    }
    Some(s)
}

/// `(α, β, γ)` when the rule is special, otherwise `None`.
pub fn classify_simple(p: &Poly) -> Option<Simple> {
    check_special(p).simple
}

/// The `η` with `δ_a 𝟙 = η·𝟙`; `None` for degenerate rules.
pub fn multiplicative_unit(s: &Simple) -> Option<Rational> {
    let one = Rational::one();
    let from_beta = (!s.beta.is_zero()).then(|| -(&s.alpha / &s.beta));
    let from_gamma = (!s.gamma.is_zero()).then(|| -((&s.beta - &one) / &s.gamma));
    if let (Some(a), Some(b)) = (&from_beta, &from_gamma) {
        assert_eq!(a, b, "unit equations disagree for {s}");
    }
    from_beta.or(from_gamma)
}

/// Every monomial of the rule mentions `y` or `yd`.
pub fn ideal_compatible(p: &Poly) -> bool {
    p.terms().all(|(m, _)| m.contains("y") || m.contains("yd"))
}

/// Checks that extending by a left letter and then a right letter, applied
/// to `x ∗ y`, agrees with the opposite order once both are normalized.
pub fn check_reversal_commutation(rule: &Term) -> Result<bool> {
    if !check_special(&rule.to_poly()).is_special() {
        return Err(Error::Precondition(
            "reversal commutation is only characterised for special rules".into(),
        ));
    }
    let (l, r) = reversal_sides(rule)?;
    Ok(l.to_poly() == r.to_poly())
}

/// Both sides of the reversal check as terms over
/// `x, Lx, Rx, LRx, y, Ly, Ry, LRy`: right-after-left and left-after-right.
pub fn reversal_sides(rule: &Term) -> Result<(Term, Term)> {
    let left: BTreeMap<&str, &str> = [("x", "Lx"), ("Rx", "LRx"), ("y", "Ly"), ("Ry", "LRy")]
        .into_iter()
        .collect();
    let right: BTreeMap<&str, &str> = [("x", "Rx"), ("Lx", "LRx"), ("y", "Ry"), ("Ly", "LRy")]
        .into_iter()
        .collect();
    let step = |map: &BTreeMap<&str, &str>, t: &Term| -> Result<Term> {
        let cap = Limits::default().max_term_nodes;
        Extender::new(
            rule,
            |v: &Var| {
                map.get(&**v)
                    .map(|w| Term::var(w))
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            },
            cap,
        )
        .extend(t)
    };
    let xy = Term::product(Term::var("x"), Term::var("y"));
    let rl = step(&right, &step(&left, &xy)?)?;
    let lr = step(&left, &step(&right, &xy)?)?;
    Ok((rl, lr))
}

/// A parsed rule with its normal form and classification.
#[derive(Debug, Clone)]
pub struct ProductRule {
    name: Option<String>,
    source: Term,
    normal_form: Poly,
    speciality: SpecialityReport,
}

impl PartialEq for ProductRule {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl ProductRule {
    /// Accepts a preset name or an expression over `x, xd, y, yd`.
    pub fn parse(text: &str) -> Result<ProductRule> {
        let trimmed = text.trim();
        match preset(trimmed) {
            Some(src) => {
                let mut r = ProductRule::from_term(parse_rule(src)?);
                r.name = Some(trimmed.to_string());
                Ok(r)
            }
            None => Ok(ProductRule::from_term(parse_rule(text)?)),
        }
    }

    /// Builds a rule from a term already known to use only rule variables.
    pub fn from_term(source: Term) -> ProductRule {
        let normal_form = source.to_poly();
        let speciality = check_special(&normal_form);
        ProductRule {
            name: None,
            source,
            normal_form,
            speciality,
        }
    }

    pub fn hadamard() -> ProductRule {
        ProductRule::parse("hadamard").expect("preset")
    }

    pub fn shuffle() -> ProductRule {
        ProductRule::parse("shuffle").expect("preset")
    }

    pub fn infiltration() -> ProductRule {
        ProductRule::parse("infiltration").expect("preset")
    }

    pub fn trivial0() -> ProductRule {
        ProductRule::parse("trivial0").expect("preset")
    }

    /// Preset name, if the rule was given as one.
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn normal_form(&self) -> &Poly {
        &self.normal_form
    }

    pub fn speciality(&self) -> &SpecialityReport {
        &self.speciality
    }

    pub fn is_special(&self) -> bool {
        self.speciality.is_special()
    }

    pub fn simple(&self) -> Option<&Simple> {
        self.speciality.simple.as_ref()
    }

    pub fn unit_eta(&self) -> Option<&Rational> {
        self.speciality.unit_eta.as_ref()
    }
}

impl fmt::Display for ProductRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => f.write_str(n),
            None => write!(f, "{}", self.source),
        }
    }
}
