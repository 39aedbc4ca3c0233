//! Multivariate division and Buchberger completion under graded reverse
//! lexicographic order.
//!
//! Work happens on a dense representation: each computation fixes a list of
//! variables, exponent vectors are indexed by position in that list, and the
//! order on vectors needs no further context.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::poly::{var, Monomial, Poly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Graded reverse lexicographic order with an explicit variable precedence
/// (first listed is largest). Variables not listed rank below all listed
/// ones, sorted by name.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MonomialOrder {
    vars: Vec<Var>,
}

impl MonomialOrder {
    pub fn grevlex<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<Var> = Vec::new();
        for v in vars {
            let v = v.as_ref();
            if !out.iter().any(|w| &**w == v) {
                out.push(var(v));
            }
        }
        MonomialOrder { vars: out }
    }

    /// Order on exactly the variables of `polys`, by name.
    pub fn by_name<'a, I: IntoIterator<Item = &'a Poly>>(polys: I) -> Self {
        let mut names = BTreeSet::new();
        for p in polys {
            names.extend(p.variables());
        }
        MonomialOrder {
            vars: names.into_iter().collect(),
        }
    }

    pub fn variables(&self) -> &[Var] {
        &self.vars
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let ring = Ring::for_polys(self, [&Poly::term(a.mul(b), Rational::one())]);
        ring.exp(a).cmp(&ring.exp(b))
    }

    /// Leading monomial and coefficient, `None` for zero.
    pub fn leading_term(&self, p: &Poly) -> Option<(Monomial, Rational)> {
        let ring = Ring::for_polys(self, [p]);
        let d = ring.dense(p);
        d.last_key_value()
            .map(|(e, c)| (ring.monomial(e), c.clone()))
    }
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| &**v).collect();
        write!(f, "grevlex({})", names.join(" > "))
    }
}

/// Exponent vector with its total degree cached. Ordering is grevlex by
/// position.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Exp {
    deg: u32,
    e: Vec<u32>,
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for i in (0..self.e.len()).rev() {
                if self.e[i] != other.e[i] {
                    return other.e[i].cmp(&self.e[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Exp {
    fn divides(&self, other: &Exp) -> bool {
        self.deg <= other.deg && self.e.iter().zip(&other.e).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Exp) -> Exp {
        Exp {
            deg: self.deg + other.deg,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        }
    }

    fn div(&self, other: &Exp) -> Exp {
        Exp {
            deg: self.deg - other.deg,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a - b).collect(),
        }
    }

    fn lcm(&self, other: &Exp) -> Exp {
        let e: Vec<u32> = self.e.iter().zip(&other.e).map(|(a, b)| *a.max(b)).collect();
        Exp {
            deg: e.iter().sum(),
            e,
        }
    }

    fn coprime(&self, other: &Exp) -> bool {
        self.e.iter().zip(&other.e).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn padded(&self, n: usize) -> Exp {
        let mut e = self.e.clone();
        e.resize(n, 0);
        Exp { deg: self.deg, e }
    }
}

type Dense = BTreeMap<Exp, Rational>;

struct Ring {
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
}

impl Ring {
    fn for_polys<'a, I: IntoIterator<Item = &'a Poly>>(order: &MonomialOrder, polys: I) -> Ring {
        let mut vars = order.vars.clone();
        let mut extra = BTreeSet::new();
        for p in polys {
            for v in p.variables() {
                if !vars.contains(&v) {
                    extra.insert(v);
                }
            }
        }
        vars.extend(extra);
        let index = vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ring { vars, index }
    }

    fn exp(&self, m: &Monomial) -> Exp {
        let mut e = vec![0; self.vars.len()];
        for (v, k) in m.factors() {
            e[self.index[v]] = *k;
        }
        Exp {
            deg: m.degree(),
            e,
        }
    }

    fn dense(&self, p: &Poly) -> Dense {
        p.terms().map(|(m, c)| (self.exp(m), c.clone())).collect()
    }

    fn monomial(&self, e: &Exp) -> Monomial {
        Monomial::from_pairs(
            e.e.iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| (self.vars[i].clone(), *k)),
        )
    }

    fn poly(&self, d: &Dense) -> Poly {
        Poly::from_terms(d.iter().map(|(e, c)| (self.monomial(e), c.clone())))
    }
}

fn lead(d: &Dense) -> (&Exp, &Rational) {
    d.last_key_value().expect("nonzero polynomial")
}

fn add_scaled_shifted(acc: &mut Dense, g: &Dense, shift: &Exp, factor: &Rational, skip_lead: bool) {
    let n = g.len();
    for (i, (e, c)) in g.iter().enumerate() {
        if skip_lead && i + 1 == n {
            continue;
        }
        let key = e.mul(shift);
        let delta = c * factor;
        match acc.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(delta);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &delta;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Full multivariate division; returns the remainder.
fn reduce_dense(mut p: Dense, basis: &[Dense]) -> Dense {
    let mut rem = Dense::new();
    while let Some((m, c)) = p.pop_last() {
        match basis.iter().find(|g| lead(g).0.divides(&m)) {
            Some(g) => {
                let (lm, lc) = lead(g);
                let shift = m.div(lm);
                let factor = -(&c / lc);
                add_scaled_shifted(&mut p, g, &shift, &factor, true);
            }
            None => {
                rem.insert(m, c);
            }
        }
    }
    rem
}

fn monic(mut d: Dense) -> Dense {
    let inv = lead(&d).1.recip().expect("nonzero leading coefficient");
    if !inv.is_one() {
        for c in d.values_mut() {
            *c *= &inv;
        }
    }
    d
}

fn s_poly(f: &Dense, g: &Dense) -> Dense {
    let (lf, _) = lead(f);
    let (lg, _) = lead(g);
    let l = lf.lcm(lg);
    let mut out = Dense::new();
    add_scaled_shifted(&mut out, f, &l.div(lf), &Rational::one(), true);
    add_scaled_shifted(&mut out, g, &l.div(lg), &-Rational::one(), true);
    out
}

fn degree(d: &Dense) -> u32 {
    d.keys().map(|e| e.deg).max().unwrap_or(0)
}

/// Completes `old ∪ new` where `old` is already a Gröbner basis (pairs among
/// its elements need no treatment). Returns the reduced basis.
fn complete(old: Vec<Dense>, new: Vec<Dense>, limits: &Limits) -> Result<Vec<Dense>> {
    let mut g: Vec<Dense> = old;
    // Pending pairs keyed for normal selection: lcm degree, lcm, indices.
    let mut queue: BTreeSet<(u32, Exp, usize, usize)> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |g: &mut Vec<Dense>,
                    queue: &mut BTreeSet<(u32, Exp, usize, usize)>,
                    pending: &mut BTreeSet<(usize, usize)>,
                    d: Dense|
     -> Result<()> {
        limits.check_degree(degree(&d))?;
        let k = g.len();
        let lk = lead(&d).0.clone();
        for (i, gi) in g.iter().enumerate() {
            let l = lead(gi).0.lcm(&lk);
            queue.insert((l.deg, l, i, k));
            pending.insert((i, k));
        }
        g.push(d);
        Ok(())
    };

    for d in new {
        let r = reduce_dense(d, &g);
        if !r.is_empty() {
            push(&mut g, &mut queue, &mut pending, monic(r))?;
        }
    }

    let mut treated = 0usize;
    while let Some((_, l, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        limits.check_deadline()?;
        treated += 1;
        if treated > limits.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "more than {} critical pairs",
                limits.max_pairs
            )));
        }
        if lead(&g[i]).0.coprime(lead(&g[j]).0) {
            continue;
        }
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && lead(&g[k]).0.divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let r = reduce_dense(s_poly(&g[i], &g[j]), &g);
        if !r.is_empty() {
            push(&mut g, &mut queue, &mut pending, monic(r))?;
        }
    }
    Ok(interreduce(g))
}

fn interreduce(g: Vec<Dense>) -> Vec<Dense> {
    let mut minimal: Vec<Dense> = Vec::new();
    for (i, d) in g.iter().enumerate() {
        let lm = lead(d).0;
        let redundant = g.iter().enumerate().any(|(k, o)| {
            let lo = lead(o).0;
            k != i && lo.divides(lm) && (lo != lm || k < i)
        });
        if !redundant {
            minimal.push(d.clone());
        }
    }
    let mut out: Vec<Dense> = (0..minimal.len())
        .map(|i| {
            let mut d = minimal[i].clone();
            let (lm, lc) = d.pop_last().expect("nonzero");
            let others: Vec<Dense> = minimal
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, o)| o.clone())
                .collect();
            let mut r = reduce_dense(d, &others);
            r.insert(lm, lc);
            monic(r)
        })
        .collect();
    out.sort_by(|a, b| lead(a).0.cmp(lead(b).0));
    out
}

/// A reduced Gröbner basis together with the order it is reduced for.
#[derive(Clone)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    generators: Vec<Poly>,
    ring_vars: Vec<Var>,
    dense: Vec<Dense>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.generators == other.generators
    }
}

impl Eq for GroebnerBasis {}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroebnerBasis")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl GroebnerBasis {
    /// Basis of the zero ideal.
    pub fn zero_ideal(order: MonomialOrder) -> Self {
        GroebnerBasis {
            ring_vars: order.vars.clone(),
            order,
            generators: Vec::new(),
            dense: Vec::new(),
        }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Monic, interreduced, sorted by increasing leading monomial.
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// True iff the ideal is all of Q[X].
    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1 && self.generators[0] == Poly::one()
    }

    /// Ring covering the basis and `extra`, plus the basis re-indexed into it.
    fn ring_with(&self, extra: &[&Poly]) -> (Ring, Vec<Dense>) {
        let base = MonomialOrder {
            vars: self.ring_vars.clone(),
        };
        let ring = Ring::for_polys(&base, extra.iter().copied());
        let n = ring.vars.len();
        let dense = if n == self.ring_vars.len() {
            self.dense.clone()
        } else {
            self.dense
                .iter()
                .map(|d| d.iter().map(|(e, c)| (e.padded(n), c.clone())).collect())
                .collect()
        };
        (ring, dense)
    }

    /// Normal form of `p` modulo the ideal.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if p.is_zero() {
            return Poly::zero();
        }
        let (ring, basis) = self.ring_with(&[p]);
        ring.poly(&reduce_dense(ring.dense(p), &basis))
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Basis of the ideal generated by `self` and `gens`.
    pub fn extend(&self, gens: &[Poly], limits: &Limits) -> Result<GroebnerBasis> {
        let refs: Vec<&Poly> = gens.iter().collect();
        let (ring, old) = self.ring_with(&refs);
        let new: Vec<Dense> = gens
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| ring.dense(p))
            .collect();
        for d in &new {
            limits.check_degree(degree(d))?;
        }
        let dense = complete(old, new, limits)?;
        let generators = dense.iter().map(|d| ring.poly(d)).collect();
        Ok(GroebnerBasis {
            order: self.order.clone(),
            generators,
            ring_vars: ring.vars,
            dense,
        })
    }
}

/// Remainder of `p` on division by `basis` (in list order) under `order`.
pub fn reduce_with_order(p: &Poly, basis: &[Poly], order: &MonomialOrder) -> Poly {
    let ring = Ring::for_polys(order, std::iter::once(p).chain(basis));
    let dense: Vec<Dense> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ring.dense(g))
        .collect();
    ring.poly(&reduce_dense(ring.dense(p), &dense))
}

/// [`reduce_with_order`] under grevlex with variables ranked by name.
pub fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let order = MonomialOrder::by_name(std::iter::once(p).chain(basis));
    reduce_with_order(p, basis, &order)
}

pub fn buchberger_with(gens: &[Poly], order: MonomialOrder, limits: &Limits) -> Result<GroebnerBasis> {
    GroebnerBasis::zero_ideal(order).extend(gens, limits)
}

/// Reduced basis under grevlex with variables ranked by name and default
/// limits.
pub fn buchberger(gens: &[Poly]) -> Result<GroebnerBasis> {
    buchberger_with(gens, MonomialOrder::by_name(gens), &Limits::default())
}

pub fn ideal_member(p: &Poly, gb: &GroebnerBasis) -> bool {
    gb.contains(p)
}

/// Whether adding `gens` leaves the ideal of `gb` unchanged.
pub fn ideal_equal(gb: &GroebnerBasis, gens: &[Poly]) -> bool {
    gens.iter().all(|g| gb.contains(g))
}
