//! Toric ideals and a Buchberger engine specialized to pure binomials.
//!
//! Every polynomial handled here is a difference of two monomials
//! `x^u - x^v`. S-pairs and normal forms of such binomials are again such
//! binomials, so no coefficient arithmetic is needed.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::geometry::{PointConfiguration, WeightVector};
use crate::linalg::{self, IntMatrix, IntVector};
use crate::monomial::{Monomial, MonomialIdeal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("weight is not generic: generator {generator} has equal weight on both terms")]
    NonGenericWeight { generator: String },
    #[error("binomial {binomial} is not homogeneous for the grading")]
    NotHomogeneous { binomial: String },
    #[error("binomial has {found} variables, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Weights {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum WeightValue {
    Small(i128),
    Big(BigInt),
}

/// Sort key realizing a [`TermOrder`]; `a < b` in the order iff
/// `key(a) < key(b)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    degree: u64,
    weight: WeightValue,
    revlex: Vec<i64>,
}

/// A weight order refined by graded reverse lexicographic order.
///
/// Monomials are compared by total degree, then by `w . u`, then by revlex
/// with a designated cheapest variable. Every ideal handled here is
/// homogeneous for total degree (all points have first coordinate 1), so
/// comparing degree first leaves the induced leading terms those of the
/// weight `w`, and makes the order a term order for weights of any sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermOrder {
    arity: usize,
    weights: Option<Weights>,
    /// Variable indices from most to least significant in the revlex step,
    /// i.e. the cheapest variable first.
    revlex_scan: Vec<usize>,
}

impl TermOrder {
    /// Plain grevlex with `x1 > x2 > ... > xn`.
    pub fn grevlex(arity: usize) -> Self {
        TermOrder {
            arity,
            weights: None,
            revlex_scan: (0..arity).rev().collect(),
        }
    }

    /// The weight order of `w`, ties broken by grevlex.
    pub fn weighted(w: &WeightVector) -> Self {
        let weights = match w.weights().iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>() {
            Some(small) => Weights::Small(small),
            None => Weights::Big(w.weights().to_vec()),
        };
        TermOrder {
            weights: Some(weights),
            ..Self::grevlex(w.len())
        }
    }

    /// Rotates the variable order so that `x_cheapest` is the smallest
    /// variable; for homogeneous `f`, `x_cheapest` then divides the leading
    /// term of `f` only if it divides `f`.
    pub fn with_cheapest(mut self, cheapest: usize) -> Self {
        assert!(cheapest < self.arity, "variable index out of range");
        let n = self.arity;
        self.revlex_scan = (0..n).map(|k| (cheapest + n - k) % n).collect();
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn has_weight(&self) -> bool {
        self.weights.is_some()
    }

    /// `w . u`; zero for unweighted orders.
    pub fn weight_of(&self, m: &Monomial) -> BigInt {
        match self.weight_value(m) {
            WeightValue::Small(v) => BigInt::from(v),
            WeightValue::Big(v) => v,
        }
    }

    fn weight_value(&self, m: &Monomial) -> WeightValue {
        match &self.weights {
            None => WeightValue::Small(0),
            Some(Weights::Small(w)) => WeightValue::Small(
                w.iter()
                    .zip(m.exponents())
                    .map(|(&a, &e)| i128::from(a) * i128::from(e))
                    .sum(),
            ),
            Some(Weights::Big(w)) => {
                WeightValue::Big(w.iter().zip(m.exponents()).map(|(a, &e)| a * BigInt::from(e)).sum())
            }
        }
    }

    pub fn key(&self, m: &Monomial) -> OrderKey {
        OrderKey {
            degree: m.degree(),
            weight: self.weight_value(m),
            revlex: self.revlex_scan.iter().map(|&i| -i64::from(m.exponents()[i])).collect(),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| self.weight_value(a).cmp(&self.weight_value(b)))
            .then_with(|| {
                for &i in &self.revlex_scan {
                    let (ea, eb) = (a.exponents()[i], b.exponents()[i]);
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                }
                Ordering::Equal
            })
    }
}

/// `lead - trail` with `lead` the larger term under the order it was built
/// with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub lead: Monomial,
    pub trail: Monomial,
}

impl Binomial {
    /// Orients `a - b` (up to sign) under `order`; `None` when `a == b`.
    pub fn oriented(a: Monomial, b: Monomial, order: &TermOrder) -> Option<Binomial> {
        match order.cmp(&a, &b) {
            Ordering::Greater => Some(Binomial { lead: a, trail: b }),
            Ordering::Less => Some(Binomial { lead: b, trail: a }),
            Ordering::Equal => None,
        }
    }

    /// `x^(b+) - x^(b-)` for an integer vector `b`.
    pub fn from_lattice_vector(b: &IntVector, order: &TermOrder) -> Option<Binomial> {
        let part = |sign: i32| {
            Monomial::new(
                b.iter()
                    .map(|x| {
                        let x = if sign > 0 { x.clone() } else { -x };
                        x.max(BigInt::zero()).to_u32().expect("exponent exceeds u32")
                    })
                    .collect(),
            )
        };
        Self::oriented(part(1), part(-1), order)
    }

    pub fn arity(&self) -> usize {
        self.lead.arity()
    }

    /// Divides both terms by their common factor in `x_i`.
    fn strip_variable(&self, i: usize) -> (Monomial, Monomial) {
        let k = self.lead.exponents()[i].min(self.trail.exponents()[i]);
        let mut e = vec![0; self.arity()];
        e[i] = k;
        let f = Monomial::new(e);
        (self.lead.div(&f).unwrap(), self.trail.div(&f).unwrap())
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.lead, self.trail)
    }
}

/// An ideal generated by binomials homogeneous for the grading
/// `deg(x_i) = column i of the grading matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialIdeal {
    grading: IntMatrix,
    generators: Vec<Binomial>,
}

impl BinomialIdeal {
    pub fn new(grading: IntMatrix, generators: Vec<Binomial>) -> Result<Self, AlgebraError> {
        for g in &generators {
            if g.arity() != grading.cols() || g.trail.arity() != grading.cols() {
                return Err(AlgebraError::ArityMismatch {
                    expected: grading.cols(),
                    found: g.arity().max(g.trail.arity()),
                });
            }
            if degree_of(&grading, &g.lead) != degree_of(&grading, &g.trail) {
                return Err(AlgebraError::NotHomogeneous {
                    binomial: g.to_string(),
                });
            }
        }
        Ok(BinomialIdeal { grading, generators })
    }

    pub fn zero(grading: IntMatrix) -> Self {
        BinomialIdeal {
            grading,
            generators: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.grading.cols()
    }

    pub fn grading(&self) -> &IntMatrix {
        &self.grading
    }

    pub fn generators(&self) -> &[Binomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Multidegree `A u` of a monomial `x^u`.
    pub fn degree(&self, m: &Monomial) -> IntVector {
        degree_of(&self.grading, m)
    }
}

fn degree_of(grading: &IntMatrix, m: &Monomial) -> IntVector {
    let u = IntVector(m.exponents().iter().map(|&e| BigInt::from(e)).collect());
    grading.mul_vec(&u).expect("arity matches grading")
}

impl fmt::Display for BinomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "<0>");
        }
        write!(f, "<{}>", self.generators.iter().join(", "))
    }
}

/// The lattice ideal of a kernel basis of `A`: `x^(b+) - x^(b-)` for each
/// basis vector `b`. Saturating it gives the toric ideal.
pub fn lattice_ideal(cfg: &PointConfiguration) -> BinomialIdeal {
    let a = cfg.matrix();
    let order = TermOrder::grevlex(a.cols());
    let generators = linalg::integer_kernel(a)
        .iter()
        .filter_map(|b| Binomial::from_lattice_vector(b, &order))
        .collect();
    BinomialIdeal::new(a.clone(), generators).expect("kernel vectors give homogeneous binomials")
}

/// The toric ideal `I_A`.
pub fn toric_ideal(cfg: &PointConfiguration) -> BinomialIdeal {
    saturate(&lattice_ideal(cfg))
}

/// Normal form of a monomial modulo a Gröbner basis.
pub fn normal_form(m: &Monomial, basis: &[Binomial]) -> Monomial {
    let mut m = m.clone();
    while let Some(g) = basis.iter().find(|g| g.lead.divides(&m)) {
        m = m.div(&g.lead).unwrap().mul(&g.trail);
    }
    m
}

/// Normal form of a binomial modulo a Gröbner basis for `order`; `None`
/// exactly when the binomial lies in the ideal.
pub fn reduce(b: &Binomial, basis: &BinomialIdeal, order: &TermOrder) -> Option<Binomial> {
    let lead = normal_form(&b.lead, &basis.generators);
    let trail = normal_form(&b.trail, &basis.generators);
    Binomial::oriented(lead, trail, order)
}

struct Pair {
    key: OrderKey,
    i: usize,
    j: usize,
}

impl PartialEq for Pair {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pair {}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key).then((self.i, self.j).cmp(&(other.i, other.j)))
    }
}

struct Engine<'a> {
    order: &'a TermOrder,
    grading: &'a IntMatrix,
    basis: Vec<Binomial>,
    queue: BTreeSet<Pair>,
    pending: HashSet<(usize, usize)>,
}

impl Engine<'_> {
    fn reduce(&self, a: &Monomial, b: &Monomial) -> Option<Binomial> {
        Binomial::oriented(normal_form(a, &self.basis), normal_form(b, &self.basis), self.order)
    }

    fn add(&mut self, h: Binomial) {
        debug_assert_eq!(
            degree_of(self.grading, &h.lead),
            degree_of(self.grading, &h.trail),
            "inhomogeneous binomial {h}"
        );
        let k = self.basis.len();
        for (i, g) in self.basis.iter().enumerate() {
            self.queue.insert(Pair {
                key: self.order.key(&g.lead.lcm(&h.lead)),
                i,
                j: k,
            });
            self.pending.insert((i, k));
        }
        self.basis.push(h);
    }

    /// No `k` with `x^lead_k | lcm` whose pairs with `i` and `j` have
    /// both been treated.
    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        let treated = |a: usize, b: usize| !self.pending.contains(&(a.min(b), a.max(b)));
        (0..self.basis.len())
            .any(|k| k != i && k != j && self.basis[k].lead.divides(lcm) && treated(i, k) && treated(j, k))
    }

    fn run(&mut self) {
        while let Some(Pair { i, j, .. }) = self.queue.pop_first() {
            self.pending.remove(&(i, j));
            let (gi, gj) = (&self.basis[i], &self.basis[j]);
            if gi.lead.is_coprime(&gj.lead) {
                continue;
            }
            let lcm = gi.lead.lcm(&gj.lead);
            if self.chain_criterion(i, j, &lcm) {
                continue;
            }
            let a = lcm.div(&gi.lead).unwrap().mul(&gi.trail);
            let b = lcm.div(&gj.lead).unwrap().mul(&gj.trail);
            if let Some(h) = self.reduce(&a, &b) {
                self.add(h);
            }
        }
    }

    /// Minimal leading terms, then fully reduced trailing terms.
    fn into_reduced(self) -> Vec<Binomial> {
        let order = self.order;
        let mut basis = self.basis;
        basis.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
        let mut minimal: Vec<Binomial> = Vec::with_capacity(basis.len());
        for g in basis {
            if !minimal.iter().any(|k| k.lead.divides(&g.lead)) {
                minimal.push(g);
            }
        }
        let reduced: Vec<Binomial> = minimal
            .iter()
            .map(|g| Binomial {
                lead: g.lead.clone(),
                trail: normal_form(&g.trail, &minimal),
            })
            .collect();
        reduced
    }
}

/// The reduced Gröbner basis of `ideal` under `order`, sorted by leading
/// term. Pairs are processed smallest-lcm first and pruned with Buchberger's
/// coprime and chain criteria.
pub fn buchberger(ideal: &BinomialIdeal, order: &TermOrder) -> BinomialIdeal {
    assert_eq!(order.arity(), ideal.arity(), "order and ideal disagree on arity");
    let mut engine = Engine {
        order,
        grading: &ideal.grading,
        basis: Vec::new(),
        queue: BTreeSet::new(),
        pending: HashSet::new(),
    };
    for g in &ideal.generators {
        if let Some(h) = engine.reduce(&g.lead, &g.trail) {
            engine.add(h);
        }
    }
    engine.run();
    BinomialIdeal {
        grading: ideal.grading.clone(),
        generators: engine.into_reduced(),
    }
}

/// `(J : (x_1 ... x_n)^inf)`, one variable at a time.
///
/// For each `i`, a Gröbner basis under grevlex with `x_i` cheapest is
/// computed and every generator is divided by its `x_i` content, which
/// yields `(J : x_i^inf)`. The result is returned as a reduced Gröbner basis
/// under plain grevlex.
pub fn saturate(ideal: &BinomialIdeal) -> BinomialIdeal {
    let n = ideal.arity();
    let base = TermOrder::grevlex(n);
    let mut current = ideal.clone();
    for i in 0..n {
        let gb = buchberger(&current, &base.clone().with_cheapest(i));
        let generators = gb
            .generators
            .iter()
            .filter_map(|g| {
                let (a, b) = g.strip_variable(i);
                Binomial::oriented(a, b, &base)
            })
            .collect();
        current = BinomialIdeal {
            grading: ideal.grading.clone(),
            generators,
        };
    }
    buchberger(&current, &base)
}

/// Leading monomials of a reduced Gröbner basis.
///
/// With a weighted order, a generator whose two terms have equal weight
/// means `in_w(I)` is not a monomial ideal; that is reported rather than
/// silently resolved by the tie-break.
pub fn leading_ideal(basis: &BinomialIdeal, order: &TermOrder) -> Result<MonomialIdeal, AlgebraError> {
    if order.has_weight() {
        if let Some(g) = basis
            .generators
            .iter()
            .find(|g| order.weight_of(&g.lead) == order.weight_of(&g.trail))
        {
            return Err(AlgebraError::NonGenericWeight {
                generator: g.to_string(),
            });
        }
    }
    Ok(
        MonomialIdeal::new(basis.arity(), basis.generators.iter().map(|g| g.lead.clone()).collect())
            .expect("generators share the ideal's arity"),
    )
}

/// All S-pairs of the generators reduce to zero.
pub fn is_groebner_basis(basis: &BinomialIdeal, order: &TermOrder) -> bool {
    basis.generators.iter().tuple_combinations().all(|(g, h)| {
        let lcm = g.lead.lcm(&h.lead);
        let a = lcm.div(&g.lead).unwrap().mul(&g.trail);
        let b = lcm.div(&h.lead).unwrap().mul(&h.trail);
        normal_form(&a, &basis.generators) == normal_form(&b, &basis.generators)
    }) && basis
        .generators
        .iter()
        .all(|g| order.cmp(&g.lead, &g.trail) == Ordering::Greater)
}

/// All monomials of total degree exactly `degree` in `arity` variables.
pub fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    fn go(arity: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == arity {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            go(arity, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 {
        if degree == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    go(arity, degree, &mut Vec::new(), &mut out);
    out
}

/// Brute-force membership check of the degree-`<= max_degree` part of
/// `I_A`: monomials of equal `A`-degree must share a normal form modulo
/// `basis`. Returns the first binomial that fails to reduce to zero.
pub fn check_toric_membership(
    cfg: &PointConfiguration,
    basis: &BinomialIdeal,
    order: &TermOrder,
    max_degree: u32,
) -> Result<(), Binomial> {
    for degree in 0..=max_degree {
        let mut fibers: std::collections::BTreeMap<IntVector, Vec<Monomial>> = Default::default();
        for m in monomials_of_degree(cfg.len(), degree) {
            fibers.entry(degree_of(cfg.matrix(), &m)).or_default().push(m);
        }
        for fiber in fibers.values() {
            let first = &fiber[0];
            for other in &fiber[1..] {
                let b = Binomial::oriented(first.clone(), other.clone(), order).expect("distinct monomials");
                if reduce(&b, basis, order).is_some() {
                    return Err(b);
                }
            }
        }
    }
    Ok(())
}
