//! Monomials, monomial ideals and their Stanley–Reisner combinatorics.
//!
//! Variables are stored 0-indexed and rendered 1-indexed (`x1..xn`).

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("monomial has {found} variables, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("<{}> is not a minimal prime of the ideal", render_support(.support))]
    NotMinimalPrime { support: Vec<usize> },
}

/// An exponent vector.
///
/// Exponents are `u32`; every arithmetic operation is checked and panics on
/// overflow instead of wrapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().positions(|&e| e > 0).collect()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `self / other`, or `None` if `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Exponents clamped to 0/1.
    pub fn squarefree_part(&self) -> Monomial {
        Monomial(self.0.iter().map(|&e| e.min(1)).collect())
    }

    /// Sets every variable outside `keep` to 1.
    pub fn restrict(&self, keep: &[usize]) -> Monomial {
        Monomial(keep.iter().map(|&i| self.0[i]).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(Monomial::degree);
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

/// A monomial ideal held by its minimal generators, in sorted order.
///
/// No generators is the zero ideal; the single generator `1` is the unit
/// ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    arity: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(arity: usize, generators: Vec<Monomial>) -> Result<Self, MonomialError> {
        if let Some(g) = generators.iter().find(|g| g.arity() != arity) {
            return Err(MonomialError::ArityMismatch {
                expected: arity,
                found: g.arity(),
            });
        }
        Ok(MonomialIdeal {
            arity,
            generators: minimalize(generators),
        })
    }

    pub fn zero(arity: usize) -> Self {
        MonomialIdeal {
            arity,
            generators: Vec::new(),
        }
    }

    pub fn unit(arity: usize) -> Self {
        MonomialIdeal {
            arity,
            generators: vec![Monomial::one(arity)],
        }
    }

    /// `<x_i : i in support>`
    pub fn prime(arity: usize, support: &[usize]) -> Self {
        Self::new(arity, support.iter().map(|&i| Monomial::var(arity, i)).collect()).expect("arity is consistent")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(Monomial::is_one)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides(m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(|g| g.exponents().iter().all(|&e| e <= 1))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "<0>");
        }
        write!(f, "<{}>", self.generators.iter().join(", "))
    }
}

/// A simplicial complex on vertices `0..vertices`, held by its facets.
///
/// `facets == []` is the void complex (Stanley–Reisner ideal = unit ideal);
/// `facets == [[]]` is the complex whose only face is the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplicialComplex {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Sorts the facets and drops any face contained in another.
    pub fn new(vertices: usize, facets: Vec<Vec<usize>>) -> Self {
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        facets.sort();
        facets.dedup();
        let maximal = facets
            .iter()
            .filter(|f| !facets.iter().any(|g| g != *f && f.iter().all(|v| g.contains(v))))
            .cloned()
            .collect();
        SimplicialComplex {
            vertices,
            facets: maximal,
        }
    }

    pub fn simplex(vertices: usize) -> Self {
        SimplicialComplex {
            vertices,
            facets: vec![(0..vertices).collect()],
        }
    }
}

/// Minimal primes of a monomial ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalPrimes {
    /// The ideal is zero, hence itself prime.
    ZeroIdeal,
    /// The ideal is the unit ideal and has no primes.
    UnitIdeal,
    /// Supports `S` of the primes `<x_i : i in S>`, sorted.
    Supports(Vec<Vec<usize>>),
}

/// A minimal prime `<x_i : i in support>` with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeComponent {
    pub support: Vec<usize>,
    pub multiplicity: u64,
}

impl fmt::Display for PrimeComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>: mult {}", render_support(&self.support), self.multiplicity)
    }
}

fn render_support(support: &[usize]) -> String {
    if support.is_empty() {
        return "0".into();
    }
    support.iter().map(|i| format!("x{}", i + 1)).join(",")
}

/// Clamps every exponent to 1 and re-minimalizes.
pub fn radical(ideal: &MonomialIdeal) -> MonomialIdeal {
    MonomialIdeal {
        arity: ideal.arity,
        generators: minimalize(ideal.generators.iter().map(Monomial::squarefree_part).collect()),
    }
}

/// Minimal vertex covers of the hypergraph whose edges are the supports of
/// the generators.
pub fn minimal_primes(ideal: &MonomialIdeal) -> MinimalPrimes {
    if ideal.is_zero() {
        return MinimalPrimes::ZeroIdeal;
    }
    if ideal.is_unit() {
        return MinimalPrimes::UnitIdeal;
    }
    let edges: Vec<Vec<usize>> = radical(ideal).generators.iter().map(Monomial::support).collect();
    let mut state = vec![Cover::Unset; ideal.arity];
    let mut found = Vec::new();
    search_covers(&edges, &mut state, &mut found);

    found.sort_by_key(Vec::len);
    found.dedup();
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for c in found {
        if !minimal.iter().any(|m| m.iter().all(|v| c.contains(v))) {
            minimal.push(c);
        }
    }
    minimal.sort();
    MinimalPrimes::Supports(minimal)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cover {
    Unset,
    In,
    Out,
}

fn search_covers(edges: &[Vec<usize>], state: &mut [Cover], found: &mut Vec<Vec<usize>>) {
    let Some(edge) = edges.iter().find(|e| !e.iter().any(|&v| state[v] == Cover::In)) else {
        found.push(state.iter().positions(|&s| s == Cover::In).collect());
        return;
    };
    // Branch on the first vertex of the uncovered edge that gets chosen;
    // earlier vertices of the edge are excluded in later branches.
    let mut excluded = Vec::new();
    for &v in edge {
        if state[v] == Cover::Out {
            continue;
        }
        state[v] = Cover::In;
        search_covers(edges, state, found);
        state[v] = Cover::Out;
        excluded.push(v);
    }
    for v in excluded {
        state[v] = Cover::Unset;
    }
}

/// The complex whose Stanley–Reisner ideal is the radical of `ideal`;
/// facets are complements of minimal-prime supports.
pub fn initial_complex(ideal: &MonomialIdeal) -> SimplicialComplex {
    let n = ideal.arity;
    match minimal_primes(ideal) {
        MinimalPrimes::ZeroIdeal => SimplicialComplex::simplex(n),
        MinimalPrimes::UnitIdeal => SimplicialComplex {
            vertices: n,
            facets: Vec::new(),
        },
        MinimalPrimes::Supports(supports) => SimplicialComplex::new(
            n,
            supports
                .iter()
                .map(|s| (0..n).filter(|i| !s.contains(i)).collect())
                .collect(),
        ),
    }
}

/// Length of the localization of `ideal` at the prime `<x_i : i in support>`.
///
/// Variables outside the support become units, i.e. are set to 1; the
/// resulting ideal in the support variables must be cofinite, and its
/// standard monomials are counted.
pub fn multiplicity(ideal: &MonomialIdeal, support: &[usize]) -> Result<u64, MonomialError> {
    let not_minimal = || MonomialError::NotMinimalPrime {
        support: support.to_vec(),
    };
    let local = minimalize(ideal.generators.iter().map(|g| g.restrict(support)).collect());
    if ideal.is_zero() {
        return if support.is_empty() { Ok(1) } else { Err(not_minimal()) };
    }
    if local.iter().any(Monomial::is_one) {
        return Err(not_minimal());
    }
    let mut bounds = Vec::with_capacity(support.len());
    for k in 0..support.len() {
        let pure = local
            .iter()
            .filter(|g| g.exponents().iter().enumerate().all(|(j, &e)| j == k || e == 0))
            .map(|g| g.exponents()[k])
            .min();
        bounds.push(pure.ok_or_else(not_minimal)?);
    }
    if support.is_empty() {
        return Ok(1);
    }
    let mut current = Monomial::one(support.len());
    Ok(count_standard(&local, &bounds, 0, &mut current))
}

/// Counts monomials below `bounds` that no generator divides. Standard
/// monomials form an order ideal, so a prefix that already lies in the ideal
/// (with the remaining exponents at zero) ends its branch.
fn count_standard(gens: &[Monomial], bounds: &[u32], level: usize, current: &mut Monomial) -> u64 {
    let mut total = 0;
    for e in 0..bounds[level] {
        current.0[level] = e;
        if gens.iter().any(|g| g.divides(current)) {
            break;
        }
        total += if level + 1 == bounds.len() {
            1
        } else {
            count_standard(gens, bounds, level + 1, current)
        };
    }
    current.0[level] = 0;
    total
}

/// Minimal primes together with their multiplicities.
///
/// The zero ideal yields the single component with empty support and
/// multiplicity 1; the unit ideal yields none.
pub fn prime_components(ideal: &MonomialIdeal) -> Result<Vec<PrimeComponent>, MonomialError> {
    match minimal_primes(ideal) {
        MinimalPrimes::ZeroIdeal => Ok(vec![PrimeComponent {
            support: Vec::new(),
            multiplicity: 1,
        }]),
        MinimalPrimes::UnitIdeal => Ok(Vec::new()),
        MinimalPrimes::Supports(supports) => supports
            .into_iter()
            .map(|support| {
                let multiplicity = multiplicity(ideal, &support)?;
                Ok(PrimeComponent { support, multiplicity })
            })
            .collect(),
    }
}

/// The squarefree ideal of non-faces, built as the intersection of the
/// facet-complement primes.
pub fn stanley_reisner_ideal(complex: &SimplicialComplex) -> MonomialIdeal {
    let n = complex.vertices;
    let mut gens = vec![Monomial::one(n)];
    for facet in &complex.facets {
        let complement: Vec<usize> = (0..n).filter(|i| !facet.contains(i)).collect();
        // I ∩ <x_i : i in C> is generated by lcm(g, x_i).
        gens = minimalize(
            gens.iter()
                .flat_map(|g| complement.iter().map(move |&i| g.lcm(&Monomial::var(n, i))))
                .collect(),
        );
    }
    MonomialIdeal {
        arity: n,
        generators: gens,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| m(g)).collect()).unwrap()
    }

    /// in_w(I_A) of the pentagon: <x3^2 x5, x2^2 x4, x2^2 x5>.
    fn pentagon_initial() -> MonomialIdeal {
        ideal(5, &[&[0, 0, 2, 0, 1], &[0, 2, 0, 1, 0], &[0, 2, 0, 0, 1]])
    }

    fn zero_based(sets: &[&[usize]]) -> Vec<Vec<usize>> {
        sets.iter().map(|s| s.iter().map(|i| i - 1).collect()).collect()
    }

    /// Inclusion-exclusion over subsets of generators: the number of box
    /// monomials divisible by every generator in a subset S is the product
    /// of (bound - lcm(S)_j)^+.
    fn standard_count_by_inclusion_exclusion(gens: &[Monomial], bounds: &[u32]) -> i64 {
        let mut total = 0i64;
        for mask in 0u32..(1 << gens.len()) {
            let mut l = Monomial::one(bounds.len());
            for (k, g) in gens.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    l = l.lcm(g);
                }
            }
            let boxes: i64 = bounds
                .iter()
                .zip(l.exponents())
                .map(|(&b, &e)| i64::from(b.saturating_sub(e)))
                .product();
            total += if mask.count_ones() % 2 == 0 { boxes } else { -boxes };
        }
        total
    }

    #[test]
    fn rendering() {
        assert_eq!(m(&[0, 0, 2, 0, 1]).to_string(), "x3^2*x5");
        assert_eq!(m(&[0, 0]).to_string(), "1");
        assert_eq!(pentagon_initial().to_string(), "<x3^2*x5, x2^2*x5, x2^2*x4>");
        assert_eq!(MonomialIdeal::zero(3).to_string(), "<0>");
        let c = PrimeComponent {
            support: vec![1, 2],
            multiplicity: 4,
        };
        assert_eq!(c.to_string(), "<x2,x3>: mult 4");
    }

    #[test]
    fn generators_are_minimalized() {
        let i = ideal(2, &[&[1, 1], &[1, 0], &[2, 3], &[1, 0]]);
        assert_eq!(i.generators(), &[m(&[1, 0])]);
        assert!(MonomialIdeal::new(2, vec![m(&[1])]).is_err());
    }

    #[test]
    fn radical_examples() {
        let r = radical(&pentagon_initial());
        assert_eq!(r, ideal(5, &[&[0, 0, 1, 0, 1], &[0, 1, 0, 1, 0], &[0, 1, 0, 0, 1]]));
        assert_eq!(radical(&r), r);
        assert_eq!(radical(&MonomialIdeal::zero(4)), MonomialIdeal::zero(4));
    }

    #[test]
    fn minimal_primes_examples() {
        let r = radical(&pentagon_initial());
        assert_eq!(
            minimal_primes(&r),
            MinimalPrimes::Supports(zero_based(&[&[2, 3], &[2, 5], &[4, 5]]))
        );
        assert_eq!(minimal_primes(&pentagon_initial()), minimal_primes(&r));
        assert_eq!(minimal_primes(&MonomialIdeal::zero(3)), MinimalPrimes::ZeroIdeal);
        assert_eq!(minimal_primes(&MonomialIdeal::unit(3)), MinimalPrimes::UnitIdeal);
        assert_eq!(
            minimal_primes(&ideal(3, &[&[1, 0, 0]])),
            MinimalPrimes::Supports(vec![vec![0]])
        );
    }

    #[test]
    fn initial_complex_examples() {
        let c = initial_complex(&pentagon_initial());
        assert_eq!(c.facets, zero_based(&[&[1, 2, 3], &[1, 3, 4], &[1, 4, 5]]));
        assert_eq!(initial_complex(&MonomialIdeal::zero(3)).facets, vec![vec![0, 1, 2]]);
        assert_eq!(
            initial_complex(&MonomialIdeal::prime(3, &[0, 1, 2])).facets,
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn multiplicity_examples() {
        let i = pentagon_initial();
        assert_eq!(multiplicity(&i, &[1, 2]).unwrap(), 4);
        assert_eq!(multiplicity(&i, &[1, 4]).unwrap(), 2);
        assert_eq!(multiplicity(&i, &[3, 4]).unwrap(), 1);
        // <x2> does not contain the ideal; <x2,x3,x4> is not minimal
        assert!(multiplicity(&i, &[1]).is_err());
        assert!(matches!(
            multiplicity(&i, &[1, 2, 3]),
            Err(MonomialError::NotMinimalPrime { .. })
        ));
    }

    #[test]
    fn components_of_the_pentagon() {
        let comps = prime_components(&pentagon_initial()).unwrap();
        let rendered: Vec<String> = comps.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["<x2,x3>: mult 4", "<x2,x5>: mult 2", "<x4,x5>: mult 1"]);
        assert_eq!(
            prime_components(&MonomialIdeal::zero(3)).unwrap(),
            vec![PrimeComponent {
                support: vec![],
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn stanley_reisner_examples() {
        let c = SimplicialComplex::new(5, zero_based(&[&[1, 2, 3], &[1, 3, 4], &[1, 4, 5]]));
        assert_eq!(stanley_reisner_ideal(&c), radical(&pentagon_initial()));
        assert_eq!(
            stanley_reisner_ideal(&SimplicialComplex::simplex(4)),
            MonomialIdeal::zero(4)
        );
        let empty = SimplicialComplex::new(2, vec![vec![]]);
        assert_eq!(stanley_reisner_ideal(&empty), MonomialIdeal::prime(2, &[0, 1]));
        let void = SimplicialComplex::new(2, vec![]);
        assert_eq!(stanley_reisner_ideal(&void), MonomialIdeal::unit(2));
    }

    #[test]
    fn complex_drops_non_maximal_faces() {
        let c = SimplicialComplex::new(4, vec![vec![2, 0], vec![0], vec![3]]);
        assert_eq!(c.facets, vec![vec![0, 2], vec![3]]);
    }

    fn small_ideal() -> impl Strategy<Value = MonomialIdeal> {
        (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(0u32..=3, n), 1..=4)
                .prop_map(move |gens| MonomialIdeal::new(n, gens.into_iter().map(Monomial::new).collect()).unwrap())
        })
    }

    fn all_monomials(n: usize, max: u32) -> Vec<Monomial> {
        (0..n)
            .map(|_| 0..=max)
            .multi_cartesian_product()
            .map(Monomial::new)
            .collect()
    }

    proptest! {
        #[test]
        fn radical_membership(i in small_ideal()) {
            let r = radical(&i);
            prop_assert_eq!(radical(&r), r.clone());
            let k = i.generators().iter().flat_map(|g| g.exponents().iter().copied()).max().unwrap_or(1).max(1);
            for mono in all_monomials(i.arity(), 2) {
                let power = Monomial::new(mono.exponents().iter().map(|e| e * k).collect());
                prop_assert_eq!(r.contains(&mono), i.contains(&power));
            }
        }

        #[test]
        fn stanley_reisner_of_initial_complex_is_radical(i in small_ideal()) {
            prop_assert_eq!(stanley_reisner_ideal(&initial_complex(&i)), radical(&i));
        }

        #[test]
        fn minimal_primes_are_minimal_covers(i in small_ideal()) {
            if let MinimalPrimes::Supports(supports) = minimal_primes(&i) {
                let edges: Vec<Vec<usize>> = radical(&i).generators().iter().map(Monomial::support).collect();
                let covers = |s: &Vec<usize>| edges.iter().all(|e| e.iter().any(|v| s.contains(v)));
                for s in &supports {
                    prop_assert!(covers(s));
                    for drop in 0..s.len() {
                        let mut smaller = s.clone();
                        smaller.remove(drop);
                        prop_assert!(!covers(&smaller));
                    }
                }
                // brute force: every minimal cover over all subsets is listed
                for mask in 0u32..(1 << i.arity()) {
                    let s: Vec<usize> = (0..i.arity()).filter(|&v| mask >> v & 1 == 1).collect();
                    let minimal = covers(&s) && (0..s.len()).all(|d| {
                        let mut t = s.clone();
                        t.remove(d);
                        !covers(&t)
                    });
                    prop_assert_eq!(minimal, supports.contains(&s));
                }
            }
        }

        #[test]
        fn standard_count_matches_inclusion_exclusion(i in small_ideal()) {
            if let MinimalPrimes::Supports(supports) = minimal_primes(&i) {
                for s in supports {
                    let local = MonomialIdeal::new(s.len(), i.generators().iter().map(|g| g.restrict(&s)).collect()).unwrap();
                    let bounds: Vec<u32> = (0..s.len())
                        .map(|k| local.generators().iter()
                            .filter(|g| g.support() == vec![k])
                            .map(|g| g.exponents()[k]).min().unwrap())
                        .collect();
                    let mult = multiplicity(&i, &s).unwrap();
                    if local.generators().len() <= 4 {
                        prop_assert_eq!(mult as i64, standard_count_by_inclusion_exclusion(local.generators(), &bounds));
                    }
                }
            }
        }
    }
}
