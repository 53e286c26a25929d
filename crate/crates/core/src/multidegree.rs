//! Polynomials in `t0..td` and the two assemblies of the adjoint: from a
//! triangulation, and as a multidegree from prime components.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::geometry::{PointConfiguration, Triangulation};
use crate::linalg::IntVector;
use crate::monomial::PrimeComponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials in {left} and {right} variables cannot be combined")]
    ArityMismatch { left: usize, right: usize },
}

/// A polynomial with integer coefficients in `t0..t(nvars-1)`.
///
/// Terms are kept in a map keyed by exponent vector with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The single variable `t_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigInt::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector has the wrong length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// The common total degree of all terms; `None` for the zero polynomial
    /// or when terms of different degrees are present.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|e| e.iter().map(|&x| u64::from(x)).sum::<u64>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_arity(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea
                    .iter()
                    .zip(eb)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    fn check_arity(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::ArityMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn evaluate(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars, "evaluation point has the wrong length");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// `p(f_0 t_0, ..., f_d t_d)`
    pub fn scale_variables(&self, factors: &[BigInt]) -> MultiPoly {
        assert_eq!(factors.len(), self.nvars, "one factor per variable");
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let f = e
                        .iter()
                        .zip(factors)
                        .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize));
                    (e.clone(), f)
                })
                .collect(),
        }
    }

    /// `[{"exponents": [...], "coefficient": c}, ...]`, coefficients as JSON
    /// integers when they fit in `i64` and as decimal strings otherwise.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(e, c)| json!({ "exponents": e, "coefficient": int_json(c) }))
                .collect(),
        )
    }
}

/// A JSON integer when the value fits in `i64`, a decimal string otherwise.
pub fn int_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let is_constant = e.iter().all(|&x| x == 0);
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if is_constant || !magnitude.is_one() {
                parts.push(magnitude.to_string());
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => parts.push(format!("t{i}")),
                    _ => parts.push(format!("t{i}^{x}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait for &MultiPoly {
            type Output = MultiPoly;

            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                let f: fn(&MultiPoly, &MultiPoly) -> MultiPoly = $body;
                f(self, rhs)
            }
        }

        impl $trait for MultiPoly {
            type Output = MultiPoly;

            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.checked_add(b).expect("arity mismatch"));
forward_binop!(Mul, mul, |a, b| a.checked_mul(b).expect("arity mismatch"));
forward_binop!(Sub, sub, |a, b| a.checked_add(&-b).expect("arity mismatch"));

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// The linear form `v . t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm(pub IntVector);

impl LinearForm {
    pub fn to_poly(&self) -> MultiPoly {
        let n = self.0.len();
        MultiPoly::from_terms(
            n,
            self.0.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
    }
}

fn product_of_forms(cfg: &PointConfiguration, indices: impl IntoIterator<Item = usize>) -> MultiPoly {
    indices.into_iter().fold(MultiPoly::one(cfg.dim() + 1), |acc, i| {
        &acc * &LinearForm(cfg.point(i).clone()).to_poly()
    })
}

/// Multidegree of `S / <x_i : i in support>`: the product of the forms
/// `v_i . t` over the support.
pub fn prime_multidegree(support: &[usize], cfg: &PointConfiguration) -> MultiPoly {
    product_of_forms(cfg, support.iter().copied())
}

/// Additivity over the top-dimensional primes:
/// `sum_k mult_k * C(S / p_k; t)`.
pub fn multidegree_of_quotient(components: &[PrimeComponent], cfg: &PointConfiguration) -> MultiPoly {
    components.iter().fold(MultiPoly::zero(cfg.dim() + 1), |acc, c| {
        &acc + &prime_multidegree(&c.support, cfg).scale(&BigInt::from(c.multiplicity))
    })
}

/// `sum over simplices of vol(s) * prod_{v not in s} (v . t)`.
pub fn adjoint_from_triangulation(tri: &Triangulation) -> MultiPoly {
    let cfg = &tri.configuration;
    tri.simplices.iter().fold(MultiPoly::zero(cfg.dim() + 1), |acc, s| {
        let outside = (0..cfg.len()).filter(|&i| !s.contains(i));
        &acc + &product_of_forms(cfg, outside).scale(&s.normalized_volume)
    })
}

/// Necessary conditions for an adjoint: homogeneous of degree `n - d - 1`
/// with nonnegative coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub expected_degree: u64,
    pub degree: Option<u64>,
    pub homogeneous: bool,
    pub nonnegative: bool,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.homogeneous && self.nonnegative
    }
}

pub fn diagnostics(p: &MultiPoly, cfg: &PointConfiguration) -> Diagnostics {
    let expected_degree = (cfg.len() - cfg.dim() - 1) as u64;
    let degree = p.homogeneous_degree();
    Diagnostics {
        expected_degree,
        degree,
        homogeneous: degree == Some(expected_degree),
        nonnegative: p.is_nonnegative(),
    }
}

/// Random integer points in `[-bound, bound]^nvars`, deterministic in the
/// seed.
pub fn random_points(nvars: usize, count: usize, seed: u64, bound: i64) -> Vec<Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..nvars)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect()
}

/// First point at which `p` and `q` disagree, if any.
pub fn evaluation_mismatch<'a>(p: &MultiPoly, q: &MultiPoly, points: &'a [Vec<BigInt>]) -> Option<&'a [BigInt]> {
    points
        .iter()
        .find(|x| p.evaluate(x) != q.evaluate(x))
        .map(Vec::as_slice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{regular_triangulation, WeightVector};
    use proptest::prelude::*;

    fn t(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(n: usize, k: i64) -> MultiPoly {
        MultiPoly::constant(n, k)
    }

    fn form(v: &[i64]) -> MultiPoly {
        LinearForm(IntVector::from(v.to_vec())).to_poly()
    }

    fn pentagon() -> PointConfiguration {
        PointConfiguration::from_rows(&[
            vec![1, 0, 1],
            vec![1, 1, 1],
            vec![1, 2, 2],
            vec![1, 2, 3],
            vec![1, 0, 3],
        ])
        .unwrap()
    }

    #[test]
    fn ring_identities() {
        let p = &t(2, 0) * &t(2, 1) + c(2, 3);
        assert_eq!(&p + &MultiPoly::zero(2), p);
        assert_eq!(&p * &MultiPoly::one(2), p);
        let diff = &(&t(2, 0) + &t(2, 1)) * &(&t(2, 0) - &t(2, 1));
        assert_eq!(diff, &(&t(2, 0) * &t(2, 0)) - &(&t(2, 1) * &t(2, 1)));
        assert_eq!((&p - &p), MultiPoly::zero(2));
        assert_eq!(
            t(2, 0).checked_add(&t(3, 0)),
            Err(PolyError::ArityMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn product_of_pentagon_forms() {
        // (t0+t1+t2)(t0+2t1+2t2) = t0^2 + 3t0t1 + 3t0t2 + 2t1^2 + 4t1t2 + 2t2^2
        let p = &form(&[1, 1, 1]) * &form(&[1, 2, 2]);
        let expected = MultiPoly::from_terms(
            3,
            [
                (vec![2, 0, 0], 1),
                (vec![1, 1, 0], 3),
                (vec![1, 0, 1], 3),
                (vec![0, 2, 0], 2),
                (vec![0, 1, 1], 4),
                (vec![0, 0, 2], 2),
            ]
            .map(|(e, k)| (e, BigInt::from(k))),
        );
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "t0^2 + 3*t0*t1 + 3*t0*t2 + 2*t1^2 + 4*t1*t2 + 2*t2^2");
    }

    #[test]
    fn rendering_signs_and_constants() {
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
        assert_eq!(c(2, 1).to_string(), "1");
        assert_eq!((&c(2, -1) - &t(2, 0)).to_string(), "-t0 - 1");
        assert_eq!((&t(2, 1).scale(&BigInt::from(-3)) + &c(2, 2)).to_string(), "-3*t1 + 2");
    }

    #[test]
    fn prime_multidegree_examples() {
        let cfg = pentagon();
        assert_eq!(prime_multidegree(&[], &cfg), MultiPoly::one(3));
        assert_eq!(prime_multidegree(&[3, 4], &cfg), &form(&[1, 2, 3]) * &form(&[1, 0, 3]));
        assert_eq!(prime_multidegree(&[1], &cfg), &(&t(3, 0) + &t(3, 1)) + &t(3, 2));
    }

    fn pentagon_expected() -> MultiPoly {
        let v = |i: usize| {
            form(
                &pentagon()
                    .point(i)
                    .0
                    .iter()
                    .map(|x| x.to_i64().unwrap())
                    .collect::<Vec<_>>(),
            )
        };
        &(&(&v(1) * &v(2)).scale(&4.into()) + &(&v(1) * &v(4)).scale(&2.into())) + &(&v(3) * &v(4))
    }

    #[test]
    fn multidegree_examples() {
        let cfg = pentagon();
        let comps = [
            PrimeComponent {
                support: vec![1, 2],
                multiplicity: 4,
            },
            PrimeComponent {
                support: vec![1, 4],
                multiplicity: 2,
            },
            PrimeComponent {
                support: vec![3, 4],
                multiplicity: 1,
            },
        ];
        assert_eq!(multidegree_of_quotient(&comps, &cfg), pentagon_expected());
        let unit = [PrimeComponent {
            support: vec![],
            multiplicity: 1,
        }];
        assert_eq!(multidegree_of_quotient(&unit, &cfg), MultiPoly::one(3));
        let twice = [
            PrimeComponent {
                support: vec![0, 2],
                multiplicity: 2,
            },
            PrimeComponent {
                support: vec![0, 2],
                multiplicity: 5,
            },
        ];
        assert_eq!(
            multidegree_of_quotient(&twice, &cfg),
            prime_multidegree(&[0, 2], &cfg).scale(&7.into())
        );
    }

    #[test]
    fn adjoint_examples() {
        let cfg = pentagon();
        let tri = regular_triangulation(&cfg, &WeightVector::from(vec![0, 1, 0, 0, 1])).unwrap();
        assert_eq!(adjoint_from_triangulation(&tri), pentagon_expected());

        let simplex = PointConfiguration::from_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let tri = regular_triangulation(&simplex, &WeightVector::zeros(3)).unwrap();
        assert_eq!(adjoint_from_triangulation(&tri), MultiPoly::one(3));

        // both diagonals of the square: vol 1 each, complement one vertex
        let square =
            PointConfiguration::from_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1]]).unwrap();
        let expected = &(&t(3, 0).scale(&2.into()) + &t(3, 1)) + &t(3, 2);
        for w in [vec![1, 0, 0, 0], vec![0, 1, 0, 0]] {
            let tri = regular_triangulation(&square, &WeightVector::from(w)).unwrap();
            assert_eq!(adjoint_from_triangulation(&tri), expected);
        }
        assert_eq!(expected.to_string(), "2*t0 + t1 + t2");
    }

    #[test]
    fn pentagon_diagnostics() {
        let cfg = pentagon();
        let d = diagnostics(&pentagon_expected(), &cfg);
        assert_eq!(d.expected_degree, 2);
        assert!(d.passed());
        let simplex = PointConfiguration::from_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        assert!(diagnostics(&MultiPoly::one(3), &simplex).passed());
        assert!(!diagnostics(&-pentagon_expected(), &cfg).passed());
        let points = random_points(3, 5, 1, 10);
        assert_eq!(
            evaluation_mismatch(&pentagon_expected(), &pentagon_expected(), &points),
            None
        );
        assert!(evaluation_mismatch(&pentagon_expected(), &MultiPoly::one(3), &points).is_some());
    }

    #[test]
    fn json_rendering() {
        let p = &t(2, 0).scale(&2.into()) + &c(2, 1);
        assert_eq!(
            p.to_json(),
            json!([{"exponents": [1, 0], "coefficient": 2}, {"exponents": [0, 0], "coefficient": 1}])
        );
        let huge = MultiPoly::constant(1, BigInt::from(i64::MAX) * 10);
        assert_eq!(huge.to_json()[0]["coefficient"], json!("92233720368547758070"));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..=5), 0..6)
            .prop_map(|ts| MultiPoly::from_terms(3, ts.into_iter().map(|(e, k)| (e, BigInt::from(k)))))
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(p in small_poly(), q in small_poly(), x in prop::collection::vec(-4i64..=4, 3)) {
            let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
            prop_assert_eq!((&p + &q).evaluate(&x), p.evaluate(&x) + q.evaluate(&x));
            prop_assert_eq!((&p * &q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x));
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn variable_scaling_matches_evaluation(p in small_poly(), f in prop::collection::vec(1i64..=3, 3), x in prop::collection::vec(-4i64..=4, 3)) {
            let f: Vec<BigInt> = f.into_iter().map(BigInt::from).collect();
            let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
            let fx: Vec<BigInt> = f.iter().zip(&x).map(|(a, b)| a * b).collect();
            prop_assert_eq!(p.scale_variables(&f).evaluate(&x), p.evaluate(&fx));
        }
    }
}
