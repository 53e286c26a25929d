//! Point configurations, regular triangulations and normalized volumes.
//!
//! A configuration is the list of vertex rays of a pointed cone, each lifted
//! to first coordinate 1. Points are stored 0-indexed; renderings add one.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, IntMatrix, IntVector};

/// Weight retries before [`random_generic_weight`] gives up.
pub const WEIGHT_RETRY_CAP: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("configuration is empty")]
    Empty,
    #[error("point {index} has length {found}, expected {expected}")]
    RaggedPoint {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index} does not have first coordinate 1")]
    NotLifted { index: usize },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("configuration has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("point {index} is not a vertex of the convex hull")]
    NonVertex { index: usize },
    #[error("weight has length {found}, expected {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("weight is not generic: point {index} lies on the lower face through {}", one_based(.subset))]
    NonGeneric { subset: Vec<usize>, index: usize },
    #[error("subset {} does not span a full-dimensional simplex", one_based(.subset))]
    DegenerateSubset { subset: Vec<usize> },
    #[error("invalid scaling factors: {0}")]
    InvalidFactors(String),
    #[error("weight bound must be at least 1")]
    InvalidBound,
    #[error("no generic weight found in {retries} draws with bound {bound}")]
    RetryCapExceeded { retries: u64, bound: u64 },
}

pub(crate) fn one_based(indices: &[usize]) -> String {
    format!("{{{}}}", indices.iter().map(|i| i + 1).join(","))
}

/// A validated vertex configuration in `{1} x Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<IntVector>,
    matrix: IntMatrix,
}

impl PointConfiguration {
    /// Validates a list of lifted points. See [`validate_configuration`].
    pub fn new(points: Vec<IntVector>) -> Result<Self, GeometryError> {
        validate_configuration(points)
    }

    /// Convenience constructor for small literal configurations.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GeometryError> {
        validate_configuration(rows.iter().cloned().map(IntVector::from).collect())
    }

    /// Dimension `d` of the polytope cross-section.
    pub fn dim(&self) -> usize {
        self.matrix.rows() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &IntVector {
        &self.points[i]
    }

    /// The `(d+1) x n` matrix whose columns are the points.
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Square matrix whose rows are the selected points.
    pub fn simplex_matrix(&self, indices: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(&indices.iter().map(|&i| self.points[i].0.clone()).collect::<Vec<_>>())
    }
}

impl fmt::Display for PointConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.points.iter().join(", "))
    }
}

/// Checks that every point is lifted, distinct, and a vertex, and that the
/// configuration spans `R^{d+1}`.
///
/// Vertex-ness is decided exactly: by Carathéodory, a point in the convex
/// hull of the others lies in the hull of at most `d+1` of them, so every
/// such subset is tried for a nonnegative solution of the barycentric
/// system.
pub fn validate_configuration(points: Vec<IntVector>) -> Result<PointConfiguration, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::Empty);
    };
    let width = first.len();
    if width == 0 {
        return Err(GeometryError::Empty);
    }
    for (index, p) in points.iter().enumerate() {
        if p.len() != width {
            return Err(GeometryError::RaggedPoint {
                index,
                expected: width,
                found: p.len(),
            });
        }
        if !p[0].is_one() {
            return Err(GeometryError::NotLifted { index });
        }
    }
    for (first, second) in (0..points.len()).tuple_combinations() {
        if points[first] == points[second] {
            return Err(GeometryError::DuplicatePoint { first, second });
        }
    }
    for index in 0..points.len() {
        if in_hull_of_others(&points, index) {
            return Err(GeometryError::NonVertex { index });
        }
    }
    // Checked last: a rank-deficient error means the points are otherwise a
    // valid vertex set.
    let matrix = IntMatrix::from_columns(&points);
    let rank = linalg::rank(&matrix);
    if rank != width {
        return Err(GeometryError::RankDeficient { rank, expected: width });
    }
    Ok(PointConfiguration { points, matrix })
}

fn in_hull_of_others(points: &[IntVector], index: usize) -> bool {
    let others: Vec<usize> = (0..points.len()).filter(|&j| j != index).collect();
    let width = points[index].len();
    (1..=width.min(others.len())).any(|k| {
        others.iter().copied().combinations(k).any(|subset| {
            let cols: Vec<IntVector> = subset.iter().map(|&j| points[j].clone()).collect();
            let m = IntMatrix::from_columns(&cols);
            // The first row forces the coefficients to sum to one.
            matches!(
                linalg::solve_rational(&m, &points[index]),
                Ok(Some(lambda)) if lambda.iter().all(|l| !l.is_negative())
            )
        })
    })
}

/// Integer lifting heights, one per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub IntVector);

impl WeightVector {
    pub fn new(weights: Vec<BigInt>) -> Self {
        WeightVector(IntVector(weights))
    }

    pub fn zeros(n: usize) -> Self {
        WeightVector(IntVector::zeros(n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[BigInt] {
        self.0.entries()
    }
}

impl From<Vec<i64>> for WeightVector {
    fn from(v: Vec<i64>) -> Self {
        WeightVector(IntVector::from(v))
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A maximal simplex of a regular triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    /// Sorted 0-based point indices.
    pub indices: Vec<usize>,
    pub normalized_volume: BigInt,
    /// The linear functional `c` with `v_j . c = w_j` on the simplex and
    /// `v_j . c < w_j` off it.
    pub certificate: Vec<BigRational>,
}

impl Simplex {
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Re-checks the certificate against a configuration and weight.
    pub fn certificate_holds(&self, cfg: &PointConfiguration, w: &WeightVector) -> bool {
        (0..cfg.len()).all(|j| {
            let value = lifted_value(cfg.point(j), &self.certificate);
            let wj = BigRational::from_integer(w.weights()[j].clone());
            if self.contains(j) {
                value == wj
            } else {
                value < wj
            }
        })
    }
}

fn lifted_value(v: &IntVector, c: &[BigRational]) -> BigRational {
    v.iter()
        .zip(c)
        .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
        .sum()
}

/// The regular triangulation induced by a generic weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub configuration: PointConfiguration,
    pub weight: WeightVector,
    /// Simplices in lexicographic order of their index sets.
    pub simplices: Vec<Simplex>,
}

impl Triangulation {
    /// Sum of the normalized volumes of all simplices.
    pub fn volume(&self) -> BigInt {
        self.simplices.iter().map(|s| &s.normalized_volume).sum()
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.simplices.iter().map(|s| s.indices.clone()).collect()
    }
}

/// Enumerates every `(d+1)`-subset, solves for its lifting functional and
/// keeps the subsets that are lower faces.
///
/// A subset whose functional is weakly below every other lifted point but
/// touches one of them witnesses a non-simplicial lower face; that is
/// reported as [`GeometryError::NonGeneric`] rather than perturbed away.
pub fn regular_triangulation(cfg: &PointConfiguration, w: &WeightVector) -> Result<Triangulation, GeometryError> {
    if w.len() != cfg.len() {
        return Err(GeometryError::WeightLength {
            expected: cfg.len(),
            found: w.len(),
        });
    }
    let mut simplices = Vec::new();
    for subset in (0..cfg.len()).combinations(cfg.dim() + 1) {
        let m = cfg.simplex_matrix(&subset);
        let det = linalg::determinant(&m).expect("simplex matrix is square");
        if det.is_zero() {
            continue;
        }
        let rhs = IntVector(subset.iter().map(|&i| w.weights()[i].clone()).collect());
        let c = linalg::solve_rational(&m, &rhs)
            .expect("dimensions agree")
            .expect("nonsingular system is consistent");

        let mut touching = None;
        let mut lower = true;
        for j in (0..cfg.len()).filter(|j| !subset.contains(j)) {
            let value = lifted_value(cfg.point(j), &c);
            let wj = BigRational::from_integer(w.weights()[j].clone());
            if value > wj {
                lower = false;
                break;
            }
            if value == wj && touching.is_none() {
                touching = Some(j);
            }
        }
        if !lower {
            continue;
        }
        if let Some(index) = touching {
            return Err(GeometryError::NonGeneric { subset, index });
        }
        simplices.push(Simplex {
            indices: subset,
            normalized_volume: det.abs(),
            certificate: c,
        });
    }
    Ok(Triangulation {
        configuration: cfg.clone(),
        weight: w.clone(),
        simplices,
    })
}

/// `|det|` of the selected points; `d!` times the Euclidean volume.
pub fn normalized_volume(cfg: &PointConfiguration, indices: &[usize]) -> Result<BigInt, GeometryError> {
    if indices.len() != cfg.dim() + 1 || indices.iter().any(|&i| i >= cfg.len()) {
        return Err(GeometryError::DegenerateSubset {
            subset: indices.to_vec(),
        });
    }
    let det = linalg::determinant(&cfg.simplex_matrix(indices)).expect("square");
    if det.is_zero() {
        return Err(GeometryError::DegenerateSubset {
            subset: indices.to_vec(),
        });
    }
    Ok(det.abs())
}

/// Multiplies coordinate `k` of every point by `factors[k]`.
pub fn scale_axes(cfg: &PointConfiguration, factors: &[BigInt]) -> Result<PointConfiguration, GeometryError> {
    if factors.len() != cfg.dim() + 1 {
        return Err(GeometryError::InvalidFactors(format!(
            "expected {} factors, got {}",
            cfg.dim() + 1,
            factors.len()
        )));
    }
    if !factors[0].is_one() {
        return Err(GeometryError::InvalidFactors("first factor must be 1".into()));
    }
    if factors.iter().any(|f| !f.is_positive()) {
        return Err(GeometryError::InvalidFactors("factors must be positive".into()));
    }
    let points = cfg
        .points()
        .iter()
        .map(|p| IntVector(p.iter().zip(factors).map(|(x, f)| x * f).collect()))
        .collect();
    let scaled = validate_configuration(points);
    assert!(
        !matches!(scaled, Err(GeometryError::DuplicatePoint { .. })),
        "positive scaling cannot identify distinct points"
    );
    scaled
}

/// Draws weights uniformly from `[0, bound]` until the induced subdivision is
/// a triangulation.
///
/// The draw for attempt `k` comes from ChaCha stream `k` of `seed`, so the
/// result depends only on `(cfg, seed, bound)`.
pub fn random_generic_weight(cfg: &PointConfiguration, seed: u64, bound: u64) -> Result<WeightVector, GeometryError> {
    random_generic_weight_capped(cfg, seed, bound, WEIGHT_RETRY_CAP)
}

pub(crate) fn random_generic_weight_capped(
    cfg: &PointConfiguration,
    seed: u64,
    bound: u64,
    cap: u64,
) -> Result<WeightVector, GeometryError> {
    if bound < 1 {
        return Err(GeometryError::InvalidBound);
    }
    for retry in 0..cap {
        let w = draw_weight(cfg.len(), seed, retry, bound);
        match regular_triangulation(cfg, &w) {
            Ok(_) => return Ok(w),
            Err(GeometryError::NonGeneric { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::RetryCapExceeded { retries: cap, bound })
}

pub(crate) fn draw_weight(n: usize, seed: u64, stream: u64, bound: u64) -> WeightVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    WeightVector::new((0..n).map(|_| BigInt::from(rng.gen_range(0..=bound))).collect())
}
