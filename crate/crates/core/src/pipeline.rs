//! The two routes to the adjoint polynomial.
//!
//! The geometric route sums volume-weighted products of linear forms over a
//! regular triangulation. The algebraic route computes the toric ideal,
//! degenerates it to its initial ideal and reads off the multidegree from
//! the minimal primes and their multiplicities. The routes share only the
//! configuration and the weight.
//!
//! Multiplicities count lattice points of `ZA`, volumes count those of
//! `Z^{d+1}`, so the multidegree is the adjoint divided by the index
//! `[Z^{d+1} : ZA]`. The two agree on the nose when the points generate the
//! integer lattice.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use thiserror::Error;

use crate::geometry::{self, GeometryError, PointConfiguration, Triangulation, WeightVector};
use crate::linalg;
use crate::monomial::{self, MonomialError, MonomialIdeal, PrimeComponent};
use crate::multidegree::{self, MultiPoly};
use crate::toric::{self, AlgebraError, BinomialIdeal, TermOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Triangulation,
    ToricIdeal,
    GroebnerBasis,
    InitialIdeal,
    Multiplicities,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Triangulation => "triangulation",
            Stage::ToricIdeal => "toric_ideal",
            Stage::GroebnerBasis => "groebner_basis",
            Stage::InitialIdeal => "initial_ideal",
            Stage::Multiplicities => "multiplicities",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: Stage) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for a non-generic weight detected by either route; such errors
    /// go away with a different weight.
    pub fn is_genericity(&self) -> bool {
        match self {
            Error::Geometry(GeometryError::NonGeneric { .. }) => true,
            Error::Algebra(AlgebraError::NonGenericWeight { .. }) => true,
            Error::Stage { source, .. } => source.is_genericity(),
            _ => false,
        }
    }
}

/// Wall-clock time per stage, in execution order.
pub type Timings = Vec<(Stage, Duration)>;

fn timed<T>(timings: &mut Timings, stage: Stage, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((stage, start.elapsed()));
    out
}

#[derive(Debug, Clone)]
pub struct GeometricRun {
    pub triangulation: Triangulation,
    pub adjoint: MultiPoly,
}

pub fn geometric_adjoint(cfg: &PointConfiguration, w: &WeightVector) -> Result<GeometricRun, Error> {
    geometric_adjoint_timed(cfg, w, &mut Vec::new())
}

pub(crate) fn geometric_adjoint_timed(
    cfg: &PointConfiguration,
    w: &WeightVector,
    timings: &mut Timings,
) -> Result<GeometricRun, Error> {
    let triangulation = timed(timings, Stage::Triangulation, || {
        geometry::regular_triangulation(cfg, w)
    })
    .map_err(|e| Error::from(e).at(Stage::Triangulation))?;
    let adjoint = multidegree::adjoint_from_triangulation(&triangulation);
    Ok(GeometricRun { triangulation, adjoint })
}

#[derive(Debug, Clone)]
pub struct AlgebraicRun {
    /// Reduced Gröbner basis of `I_A` under the weight order.
    pub groebner: BinomialIdeal,
    pub initial: MonomialIdeal,
    pub components: Vec<PrimeComponent>,
    pub multidegree: MultiPoly,
    /// `[Z^{d+1} : ZA]`
    pub lattice_index: BigInt,
    /// `lattice_index * multidegree`
    pub adjoint: MultiPoly,
}

pub fn algebraic_adjoint(cfg: &PointConfiguration, w: &WeightVector) -> Result<AlgebraicRun, Error> {
    let mut timings = Vec::new();
    let toric = timed(&mut timings, Stage::ToricIdeal, || toric::toric_ideal(cfg));
    algebraic_adjoint_from(cfg, &toric, w, &mut timings)
}

/// The algebraic route starting from a precomputed toric ideal, so several
/// weights can share one saturation.
pub fn algebraic_adjoint_from(
    cfg: &PointConfiguration,
    toric: &BinomialIdeal,
    w: &WeightVector,
    timings: &mut Timings,
) -> Result<AlgebraicRun, Error> {
    if w.len() != cfg.len() {
        return Err(Error::from(GeometryError::WeightLength {
            expected: cfg.len(),
            found: w.len(),
        })
        .at(Stage::GroebnerBasis));
    }
    let order = TermOrder::weighted(w);
    let groebner = timed(timings, Stage::GroebnerBasis, || toric::buchberger(toric, &order));
    let initial = toric::leading_ideal(&groebner, &order).map_err(|e| Error::from(e).at(Stage::InitialIdeal))?;
    let components = timed(timings, Stage::Multiplicities, || monomial::prime_components(&initial))
        .map_err(|e| Error::from(e).at(Stage::Multiplicities))?;
    let multidegree = multidegree::multidegree_of_quotient(&components, cfg);
    let lattice_index = linalg::lattice_index(cfg.matrix()).expect("configurations have full rank");
    let adjoint = multidegree.scale(&lattice_index);
    Ok(AlgebraicRun {
        groebner,
        initial,
        components,
        multidegree,
        lattice_index,
        adjoint,
    })
}

/// A random weight generic for both routes: the lower hull is simplicial
/// and no generator of the Gröbner basis ties. Attempt `k` uses seed
/// `seed + k` of [`geometry::random_generic_weight`].
pub fn random_weight_for_both(
    cfg: &PointConfiguration,
    toric: &BinomialIdeal,
    seed: u64,
    bound: u64,
) -> Result<WeightVector, Error> {
    for k in 0..geometry::WEIGHT_RETRY_CAP {
        let w = geometry::random_generic_weight(cfg, seed.wrapping_add(k), bound)?;
        let order = TermOrder::weighted(&w);
        match toric::leading_ideal(&toric::buchberger(toric, &order), &order) {
            Ok(_) => return Ok(w),
            Err(AlgebraError::NonGenericWeight { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(GeometryError::RetryCapExceeded {
        retries: geometry::WEIGHT_RETRY_CAP,
        bound,
    }
    .into())
}
