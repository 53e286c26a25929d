//! Exact computation of adjoint polynomials of lattice cones, by a
//! triangulation sum and by the multidegree of a toric initial ideal.

pub mod geometry;
pub mod linalg;
pub mod monomial;
pub mod multidegree;
pub mod pipeline;
pub mod toric;
pub mod verify;

pub use geometry::{
    random_generic_weight, regular_triangulation, validate_configuration, GeometryError, PointConfiguration, Simplex,
    Triangulation, WeightVector,
};
pub use linalg::{IntMatrix, IntVector, LinalgError};
pub use monomial::{Monomial, MonomialError, MonomialIdeal, PrimeComponent, SimplicialComplex};
pub use multidegree::{Diagnostics, MultiPoly};
pub use pipeline::{algebraic_adjoint, geometric_adjoint, AlgebraicRun, Error, GeometricRun, Stage};
pub use toric::{AlgebraError, Binomial, BinomialIdeal, TermOrder};
pub use verify::{fuzz, verify_theorem, Check, CheckSet, FuzzBounds, VerificationReport};
