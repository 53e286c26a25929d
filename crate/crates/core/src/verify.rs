//! Cross-checks between the two pipelines and the supporting properties,
//! for a single input or a seeded batch of random configurations.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::geometry::{self, GeometryError, PointConfiguration, WeightVector};
use crate::linalg::IntVector;
use crate::monomial::{self, SimplicialComplex};
use crate::multidegree::{self, int_json, MultiPoly};
use crate::pipeline::{self, AlgebraicRun, Error, GeometricRun, Stage, Timings};
use crate::toric::{self, BinomialIdeal, TermOrder};

/// Degree bound for the brute-force membership oracle.
pub const MEMBERSHIP_DEGREE: u32 = 4;
/// Random points at which the two pipelines are also compared numerically.
pub const EVALUATION_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// Both pipelines give the same polynomial.
    Theorem,
    /// Facets of the initial complex are the simplices of the triangulation.
    InitialComplex,
    /// Multiplicity of each minimal prime equals the volume of its facet.
    VolumeMultiplicity,
    /// The radical of the initial ideal is the Stanley-Reisner ideal of the
    /// triangulation.
    StanleyReisner,
    /// Homogeneity, nonnegativity and agreement at random points.
    Diagnostics,
    /// The adjoint does not depend on the weight.
    WeightIndependence,
    /// Total volume does not depend on the weight.
    Conservation,
    /// Every low-degree binomial of the toric ideal reduces to zero.
    ToricMembership,
    /// `adj_scaled(t) = det(D) adj(D t)`.
    ScalingIdentity,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Theorem,
        Check::InitialComplex,
        Check::VolumeMultiplicity,
        Check::StanleyReisner,
        Check::Diagnostics,
        Check::WeightIndependence,
        Check::Conservation,
        Check::ToricMembership,
        Check::ScalingIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Theorem => "theorem",
            Check::InitialComplex => "initial_complex",
            Check::VolumeMultiplicity => "volume_multiplicity",
            Check::StanleyReisner => "stanley_reisner",
            Check::Diagnostics => "diagnostics",
            Check::WeightIndependence => "weight_independence",
            Check::Conservation => "conservation",
            Check::ToricMembership => "toric_membership",
            Check::ScalingIdentity => "scaling_identity",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which checks to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckSet(BTreeSet<Check>);

impl CheckSet {
    pub fn all() -> Self {
        CheckSet(Check::ALL.into_iter().collect())
    }

    pub fn none() -> Self {
        CheckSet(BTreeSet::new())
    }

    pub fn only(checks: impl IntoIterator<Item = Check>) -> Self {
        CheckSet(checks.into_iter().collect())
    }

    pub fn with(mut self, check: Check) -> Self {
        self.0.insert(check);
        self
    }

    pub fn without(mut self, check: Check) -> Self {
        self.0.remove(&check);
        self
    }

    pub fn contains(&self, check: Check) -> bool {
        self.0.contains(&check)
    }

    pub fn iter(&self) -> impl Iterator<Item = Check> + '_ {
        self.0.iter().copied()
    }
}

impl Default for CheckSet {
    fn default() -> Self {
        CheckSet::all()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    /// What went wrong, for failures.
    pub detail: Option<String>,
}

/// A term on which two polynomials disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferingTerm {
    pub exponents: Vec<u32>,
    pub left: BigInt,
    pub right: BigInt,
}

/// Evidence for a failed polynomial comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub check: Check,
    pub weight: WeightVector,
    pub left: MultiPoly,
    pub right: MultiPoly,
    pub differing_term: Option<DifferingTerm>,
}

/// The first term, in descending order, where `p` and `q` differ.
pub fn differing_term(p: &MultiPoly, q: &MultiPoly) -> Option<DifferingTerm> {
    let exponents: BTreeSet<Vec<u32>> = p.terms().chain(q.terms()).map(|(e, _)| e.to_vec()).collect();
    exponents.into_iter().rev().find_map(|e| {
        let (left, right) = (p.coefficient(&e), q.coefficient(&e));
        (left != right).then_some(DifferingTerm {
            exponents: e,
            left,
            right,
        })
    })
}

#[derive(Debug, Clone)]
pub struct CaseReport {
    pub index: usize,
    /// Seed that regenerates this case on its own; absent for user input.
    pub seed: Option<u64>,
    pub configuration: PointConfiguration,
    pub weights: Vec<WeightVector>,
    /// Axis factors used by the scaling check.
    pub factors: Option<Vec<BigInt>>,
    pub checks: Vec<CheckResult>,
    pub adjoint: Option<MultiPoly>,
    /// `[Z^{d+1} : ZA]`; the raw multidegree is the adjoint divided by it.
    pub lattice_index: Option<BigInt>,
    pub witness: Option<Witness>,
    pub error: Option<String>,
    pub timings: Timings,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, check: Check) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn to_json(&self, include_timings: bool) -> Value {
        let mut obj = Map::new();
        obj.insert("index".into(), json!(self.index));
        obj.insert("seed".into(), self.seed.map_or(Value::Null, |s| json!(s)));
        obj.insert("passed".into(), json!(self.passed()));
        obj.insert("configuration".into(), points_json(self.configuration.points()));
        obj.insert(
            "weights".into(),
            Value::Array(self.weights.iter().map(|w| vector_json(&w.0)).collect()),
        );
        obj.insert(
            "factors".into(),
            self.factors
                .as_ref()
                .map_or(Value::Null, |f| Value::Array(f.iter().map(int_json).collect())),
        );
        let checks: Map<String, Value> = self
            .checks
            .iter()
            .map(|c| {
                let status = json!({
                    "passed": c.passed,
                    "detail": c.detail.as_ref().map_or(Value::Null, |d| json!(d)),
                });
                (c.check.name().to_string(), status)
            })
            .collect();
        obj.insert("checks".into(), Value::Object(checks));
        obj.insert(
            "adjoint".into(),
            self.adjoint
                .as_ref()
                .map_or(Value::Null, |p| json!({ "text": p.to_string(), "terms": p.to_json() })),
        );
        obj.insert(
            "lattice_index".into(),
            self.lattice_index.as_ref().map_or(Value::Null, int_json),
        );
        obj.insert(
            "witness".into(),
            self.witness.as_ref().map_or(Value::Null, witness_json),
        );
        obj.insert("error".into(), self.error.as_ref().map_or(Value::Null, |e| json!(e)));
        if include_timings {
            obj.insert("timings_ms".into(), timings_json(&self.timings));
        }
        Value::Object(obj)
    }
}

fn vector_json(v: &IntVector) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub(crate) fn points_json(points: &[IntVector]) -> Value {
    Value::Array(points.iter().map(vector_json).collect())
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "check": w.check.name(),
        "weight": vector_json(&w.weight.0),
        "left": { "text": w.left.to_string(), "terms": w.left.to_json() },
        "right": { "text": w.right.to_string(), "terms": w.right.to_json() },
        "differing_term": w.differing_term.as_ref().map_or(Value::Null, |d| json!({
            "exponents": d.exponents,
            "left": int_json(&d.left),
            "right": int_json(&d.right),
        })),
    })
}

/// Milliseconds per stage, summed over repeated runs of the same stage.
pub fn timings_json(timings: &Timings) -> Value {
    let mut totals: Vec<(Stage, Duration)> = Vec::new();
    for &(stage, d) in timings {
        match totals.iter_mut().find(|(s, _)| *s == stage) {
            Some((_, total)) => *total += d,
            None => totals.push((stage, d)),
        }
    }
    Value::Object(
        totals
            .into_iter()
            .map(|(s, d)| (s.name().to_string(), json!(d.as_secs_f64() * 1e3)))
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// Batch seed for fuzz runs.
    pub seed: Option<u64>,
    pub cases: Vec<CaseReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.passed())
    }

    /// Passing and total counts per check, over the cases that ran it.
    pub fn tally(&self) -> Vec<(Check, usize, usize)> {
        Check::ALL
            .into_iter()
            .filter_map(|check| {
                let ran: Vec<bool> = self
                    .cases
                    .iter()
                    .filter_map(|c| c.check(check))
                    .map(|r| r.passed)
                    .collect();
                (!ran.is_empty()).then(|| (check, ran.iter().filter(|&&p| p).count(), ran.len()))
            })
            .collect()
    }

    /// One JSON object per case, newline separated.
    pub fn to_jsonl(&self, include_timings: bool) -> String {
        self.cases
            .iter()
            .map(|c| c.to_json(include_timings).to_string() + "\n")
            .collect()
    }

    pub fn summary_json(&self) -> Value {
        let checks: Map<String, Value> = self
            .tally()
            .into_iter()
            .map(|(c, passed, total)| (c.name().to_string(), json!({ "passed": passed, "total": total })))
            .collect();
        json!({
            "seed": self.seed,
            "cases": self.cases.len(),
            "passed": self.cases.iter().filter(|c| c.passed()).count(),
            "failed": self.failures().count(),
            "errors": self.cases.iter().filter(|c| c.error.is_some()).count(),
            "checks": checks,
        })
    }

    pub fn summary(&self) -> String {
        let passed = self.cases.iter().filter(|c| c.passed()).count();
        let mut out = match self.seed {
            Some(seed) => format!("seed {seed}: "),
            None => String::new(),
        };
        out += &format!("{passed}/{} cases passed", self.cases.len());
        for (check, ok, total) in self.tally() {
            out += &format!("\n  {:<20} {ok}/{total}", check.name());
        }
        out
    }
}

fn result(check: Check, failure: Option<String>) -> CheckResult {
    CheckResult {
        check,
        passed: failure.is_none(),
        detail: failure,
    }
}

/// What a case collects while its checks run.
#[derive(Default)]
struct Findings {
    timings: Timings,
    results: Vec<CheckResult>,
    witness: Option<Witness>,
}

struct WeightRun {
    geometric: GeometricRun,
    algebraic: AlgebraicRun,
}

/// Runs both pipelines for one weight and the checks that compare them.
fn check_weight(
    cfg: &PointConfiguration,
    toric: &BinomialIdeal,
    w: &WeightVector,
    checks: &CheckSet,
    eval_seed: u64,
    found: &mut Findings,
) -> Result<WeightRun, Error> {
    let geometric = pipeline::geometric_adjoint_timed(cfg, w, &mut found.timings)?;
    let algebraic = pipeline::algebraic_adjoint_from(cfg, toric, w, &mut found.timings)?;
    let Findings { results, witness, .. } = found;
    let tri = &geometric.triangulation;
    let n = cfg.len();

    if checks.contains(Check::Theorem) {
        let same = geometric.adjoint == algebraic.adjoint;
        if !same && witness.is_none() {
            *witness = Some(Witness {
                check: Check::Theorem,
                weight: w.clone(),
                left: geometric.adjoint.clone(),
                right: algebraic.adjoint.clone(),
                differing_term: differing_term(&geometric.adjoint, &algebraic.adjoint),
            });
        }
        results.push(result(
            Check::Theorem,
            (!same).then(|| {
                format!(
                    "triangulation sum {} != {} * multidegree {}",
                    geometric.adjoint, algebraic.lattice_index, algebraic.multidegree
                )
            }),
        ));
    }
    if checks.contains(Check::InitialComplex) {
        let complex = monomial::initial_complex(&algebraic.initial);
        let simplices = SimplicialComplex::new(n, tri.index_sets());
        results.push(result(
            Check::InitialComplex,
            (complex != simplices).then(|| {
                format!(
                    "initial complex {} != triangulation {}",
                    render_sets(&complex.facets),
                    render_sets(&simplices.facets)
                )
            }),
        ));
    }
    if checks.contains(Check::VolumeMultiplicity) {
        let mut failure = None;
        if algebraic.components.len() != tri.simplices.len() {
            failure = Some(format!(
                "{} minimal primes but {} simplices",
                algebraic.components.len(),
                tri.simplices.len()
            ));
        }
        for c in &algebraic.components {
            let facet: Vec<usize> = (0..n).filter(|i| !c.support.contains(i)).collect();
            let volume = tri
                .simplices
                .iter()
                .find(|s| s.indices == facet)
                .map(|s| &s.normalized_volume);
            let expected = &algebraic.lattice_index * BigInt::from(c.multiplicity);
            if volume != Some(&expected) && failure.is_none() {
                failure = Some(match volume {
                    Some(v) => format!("{c} but volume {v} (lattice index {})", algebraic.lattice_index),
                    None => format!("{c} has no matching simplex"),
                });
            }
        }
        results.push(result(Check::VolumeMultiplicity, failure));
    }
    if checks.contains(Check::StanleyReisner) {
        let radical = monomial::radical(&algebraic.initial);
        let sr = monomial::stanley_reisner_ideal(&SimplicialComplex::new(n, tri.index_sets()));
        results.push(result(
            Check::StanleyReisner,
            (radical != sr).then(|| format!("radical {radical} != Stanley-Reisner ideal {sr}")),
        ));
    }
    if checks.contains(Check::Diagnostics) {
        let mut failure = None;
        for (label, p) in [
            ("triangulation sum", &geometric.adjoint),
            ("multidegree", &algebraic.multidegree),
        ] {
            let d = multidegree::diagnostics(p, cfg);
            if !d.passed() && failure.is_none() {
                failure = Some(format!(
                    "{label} {p}: degree {:?} (expected {}), nonnegative {}",
                    d.degree, d.expected_degree, d.nonnegative
                ));
            }
        }
        let points = multidegree::random_points(cfg.dim() + 1, EVALUATION_POINTS, eval_seed, 10);
        if let Some(x) = multidegree::evaluation_mismatch(&geometric.adjoint, &algebraic.adjoint, &points) {
            failure.get_or_insert_with(|| format!("pipelines differ at t = {}", IntVector(x.to_vec())));
        }
        results.push(result(Check::Diagnostics, failure));
    }
    if checks.contains(Check::ToricMembership) {
        let order = TermOrder::weighted(w);
        results.push(result(
            Check::ToricMembership,
            toric::check_toric_membership(cfg, &algebraic.groebner, &order, MEMBERSHIP_DEGREE)
                .err()
                .map(|b| format!("{b} does not reduce to zero modulo the Groebner basis")),
        ));
    }
    Ok(WeightRun { geometric, algebraic })
}

fn render_sets(sets: &[Vec<usize>]) -> String {
    sets.iter()
        .map(|s| geometry::one_based(s))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Merges repeated results of the same check: a check fails if any run of
/// it failed, and keeps the first failure's detail.
fn merge(results: Vec<CheckResult>) -> Vec<CheckResult> {
    let mut merged: Vec<CheckResult> = Vec::new();
    for r in results {
        match merged.iter_mut().find(|m| m.check == r.check) {
            Some(m) if m.passed && !r.passed => *m = r,
            Some(_) => {}
            None => merged.push(r),
        }
    }
    merged.sort_by_key(|r| r.check);
    merged
}

/// Everything needed to run one case.
#[derive(Debug, Clone)]
pub struct CaseInput {
    pub configuration: PointConfiguration,
    pub weights: Vec<WeightVector>,
    pub factors: Option<Vec<BigInt>>,
}

/// Runs all enabled checks on one configuration. Pipeline errors, including
/// genericity errors, are returned rather than recorded.
pub fn run_case(index: usize, seed: Option<u64>, input: &CaseInput, checks: &CheckSet) -> Result<CaseReport, Error> {
    let cfg = &input.configuration;
    let mut found = Findings::default();
    let start = std::time::Instant::now();
    let toric = toric::toric_ideal(cfg);
    found.timings.push((Stage::ToricIdeal, start.elapsed()));

    let mut runs = Vec::new();
    for (k, w) in input.weights.iter().enumerate() {
        let eval_seed = seed.unwrap_or(0).wrapping_add(k as u64);
        runs.push(check_weight(cfg, &toric, w, checks, eval_seed, &mut found)?);
    }
    let Findings {
        mut timings,
        mut results,
        mut witness,
    } = found;

    if checks.contains(Check::ToricMembership) {
        results.push(result(
            Check::ToricMembership,
            toric::check_toric_membership(cfg, &toric, &TermOrder::grevlex(cfg.len()), MEMBERSHIP_DEGREE)
                .err()
                .map(|b| format!("{b} does not reduce to zero modulo the saturated basis")),
        ));
    }
    if checks.contains(Check::WeightIndependence) && runs.len() > 1 {
        let first = &runs[0].geometric.adjoint;
        let mut failure = None;
        for (k, run) in runs.iter().enumerate().skip(1) {
            for (label, p) in [
                ("triangulation sum", &run.geometric.adjoint),
                ("normalized multidegree", &run.algebraic.adjoint),
            ] {
                if p != first && failure.is_none() {
                    failure = Some(format!("weight {} gives {label} {p}, weight 1 gives {first}", k + 1));
                    if witness.is_none() {
                        witness = Some(Witness {
                            check: Check::WeightIndependence,
                            weight: input.weights[k].clone(),
                            left: first.clone(),
                            right: p.clone(),
                            differing_term: differing_term(first, p),
                        });
                    }
                }
            }
        }
        results.push(result(Check::WeightIndependence, failure));
    }
    if checks.contains(Check::Conservation) && runs.len() > 1 {
        let volumes: Vec<BigInt> = runs.iter().map(|r| r.geometric.triangulation.volume()).collect();
        results.push(result(
            Check::Conservation,
            volumes.iter().any(|v| v != &volumes[0]).then(|| {
                format!(
                    "total volumes differ across weights: {}",
                    volumes.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
                )
            }),
        ));
    }
    if let (true, Some(factors), Some(run)) = (checks.contains(Check::ScalingIdentity), &input.factors, runs.first()) {
        let (failure, w) = scaling_check(
            cfg,
            &toric,
            &input.weights[0],
            factors,
            &run.geometric.adjoint,
            &mut timings,
        )?;
        if let Some(w) = w {
            witness.get_or_insert(w);
        }
        results.push(result(Check::ScalingIdentity, failure));
    }

    Ok(CaseReport {
        index,
        seed,
        configuration: cfg.clone(),
        weights: input.weights.clone(),
        factors: input.factors.clone(),
        checks: merge(results),
        adjoint: runs.first().map(|r| r.geometric.adjoint.clone()),
        lattice_index: runs.first().map(|r| r.algebraic.lattice_index.clone()),
        witness,
        error: None,
        timings,
    })
}

/// Both pipelines on the scaled configuration, compared with
/// `det(D) adj(D t)`. Scaling is linear, so the same weight stays generic
/// and the toric ideal keeps its generators; only the grading changes. The
/// raw multidegree only sees `adj(D t)` up to the grown lattice index.
fn scaling_check(
    cfg: &PointConfiguration,
    toric: &BinomialIdeal,
    w: &WeightVector,
    factors: &[BigInt],
    adjoint: &MultiPoly,
    timings: &mut Timings,
) -> Result<(Option<String>, Option<Witness>), Error> {
    let scaled = geometry::scale_axes(cfg, factors).map_err(Error::from)?;
    let scaled_toric = BinomialIdeal::new(scaled.matrix().clone(), toric.generators().to_vec()).map_err(Error::from)?;
    let geometric = pipeline::geometric_adjoint_timed(&scaled, w, timings)?;
    let algebraic = pipeline::algebraic_adjoint_from(&scaled, &scaled_toric, w, timings)?;
    let det: BigInt = factors.iter().product();
    let expected = adjoint.scale_variables(factors).scale(&det);
    for (label, p) in [
        ("triangulation sum", &geometric.adjoint),
        ("normalized multidegree", &algebraic.adjoint),
    ] {
        if p != &expected {
            let witness = Witness {
                check: Check::ScalingIdentity,
                weight: w.clone(),
                left: expected.clone(),
                right: p.clone(),
                differing_term: differing_term(&expected, p),
            };
            return Ok((
                Some(format!("scaled {label} {p} != det(D) adj(D t) = {expected}")),
                Some(witness),
            ));
        }
    }
    Ok((None, None))
}

/// All checks for one configuration and one weight. The cross-weight
/// checks are vacuous here and are not reported.
pub fn verify_theorem(
    cfg: &PointConfiguration,
    w: &WeightVector,
    checks: &CheckSet,
) -> Result<VerificationReport, Error> {
    let input = CaseInput {
        configuration: cfg.clone(),
        weights: vec![w.clone()],
        factors: None,
    };
    Ok(VerificationReport {
        seed: None,
        cases: vec![run_case(0, None, &input, checks)?],
    })
}

/// Limits for randomly generated cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzBounds {
    pub n_max: usize,
    pub d_max: usize,
    /// Coordinates are drawn from `0..=coord_max`.
    pub coord_max: i64,
    pub weights_per_case: usize,
    pub weight_bound: u64,
    /// Largest axis factor for the scaling check.
    pub factor_max: i64,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        FuzzBounds {
            n_max: 8,
            d_max: 3,
            coord_max: 5,
            weights_per_case: 3,
            weight_bound: 1000,
            factor_max: 3,
        }
    }
}

/// Consecutive rejected points before a partial configuration is kept or
/// restarted.
const POINT_REJECTIONS: usize = 64;
/// Weight draws per case before giving up on finding enough generic ones.
const WEIGHT_ATTEMPTS: u64 = 64;

/// Seed of case `index` in the batch with seed `seed`.
pub fn case_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.gen()
}

/// A random vertex configuration. Points are proposed one at a time and
/// kept only if the configuration stays a vertex set, so the validator is
/// the only judge of what is accepted.
pub fn random_configuration(rng: &mut ChaCha8Rng, bounds: &FuzzBounds) -> PointConfiguration {
    assert!(
        bounds.d_max >= 1 && bounds.n_max > bounds.d_max,
        "fuzz bounds admit no configuration"
    );
    loop {
        let d = rng.gen_range(1..=bounds.d_max);
        let target = rng.gen_range(d + 1..=bounds.n_max);
        let mut points: Vec<IntVector> = Vec::new();
        let mut rejections = 0;
        let mut accepted = None;
        while rejections < POINT_REJECTIONS {
            let mut p = vec![BigInt::one()];
            p.extend((0..d).map(|_| BigInt::from(rng.gen_range(0..=bounds.coord_max))));
            points.push(IntVector(p));
            match geometry::validate_configuration(points.clone()) {
                Ok(cfg) => {
                    rejections = 0;
                    let done = cfg.len() == target;
                    accepted = Some(cfg);
                    if done {
                        break;
                    }
                }
                Err(GeometryError::RankDeficient { .. }) if points.len() < target => rejections = 0,
                Err(_) => {
                    points.pop();
                    rejections += 1;
                }
            }
        }
        // Stuck before the target (say, on a segment): keep what is full
        // rank, otherwise start over.
        if let Some(cfg) = accepted.filter(|c| c.len() == points.len()) {
            return cfg;
        }
    }
}

/// Builds and runs case `index` of the batch.
pub fn fuzz_case(index: usize, seed: u64, bounds: &FuzzBounds, checks: &CheckSet) -> CaseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = random_configuration(&mut rng, bounds);
    let factors: Vec<BigInt> = std::iter::once(BigInt::one())
        .chain((0..cfg.dim()).map(|_| BigInt::from(rng.gen_range(1..=bounds.factor_max))))
        .collect();
    let weight_seed: u64 = rng.gen();

    let mut timings = Timings::new();
    let failed = |error: String, weights: Vec<WeightVector>, timings: Timings| CaseReport {
        index,
        seed: Some(seed),
        configuration: cfg.clone(),
        weights,
        factors: Some(factors.clone()),
        checks: Vec::new(),
        adjoint: None,
        lattice_index: None,
        witness: None,
        error: Some(error),
        timings,
    };

    // Weights must be generic for both pipelines; the geometric test is
    // built into the draw, the algebraic one is a trial run.
    let toric = toric::toric_ideal(&cfg);
    let mut weights = Vec::new();
    for attempt in 0..WEIGHT_ATTEMPTS {
        if weights.len() == bounds.weights_per_case {
            break;
        }
        let w = match geometry::random_generic_weight(&cfg, weight_seed.wrapping_add(attempt), bounds.weight_bound) {
            Ok(w) => w,
            Err(e) => return failed(e.to_string(), weights, timings),
        };
        match pipeline::algebraic_adjoint_from(&cfg, &toric, &w, &mut timings) {
            Ok(_) => weights.push(w),
            Err(e) if e.is_genericity() => continue,
            Err(e) => return failed(e.to_string(), weights, timings),
        }
    }
    if weights.len() < bounds.weights_per_case {
        return failed(
            format!("found {} of {} generic weights", weights.len(), bounds.weights_per_case),
            weights,
            timings,
        );
    }

    let input = CaseInput {
        configuration: cfg.clone(),
        weights,
        factors: Some(factors.clone()),
    };
    match run_case(index, Some(seed), &input, checks) {
        Ok(report) => report,
        Err(e) => failed(e.to_string(), input.weights, timings),
    }
}

/// `cases` random cases, run in parallel. Case `k` depends only on
/// `case_seed(seed, k)`, so the report is the same for any scheduling.
pub fn fuzz(seed: u64, cases: usize, bounds: &FuzzBounds, checks: &CheckSet) -> VerificationReport {
    let cases = (0..cases)
        .into_par_iter()
        .map(|index| fuzz_case(index, case_seed(seed, index), bounds, checks))
        .collect();
    VerificationReport {
        seed: Some(seed),
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn pentagon_passes_every_single_weight_check() {
        let w = WeightVector::from(vec![0, 1, 0, 0, 1]);
        let report = verify_theorem(&pentagon(), &w, &CheckSet::all()).unwrap();
        assert!(report.passed(), "{}", report.summary());
        let names: Vec<&str> = report.cases[0].checks.iter().map(|c| c.check.name()).collect();
        assert_eq!(
            names,
            [
                "theorem",
                "initial_complex",
                "volume_multiplicity",
                "stanley_reisner",
                "diagnostics",
                "toric_membership"
            ]
        );
    }

    #[test]
    fn unit_simplex_has_adjoint_one() {
        let cfg = PointConfiguration::from_rows(&[vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let report = verify_theorem(&cfg, &WeightVector::from(vec![5, 2, 9]), &CheckSet::all()).unwrap();
        assert!(report.passed());
        assert_eq!(report.cases[0].adjoint, Some(MultiPoly::one(3)));
    }

    #[test]
    fn zero_weight_is_a_genericity_error() {
        let err = verify_theorem(&pentagon(), &WeightVector::zeros(5), &CheckSet::all()).unwrap_err();
        assert!(err.is_genericity());
    }

    #[test]
    fn checks_are_individually_toggleable() {
        let w = WeightVector::from(vec![0, 1, 0, 0, 1]);
        let only = CheckSet::only([Check::StanleyReisner]);
        let report = verify_theorem(&pentagon(), &w, &only).unwrap();
        assert_eq!(report.cases[0].checks.len(), 1);
        let without = CheckSet::all().without(Check::Theorem);
        let report = verify_theorem(&pentagon(), &w, &without).unwrap();
        assert!(report.cases[0].check(Check::Theorem).is_none());
        assert!(report.cases[0].check(Check::Diagnostics).is_some());
    }

    #[test]
    fn cross_weight_and_scaling_checks_run_with_several_weights() {
        let input = CaseInput {
            configuration: pentagon(),
            weights: vec![
                WeightVector::from(vec![0, 1, 0, 0, 1]),
                WeightVector::from(vec![1, 0, 1, 0, 0]),
                WeightVector::from(vec![0, 0, 1, 0, 1]),
            ],
            factors: Some(vec![BigInt::one(), BigInt::from(2), BigInt::from(3)]),
        };
        let report = run_case(0, None, &input, &CheckSet::all()).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
        assert_eq!(report.checks.len(), Check::ALL.len());
    }

    #[test]
    fn differing_term_is_the_largest_mismatch() {
        let p = MultiPoly::var(2, 0) + MultiPoly::var(2, 1);
        let q = MultiPoly::var(2, 0).scale(&BigInt::from(2)) + MultiPoly::var(2, 1).scale(&BigInt::from(3));
        let d = differing_term(&p, &q).unwrap();
        assert_eq!(d.exponents, vec![1, 0]);
        assert_eq!((d.left, d.right), (BigInt::from(1), BigInt::from(2)));
        assert_eq!(differing_term(&p, &p), None);
    }

    #[test]
    fn empty_fuzz_passes() {
        let report = fuzz(7, 0, &FuzzBounds::default(), &CheckSet::all());
        assert!(report.cases.is_empty() && report.passed());
        assert_eq!(report.to_jsonl(false), "");
    }

    #[test]
    fn fuzz_replays_byte_identically() {
        let bounds = FuzzBounds::default();
        let a = fuzz(11, 6, &bounds, &CheckSet::all());
        let b = fuzz(11, 6, &bounds, &CheckSet::all());
        assert_eq!(a.to_jsonl(false), b.to_jsonl(false));
        assert!(a.passed(), "{}", a.to_jsonl(false));
        let replay = fuzz_case(3, case_seed(11, 3), &bounds, &CheckSet::all());
        assert_eq!(replay.to_json(false), a.cases[3].to_json(false));
    }

    #[test]
    fn sampled_configurations_respect_bounds() {
        let bounds = FuzzBounds {
            n_max: 6,
            d_max: 2,
            coord_max: 3,
            ..FuzzBounds::default()
        };
        for seed in 0..40 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = random_configuration(&mut rng, &bounds);
            assert!(cfg.len() <= 6 && cfg.dim() <= 2 && cfg.len() > cfg.dim());
            for p in cfg.points() {
                assert!(p.iter().skip(1).all(|x| *x >= BigInt::from(0) && *x <= BigInt::from(3)));
            }
        }
    }
}
