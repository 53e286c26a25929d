//! Acceptance gate. Runs without the libtest harness so every criterion
//! prints a PASS/FAIL line; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use adjoint_core::verify::{self, Check, CheckSet, FuzzBounds, VerificationReport};
use adjoint_core::{algebraic_adjoint, geometric_adjoint, PointConfiguration, WeightVector};

const FUZZ_SEED: u64 = 20_240_601;
const FUZZ_CASES: usize = 100;

struct Gate {
    failures: usize,
}

impl Gate {
    fn record(&mut self, criterion: usize, name: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("criterion {criterion} PASS {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("criterion {criterion} FAIL {name}: {detail}");
            }
        }
    }
}

fn pentagon_golden() -> Result<String, String> {
    let start = Instant::now();
    let cfg = PointConfiguration::from_rows(&[
        vec![1, 0, 1],
        vec![1, 1, 1],
        vec![1, 2, 2],
        vec![1, 2, 3],
        vec![1, 0, 3],
    ])
    .map_err(|e| e.to_string())?;
    let w = WeightVector::from(vec![0, 1, 0, 0, 1]);
    let g = geometric_adjoint(&cfg, &w).map_err(|e| e.to_string())?;
    let a = algebraic_adjoint(&cfg, &w).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let mut basis: Vec<String> = a.groebner.generators().iter().map(|b| b.to_string()).collect();
    basis.sort();
    let mut expected_basis = vec!["x3^2*x5 - x1*x4^2", "x2^2*x4 - x1*x3^2", "x2^2*x5 - x1^2*x4"];
    expected_basis.sort();
    if basis != expected_basis {
        return Err(format!("Groebner basis {basis:?}"));
    }
    let mut leads: Vec<String> = a.initial.generators().iter().map(|m| m.to_string()).collect();
    leads.sort();
    if leads != ["x2^2*x4", "x2^2*x5", "x3^2*x5"] {
        return Err(format!("initial ideal {}", a.initial));
    }
    let components: Vec<(Vec<usize>, u64)> = a
        .components
        .iter()
        .map(|c| (c.support.iter().map(|i| i + 1).collect(), c.multiplicity))
        .collect();
    if components != [(vec![2, 3], 4), (vec![2, 5], 2), (vec![4, 5], 1)] {
        return Err(format!("prime components {components:?}"));
    }
    let simplices: Vec<Vec<usize>> = g.triangulation.simplices.iter().map(|s| s.one_based()).collect();
    if simplices != [vec![1, 2, 3], vec![1, 3, 4], vec![1, 4, 5]] {
        return Err(format!("triangulation {simplices:?}"));
    }
    if g.adjoint != a.multidegree {
        return Err(format!("{} != {}", g.adjoint, a.multidegree));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "adjoint {} in {:.1} ms",
        g.adjoint,
        elapsed.as_secs_f64() * 1e3
    ))
}

/// Passes iff `check` ran and passed on every case.
fn every_case(report: &VerificationReport, check: Check) -> Result<String, String> {
    let ran = report.cases.iter().filter(|c| c.check(check).is_some()).count();
    let failed: Vec<String> = report
        .cases
        .iter()
        .filter(|c| c.check(check).map_or(true, |r| !r.passed))
        .map(|c| {
            let why = c
                .check(check)
                .and_then(|r| r.detail.clone())
                .or_else(|| c.error.clone())
                .unwrap_or_else(|| "not run".into());
            format!("case {} (seed {}): {why}", c.index, c.seed.unwrap_or_default())
        })
        .collect();
    if failed.is_empty() {
        Ok(format!("{ran}/{} cases", report.cases.len()))
    } else {
        Err(failed.join("; "))
    }
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };
    gate.record(1, "pentagon golden run", pentagon_golden());

    let bounds = FuzzBounds::default();
    let start = Instant::now();
    let report = verify::fuzz(FUZZ_SEED, FUZZ_CASES, &bounds, &CheckSet::all());
    let elapsed = start.elapsed();

    let theorem = every_case(&report, Check::Theorem).and_then(|detail| {
        let within = report.cases.iter().all(|c| {
            let cfg = &c.configuration;
            cfg.len() <= bounds.n_max
                && cfg.dim() <= bounds.d_max
                && cfg.points().iter().all(|p| {
                    p.iter()
                        .skip(1)
                        .all(|x| x.magnitude() <= &(bounds.coord_max as u64).into())
                })
                && c.weights.len() >= 3
        });
        let unimodular = report
            .cases
            .iter()
            .filter(|c| c.lattice_index.as_ref().is_some_and(|g| *g == 1.into()))
            .count();
        match (within, elapsed < Duration::from_secs(60)) {
            (false, _) => Err("a case exceeds the size bounds or has fewer than 3 weights".into()),
            (_, false) => Err(format!("took {elapsed:?}")),
            _ => Ok(format!(
                "{detail}, {unimodular} with ZA = Z^(d+1), in {:.1} s",
                elapsed.as_secs_f64()
            )),
        }
    });
    gate.record(2, "pipelines agree on random configurations", theorem);
    gate.record(
        3,
        "initial complex equals triangulation",
        every_case(&report, Check::InitialComplex),
    );
    gate.record(
        4,
        "multiplicity equals normalized volume",
        every_case(&report, Check::VolumeMultiplicity),
    );
    gate.record(
        5,
        "radical equals Stanley-Reisner ideal",
        every_case(&report, Check::StanleyReisner),
    );
    gate.record(
        6,
        "adjoint independent of weight",
        every_case(&report, Check::WeightIndependence),
    );
    let conservation = every_case(&report, Check::Conservation)
        .and_then(|a| every_case(&report, Check::Diagnostics).map(|b| format!("volumes {a}, degree and signs {b}")));
    gate.record(7, "volume conservation and diagnostics", conservation);
    gate.record(
        8,
        "toric membership up to degree 4",
        every_case(&report, Check::ToricMembership),
    );
    let scaling = every_case(&report, Check::ScalingIdentity).and_then(|detail| {
        let ran = report
            .cases
            .iter()
            .filter(|c| c.check(Check::ScalingIdentity).is_some())
            .count();
        if ran >= 20 {
            Ok(detail)
        } else {
            Err(format!("only {ran} cases"))
        }
    });
    gate.record(9, "axis scaling identity", scaling);

    if let Some(case) = report.failures().next() {
        println!("first failing case: {}", case.to_json(false));
    }
    println!("{}", report.summary());
    if gate.failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
