//! Each command builds one JSON document; text mode renders that document.

use std::fmt::Write as _;

use adjoint_core::multidegree::int_json;
use adjoint_core::pipeline::{self, algebraic_adjoint_from};
use adjoint_core::toric::{self, TermOrder};
use adjoint_core::verify::{self, CaseInput, CheckSet, FuzzBounds, VerificationReport};
use adjoint_core::{geometric_adjoint, IntVector, MultiPoly, PointConfiguration, WeightVector};
use anyhow::Context;
use serde_json::{json, Value};

use crate::input::{self, Input};
use crate::{Command, Common, Format, Pipeline};

/// Returns whether everything that was compared agreed.
pub fn run(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Triangulate(common) => triangulate(&common),
        Command::Toric(common) => toric_cmd(&common),
        Command::Adjoint { common, pipeline } => adjoint(&common, pipeline),
        Command::Verify {
            common,
            fuzz,
            replay,
            checks,
            skip,
            timings,
        } => {
            let mut set = checks.map_or_else(CheckSet::all, CheckSet::only);
            for c in skip {
                set = set.without(c);
            }
            verify_cmd(&common, fuzz, replay, &set, timings)
        }
    }
}

fn read_input(common: &Common) -> anyhow::Result<Input> {
    let path = common
        .input
        .as_ref()
        .ok_or_else(|| input::InputError("no input document given".into()))?;
    input::read(path)
}

/// Flag, then document, then a seeded random weight generic for both
/// pipelines. The seed is reported only when it was used.
fn resolve_weight(common: &Common, input: &Input) -> anyhow::Result<(WeightVector, Option<u64>)> {
    if let Some(w) = &common.weight {
        input::check_weight_length(&input.configuration, w, "--weight")?;
        return Ok((w.clone(), None));
    }
    if let Some(w) = &input.weight {
        return Ok((w.clone(), None));
    }
    let toric = toric::toric_ideal(&input.configuration);
    let w = pipeline::random_weight_for_both(&input.configuration, &toric, common.seed, common.bound)
        .context("drawing a random weight")?;
    Ok((w, Some(common.seed)))
}

fn vector_json(v: &IntVector) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn poly_json(p: &MultiPoly) -> Value {
    json!({ "text": p.to_string(), "terms": p.to_json() })
}

fn header(
    command: &str,
    cfg: &PointConfiguration,
    w: &WeightVector,
    seed: Option<u64>,
) -> serde_json::Map<String, Value> {
    let mut doc = serde_json::Map::new();
    doc.insert("command".into(), json!(command));
    doc.insert(
        "points".into(),
        Value::Array(cfg.points().iter().map(vector_json).collect()),
    );
    doc.insert("weight".into(), vector_json(&w.0));
    doc.insert("seed".into(), json!(seed));
    doc
}

fn emit(format: Format, doc: &Value, text: impl FnOnce(&mut String)) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(doc).expect("json")),
        Format::Text => {
            let mut out = String::new();
            text(&mut out);
            print!("{out}");
        }
    }
}

fn header_text(out: &mut String, cfg: &PointConfiguration, w: &WeightVector, seed: Option<u64>) {
    let points: Vec<String> = cfg.points().iter().map(|p| p.to_string()).collect();
    writeln!(out, "points {}", points.join(" ")).unwrap();
    match seed {
        Some(s) => writeln!(out, "weight {} (seed {s})", w.0).unwrap(),
        None => writeln!(out, "weight {}", w.0).unwrap(),
    }
}

fn triangulate(common: &Common) -> anyhow::Result<bool> {
    let input = read_input(common)?;
    let (w, seed) = resolve_weight(common, &input)?;
    let cfg = &input.configuration;
    let tri = geometric_adjoint(cfg, &w)?.triangulation;

    let simplices: Vec<Value> = tri
        .simplices
        .iter()
        .map(|s| {
            json!({
                "indices": s.one_based(),
                "volume": int_json(&s.normalized_volume),
                "certificate": s.certificate.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut doc = header("triangulate", cfg, &w, seed);
    doc.insert("simplices".into(), Value::Array(simplices));
    doc.insert("total_volume".into(), int_json(&tri.volume()));

    emit(common.format, &Value::Object(doc), |out| {
        header_text(out, cfg, &w, seed);
        for s in &tri.simplices {
            let idx: Vec<String> = s.one_based().iter().map(|i| i.to_string()).collect();
            let cert: Vec<String> = s.certificate.iter().map(|c| c.to_string()).collect();
            writeln!(
                out,
                "{{{}}} vol {} certificate ({})",
                idx.join(","),
                s.normalized_volume,
                cert.join(",")
            )
            .unwrap();
        }
        writeln!(out, "total volume {}", tri.volume()).unwrap();
    });
    Ok(true)
}

fn toric_cmd(common: &Common) -> anyhow::Result<bool> {
    let input = read_input(common)?;
    let (w, seed) = resolve_weight(common, &input)?;
    let cfg = &input.configuration;
    let order = TermOrder::weighted(&w);
    let gb = toric::buchberger(&toric::toric_ideal(cfg), &order);
    let initial = toric::leading_ideal(&gb, &order).map_err(adjoint_core::Error::from)?;

    let basis: Vec<String> = gb.generators().iter().map(|b| b.to_string()).collect();
    let leads: Vec<String> = initial.generators().iter().map(|m| m.to_string()).collect();
    let mut doc = header("toric", cfg, &w, seed);
    doc.insert("zero_ideal".into(), json!(gb.is_zero()));
    doc.insert("groebner_basis".into(), json!(basis));
    doc.insert("initial_ideal".into(), json!(leads));

    emit(common.format, &Value::Object(doc), |out| {
        header_text(out, cfg, &w, seed);
        if gb.is_zero() {
            writeln!(out, "Groebner basis: zero ideal").unwrap();
        } else {
            writeln!(out, "Groebner basis:").unwrap();
            for b in &basis {
                writeln!(out, "  {b}").unwrap();
            }
        }
        writeln!(out, "initial ideal {initial}").unwrap();
    });
    Ok(true)
}

fn adjoint(common: &Common, pipeline: Pipeline) -> anyhow::Result<bool> {
    let input = read_input(common)?;
    let (w, seed) = resolve_weight(common, &input)?;
    let cfg = &input.configuration;

    let geometric = match pipeline {
        Pipeline::Geometric | Pipeline::Both => Some(geometric_adjoint(cfg, &w)?.adjoint),
        Pipeline::Algebraic => None,
    };
    let algebraic = match pipeline {
        Pipeline::Algebraic | Pipeline::Both => {
            let toric = toric::toric_ideal(cfg);
            Some(algebraic_adjoint_from(cfg, &toric, &w, &mut Vec::new())?)
        }
        Pipeline::Geometric => None,
    };
    let equal = match (&geometric, &algebraic) {
        (Some(g), Some(a)) => Some(*g == a.adjoint),
        _ => None,
    };

    let mut doc = header("adjoint", cfg, &w, seed);
    let name = match pipeline {
        Pipeline::Geometric => "geometric",
        Pipeline::Algebraic => "algebraic",
        Pipeline::Both => "both",
    };
    doc.insert("pipeline".into(), json!(name));
    doc.insert("geometric".into(), geometric.as_ref().map_or(Value::Null, poly_json));
    doc.insert(
        "algebraic".into(),
        algebraic.as_ref().map_or(Value::Null, |a| {
            let mut v = poly_json(&a.adjoint);
            v["multidegree"] = poly_json(&a.multidegree);
            v["lattice_index"] = int_json(&a.lattice_index);
            v
        }),
    );
    doc.insert("equal".into(), json!(equal));

    emit(common.format, &Value::Object(doc), |out| {
        header_text(out, cfg, &w, seed);
        if let Some(g) = &geometric {
            writeln!(out, "geometric {g}").unwrap();
        }
        if let Some(a) = &algebraic {
            if a.lattice_index == 1.into() {
                writeln!(out, "algebraic {}", a.adjoint).unwrap();
            } else {
                writeln!(
                    out,
                    "algebraic {} (lattice index {} times multidegree {})",
                    a.adjoint, a.lattice_index, a.multidegree
                )
                .unwrap();
            }
        }
        match equal {
            Some(true) => writeln!(out, "EQUAL").unwrap(),
            Some(false) => writeln!(out, "DIFFERENT").unwrap(),
            None => {}
        }
    });
    Ok(equal != Some(false))
}

fn verify_cmd(
    common: &Common,
    fuzz: Option<Vec<u64>>,
    replay: Option<u64>,
    checks: &CheckSet,
    timings: bool,
) -> anyhow::Result<bool> {
    let bounds = FuzzBounds::default();
    let report = if let Some(args) = fuzz {
        let cases = usize::try_from(args[1]).context("case count")?;
        verify::fuzz(args[0], cases, &bounds, checks)
    } else if let Some(case_seed) = replay {
        VerificationReport {
            seed: None,
            cases: vec![verify::fuzz_case(0, case_seed, &bounds, checks)],
        }
    } else {
        let input = read_input(common)?;
        let (w, _) = resolve_weight(common, &input)?;
        let case = CaseInput {
            configuration: input.configuration,
            weights: vec![w],
            factors: input.factors,
        };
        VerificationReport {
            seed: None,
            cases: vec![verify::run_case(0, None, &case, checks)?],
        }
    };

    let doc = json!({
        "command": "verify",
        "passed": report.passed(),
        "summary": report.summary_json(),
        "cases": report.cases.iter().map(|c| c.to_json(timings)).collect::<Vec<_>>(),
    });
    emit(common.format, &doc, |out| {
        for case in doc["cases"].as_array().expect("cases") {
            render_case(out, case);
        }
        writeln!(out, "{}", report.summary()).unwrap();
        writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" }).unwrap();
    });
    Ok(report.passed())
}

fn plain(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("({})", items.iter().map(plain).collect::<Vec<_>>().join(",")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_case(out: &mut String, case: &Value) {
    let status = if case["passed"] == json!(true) { "PASS" } else { "FAIL" };
    match case["seed"].as_u64() {
        Some(seed) => writeln!(out, "case {} (seed {seed}) {status}", case["index"]).unwrap(),
        None => writeln!(out, "case {} {status}", case["index"]).unwrap(),
    }
    let list = |v: &Value| {
        v.as_array()
            .map_or(String::new(), |a| a.iter().map(plain).collect::<Vec<_>>().join(" "))
    };
    writeln!(out, "  points {}", list(&case["configuration"])).unwrap();
    writeln!(out, "  weights {}", list(&case["weights"])).unwrap();
    if !case["factors"].is_null() {
        writeln!(out, "  factors {}", plain(&case["factors"])).unwrap();
    }
    if let Some(text) = case["adjoint"]["text"].as_str() {
        writeln!(out, "  adjoint {text}").unwrap();
    }
    if !case["lattice_index"].is_null() {
        writeln!(out, "  lattice index {}", case["lattice_index"]).unwrap();
    }
    if let Some(checks) = case["checks"].as_object() {
        for (name, status) in checks {
            let verdict = if status["passed"] == json!(true) {
                "pass"
            } else {
                "FAIL"
            };
            match status["detail"].as_str() {
                Some(d) => writeln!(out, "  {name} {verdict}: {d}").unwrap(),
                None => writeln!(out, "  {name} {verdict}").unwrap(),
            }
        }
    }
    let witness = &case["witness"];
    if !witness.is_null() {
        writeln!(
            out,
            "  witness {} at weight {}: {} vs {}",
            witness["check"].as_str().unwrap_or_default(),
            plain(&witness["weight"]),
            witness["left"]["text"].as_str().unwrap_or_default(),
            witness["right"]["text"].as_str().unwrap_or_default()
        )
        .unwrap();
        let d = &witness["differing_term"];
        if !d.is_null() {
            writeln!(
                out,
                "  differing term {}: {} vs {}",
                plain(&d["exponents"]),
                plain(&d["left"]),
                plain(&d["right"])
            )
            .unwrap();
        }
    }
    if let Some(e) = case["error"].as_str() {
        writeln!(out, "  error {e}").unwrap();
    }
    if let Some(t) = case["timings_ms"].as_object() {
        let parts: Vec<String> = t
            .iter()
            .map(|(k, v)| format!("{k} {:.3} ms", v.as_f64().unwrap_or(0.0)))
            .collect();
        writeln!(out, "  timings {}", parts.join(", ")).unwrap();
    }
}
