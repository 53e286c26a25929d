use std::fmt;
use std::io::Read;
use std::path::Path;

use adjoint_core::{IntVector, PointConfiguration, WeightVector};
use anyhow::Context;
use num_bigint::BigInt;
use serde::Deserialize;

/// `{"points": [[1,0,1], ...], "weight": [...], "factors": [...]}`
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub points: Vec<Vec<i64>>,
    #[serde(default)]
    pub weight: Option<Vec<i64>>,
    #[serde(default)]
    pub factors: Option<Vec<i64>>,
}

/// Malformed or invalid input; exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug)]
pub struct Input {
    pub configuration: PointConfiguration,
    pub weight: Option<WeightVector>,
    pub factors: Option<Vec<BigInt>>,
}

pub fn read(path: &Path) -> anyhow::Result<Input> {
    let name = path.display().to_string();
    let text = if name == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {name}"))?
    };
    parse(&text, &name)
}

pub fn parse(text: &str, name: &str) -> anyhow::Result<Input> {
    let doc: InputDocument =
        serde_json::from_str(text).map_err(|e| InputError(format!("{name}:{}:{}: {e}", e.line(), e.column())))?;
    let points: Vec<IntVector> = doc.points.into_iter().map(IntVector::from).collect();
    let configuration = adjoint_core::validate_configuration(points)
        .map_err(|e| InputError(format!("{name}: invalid configuration: {e}")))?;
    let weight = doc.weight.map(WeightVector::from);
    if let Some(w) = &weight {
        check_weight_length(&configuration, w, name)?;
    }
    let factors = doc.factors.map(|f| f.into_iter().map(BigInt::from).collect::<Vec<_>>());
    if let Some(f) = &factors {
        adjoint_core::geometry::scale_axes(&configuration, f)
            .map_err(|e| InputError(format!("{name}: field `factors`: {e}")))?;
    }
    Ok(Input {
        configuration,
        weight,
        factors,
    })
}

pub fn check_weight_length(cfg: &PointConfiguration, w: &WeightVector, source: &str) -> Result<(), InputError> {
    if w.len() == cfg.len() {
        Ok(())
    } else {
        Err(InputError(format!(
            "{source}: weight has {} entries for {} points",
            w.len(),
            cfg.len()
        )))
    }
}

/// `--weight 0,1,0,0,1`
pub fn parse_weight(s: &str) -> Result<WeightVector, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<BigInt>()
                .map_err(|e| format!("bad weight entry {x:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(WeightVector::new)
}
