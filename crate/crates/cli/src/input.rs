use std::fmt::Display;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use unitdist::distgraph::PointSet;
use unitdist::genericity::DependencyScheme;
use unitdist::norms::Norm;
use unitdist::qlinalg::QVector;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation: exit status 2.
    Usage(String),
    /// Valid invocation that failed on its inputs: exit status 1.
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn domain(kind: &'static str, e: impl Display) -> Self {
        CliError::Domain { kind, message: e.to_string() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.as_str()),
            CliError::Domain { kind, message } => (*kind, message.as_str()),
        };
        serde_json::json!({ "error": kind, "message": message }).to_string()
    }
}

macro_rules! domain_from {
    ($($t:ty => $kind:literal),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::domain($kind, e)
            }
        })*
    };
}

domain_from! {
    unitdist::norms::NormError => "norm",
    unitdist::distgraph::GraphError => "graph",
    unitdist::constructions::ConstructionError => "construction",
    unitdist::deplab::DeplabError => "deplab",
    unitdist::genericity::GenericityError => "genericity",
    unitdist::qlinalg::LinalgError => "linalg",
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::domain("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::domain("json", format!("{}: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(v: Value, path: &Path) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::domain("json", format!("{}: {e}", path.display())))
}

/// A norm file, or the output of `approx` (`polytope`) or `generic sample`
/// (`perturbed`).
pub fn load_norm(path: &Path) -> Result<Norm, CliError> {
    let v = read_json(path)?;
    let inner = ["perturbed", "polytope"].iter().find_map(|k| v.get(*k).filter(|x| x.get("kind").is_some()).cloned());
    decode(inner.unwrap_or(v), path)
}

/// A point-set file, or any object whose `points` field is one (such as
/// the output of `construct`).
pub fn load_points(path: &Path) -> Result<PointSet, CliError> {
    let v = read_json(path)?;
    let v = match v.get("points") {
        Some(inner) if inner.get("mode").is_some() => inner.clone(),
        _ => v,
    };
    decode(v, path)
}

/// A bare list of vectors, an object with a `vectors` list, or an exact
/// point set.
pub fn load_vectors(path: &Path) -> Result<Vec<QVector>, CliError> {
    let v = read_json(path)?;
    if v.get("mode").is_some() {
        let ps: PointSet = decode(v, path)?;
        return ps
            .exact_points()
            .map(<[QVector]>::to_vec)
            .ok_or_else(|| CliError::domain("graph", "vectors must be exact"));
    }
    let list = v.get("vectors").cloned().unwrap_or(v);
    decode(list, path)
}

/// A list of `[x, y]` pairs, or an object with an `edges` list.
pub fn load_edges(path: &Path) -> Result<Vec<(usize, usize)>, CliError> {
    let v = read_json(path)?;
    let list = v.get("edges").cloned().unwrap_or(v);
    decode(list, path)
}

/// One scheme or a list of schemes.
pub fn load_schemes(path: &Path) -> Result<Vec<DependencyScheme>, CliError> {
    let v = read_json(path)?;
    if v.is_array() {
        decode(v, path)
    } else {
        Ok(vec![decode(v, path)?])
    }
}
