//! Instance configuration files.
//!
//! One JSON file describes one instance: its kind, the learner to use, the
//! round budget, a seed for the randomized helpers, and kind-specific
//! parameters. Loading validates the whole file and reports the first
//! violation with a field path.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use alfsynth_core::boxes::{parse_rect, Rect};
use alfsynth_core::engine::Rank;
use alfsynth_core::invgen::{
    DenseProgram, DenseTs, LoopProgram, PredDef, Predicate, StateSpace, TransitionSystem,
    UpdateDef,
};
use alfsynth_core::samples::Point;
use alfsynth_core::synth::term::{parse_bool_term, parse_int_term};
use alfsynth_core::synth::{InputVar, SynthSpec};

/// Default cap on exhaustively scanned state or input spaces; the
/// `ALFSYNTH_MAX_STATES` environment variable overrides it. Oversized
/// instances are refused, never truncated.
pub const DEFAULT_MAX_STATES: u64 = 1 << 20;

pub fn max_states() -> u64 {
    std::env::var("ALFSYNTH_MAX_STATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config error at `{path}`: {reason}")]
    Schema { path: String, reason: String },
}

fn schema_error(path: impl Into<String>, reason: impl fmt::Display) -> ConfigError {
    ConfigError::Schema { path: path.into(), reason: reason.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum Kind {
    #[serde(rename = "interval")]
    Interval,
    #[serde(rename = "rectangle")]
    Rectangle,
    #[serde(rename = "houdini")]
    Houdini,
    #[serde(rename = "ice-invariant")]
    IceInvariant,
    #[serde(rename = "adequate-fixpoint")]
    AdequateFixpoint,
    #[serde(rename = "abstract-post")]
    AbstractPost,
    #[serde(rename = "sygus-lite")]
    SygusLite,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Interval => "interval",
            Kind::Rectangle => "rectangle",
            Kind::Houdini => "houdini",
            Kind::IceInvariant => "ice-invariant",
            Kind::AdequateFixpoint => "adequate-fixpoint",
            Kind::AbstractPost => "abstract-post",
            Kind::SygusLite => "sygus-lite",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: Kind,
    #[serde(default)]
    learner: Option<String>,
    budget: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    checked: bool,
    params: serde_json::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxParams {
    #[serde(default)]
    positives: Vec<serde_json::Value>,
    #[serde(default)]
    negatives: Vec<serde_json::Value>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    rank_cap: Option<Vec<u64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramJson {
    vars: Vec<String>,
    bounds: Vec<[i64; 2]>,
    init: String,
    guard: String,
    body: Vec<String>,
    post: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateJson {
    #[serde(default)]
    label: Option<String>,
    formula: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InvariantParams {
    program: ProgramJson,
    predicates: Vec<PredicateJson>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixpointParams {
    vars: Vec<String>,
    bounds: Vec<[i64; 2]>,
    init: String,
    /// Update branches; each branch lists one term per variable.
    post: Vec<Vec<String>>,
    bad: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbstractPostParams {
    vars: Vec<String>,
    bounds: Vec<[i64; 2]>,
    post: Vec<Vec<String>>,
    xhat: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputJson {
    name: String,
    lo: i64,
    hi: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SygusParams {
    inputs: Vec<InputJson>,
    #[serde(default = "default_constants")]
    constants: Vec<i64>,
    formula: String,
    #[serde(default)]
    rank_cap: Option<Vec<u64>>,
}

fn default_constants() -> Vec<i64> {
    vec![-1, 0, 1, 2]
}

/// Which learner drives the instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnerChoice {
    /// Ranked enumeration, smallest first.
    Occam,
    /// Maximal-expansion box learner.
    Wqo,
    /// Conjunction pruning to the semantically smallest hypothesis.
    Houdini,
    /// Subset enumeration, fewest predicates first.
    ConjOccam,
    /// Hull of the forced points.
    BoxJoin,
}

/// Fully validated instance parameters.
#[derive(Debug)]
pub enum InstanceParams {
    Interval { teacher_pos: Vec<Point>, teacher_neg: Vec<Point>, rank_cap: Rank },
    Rectangle { dim: usize, teacher_pos: Vec<Point>, teacher_neg: Vec<Point> },
    Invariant { program: DenseProgram, predicates: Vec<Predicate> },
    Fixpoint { ts: DenseTs },
    AbstractPost { ts: DenseTs, xhat: Rect },
    Sygus { spec: SynthSpec, rank_cap: Rank },
}

/// A validated configuration, ready to execute.
#[derive(Debug)]
pub struct InstanceConfig {
    pub kind: Kind,
    pub learner: LearnerChoice,
    pub budget: usize,
    pub seed: u64,
    pub checked: bool,
    pub params: InstanceParams,
    pub digest: String,
}

pub fn load_config(path: &Path) -> Result<InstanceConfig, ConfigError> {
    let bytes = std::fs::read(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    let digest = hex_digest(&bytes);
    let raw: RawConfig = serde_json::from_slice(&bytes)
        .map_err(|e| schema_error("<config>", e))?;
    let kind = raw.kind;
    let learner = resolve_learner(kind, raw.learner.as_deref())?;
    let params = validate_params(kind, raw.params)?;
    Ok(InstanceConfig {
        kind,
        learner,
        budget: raw.budget,
        seed: raw.seed,
        checked: raw.checked,
        params,
        digest,
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn resolve_learner(kind: Kind, name: Option<&str>) -> Result<LearnerChoice, ConfigError> {
    let allowed: &[(&str, LearnerChoice)] = match kind {
        Kind::Interval => &[("occam", LearnerChoice::Occam), ("wqo", LearnerChoice::Wqo)],
        Kind::Rectangle => &[("wqo", LearnerChoice::Wqo)],
        Kind::Houdini => &[("houdini", LearnerChoice::Houdini)],
        Kind::IceInvariant => {
            &[("conj-occam", LearnerChoice::ConjOccam), ("houdini", LearnerChoice::Houdini)]
        }
        Kind::AdequateFixpoint | Kind::AbstractPost => &[("box-join", LearnerChoice::BoxJoin)],
        Kind::SygusLite => &[("occam", LearnerChoice::Occam)],
    };
    match name {
        None => Ok(allowed[0].1),
        Some(n) => allowed
            .iter()
            .find(|(candidate, _)| *candidate == n)
            .map(|(_, choice)| *choice)
            .ok_or_else(|| {
                let names: Vec<&str> = allowed.iter().map(|(n, _)| *n).collect();
                schema_error(
                    "learner",
                    format!("`{n}` is not a learner for kind `{}` (expected one of: {})", kind.name(), names.join(", ")),
                )
            }),
    }
}

fn parse_points(
    values: &[serde_json::Value],
    dim: usize,
    path: &str,
) -> Result<Vec<Point>, ConfigError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let coords: Vec<i64> = if dim == 1 {
                match v {
                    serde_json::Value::Number(n) => {
                        vec![n.as_i64().ok_or_else(|| {
                            schema_error(format!("{path}[{i}]"), "expected an integer")
                        })?]
                    }
                    other => serde_json::from_value(other.clone()).map_err(|e| {
                        schema_error(format!("{path}[{i}]"), e)
                    })?,
                }
            } else {
                serde_json::from_value(v.clone())
                    .map_err(|e| schema_error(format!("{path}[{i}]"), e))?
            };
            if coords.len() != dim {
                return Err(schema_error(
                    format!("{path}[{i}]"),
                    format!("expected {dim} coordinates, got {}", coords.len()),
                ));
            }
            Ok(Point(coords))
        })
        .collect()
}

/// Hidden box targets must be realizable: the bounding box of the positives
/// may not contain a negative.
fn check_box_target(pos: &[Point], neg: &[Point], dim: usize) -> Result<(), ConfigError> {
    if pos.is_empty() {
        return Ok(());
    }
    let lo: Vec<i64> = (0..dim).map(|d| pos.iter().map(|p| p.0[d]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..dim).map(|d| pos.iter().map(|p| p.0[d]).max().unwrap()).collect();
    for n in neg {
        if (0..dim).all(|d| lo[d] <= n.0[d] && n.0[d] <= hi[d]) {
            return Err(schema_error(
                "params.negatives",
                format!("target unrealizable: negative {n} lies in the bounding box of the positives"),
            ));
        }
    }
    Ok(())
}

fn build_program(json: &ProgramJson) -> Result<DenseProgram, ConfigError> {
    if json.vars.len() != json.bounds.len() {
        return Err(schema_error(
            "params.program.bounds",
            format!("{} bounds for {} vars", json.bounds.len(), json.vars.len()),
        ));
    }
    if json.body.len() != json.vars.len() {
        return Err(schema_error(
            "params.program.body",
            format!("{} update terms for {} vars", json.body.len(), json.vars.len()),
        ));
    }
    let space = StateSpace::new(json.bounds.iter().map(|b| (b[0], b[1])).collect())
        .map_err(|e| schema_error("params.program.bounds", e))?;
    let init = parse_bool_term(&json.init, &json.vars, None)
        .map_err(|e| schema_error("params.program.init", e))?;
    let guard = parse_bool_term(&json.guard, &json.vars, None)
        .map_err(|e| schema_error("params.program.guard", e))?;
    let post = parse_bool_term(&json.post, &json.vars, None)
        .map_err(|e| schema_error("params.program.post", e))?;
    let body: Result<Vec<_>, ConfigError> = json
        .body
        .iter()
        .enumerate()
        .map(|(i, src)| {
            parse_int_term(src, &json.vars)
                .map_err(|e| schema_error(format!("params.program.body[{i}]"), e))
        })
        .collect();
    let program = LoopProgram {
        space,
        init: PredDef::Term(init),
        guard: PredDef::Term(guard),
        body: UpdateDef::Terms(body?),
        post: PredDef::Term(post),
    };
    DenseProgram::compile(&program, max_states())
        .map_err(|e| schema_error("params.program", e))
}

fn build_predicates(json: &[PredicateJson], vars: &[String]) -> Result<Vec<Predicate>, ConfigError> {
    if json.is_empty() {
        return Err(schema_error("params.predicates", "at least one predicate is required"));
    }
    json.iter()
        .enumerate()
        .map(|(i, p)| {
            let term = parse_bool_term(&p.formula, vars, None)
                .map_err(|e| schema_error(format!("params.predicates[{i}].formula"), e))?;
            let label = p.label.clone().unwrap_or_else(|| p.formula.clone());
            Ok(Predicate::new(label, term))
        })
        .collect()
}

fn build_ts(
    vars: &[String],
    bounds: &[[i64; 2]],
    init: Option<&str>,
    post: &[Vec<String>],
    bad: Option<&str>,
) -> Result<DenseTs, ConfigError> {
    if vars.len() != bounds.len() {
        return Err(schema_error(
            "params.bounds",
            format!("{} bounds for {} vars", bounds.len(), vars.len()),
        ));
    }
    if post.is_empty() {
        return Err(schema_error("params.post", "at least one update branch is required"));
    }
    let space = StateSpace::new(bounds.iter().map(|b| (b[0], b[1])).collect())
        .map_err(|e| schema_error("params.bounds", e))?;
    let init_term = match init {
        Some(src) => parse_bool_term(src, vars, None)
            .map_err(|e| schema_error("params.init", e))?,
        None => alfsynth_core::synth::term::BoolTerm::Const(false),
    };
    let bad_term = match bad {
        Some(src) => parse_bool_term(src, vars, None)
            .map_err(|e| schema_error("params.bad", e))?,
        None => alfsynth_core::synth::term::BoolTerm::Const(false),
    };
    let branches: Result<Vec<UpdateDef>, ConfigError> = post
        .iter()
        .enumerate()
        .map(|(b, branch)| {
            if branch.len() != vars.len() {
                return Err(schema_error(
                    format!("params.post[{b}]"),
                    format!("{} update terms for {} vars", branch.len(), vars.len()),
                ));
            }
            let terms: Result<Vec<_>, ConfigError> = branch
                .iter()
                .enumerate()
                .map(|(i, src)| {
                    parse_int_term(src, vars)
                        .map_err(|e| schema_error(format!("params.post[{b}][{i}]"), e))
                })
                .collect();
            Ok(UpdateDef::Terms(terms?))
        })
        .collect();
    let ts = TransitionSystem {
        space,
        init: PredDef::Term(init_term),
        branches: branches?,
        bad: PredDef::Term(bad_term),
    };
    DenseTs::compile(&ts, max_states()).map_err(|e| schema_error("params", e))
}

fn validate_params(kind: Kind, params: serde_json::Value) -> Result<InstanceParams, ConfigError> {
    match kind {
        Kind::Interval => {
            let p: BoxParams =
                serde_json::from_value(params).map_err(|e| schema_error("params", e))?;
            if let Some(d) = p.dim {
                if d != 1 {
                    return Err(schema_error("params.dim", "interval instances are 1-dimensional"));
                }
            }
            let pos = parse_points(&p.positives, 1, "params.positives")?;
            let neg = parse_points(&p.negatives, 1, "params.negatives")?;
            check_box_target(&pos, &neg, 1)?;
            let rank_cap = Rank(p.rank_cap.unwrap_or_else(|| vec![64]));
            Ok(InstanceParams::Interval { teacher_pos: pos, teacher_neg: neg, rank_cap })
        }
        Kind::Rectangle => {
            let p: BoxParams =
                serde_json::from_value(params).map_err(|e| schema_error("params", e))?;
            let dim = p.dim.ok_or_else(|| schema_error("params.dim", "missing field `dim`"))?;
            if dim == 0 {
                return Err(schema_error("params.dim", "dimension must be at least 1"));
            }
            if p.rank_cap.is_some() {
                return Err(schema_error("params.rank_cap", "rectangle instances have no rank cap"));
            }
            let pos = parse_points(&p.positives, dim, "params.positives")?;
            let neg = parse_points(&p.negatives, dim, "params.negatives")?;
            check_box_target(&pos, &neg, dim)?;
            Ok(InstanceParams::Rectangle { dim, teacher_pos: pos, teacher_neg: neg })
        }
        Kind::Houdini | Kind::IceInvariant => {
            let p: InvariantParams =
                serde_json::from_value(params).map_err(|e| schema_error("params", e))?;
            let program = build_program(&p.program)?;
            let predicates = build_predicates(&p.predicates, &p.program.vars)?;
            if predicates.len() > 20 {
                return Err(schema_error("params.predicates", "at most 20 predicates are supported"));
            }
            Ok(InstanceParams::Invariant { program, predicates })
        }
        Kind::AdequateFixpoint => {
            let p: FixpointParams =
                serde_json::from_value(params).map_err(|e| schema_error("params", e))?;
            let ts = build_ts(&p.vars, &p.bounds, Some(&p.init), &p.post, Some(&p.bad))?;
            Ok(InstanceParams::Fixpoint { ts })
        }
        Kind::AbstractPost => {
            let p: AbstractPostParams =
                serde_json::from_value(params).map_err(|e| schema_error("params", e))?;
            let ts = build_ts(&p.vars, &p.bounds, None, &p.post, None)?;
            let xhat =
                parse_rect(&p.xhat).map_err(|e| schema_error("params.xhat", e))?;
            if let Some(d) = xhat.dim() {
                if d != p.vars.len() {
                    return Err(schema_error(
                        "params.xhat",
                        format!("{} factors for {} vars", d, p.vars.len()),
                    ));
                }
            }
            Ok(InstanceParams::AbstractPost { ts, xhat })
        }
        Kind::SygusLite => {
            let p: SygusParams =
                serde_json::from_value(params).map_err(|e| schema_error("params", e))?;
            let names: BTreeSet<&str> = p.inputs.iter().map(|i| i.name.as_str()).collect();
            if names.len() != p.inputs.len() {
                return Err(schema_error("params.inputs", "input names must be distinct"));
            }
            let inputs: Vec<InputVar> = p
                .inputs
                .iter()
                .map(|i| InputVar { name: i.name.clone(), lo: i.lo, hi: i.hi })
                .collect();
            let spec = SynthSpec::new(inputs, p.constants, &p.formula, max_states())
                .map_err(|e| schema_error("params.formula", e))?;
            let rank_cap = Rank(p.rank_cap.unwrap_or_else(|| vec![8]));
            Ok(InstanceParams::Sygus { spec, rank_cap })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(json: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(json.as_bytes()).unwrap();
        file
    }

    #[test]
    fn loads_a_valid_interval_config() {
        let file = write_config(
            r#"{"kind":"interval","budget":20,"params":{"positives":[-2,5],"negatives":[-8]}}"#,
        );
        let config = load_config(file.path()).unwrap();
        assert_eq!(config.kind, Kind::Interval);
        assert_eq!(config.learner, LearnerChoice::Occam);
        assert_eq!(config.budget, 20);
        assert_eq!(config.digest.len(), 64);
    }

    #[test]
    fn missing_budget_names_the_field() {
        let file = write_config(r#"{"kind":"interval","params":{}}"#);
        let err = load_config(file.path()).unwrap_err();
        assert!(err.to_string().contains("budget"), "{err}");
    }

    #[test]
    fn unrealizable_rectangle_target_is_rejected() {
        let file = write_config(
            r#"{"kind":"rectangle","budget":10,"params":{"dim":2,"positives":[[0,0],[2,2]],"negatives":[[1,1]]}}"#,
        );
        let err = load_config(file.path()).unwrap_err();
        assert!(err.to_string().contains("target unrealizable"), "{err}");
    }

    #[test]
    fn learner_must_match_the_kind() {
        let file = write_config(
            r#"{"kind":"interval","learner":"houdini","budget":5,"params":{"positives":[1],"negatives":[]}}"#,
        );
        let err = load_config(file.path()).unwrap_err();
        assert!(err.to_string().contains("not a learner"), "{err}");
    }

    #[test]
    fn bad_formula_is_located() {
        let file = write_config(
            r#"{"kind":"sygus-lite","budget":5,"params":{"inputs":[{"name":"x","lo":0,"hi":1}],"formula":"(= (f x) z)"}}"#,
        );
        let err = load_config(file.path()).unwrap_err();
        assert!(err.to_string().contains("params.formula"), "{err}");
        assert!(err.to_string().contains('z'), "{err}");
    }
}
