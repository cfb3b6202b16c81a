//! Subcommand implementations. Each returns a JSON report and an exit code;
//! `main` only handles argument parsing and printing.

use std::fs;
use std::path::{Path, PathBuf};

use casimir_core::catalog;
use casimir_core::contraction::{self, NecessaryCondition, SampleOutcome};
use casimir_core::invariants::{self, Certify, CountOptions, InvariantReport, AUTO_CERTIFY_MAX_DIM};
use casimir_core::LieAlgebra;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::{self, AlgebraFile, FormatError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MATH: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Format(FormatError::SingularFamily { .. }) => EXIT_MATH,
            _ => EXIT_USAGE,
        }
    }
}

/// What a subcommand produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub report: Value,
    /// Text for stdout in place of the JSON report.
    pub raw: Option<String>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(code: u8, report: Value) -> Self {
        Outcome {
            code,
            report,
            raw: None,
            warnings: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        match &self.raw {
            Some(raw) => raw.clone(),
            None => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// Shared sampling flags.
#[derive(Clone, Debug)]
pub struct SamplingArgs {
    pub trials: usize,
    pub bound: u64,
    pub seed: u64,
    pub certify: bool,
}

impl Default for SamplingArgs {
    fn default() -> Self {
        SamplingArgs {
            trials: invariants::DEFAULT_TRIALS,
            bound: invariants::DEFAULT_BOUND,
            seed: invariants::DEFAULT_SEED,
            certify: false,
        }
    }
}

impl SamplingArgs {
    fn options(&self) -> Result<CountOptions, CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if self.bound < 2 {
            return Err(CliError::Usage("--bound must be at least 2".into()));
        }
        Ok(CountOptions {
            trials: self.trials,
            bound: self.bound,
            certify: if self.certify { Certify::Always } else { Certify::Auto },
            seed: self.seed,
            max_degree: None,
        })
    }

    fn warnings_for(&self, alg: &LieAlgebra) -> Vec<String> {
        if !self.certify && alg.dim() > AUTO_CERTIFY_MAX_DIM {
            vec![format!(
                "dimension {} > {AUTO_CERTIFY_MAX_DIM}: rank is sampled, not certified (pass --certify to force)",
                alg.dim()
            )]
        } else {
            Vec::new()
        }
    }
}

struct Input {
    path: String,
    digest: String,
    text: String,
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))?;
    Ok(Input {
        path: path.display().to_string(),
        digest,
        text,
    })
}

fn load_algebra(path: &Path) -> Result<(Input, LieAlgebra), CliError> {
    let input = read_input(path)?;
    let alg = format::parse_algebra(&input.text, &input.path)?;
    Ok((input, alg))
}

fn envelope(command: &str, inputs: &[&Input], result: Value) -> Value {
    json!({
        "tool": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "inputs": inputs.iter().map(|i| json!({ "path": i.path, "sha256": i.digest })).collect::<Vec<_>>(),
        "result": result,
    })
}

fn jacobi_json(alg: &LieAlgebra) -> (bool, Value) {
    let report = alg.jacobi_check();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "triple": [v.triple.0 + 1, v.triple.1 + 1, v.triple.2 + 1],
                "residual": v.residual.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    (report.is_pass(), Value::Array(violations))
}

fn count_json(r: &InvariantReport) -> Value {
    json!({
        "dimension": r.dim,
        "generic_rank": r.generic_rank,
        "invariant_count": r.invariant_count,
        "rank_certified": r.rank_certified,
        "sampled_rank": r.sampled_rank,
        "trials": r.sample_trials,
        "bound": r.sample_bound,
        "seed": r.seed,
    })
}

/// Parse errors propagate as `Err`; Jacobi failures are an `Outcome` with code 2.
fn require_lie(command: &str, input: &Input, alg: &LieAlgebra) -> Option<Outcome> {
    let (pass, violations) = jacobi_json(alg);
    (!pass).then(|| {
        Outcome::new(
            EXIT_MATH,
            envelope(
                command,
                &[input],
                json!({ "jacobi": "fail", "violations": violations }),
            ),
        )
    })
}

pub fn check(path: &Path) -> Result<Outcome, CliError> {
    let (input, alg) = load_algebra(path)?;
    let (pass, violations) = jacobi_json(&alg);
    let result = json!({
        "dimension": alg.dim(),
        "jacobi": if pass { "pass" } else { "fail" },
        "violations": violations,
    });
    Ok(Outcome::new(
        if pass { EXIT_OK } else { EXIT_MATH },
        envelope("check", &[&input], result),
    ))
}

pub fn count(path: &Path, sampling: &SamplingArgs) -> Result<Outcome, CliError> {
    let opts = sampling.options()?;
    let (input, alg) = load_algebra(path)?;
    if let Some(fail) = require_lie("count", &input, &alg) {
        return Ok(fail);
    }
    let report = invariants::invariant_count(&alg, &opts);
    let mut out = Outcome::new(EXIT_OK, envelope("count", &[&input], count_json(&report)));
    out.warnings = sampling.warnings_for(&alg);
    Ok(out)
}

pub fn invariants(path: &Path, max_degree: u32, sampling: &SamplingArgs) -> Result<Outcome, CliError> {
    if max_degree == 0 {
        return Err(CliError::Usage("--max-degree must be at least 1".into()));
    }
    let opts = sampling.options()?;
    let (input, alg) = load_algebra(path)?;
    if let Some(fail) = require_lie("invariants", &input, &alg) {
        return Ok(fail);
    }
    let found = invariants::polynomial_invariants(&alg, max_degree);
    let independent = invariants::functional_independence_check(&found, opts.trials, opts.bound, opts.seed);
    let count = invariants::invariant_count(&alg, &opts);
    let variables: Vec<String> = alg
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| format!("x{} = {l}", i + 1))
        .collect();
    let result = json!({
        "max_degree": max_degree,
        "variables": variables,
        "invariants": found.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "independence_lower_bound": independent,
        "invariant_count": count.invariant_count,
        "rank_certified": count.rank_certified,
    });
    let mut out = Outcome::new(EXIT_OK, envelope("invariants", &[&input], result));
    out.warnings = sampling.warnings_for(&alg);
    Ok(out)
}

pub fn contract(
    algebra_path: &Path,
    family_path: &Path,
    emit: Option<&Path>,
    check_semicontinuity: bool,
    sampling: &SamplingArgs,
) -> Result<Outcome, CliError> {
    let opts = sampling.options()?;
    let (input, alg) = load_algebra(algebra_path)?;
    let fam_input = read_input(family_path)?;
    let family = format::parse_family(&fam_input.text, &fam_input.path)?;
    if family.dim() != alg.dim() {
        return Err(CliError::Usage(format!(
            "algebra has dimension {} but the family is {}x{}",
            alg.dim(),
            family.dim(),
            family.dim()
        )));
    }
    if let Some(fail) = require_lie("contract", &input, &alg) {
        return Ok(fail);
    }
    let inputs = [&input, &fam_input];
    let eps = match contraction::apply_family(&alg, &family) {
        Ok(eps) => eps,
        Err(e) => return Ok(math_failure("contract", &inputs, &e)),
    };
    let limit = match contraction::contract_limit(&eps) {
        Ok(l) => l,
        Err(e) => return Ok(math_failure("contract", &inputs, &e)),
    };
    if let Some(path) = emit {
        fs::write(path, format::emit_algebra(&limit)).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let mono = contraction::verify_monotonicity(&alg, &limit, &opts).expect("dimensions agree");
    let mut holds = mono.holds();
    let mut result = json!({
        "limit": AlgebraFile::from_algebra(&limit),
        "emitted": emit.map(|p| p.display().to_string()),
        "monotonicity": {
            "source": count_json(&mono.source),
            "limit": count_json(&mono.limit),
            "holds": mono.holds(),
        },
    });
    if check_semicontinuity {
        let report = contraction::semicontinuity_check(&eps, &limit, &contraction::default_samples(), &opts);
        holds &= report.holds();
        let samples: Vec<Value> = report
            .samples
            .iter()
            .map(|s| match &s.outcome {
                SampleOutcome::Checked { rank, holds } => {
                    json!({ "eps": s.eps.to_string(), "rank": rank, "holds": holds })
                }
                SampleOutcome::Skipped { reason } => json!({ "eps": s.eps.to_string(), "skipped": reason }),
            })
            .collect();
        result["semicontinuity"] = json!({
            "limit_rank": report.limit_rank,
            "samples": samples,
            "holds": report.holds(),
        });
    }
    Ok(Outcome::new(
        if holds { EXIT_OK } else { EXIT_MATH },
        envelope("contract", &inputs, result),
    ))
}

fn math_failure(command: &str, inputs: &[&Input], err: &contraction::ContractionError) -> Outcome {
    let mut result = json!({ "error": err.to_string() });
    if let contraction::ContractionError::DivergentLimit { i, j, k } = err {
        result["divergent"] = json!({ "i": i + 1, "j": j + 1, "k": k + 1 });
    }
    Outcome::new(EXIT_MATH, envelope(command, inputs, result))
}

pub fn rule_out(path0: &Path, path1: &Path, sampling: &SamplingArgs) -> Result<Outcome, CliError> {
    let opts = sampling.options()?;
    let (in0, l0) = load_algebra(path0)?;
    let (in1, l1) = load_algebra(path1)?;
    for (input, alg) in [(&in0, &l0), (&in1, &l1)] {
        if let Some(fail) = require_lie("rule-out", input, alg) {
            return Ok(fail);
        }
    }
    let n0 = (l0.dim() == l1.dim()).then(|| invariants::invariant_count(&l0, &opts).invariant_count);
    let n1 = (l0.dim() == l1.dim()).then(|| invariants::invariant_count(&l1, &opts).invariant_count);
    let (verdict, reason) = match contraction::contraction_necessary_condition(&l0, &l1, &opts) {
        NecessaryCondition::RuledOut { reason } => ("RuledOut", Some(reason)),
        NecessaryCondition::Possible => ("Possible", None),
    };
    let result = json!({
        "verdict": verdict,
        "reason": reason,
        "invariant_counts": [n0, n1],
    });
    let mut out = Outcome::new(EXIT_OK, envelope("rule-out", &[&in0, &in1], result));
    out.warnings = sampling.warnings_for(&l0);
    Ok(out)
}

pub fn catalog_entry(name: &str, params: &[usize], emit: Option<&Path>) -> Result<Outcome, CliError> {
    let alg = catalog::build(name, params).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = format::emit_algebra(&alg);
    match emit {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Write {
                path: path.to_path_buf(),
                source,
            })?;
            let result = json!({ "name": name, "params": params, "dimension": alg.dim(), "emitted": path.display().to_string() });
            Ok(Outcome::new(EXIT_OK, envelope("catalog", &[], result)))
        }
        None => Ok(Outcome {
            code: EXIT_OK,
            report: Value::Null,
            raw: Some(text),
            warnings: Vec::new(),
        }),
    }
}
