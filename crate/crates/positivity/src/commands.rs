//! The four commands, returning a text report, a JSON document and an exit
//! code instead of printing, so they can be driven from tests.

use std::fs;
use std::path::Path;
use std::time::Instant;

use positivity_core::prover::{ScalarOutcome, DEFAULT_BUDGET};
use positivity_core::recurrence::{unroll, MatrixRecurrence};
use positivity_core::spectral::{char_poly, check_hypotheses, HypothesisReport};
use positivity_core::transform::TOLERANCE_SCHEDULE;
use positivity_core::verifier::StepResult;
use positivity_core::{
    positivity_proof, prove_recurrence, verify, Error, Outcome, ProverOptions, Rational, Recurrence, Sign,
    VerifyOptions,
};
use serde_json::{json, Value};

use crate::formats::{emit_rational, CertificateFile, Metadata, Problem, ProblemFile};

pub mod exit {
    /// Positive, or certificate accepted.
    pub const OK: u8 = 0;
    /// Not positive, or certificate rejected.
    pub const NEGATIVE: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const HYPOTHESIS: u8 = 3;
    /// Malformed input or command line.
    pub const USAGE: u8 = 64;
    /// Input file cannot be read.
    pub const NO_INPUT: u8 = 66;
    /// Internal error.
    pub const SOFTWARE: u8 = 70;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: exit::USAGE, message: message.into() }
    }

    fn from_core(e: Error) -> Self {
        let code = match &e {
            Error::InsufficientPrefix { .. }
            | Error::InconsistentPrefix { .. }
            | Error::DimensionMismatch(_)
            | Error::DenominatorZero { .. } => exit::USAGE,
            Error::NotPoincareType
            | Error::HypothesisViolation(_)
            | Error::NoUniqueDominant
            | Error::NotSimple
            | Error::ZeroSpectrum
            | Error::Singular => exit::HYPOTHESIS,
            Error::PowerCapExceeded(_) => exit::INCONCLUSIVE,
            _ => exit::SOFTWARE,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug)]
pub struct Report {
    pub code: u8,
    pub text: String,
    pub json: Value,
    pub certificate: Option<CertificateFile>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError { code: exit::NO_INPUT, message: format!("{}: {e}", path.display()) })
}

pub fn load_problem(path: &Path) -> Result<(ProblemFile, Problem), CliError> {
    let with_path = |e: crate::formats::FormatError| CliError::usage(format!("{}: {e}", path.display()));
    let file = ProblemFile::parse(&read(path)?).map_err(with_path)?;
    let problem = file.to_problem().map_err(with_path)?;
    Ok((file, problem))
}

pub fn load_certificate(path: &Path) -> Result<CertificateFile, CliError> {
    CertificateFile::parse(&read(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn list(v: &[Rational]) -> Vec<String> {
    v.iter().map(emit_rational).collect()
}

/// `u_0, ..., u_{count-1}`, using the prefix wherever `p_d` vanishes.
pub fn scalar_terms(rec: &Recurrence, prefix: &[Rational], count: usize) -> Result<Vec<Rational>, CliError> {
    let norm = rec.normalize(prefix).map_err(CliError::from_core)?;
    let mut out = norm.prefix.clone();
    let rest = count.saturating_sub(out.len());
    out.extend(norm.recurrence.terms(rest).map_err(CliError::from_core)?);
    out.truncate(count);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ProveFlags {
    pub budget: u64,
    pub strict: bool,
}

impl Default for ProveFlags {
    fn default() -> Self {
        ProveFlags { budget: DEFAULT_BUDGET, strict: false }
    }
}

fn report_lines(report: &HypothesisReport) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(s) = &report.spectrum {
        lines.push(format!("dominant eigenvalue: {} (~ {:.6})", s.lambda, s.lambda.to_f64()));
        lines.push(format!("unique: {}, simple: {}", s.is_unique, s.is_simple));
        lines.push(format!("other eigenvalues have modulus at most {}", s.modulus_gap_witness));
    }
    if let Some(e) = &report.eigenvector {
        let shown: Vec<String> = e.iter().map(ToString::to_string).collect();
        lines.push(format!("eigenvector (L = lambda): ({})", shown.join(", ")));
    }
    lines.extend(report.notes.iter().cloned());
    lines
}

pub fn prove(problem: &Problem, flags: &ProveFlags) -> Result<Report, CliError> {
    let options = ProverOptions { budget: flags.budget, strict: flags.strict, ..ProverOptions::default() };
    let start = Instant::now();
    let (outcome, shift, witness) = match problem {
        Problem::Scalar { recurrence, prefix } => {
            let res: ScalarOutcome = prove_recurrence(recurrence, prefix, &options).map_err(CliError::from_core)?;
            let witness = match res.witness_term() {
                Some(n) => {
                    let u = scalar_terms(recurrence, prefix, n as usize + 1)?;
                    Some((format!("u_{n}"), u[n as usize].clone(), json!({ "index": n })))
                }
                None => None,
            };
            (res.outcome, res.normalized.shift, witness)
        }
        Problem::Matrix { recurrence, initial } => {
            let outcome = positivity_proof(recurrence, initial, &options).map_err(CliError::from_core)?;
            let witness = match outcome {
                Outcome::NonPositive { index, coordinate } => {
                    let u = unroll(recurrence, initial, index).map_err(CliError::from_core)?;
                    let value = u[index as usize][coordinate].clone();
                    Some((format!("U_{index}[{coordinate}]"), value, json!({ "index": index, "coordinate": coordinate })))
                }
                _ => None,
            };
            (outcome, 0, witness)
        }
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let report = match outcome {
        Outcome::Positive { certificate, details } => {
            let metadata = Metadata {
                tool_version: env!("CARGO_PKG_VERSION").into(),
                tolerance_schedule: TOLERANCE_SCHEDULE.to_vec(),
                tolerance: details.tolerance.as_ref().map(emit_rational),
                lambda: Some(details.lambda.to_string()),
                k: Some(details.k),
                shift,
                elapsed_ms,
            };
            let file = CertificateFile::from_certificate(&certificate, Some(metadata));
            let mut text = format!(
                "Positive\nlambda = {} (~ {:.6})\nconditions hold from n = {}\nT =\n{}r = {}, N = {}, m = {}\n",
                details.lambda,
                details.lambda.to_f64(),
                details.k, certificate.t, certificate.r, certificate.n, certificate.m
            );
            if shift > 0 {
                text.push_str(&format!("certificate refers to u'_n = u_(n+{shift})\n"));
            }
            let json = json!({ "command": "prove", "outcome": "positive", "certificate": file });
            Report { code: exit::OK, text, json, certificate: Some(file) }
        }
        Outcome::PositiveTrivial => Report {
            code: exit::OK,
            text: "Positive (identically zero)\n".into(),
            json: json!({ "command": "prove", "outcome": "positive", "trivial": true }),
            certificate: None,
        },
        Outcome::NonPositive { .. } => {
            let (name, value, mut loc) = witness.expect("witness for a non-positive outcome");
            loc["value"] = json!(emit_rational(&value));
            let kind = if Sign::of(&value).is_zero() { "zero" } else { "negative" };
            Report {
                code: exit::NEGATIVE,
                text: format!("NonPositive\nwitness: {name} = {}\n", emit_rational(&value)),
                json: json!({ "command": "prove", "outcome": "non_positive", "witness": loc, "kind": kind }),
                certificate: None,
            }
        }
        Outcome::Inconclusive { budget_used } => Report {
            code: exit::INCONCLUSIVE,
            text: format!("Inconclusive: no certificate within {budget_used} terms\n"),
            json: json!({ "command": "prove", "outcome": "inconclusive", "budget_used": budget_used }),
            certificate: None,
        },
        Outcome::HypothesisFailure { reason, report } => {
            let notes = report.as_ref().map(report_lines).unwrap_or_default();
            let mut text = format!("HypothesisFailure: {reason}\n");
            for line in &notes {
                text.push_str(&format!("  {line}\n"));
            }
            Report {
                code: exit::HYPOTHESIS,
                text,
                json: json!({ "command": "prove", "outcome": "hypothesis_failure", "reason": reason, "report": notes }),
                certificate: None,
            }
        }
    };
    Ok(report)
}

fn step_text(step: &StepResult) -> String {
    match step {
        StepResult::Passed => "passed".into(),
        StepResult::Failed(why) => format!("failed: {why}"),
        StepResult::Skipped => "skipped".into(),
    }
}

fn rejected(reason: String) -> Report {
    Report {
        code: exit::NEGATIVE,
        text: format!("rejected\n{reason}\n"),
        json: json!({ "command": "verify", "accepted": false, "failure": reason }),
        certificate: None,
    }
}

pub fn verify_certificate(problem: &Problem, file: &CertificateFile, strict: bool) -> Result<Report, CliError> {
    let cert = file.to_certificate().map_err(|e| CliError::usage(e.0))?;
    let (rec, u0): (MatrixRecurrence, Vec<Rational>) = match problem {
        Problem::Scalar { recurrence, prefix } => {
            let norm = recurrence.normalize(prefix).map_err(CliError::from_core)?;
            for (i, u) in norm.prefix.iter().enumerate() {
                let s = Sign::of(u);
                if s.is_negative() || (strict && s.is_zero()) {
                    return Ok(rejected(format!("initialization: failed: u_{i} = {u}")));
                }
            }
            (norm.recurrence.companion().map_err(CliError::from_core)?, norm.recurrence.initial().to_vec())
        }
        Problem::Matrix { recurrence, initial } => (recurrence.clone(), initial.clone()),
    };
    if cert.t.rows() != rec.dim() {
        return Ok(rejected(format!("sanity: failed: T is {0}x{0}, expected {1}x{1}", cert.t.rows(), rec.dim())));
    }
    let start = Instant::now();
    let report = match verify(&rec, &u0, &cert, &VerifyOptions { strict }) {
        Ok(r) => r,
        Err(e) => return Ok(rejected(format!("sanity: failed: {e}"))),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let verdict = if report.accepted { "accepted" } else { "rejected" };
    let mut text = format!(
        "{verdict}\nsanity: {}\ninitialization: {}\ninduction: {}\npolynomials checked: {}\nlambda = {}\n",
        step_text(&report.sanity),
        step_text(&report.initialization),
        step_text(&report.induction),
        report.polynomials_checked,
        report.lambda
    );
    if let Some(detail) = &report.failure_detail {
        text.push_str(&format!("detail: {detail}\n"));
    }
    text.push_str(&format!("elapsed: {elapsed_ms} ms\n"));
    let json = json!({
        "command": "verify",
        "accepted": report.accepted,
        "sanity": step_text(&report.sanity),
        "initialization": step_text(&report.initialization),
        "induction": step_text(&report.induction),
        "polynomials_checked": report.polynomials_checked,
        "lambda": report.lambda.to_string(),
        "failure": report.failure_detail,
        "elapsed_ms": elapsed_ms,
    });
    let code = if report.accepted { exit::OK } else { exit::NEGATIVE };
    Ok(Report { code, text, json, certificate: None })
}

pub fn eval(problem: &Problem, n: u64) -> Result<Report, CliError> {
    let (lines, values): (Vec<String>, Value) = match problem {
        Problem::Scalar { recurrence, prefix } => {
            let terms = list(&scalar_terms(recurrence, prefix, n as usize + 1)?);
            (terms.iter().enumerate().map(|(i, u)| format!("u_{i} = {u}")).collect(), json!(terms))
        }
        Problem::Matrix { recurrence, initial } => {
            let vectors: Vec<Vec<String>> =
                unroll(recurrence, initial, n).map_err(CliError::from_core)?.iter().map(|v| list(v)).collect();
            let lines = vectors.iter().enumerate().map(|(i, v)| format!("U_{i} = ({})", v.join(", "))).collect();
            (lines, json!(vectors))
        }
    };
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(Report { code: exit::OK, text, json: json!({ "command": "eval", "terms": values }), certificate: None })
}

pub fn inspect(problem: &Problem) -> Result<Report, CliError> {
    let (rec, companion) = match problem {
        Problem::Scalar { recurrence, prefix } => {
            let norm = recurrence.normalize(prefix).map_err(CliError::from_core)?;
            (norm.recurrence.companion().map_err(CliError::from_core)?, true)
        }
        Problem::Matrix { recurrence, .. } => (recurrence.clone(), false),
    };
    let a = match rec.limit_matrix() {
        Ok(a) => a,
        Err(e) => {
            return Ok(Report {
                code: exit::HYPOTHESIS,
                text: format!("{e}\n"),
                json: json!({ "command": "inspect", "passed": false, "failure": e.to_string() }),
                certificate: None,
            })
        }
    };
    let chi = char_poly(&a);
    let eigen: Vec<String> = chi.real_roots().iter().map(ToString::to_string).collect();
    let report = check_hypotheses(&a, companion);
    let lines = report_lines(&report);
    let mut text = format!("limit matrix:\n{a}characteristic polynomial: {chi}\nreal eigenvalues: {}\n", eigen.join(", "));
    for line in &lines {
        text.push_str(line);
        text.push('\n');
    }
    let passed = report.passed();
    text.push_str(if passed { "hypotheses: satisfied\n" } else { "hypotheses: not satisfied\n" });
    let json = json!({
        "command": "inspect",
        "limit_matrix": a.to_rows().iter().map(|r| list(r)).collect::<Vec<_>>(),
        "characteristic_polynomial": list(chi.coeffs()),
        "real_eigenvalues": eigen,
        "lambda": report.spectrum.as_ref().map(|s| s.lambda.to_string()),
        "minimal_polynomial": report.spectrum.as_ref().map(|s| list(s.lambda.minpoly().coeffs())),
        "passed": passed,
        "notes": lines,
    });
    Ok(Report { code: if passed { exit::OK } else { exit::HYPOTHESIS }, text, json, certificate: None })
}
