//! Search for positivity certificates.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cone::{induction_conditions, joint_threshold, Cone, Radius};
use crate::error::{Error, Result};
use crate::linalg::{apply_integer, Matrix};
use crate::numbers::{int, AlgebraicReal, Field, FieldElement, Rational, Sign};
use crate::recurrence::{MatrixRecurrence, Normalized, Recurrence, ScaledVector};
use crate::spectral::{check_hypotheses, eigenvector, HypothesisReport};
use crate::transform::{complete, find_transform, TransformResult, DEFAULT_M_CAP};

pub const DEFAULT_BUDGET: u64 = 100_000;

/// `(T, r, N, m)`: `T U_n` stays in `B_r(T e)` under the blocks
/// `A(n+m-1) ... A(n)` for `n >= N`, and `T U_N, ..., T U_{N+m-1}` start
/// inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub t: Matrix<Rational>,
    pub r: Radius,
    pub n: u64,
    pub m: u32,
}

/// Intermediate values of a successful search, for reporting.
#[derive(Clone, Debug)]
pub struct ProofDetails {
    pub lambda: Arc<AlgebraicReal>,
    pub v: Vec<FieldElement>,
    /// Index from which the induction conditions hold.
    pub k: u64,
    pub tolerance: Option<Rational>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Positive { certificate: Certificate, details: ProofDetails },
    /// `U_0 = 0`: the sequence vanishes identically.
    PositiveTrivial,
    /// `U_index` has a negative (in strict mode, nonpositive) entry at `coordinate`.
    NonPositive { index: u64, coordinate: usize },
    Inconclusive { budget_used: u64 },
    HypothesisFailure { reason: String, report: Option<HypothesisReport> },
}

impl Outcome {
    pub fn is_positive(&self) -> bool {
        matches!(self, Outcome::Positive { .. } | Outcome::PositiveTrivial)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Positive { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProverOptions {
    pub budget: u64,
    pub strict: bool,
    pub transform_override: Option<Matrix<Rational>>,
    pub m_cap: u32,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions { budget: DEFAULT_BUDGET, strict: false, transform_override: None, m_cap: DEFAULT_M_CAP }
    }
}

fn violates(sign: Sign, strict: bool) -> bool {
    sign.is_negative() || (strict && sign.is_zero())
}

fn first_violation(u: &ScaledVector, strict: bool) -> Option<usize> {
    (0..u.numer.len()).find(|&i| violates(u.sign(i), strict))
}

/// `r = inf` if `T^{-1}` maps the open orthant into itself, otherwise the
/// first of `2, 3/2, 5/4, ...` whose cone has a positive image.
pub fn find_radius<K: Field>(t_inv: &Matrix<Rational>, v: &[K]) -> Result<Radius> {
    let cone = Cone::new(v.to_vec(), Radius::Infinite)?;
    if cone.image_positive(t_inv) {
        return Ok(Radius::Infinite);
    }
    let mut r = int(2);
    for _ in 0..256 {
        let cone = Cone::new(v.to_vec(), Radius::Finite(r.clone()))?;
        if cone.image_positive(t_inv) {
            return Ok(Radius::Finite(r));
        }
        r = (r + Rational::one()) / int(2);
    }
    Err(Error::HypothesisViolation("T^-1 v is not positive".into()))
}

/// Least `K` such that the induction conditions hold for every `n >= K`.
pub fn find_k<K: Field>(rec: &MatrixRecurrence, t: &Matrix<Rational>, t_inv: &Matrix<Rational>, cone: &Cone<K>, m: u32) -> Option<u64> {
    let (num, den) = rec.block_product(m);
    let conditions = induction_conditions(cone, t, t_inv, &num, &den)?;
    joint_threshold(&conditions)
}

fn scan_for_violation(rec: &MatrixRecurrence, u0: &[Rational], strict: bool, budget: u64) -> Result<Outcome> {
    let mut it = rec.unroller(u0)?;
    loop {
        if let Some(c) = first_violation(it.current(), strict) {
            return Ok(Outcome::NonPositive { index: it.index(), coordinate: c });
        }
        if it.index() >= budget {
            return Ok(Outcome::Inconclusive { budget_used: budget });
        }
        it.step()?;
    }
}

/// Decides positivity of `U_n` for `U_{n+1} = A(n) U_n`, or gives up after
/// `options.budget` terms.
pub fn positivity_proof(rec: &MatrixRecurrence, u0: &[Rational], options: &ProverOptions) -> Result<Outcome> {
    let d = rec.dim();
    if u0.len() != d {
        return Err(Error::DimensionMismatch(format!("U_0 has length {}, expected {d}", u0.len())));
    }
    if u0.iter().all(Zero::is_zero) {
        return Ok(if options.strict {
            Outcome::NonPositive { index: 0, coordinate: 0 }
        } else {
            Outcome::PositiveTrivial
        });
    }
    let fail = |reason: String, report: Option<HypothesisReport>| Ok(Outcome::HypothesisFailure { reason, report });
    let a = match rec.limit_matrix() {
        Ok(a) => a,
        Err(e) => return fail(format!("{e}"), None),
    };
    if let Err(e) = rec.check_invertible() {
        return fail(format!("{e}"), None);
    }
    let report = check_hypotheses(&a, rec.is_companion());
    if let Some(e) = &report.failure {
        return fail(format!("{e}"), Some(report.clone()));
    }
    if report.lambda_sign.is_negative() {
        return scan_for_violation(rec, u0, options.strict, options.budget);
    }
    let spectrum = report.spectrum.clone().expect("spectrum present when no failure");
    if !report.eigenvector_positive {
        return fail("eigenvector not positive".into(), Some(report));
    }
    let lambda = spectrum.lambda.clone();
    let transform = match &options.transform_override {
        Some(t) => {
            if t.rows() != d || t.cols() != d {
                return Err(Error::DimensionMismatch("transform override has the wrong shape".into()));
            }
            let e = eigenvector(&a, &lambda, rec.is_companion());
            complete(t.clone(), &a, &e, options.m_cap, None)?
        }
        None => find_transform(&a, &lambda, rec.is_companion(), options.m_cap)?,
    };
    let rational_v: Option<Vec<Rational>> = transform.v.iter().map(FieldElement::as_rational).collect();
    match rational_v {
        Some(v) => search(rec, u0, options, transform, lambda, v),
        None => {
            let v = transform.v.clone();
            search(rec, u0, options, transform, lambda, v)
        }
    }
}

fn search<K: Field>(
    rec: &MatrixRecurrence,
    u0: &[Rational],
    options: &ProverOptions,
    transform: TransformResult,
    lambda: Arc<AlgebraicReal>,
    v: Vec<K>,
) -> Result<Outcome> {
    let TransformResult { t, t_inv, m, v: v_field, tolerance } = transform;
    let mut radius = find_radius(&t_inv, &v)?;
    let mut cone = Cone::new(v.clone(), radius.clone())?;
    let mut k = find_k(rec, &t, &t_inv, &cone, m);
    if k.is_none() && radius.is_infinite() {
        // fall back to a finite radius, for which the limit block contracts
        let mut r = int(2);
        loop {
            let c = Cone::new(v.clone(), Radius::Finite(r.clone()))?;
            if c.image_positive(&t_inv) {
                radius = Radius::Finite(r);
                cone = c;
                break;
            }
            r = (r + Rational::one()) / int(2);
        }
        k = find_k(rec, &t, &t_inv, &cone, m);
    }
    let Some(k) = k else {
        return Err(Error::HypothesisViolation("induction conditions never hold".into()));
    };

    let t_int = t.integer_rows();
    let mut it = rec.unroller(u0)?;
    let mut run = 0u32;
    loop {
        let i = it.index();
        if let Some(c) = first_violation(it.current(), options.strict) {
            return Ok(Outcome::NonPositive { index: i, coordinate: c });
        }
        if i >= k {
            if cone.contains_integer(&apply_integer(&t_int, &it.current().numer)) {
                run += 1;
                if run == m {
                    let certificate = Certificate { t, r: radius, n: i + 1 - u64::from(m), m };
                    let details = ProofDetails { lambda, v: v_field, k, tolerance };
                    return Ok(Outcome::Positive { certificate, details });
                }
            } else {
                run = 0;
            }
        }
        if i >= options.budget {
            return Ok(Outcome::Inconclusive { budget_used: options.budget });
        }
        it.step()?;
    }
}

/// Outcome for a scalar recurrence after normalization.
#[derive(Clone, Debug)]
pub struct ScalarOutcome {
    pub normalized: Normalized,
    pub outcome: Outcome,
    /// Index of a violating term inside the normalization prefix.
    pub prefix_witness: Option<usize>,
}

impl ScalarOutcome {
    /// Index `n` of a term `u_n` witnessing non-positivity.
    pub fn witness_term(&self) -> Option<u64> {
        if let Some(i) = self.prefix_witness {
            return Some(i as u64);
        }
        match self.outcome {
            Outcome::NonPositive { index, coordinate } => Some(self.normalized.shift as u64 + index + coordinate as u64),
            _ => None,
        }
    }
}

pub fn prove_recurrence(rec: &Recurrence, prefix_values: &[Rational], options: &ProverOptions) -> Result<ScalarOutcome> {
    let normalized = rec.normalize(prefix_values)?;
    if let Some(i) = normalized.prefix.iter().position(|u| violates(Sign::of(u), options.strict)) {
        let outcome = Outcome::NonPositive { index: 0, coordinate: 0 };
        return Ok(ScalarOutcome { normalized, outcome, prefix_witness: Some(i) });
    }
    let m = normalized.recurrence.companion()?;
    let outcome = positivity_proof(&m, normalized.recurrence.initial(), options)?;
    Ok(ScalarOutcome { normalized, outcome, prefix_witness: None })
}

/// `U_N` and whether every entry of `U_0, ..., U_{N-1}` is nonnegative
/// (positive when `strict`).
pub fn check_prefix(rec: &MatrixRecurrence, u0: &[Rational], n: u64, strict: bool) -> Result<Option<(u64, usize)>> {
    let mut it = rec.unroller(u0)?;
    loop {
        if let Some(c) = first_violation(it.current(), strict) {
            return Ok(Some((it.index(), c)));
        }
        if it.index() >= n {
            return Ok(None);
        }
        it.step()?;
    }
}
