//! Independent checking of a certificate `(T, r, N, m)`.
//!
//! The dominant eigenvalue and eigenvector are recomputed from the
//! recurrence. Acceptance requires three steps to pass: sanity (`lambda > 0`,
//! `v = T e > 0`, `T^{-1} B_r(v)` positive), initialization (`U_n >= 0` for
//! `n < N` and `T U_j` in the cone for `N <= j < N + m`) and induction
//! (every cleared cone condition positive on the real half-line `[N, inf)`).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cone::{induction_conditions, Cone, Radius};
use crate::error::{Error, Result};
use crate::linalg::{apply_integer, Matrix};
use crate::numbers::{AlgebraicReal, Field, FieldElement, Rational};
use crate::prover::Certificate;
use crate::recurrence::MatrixRecurrence;
use crate::spectral::{dominant_eigenvalue, eigenvector};

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Require `U_n > 0` rather than `U_n >= 0` before `N`.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Passed,
    Failed(String),
    Skipped,
}

impl StepResult {
    pub fn passed(&self) -> bool {
        matches!(self, StepResult::Passed)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub accepted: bool,
    pub sanity: StepResult,
    pub initialization: StepResult,
    pub induction: StepResult,
    pub lambda: Arc<AlgebraicReal>,
    pub v: Vec<FieldElement>,
    pub polynomials_checked: usize,
    pub failure_detail: Option<String>,
}

fn check_well_formed(rec: &MatrixRecurrence, u0: &[Rational], cert: &Certificate) -> Result<Matrix<Rational>> {
    let d = rec.dim();
    if u0.len() != d {
        return Err(Error::DimensionMismatch(format!("U_0 has length {}, expected {d}", u0.len())));
    }
    if cert.t.rows() != d || cert.t.cols() != d {
        return Err(Error::MalformedCertificate(format!("T must be {d}x{d}")));
    }
    if let Radius::Finite(r) = &cert.r {
        if *r <= Rational::from_integer(1.into()) {
            return Err(Error::MalformedCertificate(format!("radius {r} is not above 1")));
        }
    }
    if cert.m == 0 {
        return Err(Error::MalformedCertificate("m must be positive".into()));
    }
    cert.t.inverse().map_err(|_| Error::MalformedCertificate("T is singular".into()))
}

pub fn verify(rec: &MatrixRecurrence, u0: &[Rational], cert: &Certificate, options: &VerifyOptions) -> Result<VerifyReport> {
    let t_inv = check_well_formed(rec, u0, cert)?;
    let a = rec.limit_matrix()?;
    let spectrum = dominant_eigenvalue(&a)?;
    let lambda = spectrum.lambda;
    let e = eigenvector(&a, &lambda, rec.is_companion());
    let v = cert.t.map(|x| FieldElement::constant(x.clone())).mul_vec(&e);
    let mut report = VerifyReport {
        accepted: false,
        sanity: StepResult::Skipped,
        initialization: StepResult::Skipped,
        induction: StepResult::Skipped,
        lambda: lambda.clone(),
        v: v.clone(),
        polynomials_checked: 0,
        failure_detail: None,
    };
    if !lambda.sign().is_positive() {
        return Ok(fail_sanity(report, "dominant eigenvalue is not positive".into()));
    }
    if !v.iter().all(|x| x.sign().is_positive()) {
        return Ok(fail_sanity(report, "v = T e is not positive".into()));
    }
    let rational_v: Option<Vec<Rational>> = v.iter().map(FieldElement::as_rational).collect();
    match rational_v {
        Some(v) => run(rec, u0, cert, &t_inv, Cone::new(v, cert.r.clone())?, options, report),
        None => {
            let cone = Cone::new(core::mem::take(&mut report.v), cert.r.clone())?;
            report.v = cone.center().to_vec();
            run(rec, u0, cert, &t_inv, cone, options, report)
        }
    }
}

fn fail_sanity(mut report: VerifyReport, msg: String) -> VerifyReport {
    report.failure_detail = Some(msg.clone());
    report.sanity = StepResult::Failed(msg);
    report
}

fn run<K: Field>(
    rec: &MatrixRecurrence,
    u0: &[Rational],
    cert: &Certificate,
    t_inv: &Matrix<Rational>,
    cone: Cone<K>,
    options: &VerifyOptions,
    mut report: VerifyReport,
) -> Result<VerifyReport> {
    if !cone.image_positive(t_inv) {
        return Ok(fail_sanity(report, "T^-1 B_r(v) is not in the positive orthant".into()));
    }
    report.sanity = StepResult::Passed;

    let t_int = cert.t.integer_rows();
    let last = cert.n + u64::from(cert.m) - 1;
    let mut it = rec.unroller(u0)?;
    loop {
        let i = it.index();
        let u = it.current();
        if i < cert.n {
            let bad = (0..u.numer.len()).find(|&c| {
                let s = u.sign(c);
                s.is_negative() || (options.strict && s.is_zero())
            });
            if let Some(c) = bad {
                let msg = format!("U_{i} has a violating entry at coordinate {c}");
                report.failure_detail = Some(msg.clone());
                report.initialization = StepResult::Failed(msg);
                return Ok(report);
            }
        } else if !cone.contains_integer(&apply_integer(&t_int, &u.numer)) {
            let msg = format!("T U_{i} is not in the cone");
            report.failure_detail = Some(msg.clone());
            report.initialization = StepResult::Failed(msg);
            return Ok(report);
        }
        if i >= last {
            break;
        }
        it.step()?;
    }
    report.initialization = StepResult::Passed;

    let (num, den) = rec.block_product(cert.m);
    let Some(conditions) = induction_conditions(&cone, &cert.t, t_inv, &num, &den) else {
        let msg = "a row of T A(n) T^-1 vanishes identically".into();
        report.induction = StepResult::Failed(msg);
        report.failure_detail = Some("induction: zero row".into());
        return Ok(report);
    };
    for (idx, c) in conditions.iter().enumerate() {
        report.polynomials_checked += 1;
        if !c.holds_from(cert.n) {
            let msg = format!("condition {idx} is not positive on [{}, inf)", cert.n);
            report.failure_detail = Some(msg.clone());
            report.induction = StepResult::Failed(msg);
            return Ok(report);
        }
    }
    report.induction = StepResult::Passed;
    report.accepted = true;
    Ok(report)
}

/// Unrolls `count` vectors and checks every entry is nonnegative, and
/// positive from index `n` on.
pub fn soundness_smoke_test(rec: &MatrixRecurrence, u0: &[Rational], n: u64, count: u64) -> Result<bool> {
    let mut it = rec.unroller(u0)?;
    loop {
        let u = it.current();
        let ok = u.numer.iter().all(|x| if it.index() >= n { x > &Zero::zero() } else { x >= &Zero::zero() });
        if !ok {
            return Ok(false);
        }
        if it.index() + 1 >= count {
            return Ok(true);
        }
        it.step()?;
    }
}
