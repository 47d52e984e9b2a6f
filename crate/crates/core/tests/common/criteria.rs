//! End-to-end checks, each returning a one-line summary or the reason for
//! failure.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use positivity_core::cone::{induction_conditions, Cone};
use positivity_core::numbers::{int, rat};
use positivity_core::spectral::dominant_eigenvalue;
use positivity_core::verifier::soundness_smoke_test;
use positivity_core::{
    prove_recurrence, verify, Certificate, Matrix, MatrixRecurrence, Outcome, Poly, ProverOptions, Radius, Rational,
    Recurrence, VerifyOptions,
};

use super::{apery, grz, grz_cert, oracle, order3, order3_cert, poly, straub};

pub type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Verifies `cert`; an accepted certificate must also survive unrolling
/// `10 (N + 1)` terms.
fn judge(rec: &Recurrence, cert: &Certificate) -> Result<bool, String> {
    let m = rec.companion().map_err(err)?;
    let accepted = match verify(&m, rec.initial(), cert, &VerifyOptions::default()) {
        Ok(report) => report.accepted,
        Err(_) => false,
    };
    if accepted {
        let sound = soundness_smoke_test(&m, rec.initial(), cert.n, 10 * (cert.n + 1)).map_err(err)?;
        ensure!(sound, "accepted an unsound certificate: N = {}, r = {}, m = {}", cert.n, cert.r, cert.m);
    }
    Ok(accepted)
}

pub fn grz_mutations() -> Vec<(String, Certificate)> {
    let base = grz_cert();
    let mut out = Vec::new();
    let perturb = [
        (0, 0, 1),
        (0, 1, 1),
        (0, 3, 1),
        (1, 0, -1),
        (1, 0, 1),
        (1, 1, 1),
        (1, 2, 1),
        (2, 1, 2),
        (2, 2, -1),
        (3, 0, 1000),
        (3, 1, -1000),
        (3, 2, 40),
        (3, 3, 1),
    ];
    for (i, j, delta) in perturb {
        let mut c = base.clone();
        let x = c.t.get(i, j) + int(delta);
        c.t = Matrix::from_fn(4, 4, |a, b| if (a, b) == (i, j) { x.clone() } else { c.t.get(a, b).clone() });
        out.push((format!("T[{i}][{j}] += {delta}"), c));
    }
    for n in [0, 1, 2] {
        out.push((format!("N = {n}"), Certificate { n, ..base.clone() }));
    }
    for r in [rat(2, 1), rat(101, 100)] {
        out.push((format!("r = {r}"), Certificate { r: Radius::Finite(r), ..base.clone() }));
    }
    for m in [0, 2] {
        out.push((format!("m = {m}"), Certificate { m, ..base.clone() }));
    }
    out
}

pub fn grz_golden() -> Verdict {
    let start = Instant::now();
    let rec = grz();
    ensure!(judge(&rec, &grz_cert())?, "golden certificate rejected");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    let mutations = grz_mutations();
    let mut rejected = 0;
    for (name, cert) in &mutations {
        if !judge(&rec, cert).map_err(|e| format!("{name}: {e}"))? {
            rejected += 1;
        }
    }
    let shrunk = Certificate { n: 1520, ..order3_cert() };
    let shrunk_rejected = !judge(&order3(), &shrunk).map_err(|e| format!("order-3 N = 1520: {e}"))?;
    Ok(format!(
        "accepted in {elapsed:.2?}; {rejected}/{} mutations rejected, the rest sound; order-3 N-shrink {}",
        mutations.len(),
        if shrunk_rejected { "rejected" } else { "accepted and sound" }
    ))
}

pub fn order3_golden() -> Verdict {
    let start = Instant::now();
    ensure!(judge(&order3(), &order3_cert())?, "golden certificate rejected");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("accepted in {elapsed:.2?}"))
}

/// Ratio conditions listed with the order-3 certificate, one generator.
pub fn reference_six() -> Vec<Vec<BigInt>> {
    let mut v: Vec<_> = [
        [392450160i64, 360612],
        [-264007440, 1939140],
        [399271660, 1247967],
        [-268100340, 1406727],
        [153100060, 1839915],
        [142185660, 420147],
    ]
    .iter()
    .map(|c| poly(c).primitive_integer())
    .collect();
    v.sort();
    v
}

/// Primitive integer forms of the six ratio conditions for one generator
/// of the order-3 cone.
pub fn order3_generator_polynomials(g: &[Rational]) -> Vec<Vec<BigInt>> {
    let rec: MatrixRecurrence = order3().companion().unwrap();
    let cert = order3_cert();
    let t_inv = cert.t.inverse().unwrap();
    let cone = Cone::new(vec![int(1); 3], cert.r.clone()).unwrap();
    let k = cone.generators().unwrap().iter().position(|x| x == g).unwrap();
    let (num, den) = rec.block_product(1);
    let conditions = induction_conditions(&cone, &cert.t, &t_inv, &num, &den).unwrap();
    // denominator first, then per generator z_1 followed by six ratio conditions
    let start = 1 + 7 * k + 1;
    let mut got: Vec<_> = conditions[start..start + 6].iter().map(|c| c.poly.primitive_integer()).collect();
    got.sort();
    got
}

pub fn order3_generator_r11() -> Verdict {
    let r = rat(5, 3);
    let reference = reference_six();
    let r11 = order3_generator_polynomials(&[r.clone(), int(1), int(1)]);
    let r1r = order3_generator_polynomials(&[r.clone(), int(1), r]);
    ensure!(
        r11 == reference,
        "generator (5/3, 1, 1) gives different polynomials; the reference six {} those of (5/3, 1, 5/3)",
        if r1r == reference { "are exactly" } else { "are not even" }
    );
    Ok("generator (5/3, 1, 1) reproduces the reference polynomials".into())
}

fn prove_and_verify(rec: &Recurrence, options: &ProverOptions) -> Result<(Certificate, u64), String> {
    let res = prove_recurrence(rec, &[], options).map_err(err)?;
    let Outcome::Positive { certificate, details } = res.outcome else {
        return Err(format!("prover returned {:?}", res.outcome));
    };
    let norm = &res.normalized.recurrence;
    let m = norm.companion().map_err(err)?;
    let report = verify(&m, norm.initial(), &certificate, &VerifyOptions::default()).map_err(err)?;
    ensure!(report.accepted, "certificate rejected: {:?}", report.failure_detail);
    Ok((certificate, details.k))
}

pub fn straub_override() -> Matrix<Rational> {
    Matrix::from_ints(&[&[-14, 1], &[1, 0]]).scale(&rat(1, 13))
}

pub fn straub_end_to_end() -> Verdict {
    let rec = straub();
    let start = Instant::now();
    let (found, k) = prove_and_verify(&rec, &ProverOptions::default())?;
    let options = ProverOptions { transform_override: Some(straub_override()), ..ProverOptions::default() };
    let (fixed, fixed_k) = prove_and_verify(&rec, &options)?;
    let elapsed = start.elapsed();
    ensure!(fixed.t == straub_override(), "override not used");
    ensure!(
        fixed.r == Radius::Infinite && fixed_k == 0 && fixed.n == 1 && fixed.m == 1,
        "override gave r = {}, K = {fixed_k}, N = {}, m = {}",
        fixed.r,
        fixed.n,
        fixed.m
    );
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    let terms = rec.terms(21).map_err(err)?;
    for (n, u) in terms.iter().enumerate() {
        ensure!(*u == Rational::from_integer(oracle::straub_term(n as u64)), "u_{n} = {u} disagrees with the binomial sum");
    }
    Ok(format!(
        "found r = {}, N = {}, m = {} (K = {k}); override r = inf, K = 0, N = 1, m = 1; u_0..u_20 match; {elapsed:.2?}",
        found.r, found.n, found.m
    ))
}

pub fn apery_end_to_end() -> Verdict {
    let rec = apery();
    let a = rec.companion().map_err(err)?.limit_matrix().map_err(err)?;
    let lambda = dominant_eigenvalue(&a).map_err(err)?.lambda;
    ensure!(*lambda.minpoly() == poly(&[1, -34, 1]), "minimal polynomial {:?}", lambda.minpoly());
    ensure!(*lambda.lo() > int(33) && *lambda.hi() < int(34), "interval [{}, {}]", lambda.lo(), lambda.hi());
    let start = Instant::now();
    let terms = rec.terms(3).map_err(err)?;
    ensure!(terms == vec![int(1), int(5), int(73)], "terms {terms:?}");
    let (cert, k) = prove_and_verify(&rec, &ProverOptions::default())?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("x^2 - 34x + 1 isolated in (33, 34); r = {}, N = {}, m = {} (K = {k}); {elapsed:.2?}", cert.r, cert.n, cert.m))
}

pub fn negative_eigenvalue() -> Verdict {
    let rec = Recurrence::new(vec![poly(&[-2]), poly(&[1])], vec![int(1)]).map_err(err)?;
    let start = Instant::now();
    let res = prove_recurrence(&rec, &[], &ProverOptions::default()).map_err(err)?;
    let elapsed = start.elapsed();
    ensure!(matches!(res.outcome, Outcome::NonPositive { .. }), "prover returned {:?}", res.outcome);
    let n = res.witness_term().unwrap_or(u64::MAX);
    ensure!(n == 1, "witness {n}");
    let terms = rec.terms(2).map_err(err)?;
    ensure!(terms[1] == int(-2), "u_1 = {}", terms[1]);
    ensure!(elapsed < Duration::from_millis(100), "took {elapsed:?}");
    Ok(format!("NonPositive, witness u_1 = -2; {elapsed:.2?}"))
}

pub fn minimal_solution() -> Verdict {
    let rec = Recurrence::new(vec![poly(&[-1]), Poly::constant(rat(5, 2)), poly(&[1])], vec![int(1), rat(1, 2)]).map_err(err)?;
    let options = ProverOptions { budget: 10_000, ..ProverOptions::default() };
    let start = Instant::now();
    let res = prove_recurrence(&rec, &[], &options).map_err(err)?;
    let elapsed = start.elapsed();
    match &res.outcome {
        Outcome::Inconclusive { budget_used } => Ok(format!("Inconclusive after {budget_used} terms; {elapsed:.2?}")),
        Outcome::Positive { certificate, .. } => {
            let norm = &res.normalized.recurrence;
            let m = norm.companion().map_err(err)?;
            let report = verify(&m, norm.initial(), certificate, &VerifyOptions::default()).map_err(err)?;
            ensure!(report.accepted, "unverified Positive");
            Ok(format!("Positive and verified; {elapsed:.2?}"))
        }
        other => Err(format!("prover returned {other:?}")),
    }
}

