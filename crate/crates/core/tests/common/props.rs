//! Property checks shared by the proptest suite and the acceptance report.
//! Each check takes a generated input and fails with a `TestCaseError`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use positivity_core::cone::{birkhoff, hilbert_distance, projective_ratio};
use positivity_core::numbers::{int, rat};
use positivity_core::recurrence::Recurrence;
use positivity_core::verifier::soundness_smoke_test;
use positivity_core::{
    prove_recurrence, verify, AlgebraicReal, Bound, Cone, Field, FieldElement, Matrix, Outcome, Poly, ProverOptions,
    Radius, Rational, VerifyOptions,
};

use super::{corpus, oracle};

pub const CASES: u32 = 500;

type Check = Result<(), TestCaseError>;

fn pos_rat() -> impl Strategy<Value = Rational> {
    (1..300i64, 1..40i64).prop_map(|(a, b)| rat(a, b))
}

fn pos_vec(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    vec(pos_rat(), d)
}

fn radius_above_one() -> impl Strategy<Value = Rational> {
    pos_rat().prop_map(|x| x + int(1))
}

// pseudo-metric ratio axioms

pub fn ratio_triples() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>, Vec<Rational>, Rational)> {
    (1..=4usize).prop_flat_map(|d| (pos_vec(d), pos_vec(d), pos_vec(d), pos_rat()))
}

pub fn ratio_axioms((x, y, z, c): (Vec<Rational>, Vec<Rational>, Vec<Rational>, Rational)) -> Check {
    let rxy = projective_ratio(&x, &y);
    prop_assert!(rxy >= int(1));
    prop_assert_eq!(projective_ratio(&x, &x), int(1));
    prop_assert_eq!(&rxy, &projective_ratio(&y, &x));
    prop_assert!(projective_ratio(&x, &z) <= &rxy * projective_ratio(&y, &z));
    let cx: Vec<Rational> = x.iter().map(|a| a * &c).collect();
    prop_assert_eq!(&rxy, &projective_ratio(&cx, &y));
    prop_assert_eq!(projective_ratio(&cx, &x), int(1));
    let proportional = x.iter().zip(&y).all(|(a, b)| a * &y[0] == b * &x[0]);
    prop_assert_eq!(rxy == int(1), proportional);
    Ok(())
}

// generators sit at distance r from the center

pub fn cones() -> impl Strategy<Value = (Vec<Rational>, Rational)> {
    (2..=5usize).prop_flat_map(|d| (pos_vec(d), radius_above_one()))
}

pub fn generators_at_radius((v, r): (Vec<Rational>, Rational)) -> Check {
    let cone = Cone::new(v.clone(), Radius::Finite(r.clone())).unwrap();
    let gens = cone.generators().unwrap();
    prop_assert_eq!(gens.len(), (1usize << v.len()) - 2);
    for g in &gens {
        prop_assert_eq!(&projective_ratio(g, &v), &r);
        prop_assert!(cone.contains(g));
    }
    Ok(())
}

// membership agrees with the ratio

#[derive(Clone, Debug)]
pub enum RadiusChoice {
    Infinite,
    Finite(Rational),
    /// Exactly the ratio of the point, when that exceeds one.
    Boundary,
}

fn radius_choice() -> impl Strategy<Value = RadiusChoice> {
    prop_oneof![
        1 => Just(RadiusChoice::Infinite),
        4 => radius_above_one().prop_map(RadiusChoice::Finite),
        2 => Just(RadiusChoice::Boundary),
    ]
}

fn resolve(choice: &RadiusChoice, ratio: Option<Rational>) -> Radius {
    match choice {
        RadiusChoice::Infinite => Radius::Infinite,
        RadiusChoice::Finite(r) => Radius::Finite(r.clone()),
        RadiusChoice::Boundary => match ratio {
            Some(q) if q > int(1) => Radius::Finite(q),
            _ => Radius::Finite(int(2)),
        },
    }
}

fn within(ratio: &Option<Rational>, r: &Radius) -> bool {
    match (ratio, r) {
        (None, _) => false,
        (Some(_), Radius::Infinite) => true,
        (Some(q), Radius::Finite(r)) => q <= r,
    }
}

pub fn membership_inputs() -> impl Strategy<Value = (Vec<Rational>, Vec<Rational>, RadiusChoice)> {
    (1..=4usize).prop_flat_map(|d| (pos_vec(d), vec((-20..300i64, 1..40i64).prop_map(|(a, b)| rat(a, b)), d), radius_choice()))
}

pub fn contains_iff_ratio((v, x, choice): (Vec<Rational>, Vec<Rational>, RadiusChoice)) -> Check {
    let ratio = x.iter().all(Signed::is_positive).then(|| projective_ratio(&x, &v));
    let r = resolve(&choice, ratio.clone());
    let cone = Cone::new(v, r.clone()).unwrap();
    prop_assert_eq!(cone.contains(&x), within(&ratio, &r));
    Ok(())
}

/// Long integer points exercise the leading-bits shortcut.
pub fn integer_membership_inputs() -> impl Strategy<Value = (Vec<Rational>, Vec<BigInt>, RadiusChoice)> {
    (1..=4usize).prop_flat_map(|d| {
        let entry = (1..1000i64, 0..700u32, -1000..1000i64).prop_map(|(a, s, b)| (BigInt::from(a) << s) + b);
        (pos_vec(d), vec(entry, d), radius_choice())
    })
}

pub fn contains_integer_iff_ratio((v, x, choice): (Vec<Rational>, Vec<BigInt>, RadiusChoice)) -> Check {
    let xr: Vec<Rational> = x.iter().map(|a| Rational::from_integer(a.clone())).collect();
    let ratio = x.iter().all(Signed::is_positive).then(|| projective_ratio(&xr, &v));
    let r = resolve(&choice, ratio.clone());
    let cone = Cone::new(v, r.clone()).unwrap();
    prop_assert_eq!(cone.contains_integer(&x), within(&ratio, &r));
    prop_assert_eq!(cone.contains_integer(&x), cone.contains(&xr));
    Ok(())
}

// Birkhoff contraction

pub fn birkhoff_inputs() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Rational>, Vec<Rational>)> {
    (1..=4usize).prop_flat_map(|d| (vec(vec(1..60i64, d), d), pos_vec(d), pos_vec(d)))
}

pub fn birkhoff_contraction((a, x, y): (Vec<Vec<i64>>, Vec<Rational>, Vec<Rational>)) -> Check {
    let rows: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
    let a = Matrix::from_ints(&rows);
    let (psi, l) = birkhoff(&a).unwrap();
    prop_assert!(psi > Rational::zero() && psi <= int(1));
    prop_assert!((0.0..1.0).contains(&l));
    let before = hilbert_distance(&x, &y);
    let after = hilbert_distance(&a.mul_vec(&x), &a.mul_vec(&y));
    prop_assert!(after <= l * before + 1e-9, "{after} > {l} * {before}");
    Ok(())
}

// polynomials with known real roots

/// Leading coefficient, rational roots (with repetition) and quadratic
/// factors `x^2 + bx + c` without real roots.
#[derive(Clone, Debug)]
pub struct Factored {
    pub lc: i64,
    pub roots: Vec<Rational>,
    pub quadratics: Vec<(i64, i64)>,
}

impl Factored {
    pub fn expand(&self) -> Poly<Rational> {
        let mut p = Poly::constant(int(self.lc));
        for r in &self.roots {
            p = &p * &Poly::new(vec![-r.clone(), int(1)]);
        }
        for &(b, c) in &self.quadratics {
            p = &p * &Poly::new(vec![int(c), int(b), int(1)]);
        }
        p
    }
}

fn factored(distinct: bool, lc: impl Strategy<Value = i64>) -> impl Strategy<Value = Factored> {
    let root = (-24..=24i64, 1..=4i64).prop_map(|(a, b)| rat(a, b));
    let quad = (-4..=4i64, 1..=10i64).prop_filter("no real roots", |&(b, c)| b * b < 4 * c);
    (lc, vec(root, 0..6), vec(quad, 0..3)).prop_map(move |(lc, mut roots, quadratics)| {
        if distinct {
            roots = roots.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        }
        let quadratics = quadratics.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Factored { lc, roots, quadratics }
    })
}

fn endpoint() -> impl Strategy<Value = Bound> {
    // sevenths never coincide with roots of denominator at most four
    prop_oneof![
        1 => Just(Bound::NegInfinity),
        1 => Just(Bound::PosInfinity),
        6 => (-8..8i64, 1..=6i64).prop_map(|(k, s)| Bound::At(rat(7 * k + s, 7))),
    ]
}

pub fn sturm_inputs() -> impl Strategy<Value = (Factored, Bound, Bound)> {
    (factored(true, prop_oneof![1..5i64, -5..-1i64]), endpoint(), endpoint())
}

fn bound_value(b: &Bound) -> f64 {
    match b {
        Bound::NegInfinity => f64::NEG_INFINITY,
        Bound::PosInfinity => f64::INFINITY,
        Bound::At(q) => num_traits::ToPrimitive::to_f64(q).unwrap(),
    }
}

pub fn sturm_matches_numeric((f, a, b): (Factored, Bound, Bound)) -> Check {
    let (lo, hi) = if bound_value(&a) <= bound_value(&b) { (a, b) } else { (b, a) };
    let p = f.expand();
    let (l, h) = (bound_value(&lo), bound_value(&hi));
    let numeric = oracle::real_roots(&p).into_iter().filter(|&x| l < x && x <= h).count();
    prop_assert_eq!(p.count_roots(&lo, &hi), numeric, "{:?} on ({:?}, {:?}]", p, lo, hi);
    Ok(())
}

// positivity thresholds

pub fn threshold_inputs() -> impl Strategy<Value = Factored> {
    factored(false, 1..6i64)
}

fn expected_threshold(f: &Factored) -> u64 {
    match f.roots.iter().max() {
        Some(r) if *r >= int(0) => num_traits::ToPrimitive::to_u64(&r.floor().to_integer()).unwrap() + 1,
        _ => 0,
    }
}

pub fn threshold_minimal(f: Factored) -> Check {
    let p = f.expand();
    let k = p.positivity_threshold().unwrap();
    prop_assert_eq!(k, expected_threshold(&f), "{:?}", p);
    prop_assert!(p.is_positive_from(k));
    // Sturm count over the same half-line
    prop_assert!(p.eval(&int(k as i64)) > int(0));
    prop_assert_eq!(p.count_roots(&Bound::At(int(k as i64)), &Bound::PosInfinity), 0);
    if k > 0 {
        prop_assert!(!p.is_positive_from(k - 1));
        let at = int(k as i64 - 1);
        prop_assert!(p.eval(&at) <= int(0) || p.count_roots(&Bound::At(at), &Bound::PosInfinity) > 0);
    }
    // irrational coefficients take the Sturm route
    let base = Arc::new(sqrt2());
    let scale = FieldElement::new(&base, vec![int(1), int(1)]);
    let lifted = p.map(|c| scale.clone() * FieldElement::constant(c.clone()));
    prop_assert_eq!(lifted.positivity_threshold().unwrap(), k);
    Ok(())
}

fn sqrt2() -> AlgebraicReal {
    AlgebraicReal::new(Poly::new(vec![int(-2), int(0), int(1)]), int(1), int(2)).unwrap()
}

// prover and verifier round trip

pub fn round_trip_inputs() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (0..10usize, vec(-3..40i64, 3))
}

pub const ROUND_TRIP_BUDGET: u64 = 2000;

pub fn round_trip((index, values): (usize, Vec<i64>)) -> Check {
    let (name, base) = corpus().swap_remove(index);
    let initial: Vec<Rational> = values[..base.order()].iter().map(|&x| int(x)).collect();
    let rec = Recurrence::new(base.coeffs().to_vec(), initial).unwrap();
    let options = ProverOptions { budget: ROUND_TRIP_BUDGET, ..ProverOptions::default() };
    let res = prove_recurrence(&rec, &[], &options).unwrap();
    match &res.outcome {
        Outcome::Positive { certificate, .. } => {
            let norm = &res.normalized.recurrence;
            let m = norm.companion().unwrap();
            let report = verify(&m, norm.initial(), certificate, &VerifyOptions::default()).unwrap();
            prop_assert!(report.accepted, "{name} {values:?}: {report:?}");
            prop_assert!(soundness_smoke_test(&m, norm.initial(), certificate.n, 10 * (certificate.n + 1)).unwrap());
            prop_assert!(res.normalized.prefix.iter().all(|x| *x >= int(0)));
        }
        Outcome::PositiveTrivial => {
            prop_assert!(rec.terms(30).unwrap().iter().all(Zero::is_zero));
        }
        Outcome::NonPositive { .. } => {
            let n = res.witness_term().unwrap() as usize;
            let terms = rec.terms(n + 1).unwrap();
            prop_assert!(terms[n] < int(0), "{name} {values:?}: witness {n}");
        }
        Outcome::Inconclusive { .. } => {}
        Outcome::HypothesisFailure { reason, .. } => {
            return Err(TestCaseError::fail(format!("{name}: {reason}")));
        }
    }
    Ok(())
}

// field inverses in Q(lambda)

const DEFINING: [&[i64]; 7] = [&[-2, 0, 1], &[-3, 0, 1], &[1, -34, 1], &[-2, 0, 0, 1], &[-1, -1, 0, 1], &[1, 0, -10, 0, 1], &[-1, -1, 0, 0, 0, 1]];

pub fn field_inputs() -> impl Strategy<Value = (usize, usize, Vec<Rational>)> {
    (0..DEFINING.len(), 0..4usize, vec((-50..50i64, 1..20i64).prop_map(|(a, b)| rat(a, b)), 1..7))
}

pub fn field_inverse((which, root, coeffs): (usize, usize, Vec<Rational>)) -> Check {
    let m = Poly::new(DEFINING[which].iter().map(|&c| int(c)).collect());
    let roots = m.real_roots();
    let base = Arc::new(roots[root % roots.len()].clone());
    let x = FieldElement::new(&base, coeffs);
    if x.is_zero() {
        prop_assert!(x.inv().is_err());
        return Ok(());
    }
    let y = x.inv().unwrap();
    prop_assert!((x.clone() * y.clone() - FieldElement::one()).is_zero());
    prop_assert!((y.inv().unwrap() - x.clone()).is_zero());
    prop_assert_eq!(y.sign(), x.sign());
    Ok(())
}
