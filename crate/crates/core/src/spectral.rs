//! Dominant eigenvalue of the limit matrix and its eigenvectors.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numbers::{AlgebraicReal, Field, FieldElement, Rational, Sign};
use crate::poly::{sign_variations, Bound, Poly};

#[derive(Clone, Debug)]
pub struct DominantSpectrum {
    pub lambda: Arc<AlgebraicReal>,
    pub is_unique: bool,
    pub is_simple: bool,
    /// Every other eigenvalue has modulus at most this, and it is below `|lambda|`.
    pub modulus_gap_witness: Rational,
    pub char_poly: Poly<Rational>,
    /// Square-free polynomial whose roots include every product of two
    /// eigenvalues, in particular every squared modulus.
    pub squared_modulus_poly: Poly<Rational>,
}

impl DominantSpectrum {
    pub fn generator(&self) -> FieldElement {
        FieldElement::generator(&self.lambda)
    }
}

pub fn char_poly(a: &Matrix<Rational>) -> Poly<Rational> {
    a.char_poly()
}

fn companion_of(q: &Poly<Rational>) -> Matrix<Rational> {
    let k = q.degree().unwrap_or(0);
    let c = q.coeffs();
    Matrix::from_fn(k, k, |i, j| {
        if i + 1 < k {
            if j == i + 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            -c[j].clone()
        }
    })
}

/// Number of distinct roots of `chain[0]` in `(x, +inf)`, for `x` in `Q(lambda)`.
fn roots_above(chain: &[Poly<Rational>], x: &FieldElement) -> usize {
    let at_x = sign_variations(chain.iter().map(|p| p.eval_in(x).sign()));
    let at_inf = sign_variations(chain.iter().map(|p| p.sign_at(&Bound::PosInfinity)));
    at_x.saturating_sub(at_inf)
}

fn pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Isolates the real eigenvalue of largest modulus and proves that it is
/// strictly dominant and simple.
///
/// Dominance is decided through `R = charpoly(C_q (x) C_q)` for the
/// square-free part `q`, whose roots are all products of two eigenvalues:
/// `lambda` is the unique eigenvalue of maximal modulus exactly when
/// `lambda^2` is the largest real root of `R` and a simple one.
pub fn dominant_eigenvalue(a: &Matrix<Rational>) -> Result<DominantSpectrum> {
    let p = a.char_poly();
    let q = p.square_free().monic();
    let roots = q.isolate_real_roots();
    let abs_lower = |lo: &Rational, hi: &Rational| {
        if lo.is_positive() {
            lo.clone()
        } else if hi.is_negative() {
            -hi.clone()
        } else {
            Rational::zero()
        }
    };
    if q.degree() == Some(1) && q.coeffs()[0].is_zero() {
        return Err(Error::ZeroSpectrum);
    }
    // real root of largest modulus; candidates are compared exactly
    let mut best: Option<AlgebraicReal> = None;
    for (lo, hi) in roots {
        let r = AlgebraicReal::new(q.clone(), lo, hi)?;
        let replace = match &best {
            None => true,
            Some(b) => {
                let abs = |x: &AlgebraicReal| if x.sign().is_negative() { negate(x) } else { x.clone() };
                abs(&r).cmp_exact(&abs(b)) == core::cmp::Ordering::Greater
            }
        };
        if replace {
            best = Some(r);
        }
    }
    let Some(lambda) = best else {
        return Err(Error::NoUniqueDominant);
    };
    if lambda.sign().is_zero() {
        return Err(Error::ZeroSpectrum);
    }
    let lambda = Arc::new(shrink(lambda));

    let full = companion_of(&q).kron(&companion_of(&q)).char_poly();
    let r = full.square_free().monic();
    let chain = r.reduced_chain();
    let l = FieldElement::generator(&lambda);
    let l2 = l.clone() * l.clone();
    if !r.eval_in(&l2).is_zero() || roots_above(&chain, &l2) != 0 || full.derivative().eval_in(&l2).is_zero() {
        return Err(Error::NoUniqueDominant);
    }
    if p.derivative().eval_in(&l).is_zero() {
        return Err(Error::NotSimple);
    }

    let mut k = 8u32;
    let gap = loop {
        let narrow = lambda.refine(&pow2(k));
        let rho = abs_lower(narrow.lo(), narrow.hi()) - pow2(k);
        if rho.is_positive() {
            let rho2 = &rho * &rho;
            let below = roots_above(&chain, &FieldElement::constant(rho2.clone()));
            if !r.eval(&rho2).is_zero() && below == 1 {
                break rho;
            }
        }
        k += 4;
    };

    Ok(DominantSpectrum {
        lambda,
        is_unique: true,
        is_simple: true,
        modulus_gap_witness: gap,
        char_poly: p,
        squared_modulus_poly: r,
    })
}

fn negate(x: &AlgebraicReal) -> AlgebraicReal {
    let m = x.minpoly().coeffs();
    let flipped: Vec<Rational> =
        m.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect();
    AlgebraicReal::new(Poly::new(flipped), -x.hi().clone(), -x.lo().clone()).expect("negated root")
}

/// Drops rational roots from the defining polynomial of an irrational
/// number and narrows its interval, so later sign tests settle quickly.
fn shrink(x: AlgebraicReal) -> AlgebraicReal {
    if x.as_rational().is_some() {
        return x;
    }
    let mut m = x.minpoly().clone();
    for q in m.rational_roots() {
        m = m.div_rem(&Poly::new(alloc::vec![-q, Rational::one()])).0;
    }
    let y = AlgebraicReal::new(m, x.lo().clone(), x.hi().clone()).expect("same root");
    let scale = Rational::one() + y.lo().abs().max(y.hi().abs());
    y.refine(&(scale * pow2(64)))
}

/// A nonzero `e` with `A e = lambda e`. Companion matrices get
/// `(1, lambda, ..., lambda^{d-1})`; otherwise a kernel vector of
/// `A - lambda I` scaled so its first nonzero coordinate is `1`.
pub fn eigenvector(a: &Matrix<Rational>, lambda: &Arc<AlgebraicReal>, companion: bool) -> Vec<FieldElement> {
    let d = a.rows();
    let l = FieldElement::generator(lambda);
    if companion {
        let mut out = Vec::with_capacity(d);
        let mut cur = FieldElement::constant(Rational::one());
        for _ in 0..d {
            out.push(cur.clone());
            cur = cur * l.clone();
        }
        return out;
    }
    let shifted = Matrix::from_fn(d, d, |i, j| {
        let x = FieldElement::new(lambda, alloc::vec![a.get(i, j).clone()]);
        if i == j {
            x - l.clone()
        } else {
            x
        }
    });
    let mut v = shifted.kernel().into_iter().next().expect("lambda is an eigenvalue");
    let first = v.iter().find(|x| !x.is_zero()).expect("kernel vector is nonzero").inv().expect("nonzero");
    v.iter_mut().for_each(|x| *x = x.clone() * first.clone());
    v
}

/// A nonzero `f` with `f^T A = lambda f^T`.
pub fn left_eigenvector(a: &Matrix<Rational>, lambda: &Arc<AlgebraicReal>) -> Vec<FieldElement> {
    eigenvector(&a.transpose(), lambda, false)
}

/// Outcome of checking the spectral hypotheses on the limit matrix.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    pub spectrum: Option<DominantSpectrum>,
    pub failure: Option<Error>,
    pub lambda_sign: Sign,
    pub eigenvector: Option<Vec<FieldElement>>,
    pub eigenvector_positive: bool,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.lambda_sign.is_positive() && self.eigenvector_positive
    }
}

pub fn check_hypotheses(a: &Matrix<Rational>, companion: bool) -> HypothesisReport {
    let mut report = HypothesisReport {
        spectrum: None,
        failure: None,
        lambda_sign: Sign::Zero,
        eigenvector: None,
        eigenvector_positive: false,
        notes: Vec::new(),
    };
    let spectrum = match dominant_eigenvalue(a) {
        Ok(s) => s,
        Err(e) => {
            report.notes.push(alloc::format!("{e}"));
            report.failure = Some(e);
            return report;
        }
    };
    report.lambda_sign = spectrum.lambda.sign();
    let e = eigenvector(a, &spectrum.lambda, companion);
    if report.lambda_sign.is_negative() {
        report.notes.push("negative dominant eigenvalue".into());
    } else {
        report.eigenvector_positive = e.iter().all(|x| x.sign().is_positive());
        if !report.eigenvector_positive {
            report.notes.push("eigenvector not positive".into());
        }
    }
    report.notes.push(alloc::format!(
        "dominance certified by squared-modulus polynomial of degree {}, gap witness {}",
        spectrum.squared_modulus_poly.degree().unwrap_or(0),
        spectrum.modulus_gap_witness
    ));
    report.eigenvector = Some(e);
    report.spectrum = Some(spectrum);
    report
}
