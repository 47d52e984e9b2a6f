//! Change of basis `T` making `T A^m T^{-1}` entrywise positive.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numbers::{AlgebraicReal, Field, FieldElement, Rational};
use crate::spectral::{eigenvector, left_eigenvector};

/// Exponents `k` of the rationalization tolerances `2^-k`, tried in order.
pub const TOLERANCE_SCHEDULE: [u32; 5] = [16, 32, 64, 128, 256];

/// Largest power `m` tried before giving up on a candidate `T`.
pub const DEFAULT_M_CAP: u32 = 64;

#[derive(Clone, Debug)]
pub struct TransformResult {
    pub t: Matrix<Rational>,
    pub t_inv: Matrix<Rational>,
    pub m: u32,
    /// `T e`, entrywise positive.
    pub v: Vec<FieldElement>,
    /// Tolerance used to rationalize, `None` when `T` was exact.
    pub tolerance: Option<Rational>,
}

#[cfg(test)]
use alloc::vec;

#[cfg(test)]
fn lift(a: &Matrix<Rational>, lambda: &Arc<AlgebraicReal>) -> Matrix<FieldElement> {
    a.map(|x| FieldElement::new(lambda, vec![x.clone()]))
}

/// `(P, Q = P^{-1})` with `Q A Q^{-1} = (lambda) (+) B'`: the first column
/// of `P` is `e`, the others span the invariant complement `ker f^T`.
pub fn block_split(
    a: &Matrix<Rational>,
    lambda: &Arc<AlgebraicReal>,
    e: &[FieldElement],
) -> (Matrix<FieldElement>, Matrix<FieldElement>) {
    let d = a.rows();
    let f = left_eigenvector(a, lambda);
    let j0 = f.iter().position(|x| !x.is_zero()).expect("left eigenvector is nonzero");
    let fj0 = f[j0].inv().expect("nonzero");
    let others: Vec<usize> = (0..d).filter(|&i| i != j0).collect();
    let p = Matrix::from_fn(d, d, |i, c| {
        if c == 0 {
            return e[i].clone();
        }
        let col = others[c - 1];
        if i == col {
            FieldElement::one()
        } else if i == j0 {
            -(f[col].clone() * fj0.clone())
        } else {
            FieldElement::zero()
        }
    });
    let q = p.inverse().expect("e is not in ker f^T for a simple eigenvalue");
    (p, q)
}

/// `T_alg = S Q` with `S = (a, e_1 - e_2, ..., e_1 - e_d)`, `a = (1, ..., 1)`.
/// Then `T_alg e = a` and `M = T_alg A T_alg^{-1}` has right eigenvector `a`
/// and left eigenvector `b = (1/d, ..., 1/d)` for `lambda`.
pub fn build_t_exact(a: &Matrix<Rational>, lambda: &Arc<AlgebraicReal>, e: &[FieldElement]) -> Matrix<FieldElement> {
    let d = a.rows();
    let (_, q) = block_split(a, lambda, e);
    let s = Matrix::from_fn(d, d, |i, c| {
        let x = if c == 0 || i == 0 {
            1
        } else if i == c {
            -1
        } else {
            0
        };
        FieldElement::constant(Rational::from_integer(BigInt::from(x)))
    });
    s.mul(&q)
}

fn pow2(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Smallest `m <= m_cap` with `T A^m T^{-1} > 0`.
pub fn positive_power(t: &Matrix<Rational>, t_inv: &Matrix<Rational>, a: &Matrix<Rational>, m_cap: u32) -> Option<u32> {
    let b = t.mul(a).mul(t_inv);
    let mut power = b.clone();
    for m in 1..=m_cap {
        if power.is_positive() {
            return Some(m);
        }
        power = power.mul(&b);
    }
    None
}

/// Completes a rational `T` into a [`TransformResult`], negating `T` when
/// `T e < 0`.
pub fn complete(
    t: Matrix<Rational>,
    a: &Matrix<Rational>,
    e: &[FieldElement],
    m_cap: u32,
    tolerance: Option<Rational>,
) -> Result<TransformResult> {
    let t_inv = t.inverse()?;
    let lifted = t.map(|x| FieldElement::constant(x.clone()));
    let mut v = lifted.mul_vec(e);
    let (mut t, mut t_inv) = (t, t_inv);
    if v.iter().all(|x| x.sign().is_negative()) {
        t = t.neg();
        t_inv = t_inv.neg();
        v = v.into_iter().map(|x| -x).collect();
    }
    if !v.iter().all(|x| x.sign().is_positive()) {
        return Err(Error::NotPositiveMatrix);
    }
    let m = positive_power(&t, &t_inv, a, m_cap).ok_or(Error::PowerCapExceeded(m_cap))?;
    Ok(TransformResult { t, t_inv, m, v, tolerance })
}

/// Rounds `T_alg` entrywise within `tol` and completes it.
pub fn rationalize(
    t_alg: &Matrix<FieldElement>,
    a: &Matrix<Rational>,
    e: &[FieldElement],
    tol: &Rational,
    m_cap: u32,
) -> Result<TransformResult> {
    let exact = t_alg.entries().all(|x| x.as_rational().is_some());
    let t = t_alg.map(|x| x.approximate(tol));
    complete(t, a, e, m_cap, (!exact).then(|| tol.clone()))
}

/// Builds `T_alg` and rationalizes it along [`TOLERANCE_SCHEDULE`].
pub fn find_transform(
    a: &Matrix<Rational>,
    lambda: &Arc<AlgebraicReal>,
    companion: bool,
    m_cap: u32,
) -> Result<TransformResult> {
    let e = eigenvector(a, lambda, companion);
    let t_alg = build_t_exact(a, lambda, &e);
    if lambda.as_rational().is_some() {
        return rationalize(&t_alg, a, &e, &Rational::one(), m_cap);
    }
    let mut last = Error::PowerCapExceeded(m_cap);
    for k in TOLERANCE_SCHEDULE {
        match rationalize(&t_alg, a, &e, &pow2(k), m_cap) {
            Ok(r) => return Ok(r),
            Err(err) => last = err,
        }
    }
    Err(last)
}

/// `v = T e` for a caller-supplied `T`, without any search.
pub fn image_of_eigenvector(t: &Matrix<Rational>, e: &[FieldElement]) -> Vec<FieldElement> {
    t.map(|x| FieldElement::constant(x.clone())).mul_vec(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{int, rat};
    use crate::spectral::dominant_eigenvalue;

    fn straub_limit() -> Matrix<Rational> {
        Matrix::from_rows(vec![vec![int(0), int(1)], vec![rat(-729, 2), rat(81, 2)]]).unwrap()
    }

    fn check_identities(a: &Matrix<Rational>, companion: bool) {
        let s = dominant_eigenvalue(a).unwrap();
        let e = eigenvector(a, &s.lambda, companion);
        let t = build_t_exact(a, &s.lambda, &e);
        let la = lift(a, &s.lambda);
        let m = t.mul(&la).mul(&t.inverse().unwrap());
        let d = a.rows();
        let l = s.generator();
        let ones = vec![FieldElement::one(); d];
        let ma = m.mul_vec(&ones);
        let mtb = m.transpose().mul_vec(&ones);
        for i in 0..d {
            assert!((ma[i].clone() - l.clone()).is_zero());
            assert!((mtb[i].clone() - l.clone()).is_zero());
        }
        let te = t.mul_vec(&e);
        assert!(te.iter().all(|x| (x.clone() - FieldElement::one()).is_zero()));
    }

    #[test]
    fn exact_transform_identities() {
        check_identities(&straub_limit(), true);
        check_identities(&Matrix::from_ints(&[&[0, 1], &[-1, 34]]), true);
        check_identities(&Matrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]), false);
        check_identities(&Matrix::from_ints(&[&[5]]), true);
    }

    #[test]
    fn block_split_diagonalizes_straub() {
        let a = straub_limit();
        let s = dominant_eigenvalue(&a).unwrap();
        let e = eigenvector(&a, &s.lambda, true);
        let (p, q) = block_split(&a, &s.lambda, &e);
        let b = q.mul(&lift(&a, &s.lambda)).mul(&p);
        assert_eq!(b.get(0, 0).as_rational(), Some(int(27)));
        assert!(b.get(0, 1).is_zero() && b.get(1, 0).is_zero());
        assert_eq!(b.get(1, 1).as_rational(), Some(rat(27, 2)));
    }

    #[test]
    fn straub_transform() {
        let a = straub_limit();
        let s = dominant_eigenvalue(&a).unwrap();
        let r = find_transform(&a, &s.lambda, true, DEFAULT_M_CAP).unwrap();
        assert_eq!(r.t.mul(&r.t_inv), Matrix::identity(2));
        assert!(r.v.iter().all(|x| x.sign().is_positive()));
        assert_eq!(r.tolerance, None);

        let given = Matrix::from_ints(&[&[-14, 1], &[1, 0]]).scale(&rat(1, 13));
        let e = eigenvector(&a, &s.lambda, true);
        let r = complete(given, &a, &e, DEFAULT_M_CAP, None).unwrap();
        assert_eq!(r.m, 1);
    }

    #[test]
    fn sign_fix_negates() {
        let a = straub_limit();
        let s = dominant_eigenvalue(&a).unwrap();
        let e = eigenvector(&a, &s.lambda, true);
        let neg = Matrix::from_ints(&[&[-14, 1], &[1, 0]]).scale(&rat(-1, 13));
        let r = complete(neg, &a, &e, DEFAULT_M_CAP, None).unwrap();
        assert_eq!(r.v[0].as_rational(), Some(rat(13, 13)));
        assert_eq!(r.t.get(0, 0), &rat(-14, 13));
    }

    #[test]
    fn apery_rationalized() {
        let a = Matrix::from_ints(&[&[0, 1], &[-1, 34]]);
        let s = dominant_eigenvalue(&a).unwrap();
        let r = find_transform(&a, &s.lambda, true, DEFAULT_M_CAP).unwrap();
        assert!(r.tolerance.is_some());
        assert!(r.t.mul(&a).mul(&r.t_inv).pow(r.m).is_positive());
    }
}
