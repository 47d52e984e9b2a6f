//! Univariate polynomials over an exact [`Field`], Sturm chains, real root
//! counting and isolation, and the "positive from `N` on" decisions that the
//! induction checks reduce to.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numbers::{int, AlgebraicReal, Field, Rational, Sign};

/// An endpoint for root counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    At(Rational),
    PosInfinity,
}

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: K) -> Self {
        Self::new(alloc::vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: alloc::vec![K::zero(), K::one()] }
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.iter().map(K::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &K) -> K {
        self.coeffs.iter().rev().fold(K::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_rational(&self, x: &Rational) -> K {
        self.eval(&K::from_rational(x))
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * K::from_rational(&int(k as i64)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].inv().expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = alloc::vec![K::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = core::mem::replace(&mut rem[k], K::zero());
            if c.is_zero() {
                continue;
            }
            let q = c * lc_inv.clone();
            for (j, d) in divisor.coeffs[..dd].iter().enumerate() {
                let t = rem[k - dd + j].clone() - q.clone() * d.clone();
                rem[k - dd + j] = t;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        if self.coeffs.len() <= divisor.coeffs.len().saturating_sub(1) {
            return self.clone();
        }
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let mut r = K::positive_rem(&a, &b);
            K::normalize_remainder(&mut r.coeffs);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s a + t b = g` and `g` monic.
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::constant(K::one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(K::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
            t0 = core::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        if K::certainly_square_free(self) {
            return self.clone();
        }
        let g = Self::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        let step = Self::new(alloc::vec![K::from_rational(c), K::one()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, a| &(&acc * &step) + &Self::constant(a.clone()))
    }

    /// The standard Sturm chain `p, p', -rem(p, p'), ...` ending at the last
    /// nonzero remainder.
    pub fn sturm_chain(&self) -> Vec<Self> {
        self.chain(false)
    }

    /// Sturm chain with every member rescaled by a positive constant.
    pub(crate) fn reduced_chain(&self) -> Vec<Self> {
        self.chain(true)
    }

    fn chain(&self, rescale: bool) -> Vec<Self> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        out.push(self.clone());
        let mut prev = self.clone();
        let mut cur = self.derivative();
        while !cur.is_zero() {
            if rescale {
                K::rescale_positive(&mut cur.coeffs);
            }
            out.push(cur.clone());
            let next = -K::positive_rem(&prev, &cur);
            prev = cur;
            cur = next;
        }
        out
    }

    pub fn sign_at(&self, at: &Bound) -> Sign {
        let Some(lc) = self.leading() else {
            return Sign::Zero;
        };
        match at {
            Bound::At(x) => self.eval_rational(x).sign(),
            Bound::PosInfinity => lc.sign(),
            Bound::NegInfinity => {
                let s = lc.sign();
                if self.degree().unwrap_or(0) % 2 == 1 {
                    s.flip()
                } else {
                    s
                }
            }
        }
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &Bound, hi: &Bound) -> usize {
        assert!(!self.is_zero(), "count_roots of the zero polynomial");
        let chain = self.square_free().chain(true);
        count_in(&chain, lo, hi)
    }

    /// True when some root lies in the closed interval `[lo, hi]`.
    pub fn has_root_in_closed(&self, lo: &Rational, hi: &Rational) -> bool {
        if self.eval_rational(lo).is_zero() {
            return true;
        }
        lo < hi && self.count_roots(&Bound::At(lo.clone()), &Bound::At(hi.clone())) > 0
    }

    /// Every real root has absolute value below this bound.
    pub fn cauchy_bound(&self) -> Rational {
        let Some(lc) = self.leading() else {
            return Rational::one();
        };
        let inv = lc.inv().expect("nonzero");
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c.clone() * inv.clone()).abs_bound())
            .max()
            .unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    /// True iff `p(x) > 0` for every real `x >= n`.
    pub fn is_positive_from(&self, n: u64) -> bool {
        K::poly_positive_from(self, n)
    }

    /// The least integer `K >= 0` with `p(x) > 0` for all real `x >= K`.
    pub fn positivity_threshold(&self) -> Result<u64> {
        K::poly_positivity_threshold(self)
    }

    pub(crate) fn sturm_positive_from(&self, n: u64) -> bool {
        match self.positive_shape() {
            None => false,
            Some(None) => true,
            Some(Some(chain)) => self.positive_on_chain(&chain, n),
        }
    }

    /// `None` if the leading coefficient is not positive, `Some(None)` for a
    /// positive constant, otherwise the Sturm chain of the square-free part.
    fn positive_shape(&self) -> Option<Option<Vec<Self>>> {
        let lc = self.leading()?;
        if !lc.sign().is_positive() {
            return None;
        }
        if self.degree() == Some(0) {
            return Some(None);
        }
        Some(Some(self.square_free().chain(true)))
    }

    fn positive_on_chain(&self, chain: &[Self], n: u64) -> bool {
        let at = Rational::from_integer(BigInt::from(n));
        self.eval_rational(&at).sign().is_positive() && count_in(chain, &Bound::At(at), &Bound::PosInfinity) == 0
    }

    pub(crate) fn sturm_positivity_threshold(&self) -> Result<u64> {
        let chain = match self.positive_shape() {
            None => return Err(Error::NonPositiveLeadingCoeff),
            Some(None) => return Ok(0),
            Some(Some(chain)) => chain,
        };
        if self.positive_on_chain(&chain, 0) {
            return Ok(0);
        }
        let bound = self.cauchy_bound().ceil().to_integer();
        let mut hi = bound.to_u64().unwrap_or(u64::MAX);
        let mut lo = 0u64;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.positive_on_chain(&chain, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

fn count_in<K: Field>(chain: &[Poly<K>], lo: &Bound, hi: &Bound) -> usize {
    let vlo = sign_variations(chain.iter().map(|p| p.sign_at(lo)));
    let vhi = sign_variations(chain.iter().map(|p| p.sign_at(hi)));
    vlo.saturating_sub(vhi)
}

/// Number of sign changes, zeros skipped.
pub fn sign_variations(signs: impl IntoIterator<Item = Sign>) -> usize {
    let mut last = Sign::Zero;
    let mut count = 0;
    for s in signs {
        if s.is_zero() {
            continue;
        }
        if !last.is_zero() && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl Poly<Rational> {
    /// Evaluates the rational polynomial at a point of an extension field.
    pub fn eval_in<F: Field>(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + F::from_rational(c))
    }

    /// Integer coefficients with gcd one and the same sign as `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() || g.is_one() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Disjoint isolating intervals for the distinct real roots, ascending.
    /// Each interval is either a single rational root `[c, c]` or an open
    /// interval with nonzero values at both ends and one root inside.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let sf = self.square_free().monic();
        let chain = sf.chain(true);
        let b = sf.cauchy_bound().ceil() + Rational::one();
        let lo = -b.clone();
        let count_at = |x: &Rational| sign_variations(chain.iter().map(|p| p.eval(x).sign()));
        let total = count_at(&lo) - count_at(&b);
        isolate(&sf, &count_at, lo, b, total, &mut out);
        out
    }

    /// Distinct real roots as algebraic numbers, ascending.
    pub fn real_roots(&self) -> Vec<AlgebraicReal> {
        let sf = self.square_free();
        self.isolate_real_roots()
            .into_iter()
            .map(|(lo, hi)| AlgebraicReal::new(sf.clone(), lo, hi).expect("isolating interval"))
            .collect()
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let sf = self.square_free().monic();
        self.isolate_real_roots()
            .into_iter()
            .filter_map(|(lo, hi)| {
                if lo == hi {
                    Some(lo)
                } else {
                    AlgebraicReal::unchecked(sf.clone(), lo, hi).find_rational_value()
                }
            })
            .collect()
    }

    /// Roots in `{0, 1, 2, ...}`, ascending.
    pub fn nonnegative_integer_roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        if self.count_roots(&Bound::At(Rational::new(BigInt::from(-1), BigInt::from(2))), &Bound::PosInfinity) == 0 {
            return Vec::new();
        }
        self.rational_roots()
            .into_iter()
            .filter(|q| q.is_integer() && !q.is_negative())
            .filter_map(|q| q.to_integer().to_u64())
            .collect()
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut result = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(Rational::one());
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = &basis * &Self::new(alloc::vec![-xj.clone(), Rational::one()]);
                    denom *= xi - xj;
                }
            }
            result = &result + &basis.scale(&(yi / denom));
        }
        result
    }
}

fn isolate(
    p: &Poly<Rational>,
    count_at: &impl Fn(&Rational) -> usize,
    lo: Rational,
    hi: Rational,
    count: usize,
    out: &mut Vec<(Rational, Rational)>,
) {
    if count == 0 {
        return;
    }
    if count == 1 && !p.eval(&lo).is_zero() {
        if p.eval(&hi).is_zero() {
            out.push((hi.clone(), hi));
        } else {
            out.push((lo, hi));
        }
        return;
    }
    let mid = (&lo + &hi) / int(2);
    let at_mid = count_at(&mid);
    let left = count_at(&lo) - at_mid;
    isolate(p, count_at, lo, mid.clone(), left, out);
    isolate(p, count_at, mid, hi, count - left, out);
}

impl<K: Field> Add for &Poly<K> {
    type Output = Poly<K>;

    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a.clone() + b.clone(),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(coeffs)
    }
}

impl<K: Field> Sub for &Poly<K> {
    type Output = Poly<K>;

    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        self + &(-rhs.clone())
    }
}

impl<K: Field> Neg for Poly<K> {
    type Output = Poly<K>;

    fn neg(self) -> Poly<K> {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<K: Field> Mul for &Poly<K> {
    type Output = Poly<K>;

    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = alloc::vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = coeffs[i + j].clone() + a.clone() * b.clone();
                coeffs[i + j] = t;
            }
        }
        Poly::new(coeffs)
    }
}

impl<K: Field + fmt::Display> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// `num / den` over `Q`, coprime, `den` monic.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl RationalFunction {
    pub fn new(num: Poly<Rational>, den: Poly<Rational>) -> Result<Self> {
        let Some(lc) = den.leading().cloned() else {
            return Err(Error::ZeroDivision);
        };
        if num.is_zero() {
            return Ok(Self::from_poly(Poly::zero()));
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let scale = den.leading().cloned().unwrap_or(lc).recip();
        Ok(RationalFunction { num: num.scale(&scale), den: den.scale(&scale) })
    }

    pub fn from_poly(p: Poly<Rational>) -> Self {
        RationalFunction { num: p, den: Poly::constant(Rational::one()) }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Limit as `n -> infinity`.
    pub fn limit(&self) -> Result<Rational> {
        let dn = match self.num.degree() {
            None => return Ok(Rational::zero()),
            Some(d) => d,
        };
        let dd = self.den.degree().unwrap_or(0);
        match dn.cmp(&dd) {
            core::cmp::Ordering::Greater => Err(Error::NotPoincareType),
            core::cmp::Ordering::Less => Ok(Rational::zero()),
            core::cmp::Ordering::Equal => Ok(self.num.coeffs()[dn].clone() / self.den.coeffs()[dd].clone()),
        }
    }

    /// `f(n + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        RationalFunction { num: self.num.shift(c), den: self.den.shift(c) }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
