//! Exact arithmetic over `Q` and over a real number field `Q(lambda)`.
//!
//! `lambda` is an [`AlgebraicReal`]: a square-free polynomial together with a
//! rational interval containing exactly one of its roots. Elements of
//! `Q(lambda)` are [`FieldElement`]s, polynomials in `lambda` reduced modulo
//! the defining polynomial. Signs are decided exactly: zero by an exact
//! algebraic test, nonzero signs by interval evaluation on a refined
//! isolating interval.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::descartes;
use crate::error::{Error, Result};
use crate::poly::{Bound, Poly};

/// Arbitrary precision rational number, always kept reduced.
pub type Rational = BigRational;

/// Builds the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A field with exact sign determination: `Q` or `Q(lambda)`.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_rational(q: &Rational) -> Self;

    fn inv(&self) -> Result<Self>;

    fn sign(&self) -> Sign;

    /// A rational upper bound on the absolute value.
    fn abs_bound(&self) -> Rational;

    /// Divides a coefficient list by some positive scalar. Used to keep
    /// Sturm chains small; the default does nothing.
    fn rescale_positive(_coeffs: &mut [Self]) {}

    /// Normalizes a remainder in a Euclidean gcd. The default makes it monic.
    fn normalize_remainder(coeffs: &mut [Self]) {
        if let Some(lc) = coeffs.iter().rev().find(|c| !c.is_zero()).cloned() {
            let inv = lc.inv().expect("nonzero");
            for c in coeffs.iter_mut() {
                *c = c.clone() * inv.clone();
            }
        }
    }

    /// The value as a rational, when it is one.
    fn to_rational(&self) -> Option<Rational>;

    /// A quick sufficient test for a square-free polynomial.
    fn certainly_square_free(_p: &Poly<Self>) -> bool {
        false
    }

    fn poly_positive_from(p: &Poly<Self>, n: u64) -> bool {
        match rational_poly(p) {
            Some(q) => q.is_positive_from(n),
            None => p.sturm_positive_from(n),
        }
    }

    fn poly_positivity_threshold(p: &Poly<Self>) -> Result<u64> {
        match rational_poly(p) {
            Some(q) => q.positivity_threshold(),
            None => p.sturm_positivity_threshold(),
        }
    }

    /// A positive multiple of `a mod b`, coefficients in ascending order.
    fn positive_rem(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        a.rem(b)
    }

    fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

fn rational_poly<K: Field>(p: &Poly<K>) -> Option<Poly<Rational>> {
    p.coeffs().iter().map(K::to_rational).collect::<Option<Vec<_>>>().map(Poly::new)
}

impl Field for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::ZeroDivision)
        } else {
            Ok(self.recip())
        }
    }

    fn sign(&self) -> Sign {
        Sign::of(self)
    }

    fn abs_bound(&self) -> Rational {
        self.abs()
    }

    fn normalize_remainder(coeffs: &mut [Self]) {
        Self::rescale_positive(coeffs);
    }

    fn certainly_square_free(p: &Poly<Self>) -> bool {
        descartes::certainly_square_free(&p.primitive_integer())
    }

    fn poly_positive_from(p: &Poly<Self>, n: u64) -> bool {
        let Some(lc) = p.leading() else {
            return false;
        };
        if !lc.is_positive() {
            return false;
        }
        let c = p.primitive_integer();
        let n = BigInt::from(n);
        descartes::sign_at(&c, &Rational::from_integer(n.clone())).is_positive()
            && !descartes::has_root_from(&square_free_integer(p, c), &n)
    }

    fn poly_positivity_threshold(p: &Poly<Self>) -> Result<u64> {
        let lc = p.leading().ok_or(Error::NonPositiveLeadingCoeff)?;
        if !lc.is_positive() {
            return Err(Error::NonPositiveLeadingCoeff);
        }
        let c = square_free_integer(p, p.primitive_integer());
        Ok(descartes::root_free_from(&c).to_u64().unwrap_or(u64::MAX))
    }

    /// Pseudo-division over `Z`, scaling by `|lc(b)|` so signs are kept.
    fn positive_rem(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        let mut r = a.primitive_integer();
        let d = b.primitive_integer();
        let Some(lb) = d.last() else {
            panic!("division by the zero polynomial");
        };
        let (alb, negative) = (lb.abs(), lb.is_negative());
        while r.len() >= d.len() && !r.is_empty() {
            let c = r.pop().expect("nonempty");
            let shift = r.len() + 1 - d.len();
            for x in r.iter_mut() {
                *x *= &alb;
            }
            for (k, dk) in d[..d.len() - 1].iter().enumerate() {
                let t = &c * dk;
                if negative {
                    r[shift + k] += t;
                } else {
                    r[shift + k] -= t;
                }
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Poly::new(r.into_iter().map(|x| Rational::from_integer(if g.is_zero() { x } else { x / &g })).collect())
    }

    fn rescale_positive(coeffs: &mut [Self]) {
        let content = rational_content(coeffs);
        if content.is_zero() || content.is_one() {
            return;
        }
        for c in coeffs.iter_mut() {
            *c = &*c / &content;
        }
    }
}

fn square_free_integer(p: &Poly<Rational>, c: Vec<BigInt>) -> Vec<BigInt> {
    descartes::square_free_part(&c).unwrap_or_else(|| p.square_free().primitive_integer())
}

/// Positive gcd of the numerators over the lcm of the denominators.
pub fn rational_content(coeffs: &[Rational]) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return Rational::zero();
    }
    Rational::new(num, den)
}

pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Enclosure of `x * y` for `x` in `[a_lo, a_hi]` and `y` in `[b_lo, b_hi]`.
fn interval_mul(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> (Rational, Rational) {
    if !a.0.is_negative() && !b.0.is_negative() {
        return (a.0 * b.0, a.1 * b.1);
    }
    let products = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    let mut lo = products[0].clone();
    let mut hi = products[0].clone();
    for p in &products[1..] {
        if *p < lo {
            lo = p.clone();
        }
        if *p > hi {
            hi = p.clone();
        }
    }
    (lo, hi)
}

/// Horner evaluation of `sum coeffs[k] x^k` over `x` in `[lo, hi]`.
pub(crate) fn horner_enclosure(coeffs: &[Rational], lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let Some(last) = coeffs.last() else {
        return (Rational::zero(), Rational::zero());
    };
    if lo == hi {
        let v = coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * lo + c);
        return (v.clone(), v);
    }
    let mut acc = (last.clone(), last.clone());
    for c in coeffs.iter().rev().skip(1) {
        let (a, b) = interval_mul((&acc.0, &acc.1), (lo, hi));
        acc = (a + c, b + c);
    }
    acc
}

/// Partial quotients of the (finite) continued fraction of `q`.
pub fn continued_fraction(q: &Rational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        out.push(a);
        num = den;
        den = r;
    }
    out
}

/// Convergents `p_k / q_k` of a list of partial quotients.
pub fn convergents(quotients: &[BigInt]) -> Vec<Rational> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p0 + &p1;
        let q = a * &q0 + &q1;
        out.push(Rational::new(p.clone(), q.clone()));
        p1 = core::mem::replace(&mut p0, p);
        q1 = core::mem::replace(&mut q0, q);
    }
    out
}

/// The rational of smallest denominator in the closed interval `[a, b]`.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if !a.is_positive() && !b.is_negative() {
        return Rational::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let ceil_a = a.ceil();
    if &ceil_a <= b {
        return ceil_a;
    }
    // a and b lie strictly inside (n, n + 1)
    let n = a.floor();
    let inner = simplest_between(&(b - &n).recip(), &(a - &n).recip());
    n + inner.recip()
}

/// A real algebraic number: the unique root of a square-free polynomial in a
/// closed rational interval.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicReal {
    minpoly: Poly<Rational>,
    lo: Rational,
    hi: Rational,
    irreducible: bool,
}

impl AlgebraicReal {
    pub fn from_rational(q: Rational) -> Self {
        AlgebraicReal {
            minpoly: Poly::new(alloc::vec![-q.clone(), Rational::one()]),
            lo: q.clone(),
            hi: q,
            irreducible: true,
        }
    }

    /// Validates `(poly, [lo, hi])`. A root that turns out to be rational is
    /// normalized to degree one with `lo == hi`.
    pub fn new(poly: Poly<Rational>, lo: Rational, hi: Rational) -> Result<Self> {
        let deg = poly.degree().ok_or(Error::NotIsolating)?;
        if deg == 0 || lo > hi {
            return Err(Error::NotIsolating);
        }
        let poly = poly.monic();
        if Poly::gcd(&poly, &poly.derivative()).degree() != Some(0) {
            return Err(Error::NotSquareFree);
        }
        let at_lo = poly.eval(&lo);
        if lo == hi {
            return if at_lo.is_zero() { Ok(Self::from_rational(lo)) } else { Err(Error::NotIsolating) };
        }
        let inside = poly.count_roots(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
        if at_lo.is_zero() {
            return if inside == 0 { Ok(Self::from_rational(lo)) } else { Err(Error::NotIsolating) };
        }
        if inside != 1 {
            return Err(Error::NotIsolating);
        }
        if poly.eval(&hi).is_zero() {
            return Ok(Self::from_rational(hi));
        }
        let candidate = AlgebraicReal { minpoly: poly, lo, hi, irreducible: false };
        if let Some(q) = candidate.find_rational_value() {
            return Ok(Self::from_rational(q));
        }
        let irreducible = deg == 1 || (deg <= 3 && candidate.minpoly.rational_roots().is_empty());
        Ok(AlgebraicReal { irreducible, ..candidate })
    }

    /// Trusts the caller that `[lo, hi]` isolates a root of the square-free
    /// monic `poly` with nonzero values at both ends.
    pub(crate) fn unchecked(poly: Poly<Rational>, lo: Rational, hi: Rational) -> Self {
        AlgebraicReal { minpoly: poly, lo, hi, irreducible: false }
    }

    pub fn minpoly(&self) -> &Poly<Rational> {
        &self.minpoly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    /// True when the defining polynomial is known to be irreducible, so that
    /// a reduced element is zero exactly when all its coefficients vanish.
    pub fn is_known_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Looks for a rational root of the defining polynomial inside the
    /// interval. Denominators of rational roots divide the leading
    /// coefficient of the primitive integer polynomial, so a convergent of the
    /// midpoint of a narrow enough interval finds it.
    pub(crate) fn find_rational_value(&self) -> Option<Rational> {
        let ints = self.minpoly.primitive_integer();
        let lead = ints.last()?.abs();
        let width = Rational::new(BigInt::one(), BigInt::from(4) * &lead * &lead);
        let narrow = self.refine(&width);
        if let Some(q) = narrow.as_rational() {
            return Some(q.clone());
        }
        let mid = (&narrow.lo + &narrow.hi) / int(2);
        for c in convergents(&continued_fraction(&mid)) {
            if c.denom() > &lead {
                break;
            }
            if c >= narrow.lo && c <= narrow.hi && self.minpoly.eval(&c).is_zero() {
                return Some(c);
            }
        }
        None
    }

    fn bisect(&self) -> AlgebraicReal {
        if self.lo == self.hi {
            return self.clone();
        }
        let mid = (&self.lo + &self.hi) / int(2);
        let at_mid = self.minpoly.eval(&mid);
        let mut next = self.clone();
        if at_mid.is_zero() {
            next.lo = mid.clone();
            next.hi = mid;
        } else if Sign::of(&self.minpoly.eval(&self.lo)) == Sign::of(&at_mid) {
            next.lo = mid;
        } else {
            next.hi = mid;
        }
        next
    }

    /// Bisects until the interval is at most `width` wide. The returned
    /// interval isolates the same root.
    pub fn refine(&self, width: &Rational) -> AlgebraicReal {
        let mut cur = self.clone();
        while &cur.hi - &cur.lo > *width {
            cur = cur.bisect();
        }
        cur
    }

    pub fn sign(&self) -> Sign {
        self.cmp_rational(&Rational::zero()).into_sign()
    }

    /// Compares the number with a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        let mut cur = self.clone();
        loop {
            if q < &cur.lo {
                return Ordering::Greater;
            }
            if q > &cur.hi {
                return Ordering::Less;
            }
            if cur.lo == cur.hi || cur.minpoly.eval(q).is_zero() {
                return Ordering::Equal;
            }
            cur = cur.bisect();
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_exact(&self, other: &AlgebraicReal) -> Ordering {
        if let Some(q) = other.as_rational() {
            return self.cmp_rational(q);
        }
        if let Some(q) = self.as_rational() {
            return other.cmp_rational(q).reverse();
        }
        let lo = core::cmp::max(&self.lo, &other.lo).clone();
        let hi = core::cmp::min(&self.hi, &other.hi).clone();
        if lo <= hi {
            let g = Poly::gcd(&self.minpoly, &other.minpoly);
            if g.degree().unwrap_or(0) > 0 && g.has_root_in_closed(&lo, &hi) {
                return Ordering::Equal;
            }
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            a = a.bisect();
            b = b.bisect();
        }
    }

    /// A continued-fraction convergent `c` of the number with `|c - a| < tol`;
    /// the first one in the convergent sequence that qualifies.
    pub fn rational_convergent(&self, tol: &Rational) -> Rational {
        assert!(tol.is_positive(), "tolerance must be positive");
        if let Some(q) = self.as_rational() {
            return q.clone();
        }
        let mut cur = self.refine(&(tol / int(4)));
        let mut tried = 0usize;
        loop {
            let cf_lo = continued_fraction(&cur.lo);
            let cf_hi = continued_fraction(&cur.hi);
            let shared = cf_lo
                .iter()
                .zip(&cf_hi)
                .take(cf_lo.len().min(cf_hi.len()).saturating_sub(1))
                .take_while(|(x, y)| x == y)
                .count();
            let prefix = &cf_lo[..shared];
            let convs = convergents(prefix);
            for c in convs.iter().skip(tried) {
                let below = self.cmp_rational(&(c - tol)) == Ordering::Greater;
                let above = self.cmp_rational(&(c + tol)) == Ordering::Less;
                if below && above {
                    return c.clone();
                }
            }
            tried = convs.len();
            let width = (&cur.hi - &cur.lo) / int(16);
            cur = cur.refine(&width);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let narrow = self.refine(&Rational::new(BigInt::one(), BigInt::one() << 60u32));
        ((&narrow.lo + &narrow.hi) / int(2)).to_f64().unwrap_or(f64::NAN)
    }
}

trait IntoSign {
    fn into_sign(self) -> Sign;
}

impl IntoSign for Ordering {
    fn into_sign(self) -> Sign {
        match self {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root of {} in [{}, {}]", self.minpoly, self.lo, self.hi),
        }
    }
}

/// An element of `Q(lambda)`, stored as a polynomial in `lambda` of degree
/// below the degree of the defining polynomial. Elements without a base are
/// rational constants and combine with any field.
#[derive(Clone)]
pub struct FieldElement {
    base: Option<Arc<AlgebraicReal>>,
    coeffs: Vec<Rational>,
}

fn trim(coeffs: &mut Vec<Rational>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

fn same_base(a: &Arc<AlgebraicReal>, b: &Arc<AlgebraicReal>) -> bool {
    Arc::ptr_eq(a, b) || a.minpoly == b.minpoly
}

impl FieldElement {
    /// Reduces `coeffs` (ascending powers of lambda) modulo the defining
    /// polynomial of `base`.
    pub fn new(base: &Arc<AlgebraicReal>, coeffs: Vec<Rational>) -> Self {
        let reduced = Poly::new(coeffs).rem(base.minpoly());
        FieldElement { base: Some(base.clone()), coeffs: reduced.into_coeffs() }
    }

    pub fn constant(q: Rational) -> Self {
        let mut coeffs = alloc::vec![q];
        trim(&mut coeffs);
        FieldElement { base: None, coeffs }
    }

    /// `lambda` itself.
    pub fn generator(base: &Arc<AlgebraicReal>) -> Self {
        Self::new(base, alloc::vec![Rational::zero(), Rational::one()])
    }

    pub fn base(&self) -> Option<&Arc<AlgebraicReal>> {
        self.base.as_ref()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The rational value when the representation is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn join(&self, other: &Self) -> Option<Arc<AlgebraicReal>> {
        match (&self.base, &other.base) {
            (Some(a), Some(b)) => {
                assert!(same_base(a, b), "field elements over different number fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn as_poly(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.clone())
    }

    /// Enclosure of the value for `lambda` in the interval of `alg`.
    pub fn enclosure(&self, alg: &AlgebraicReal) -> (Rational, Rational) {
        horner_enclosure(&self.coeffs, &alg.lo, &alg.hi)
    }

    /// Exact zero test. With a possibly reducible defining polynomial `m`,
    /// `x(lambda) = 0` exactly when `gcd(x, m)` vanishes at `lambda`.
    pub fn is_exactly_zero(&self) -> bool {
        if self.coeffs.is_empty() {
            return true;
        }
        let Some(base) = &self.base else {
            return false;
        };
        if self.coeffs.len() == 1 || base.irreducible {
            return false;
        }
        let g = Poly::gcd(&self.as_poly(), base.minpoly());
        g.degree().unwrap_or(0) > 0 && g.has_root_in_closed(&base.lo, &base.hi)
    }

    pub fn sign_exact(&self) -> Sign {
        if self.coeffs.is_empty() {
            return Sign::Zero;
        }
        let Some(base) = &self.base else {
            return Sign::of(&self.coeffs[0]);
        };
        if self.coeffs.len() == 1 {
            return Sign::of(&self.coeffs[0]);
        }
        let mut alg: AlgebraicReal = (**base).clone();
        let mut zero_checked = false;
        loop {
            let (lo, hi) = self.enclosure(&alg);
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            if alg.lo == alg.hi {
                return Sign::Zero;
            }
            if !zero_checked {
                if self.is_exactly_zero() {
                    return Sign::Zero;
                }
                zero_checked = true;
            }
            let width = (&alg.hi - &alg.lo) / int(4);
            alg = alg.refine(&width);
        }
    }

    /// A rational `c` with `|c - x| < tol`, of smallest denominator among the
    /// rationals in an enclosure-derived window around `x`.
    pub fn approximate(&self, tol: &Rational) -> Rational {
        if let Some(q) = self.as_rational() {
            return q;
        }
        let base = self.base.as_ref().expect("non-constant element has a base");
        let mut alg: AlgebraicReal = (**base).clone();
        let half = tol / int(2);
        loop {
            let (lo, hi) = self.enclosure(&alg);
            if &hi - &lo <= half {
                return simplest_between(&(&hi - &half), &(&lo + &half));
            }
            let width = (&alg.hi - &alg.lo) / int(4);
            if width.is_zero() {
                return lo;
            }
            alg = alg.refine(&width);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let tol = Rational::new(BigInt::one(), BigInt::one() << 60u32);
        self.approximate(&tol).to_f64().unwrap_or(f64::NAN)
    }

    fn inverse(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::ZeroDivision);
        }
        let Some(base) = &self.base else {
            return Ok(Self::constant(self.coeffs[0].recip()));
        };
        let x = self.as_poly();
        let (g, s, _) = Poly::ext_gcd(&x, base.minpoly());
        if g.degree() == Some(0) {
            let scale = g.coeffs()[0].recip();
            return Ok(Self::new(base, s.scale(&scale).into_coeffs()));
        }
        if g.has_root_in_closed(&base.lo, &base.hi) {
            return Err(Error::ZeroDivision);
        }
        // x is a unit modulo the factor of the defining polynomial that
        // carries lambda
        let (cofactor, _) = base.minpoly().div_rem(&g);
        let (g2, s2, _) = Poly::ext_gcd(&x, &cofactor);
        let scale = g2.coeffs()[0].recip();
        Ok(Self::new(base, s2.scale(&scale).into_coeffs()))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
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
                1 => write!(f, "({c})*L")?,
                _ => write!(f, "({c})*L^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        let base = self.join(&rhs);
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        trim(&mut long);
        FieldElement { base, coeffs: long }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(mut self) -> FieldElement {
        for c in self.coeffs.iter_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: FieldElement) -> FieldElement {
        let base = self.join(&rhs);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return FieldElement { base, coeffs: Vec::new() };
        }
        if self.coeffs.len() == 1 || rhs.coeffs.len() == 1 {
            let (scalar, other) =
                if self.coeffs.len() == 1 { (&self.coeffs[0], rhs.coeffs) } else { (&rhs.coeffs[0], self.coeffs) };
            let mut coeffs: Vec<Rational> = other.into_iter().map(|c| c * scalar).collect();
            trim(&mut coeffs);
            return FieldElement { base, coeffs };
        }
        let product = &self.as_poly() * &rhs.as_poly();
        match base {
            Some(b) => {
                let reduced = product.rem(b.minpoly()).into_coeffs();
                FieldElement { base: Some(b), coeffs: reduced }
            }
            None => FieldElement { base: None, coeffs: product.into_coeffs() },
        }
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement { base: None, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.is_exactly_zero()
    }
}

impl One for FieldElement {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.coeffs == other.coeffs {
            return true;
        }
        (self.clone() - other.clone()).is_exactly_zero()
    }
}

impl Field for FieldElement {
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }

    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }

    fn inv(&self) -> Result<Self> {
        self.inverse()
    }

    fn sign(&self) -> Sign {
        self.sign_exact()
    }

    fn abs_bound(&self) -> Rational {
        match &self.base {
            None => self.coeffs.first().map(|c| c.abs()).unwrap_or_default(),
            Some(base) => {
                let (lo, hi) = self.enclosure(base);
                core::cmp::max(lo.abs(), hi.abs())
            }
        }
    }
}
