//! The cones `B_r(v)`, Hilbert's projective ratio and the polynomial
//! conditions expressing invariance of a cone under `T A(n) T^{-1}`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numbers::{Field, Rational};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Finite(Rational),
    Infinite,
}

impl Radius {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Radius::Infinite)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => write!(f, "inf"),
        }
    }
}

/// `B_r(v) = { x > 0 : x_i v_j <= r x_j v_i for all i, j }`, closed in the
/// open orthant. With `r = inf` it is the whole open orthant.
#[derive(Clone, Debug)]
pub struct Cone<K> {
    v: Vec<K>,
    r: Radius,
}

fn ratio<K: Field>(x: &K, y: &K) -> K {
    x.clone() * y.inv().expect("positive")
}

fn max_exact<K: Field>(items: impl Iterator<Item = K>) -> K {
    items.reduce(|a, b| if b.cmp_exact(&a) == Ordering::Greater { b } else { a }).expect("nonempty")
}

fn min_exact<K: Field>(items: impl Iterator<Item = K>) -> K {
    items.reduce(|a, b| if b.cmp_exact(&a) == Ordering::Less { b } else { a }).expect("nonempty")
}

/// `max_i(x_i/y_i) / min_i(x_i/y_i)` for positive `x`, `y`; Hilbert's
/// pseudo-metric is its logarithm.
pub fn projective_ratio<K: Field>(x: &[K], y: &[K]) -> K {
    assert_eq!(x.len(), y.len());
    let hi = max_exact(x.iter().zip(y).map(|(a, b)| ratio(a, b)));
    let lo = min_exact(x.iter().zip(y).map(|(a, b)| ratio(a, b)));
    ratio(&hi, &lo)
}

/// `log` of [`projective_ratio`], for display.
pub fn hilbert_distance(x: &[Rational], y: &[Rational]) -> f64 {
    libm::log(projective_ratio(x, y).to_f64().unwrap_or(f64::INFINITY))
}

impl<K: Field> Cone<K> {
    pub fn new(v: Vec<K>, r: Radius) -> Result<Self> {
        if v.is_empty() || !v.iter().all(|x| x.sign().is_positive()) {
            return Err(Error::MalformedCertificate("cone center must be positive".into()));
        }
        if let Radius::Finite(r) = &r {
            if r <= &Rational::one() {
                return Err(Error::MalformedCertificate("cone radius must exceed 1".into()));
            }
        }
        Ok(Cone { v, r })
    }

    pub fn center(&self) -> &[K] {
        &self.v
    }

    pub fn radius(&self) -> &Radius {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// The `2^d - 2` extreme rays with coordinates in `{v_i, r v_i}`; for
    /// `d = 1` the single ray `v`.
    pub fn generators(&self) -> Result<Vec<Vec<K>>> {
        let r = self.r.finite().ok_or(Error::InfiniteRadius)?;
        let d = self.dim();
        if d == 1 {
            return Ok(vec![self.v.clone()]);
        }
        let rk = K::from_rational(r);
        let full = (1u64 << d) - 1;
        Ok((1..full)
            .map(|mask| {
                (0..d)
                    .map(|i| if mask >> i & 1 == 1 { rk.clone() * self.v[i].clone() } else { self.v[i].clone() })
                    .collect()
            })
            .collect())
    }

    pub fn contains(&self, x: &[K]) -> bool {
        if x.len() != self.dim() || !x.iter().all(|c| c.sign().is_positive()) {
            return false;
        }
        let Radius::Finite(r) = &self.r else {
            return true;
        };
        self.ratios_within(&K::from_rational(r), x)
    }

    /// Membership of an integer vector; only signs are needed when `r = inf`.
    /// Long entries are first compared through their leading bits.
    pub fn contains_integer(&self, x: &[BigInt]) -> bool {
        if x.len() != self.dim() || !x.iter().all(Signed::is_positive) {
            return false;
        }
        let Radius::Finite(r) = &self.r else {
            return true;
        };
        let rk = K::from_rational(r);
        let bits = x.iter().map(BigInt::bits).max().unwrap_or(0);
        if bits > 2 * LEADING_BITS {
            let s = bits - LEADING_BITS;
            let lo: Vec<K> = x.iter().map(|c| lift_int(&(c >> s))).collect();
            let hi: Vec<K> = x.iter().map(|c| lift_int(&((c >> s) + 1u32))).collect();
            if let Some(inside) = self.bracket(&rk, &lo, &hi) {
                return inside;
            }
        }
        let lifted: Vec<K> = x.iter().map(lift_int).collect();
        self.ratios_within(&rk, &lifted)
    }

    /// `x_i v_j <= r x_j v_i` for all `i != j`.
    fn ratios_within(&self, rk: &K, x: &[K]) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || !self.exceeds(rk, &x[i], &x[j], i, j)))
    }

    fn exceeds(&self, rk: &K, xi: &K, xj: &K, i: usize, j: usize) -> bool {
        let lhs = xi.clone() * self.v[j].clone();
        let rhs = rk.clone() * xj.clone() * self.v[i].clone();
        lhs.cmp_exact(&rhs) == Ordering::Greater
    }

    /// Decides membership for every `x` with `lo <= x <= hi`, or `None`.
    fn bracket(&self, rk: &K, lo: &[K], hi: &[K]) -> Option<bool> {
        let d = self.dim();
        let mut undecided = false;
        for i in 0..d {
            for j in 0..d {
                if i == j || !self.exceeds(rk, &hi[i], &lo[j], i, j) {
                    continue;
                }
                if self.exceeds(rk, &lo[i], &hi[j], i, j) {
                    return Some(false);
                }
                undecided = true;
            }
        }
        (!undecided).then_some(true)
    }

    /// Whether `T^{-1} B_r(v)` lies in the open positive orthant.
    pub fn image_positive(&self, t_inv: &Matrix<Rational>) -> bool {
        match &self.r {
            Radius::Infinite => (0..t_inv.rows()).all(|i| {
                let row = t_inv.row(i);
                row.iter().all(|x| !x.is_negative()) && row.iter().any(Signed::is_positive)
            }),
            Radius::Finite(_) => {
                let lifted = t_inv.map(K::from_rational);
                self.generators()
                    .expect("finite radius")
                    .iter()
                    .all(|g| lifted.mul_vec(g).iter().all(|x| x.sign().is_positive()))
            }
        }
    }
}

const LEADING_BITS: u64 = 128;

fn lift_int<K: Field>(c: &BigInt) -> K {
    K::from_rational(&Rational::from_integer(c.clone()))
}

/// Birkhoff's `psi(A) = min a_ik a_jl / (a_il a_jk)` and the contraction
/// coefficient `(1 - sqrt psi) / (1 + sqrt psi)` as a float.
pub fn birkhoff(a: &Matrix<Rational>) -> Result<(Rational, f64)> {
    if !a.is_positive() {
        return Err(Error::NotPositiveMatrix);
    }
    let mut psi: Option<Rational> = None;
    for i in 0..a.rows() {
        for j in 0..a.rows() {
            for k in 0..a.cols() {
                for l in 0..a.cols() {
                    let q = a.get(i, k) * a.get(j, l) / (a.get(i, l) * a.get(j, k));
                    if psi.as_ref().is_none_or(|p| &q < p) {
                        psi = Some(q);
                    }
                }
            }
        }
    }
    let psi = psi.unwrap_or_else(Rational::one);
    let s = libm::sqrt(psi.to_f64().unwrap_or(0.0));
    Ok((psi, (1.0 - s) / (1.0 + s)))
}

/// A polynomial in `n` that must be positive for every real `n >= N`, or
/// may also vanish identically when `allow_zero` is set.
#[derive(Clone, Debug)]
pub struct Condition<K: Field> {
    pub poly: Poly<K>,
    pub allow_zero: bool,
}

impl<K: Field> Condition<K> {
    pub fn holds_from(&self, n: u64) -> bool {
        (self.allow_zero && self.poly.is_zero()) || self.poly.is_positive_from(n)
    }

    /// Least `K` from which the condition holds, `None` if it never does.
    pub fn threshold(&self) -> Option<u64> {
        if self.allow_zero && self.poly.is_zero() {
            return Some(0);
        }
        self.poly.positivity_threshold().ok()
    }
}

/// Conditions under which `T A(n+m-1) ... A(n) T^{-1}` maps the cone into
/// itself for every `n >= N`, given the cleared block product
/// `Num(n) / den(n)`.
///
/// For `r = inf` each entry of `T Num(n) T^{-1}` must vanish identically or
/// be eventually positive, with a nonzero entry in every row; a row made
/// only of zero entries makes the conditions unsatisfiable (`None`). For
/// finite `r` the image `z` of every generator must satisfy
/// `z_i v_j <= r z_j v_i` and `z_1 > 0`.
pub fn induction_conditions<K: Field>(
    cone: &Cone<K>,
    t: &Matrix<Rational>,
    t_inv: &Matrix<Rational>,
    block_num: &[Poly<Rational>],
    block_den: &Poly<Rational>,
) -> Option<Vec<Condition<K>>> {
    let d = cone.dim();
    let pn = conjugate(t, t_inv, block_num, d);
    let mut out = vec![Condition { poly: block_den.map(K::from_rational), allow_zero: false }];
    match cone.radius() {
        Radius::Infinite => {
            for i in 0..d {
                let row = &pn[i * d..(i + 1) * d];
                if row.iter().all(Poly::is_zero) {
                    return None;
                }
                out.extend(row.iter().map(|p| Condition { poly: p.map(K::from_rational), allow_zero: true }));
            }
        }
        Radius::Finite(r) => {
            let rk = K::from_rational(r);
            let pk: Vec<Poly<K>> = pn.iter().map(|p| p.map(K::from_rational)).collect();
            let v = cone.center();
            for g in cone.generators().expect("finite radius") {
                let z: Vec<Poly<K>> = (0..d)
                    .map(|i| {
                        (0..d).fold(Poly::zero(), |acc, j| &acc + &pk[i * d + j].scale(&g[j]))
                    })
                    .collect();
                out.push(Condition { poly: z[0].clone(), allow_zero: false });
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            let poly = &z[j].scale(&(rk.clone() * v[i].clone())) - &z[i].scale(&v[j]);
                            out.push(Condition { poly, allow_zero: true });
                        }
                    }
                }
            }
        }
    }
    Some(out)
}

/// `T Num(n) T^{-1}` entrywise.
fn conjugate(t: &Matrix<Rational>, t_inv: &Matrix<Rational>, num: &[Poly<Rational>], d: usize) -> Vec<Poly<Rational>> {
    let mul = |a: &dyn Fn(usize, usize) -> Poly<Rational>, b: &dyn Fn(usize, usize) -> Poly<Rational>| {
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push((0..d).fold(Poly::zero(), |acc, k| &acc + &(&a(i, k) * &b(k, j))));
            }
        }
        out
    };
    let tn = mul(&|i, k| Poly::constant(t.get(i, k).clone()), &|k, j| num[k * d + j].clone());
    mul(&|i, k| tn[i * d + k].clone(), &|k, j| Poly::constant(t_inv.get(k, j).clone()))
}

/// `max` of the thresholds, `None` if some condition never holds.
pub fn joint_threshold<K: Field>(conditions: &[Condition<K>]) -> Option<u64> {
    conditions.iter().try_fold(0u64, |acc, c| c.threshold().map(|k| acc.max(k)))
}

pub fn all_hold_from<K: Field>(conditions: &[Condition<K>], n: u64) -> bool {
    conditions.iter().all(|c| c.holds_from(n))
}
