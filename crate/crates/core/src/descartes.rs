//! Sign questions for integer polynomials via Descartes' rule of signs.
//!
//! Coefficients are ascending `BigInt` lists. Used for the rational case of
//! positivity thresholds, where Sturm chains grow too large.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numbers::{Rational, Sign};

/// `p(x + a)`.
pub fn taylor_shift(c: &[BigInt], a: &BigInt) -> Vec<BigInt> {
    let mut out = c.to_vec();
    if a.is_zero() {
        return out;
    }
    let n = out.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = &out[j + 1] * a;
            out[j] += t;
        }
    }
    out
}

/// `p(2^k x)`.
fn scale_pow2(c: &[BigInt], k: u64) -> Vec<BigInt> {
    c.iter().enumerate().map(|(i, x)| x << (k * i as u64)).collect()
}

/// `2^d p(x / 2)`.
fn halve(c: &[BigInt]) -> Vec<BigInt> {
    let d = c.len() - 1;
    c.iter().enumerate().map(|(i, x)| x << (d - i)).collect()
}

pub fn variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for x in c {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sign of `p(x)`, evaluated homogeneously over the integers.
pub fn sign_at(c: &[BigInt], x: &Rational) -> Sign {
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for coef in c.iter().rev() {
        acc = acc * p + coef * &qpow;
        qpow *= q;
    }
    Sign::of(&acc)
}

/// A power of two above every positive root (Fujiwara).
fn positive_root_bound_log2(c: &[BigInt]) -> u64 {
    let d = c.len() - 1;
    let lc_bits = c[d].bits() as i64;
    let mut best = 0i64;
    for k in 1..=d {
        let x = &c[d - k];
        if x.is_zero() {
            continue;
        }
        let diff = x.bits() as i64 - lc_bits + 1;
        if diff > 0 {
            best = best.max((diff + k as i64 - 1) / k as i64);
        }
    }
    (best + 1) as u64
}

/// True when `p` has a root in the open interval `(0, 1)`. `p` must be
/// square-free for termination.
fn has_root_unit(c: &[BigInt]) -> bool {
    // roots in (0,1) map to positive roots of (x+1)^d p(1/(x+1))
    let mut rev = c.to_vec();
    rev.reverse();
    match variations(&taylor_shift(&rev, &BigInt::one())) {
        0 => false,
        1 => true,
        _ => {
            let left = halve(c);
            let right = taylor_shift(&left, &BigInt::one());
            right[0].is_zero() || has_root_unit(&left) || has_root_unit(&right)
        }
    }
}

/// True when the square-free `p` has a root in `(0, inf)`.
pub fn has_positive_root(c: &[BigInt]) -> bool {
    if c.len() <= 1 {
        return false;
    }
    match variations(c) {
        0 => false,
        1 => true,
        _ => {
            let k = positive_root_bound_log2(c);
            has_root_unit(&scale_pow2(c, k))
        }
    }
}

/// True when the square-free `p` has a root in `[n, inf)`.
pub fn has_root_from(c: &[BigInt], n: &BigInt) -> bool {
    let s = taylor_shift(c, n);
    s[0].is_zero() || has_positive_root(&s)
}

/// Least integer `K >= 0` such that the square-free `p`, with positive
/// leading coefficient, has no root in `[K, inf)`.
pub fn root_free_from(c: &[BigInt]) -> BigInt {
    if !has_root_from(c, &BigInt::zero()) {
        return BigInt::zero();
    }
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << positive_root_bound_log2(c);
    // invariant: root in [lo, inf), none in [hi, inf)
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if has_root_from(c, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, k| acc * x + k)
}

fn primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    let mut g = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if c.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for x in c.iter_mut() {
            *x = &*x / &g;
        }
    }
    c
}

/// `a / b` when `b` divides `a` over `Z[x]`.
pub fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let lb = b.last()?;
    if a.len() < b.len() {
        return a.iter().all(Zero::is_zero).then(Vec::new);
    }
    let mut r = a.to_vec();
    let mut q = alloc::vec![BigInt::zero(); a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &r[k + b.len() - 1];
        let (f, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &f * bi;
        }
        q[k] = f;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

/// Heuristic gcd: evaluate at a large integer, take the integer gcd and read
/// the polynomial back from its balanced digits. `None` if every try fails.
pub fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (a, b) = (primitive(a.to_vec()), primitive(b.to_vec()));
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let norm = |c: &[BigInt]| c.iter().map(Signed::abs).max().unwrap_or_default();
    let mut xi = 2 * norm(&a).min(norm(&b)) + 29u32;
    for _ in 0..6 {
        let gamma = eval_int(&a, &xi).gcd(&eval_int(&b, &xi));
        let half = &xi >> 1;
        let mut digits = Vec::new();
        let mut v = gamma;
        while !v.is_zero() {
            let mut d = v.mod_floor(&xi);
            if d > half {
                d -= &xi;
            }
            v = (v - &d) / &xi;
            digits.push(d);
        }
        let g = primitive(digits);
        if !g.is_empty() && exact_div(&a, &g).is_some() && exact_div(&b, &g).is_some() {
            return Some(g);
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// The square-free part of `p`, if the heuristic gcd succeeds.
pub fn square_free_part(c: &[BigInt]) -> Option<Vec<BigInt>> {
    if certainly_square_free(c) {
        return Some(c.to_vec());
    }
    let dc: Vec<BigInt> = c.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect();
    let g = heuristic_gcd(c, &dc)?;
    exact_div(c, &g)
}

const PRIMES: [u64; 3] = [2305843009213693951, 1000000007, 998244353];

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, q - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        e >>= 1;
    }
    acc
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().expect("nonempty"), q);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().expect("nonempty"), inv, q);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                let t = mul_mod(f, *bi, q);
                a[shift + i] = (a[shift + i] + q - t) % q;
            }
            trim(&mut a);
        }
        core::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// A sufficient test for square-freeness: `gcd(p, p') = 1` modulo a prime
/// not dividing the leading coefficient.
pub fn certainly_square_free(c: &[BigInt]) -> bool {
    let d = c.len().saturating_sub(1);
    if d <= 1 {
        return true;
    }
    PRIMES.iter().any(|&q| {
        let qb = BigInt::from(q);
        let reduce = |x: &BigInt| x.mod_floor(&qb).to_u64().expect("reduced below q");
        let p: Vec<u64> = c.iter().map(reduce).collect();
        if p[d] == 0 || (d as u64).is_multiple_of(q) {
            return false;
        }
        let dp: Vec<u64> = p.iter().enumerate().skip(1).map(|(i, x)| mul_mod(*x, i as u64 % q, q)).collect();
        gcd_degree_mod(p, dp, q) == 0
    })
}
