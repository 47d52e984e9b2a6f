//! Independent reference computations.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use positivity_core::{Poly, Rational};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `sum_k (-27)^(n-k) 2^(2k-n) (3k)!/k!^3 C(k, n-k)`.
pub fn straub_term(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    for k in n.div_ceil(2)..=n {
        let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
        let t = BigInt::from(27u32).pow((n - k) as u32)
            * (BigInt::one() << (2 * k - n))
            * (factorial(3 * k) / factorial(k).pow(3))
            * binomial(k, n - k);
        s += t * sign;
    }
    s
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &x| acc * z + x)
}

/// All complex roots by Durand-Kerner iteration.
pub fn complex_roots(p: &Poly<Rational>) -> Vec<Complex64> {
    let lc = p.leading().expect("nonzero").to_f64().unwrap();
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap() / lc).collect();
    let d = c.len() - 1;
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let denom = (0..d).filter(|&j| j != i).fold(Complex64::one(), |acc, j| acc * (z[i] - z[j]));
            let step = horner(&c, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Real parts of the numerically real roots.
pub fn real_roots(p: &Poly<Rational>) -> Vec<f64> {
    complex_roots(p).into_iter().filter(|z| z.im.abs() < 1e-7 * (1.0 + z.re.abs())).map(|z| z.re).collect()
}
