//! Scalar P-finite recurrences and first-order matrix recurrences.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numbers::{Rational, Sign};
use crate::poly::{Poly, RationalFunction};

/// `p_d(n) u_{n+d} = p_{d-1}(n) u_{n+d-1} + ... + p_0(n) u_n` with initial
/// values `u_0, ..., u_{d-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence {
    coeffs: Vec<Poly<Rational>>,
    initial: Vec<Rational>,
}

/// Result of shifting a recurrence past the integer roots of `p_d` and `p_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub shift: usize,
    /// `u_0, ..., u_{shift-1}`, to be sign-checked directly.
    pub prefix: Vec<Rational>,
    /// Recurrence for `u'_n = u_{n+shift}`.
    pub recurrence: Recurrence,
}

impl Recurrence {
    /// `coeffs` holds `p_0, ..., p_d`.
    pub fn new(coeffs: Vec<Poly<Rational>>, initial: Vec<Rational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DimensionMismatch("a recurrence needs order at least 1".into()));
        }
        if coeffs.last().is_some_and(Poly::is_zero) {
            return Err(Error::DimensionMismatch("leading coefficient p_d is zero".into()));
        }
        if initial.len() != coeffs.len() - 1 {
            return Err(Error::DimensionMismatch(format!(
                "order {} needs {} initial values, got {}",
                coeffs.len() - 1,
                coeffs.len() - 1,
                initial.len()
            )));
        }
        Ok(Recurrence { coeffs, initial })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly<Rational>] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn leading(&self) -> &Poly<Rational> {
        &self.coeffs[self.order()]
    }

    pub fn trailing(&self) -> &Poly<Rational> {
        &self.coeffs[0]
    }

    /// `u_{n+d}` from `u_n, ..., u_{n+d-1}`, or `None` when `p_d(n) = 0`.
    fn next_term(&self, n: usize, window: &[Rational]) -> Option<Rational> {
        let at = Rational::from_integer(BigInt::from(n));
        let lead = self.leading().eval(&at);
        if lead.is_zero() {
            return None;
        }
        let sum = window
            .iter()
            .zip(&self.coeffs)
            .fold(Rational::zero(), |acc, (u, p)| acc + p.eval(&at) * u);
        Some(sum / lead)
    }

    /// `u_0, ..., u_{count-1}`.
    pub fn terms(&self, count: usize) -> Result<Vec<Rational>> {
        let d = self.order();
        let mut out: Vec<Rational> = self.initial.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len() - d;
            let next = self.next_term(n, &out[n..]).ok_or(Error::DenominatorZero { index: n as u64 })?;
            out.push(next);
        }
        Ok(out)
    }

    /// Shifts the index past every nonnegative integer root of `p_d` and
    /// `p_0`. `prefix_values` continues the sequence after the initial
    /// values (`u_d, u_{d+1}, ...`); it must supply every term the recurrence
    /// cannot determine because `p_d` vanishes, and any term it does supply
    /// must agree with the recurrence.
    pub fn normalize(&self, prefix_values: &[Rational]) -> Result<Normalized> {
        let d = self.order();
        let roots = self.leading().nonnegative_integer_roots().into_iter().chain(self.trailing().nonnegative_integer_roots());
        let Some(k) = roots.max() else {
            return Ok(Normalized { shift: 0, prefix: Vec::new(), recurrence: self.clone() });
        };
        let s = k as usize + 1;
        let mut values = self.initial.clone();
        for idx in d..s + d {
            let n = idx - d;
            let computed = self.next_term(n, &values[n..idx]);
            let given = prefix_values.get(idx - d);
            let value = match (computed, given) {
                (Some(c), Some(g)) if &c != g => return Err(Error::InconsistentPrefix { index: idx }),
                (Some(c), _) => c,
                (None, Some(g)) => g.clone(),
                (None, None) => {
                    return Err(Error::InsufficientPrefix { needed: idx - d + 1, given: prefix_values.len() });
                }
            };
            values.push(value);
        }
        let shift = Rational::from_integer(BigInt::from(s));
        let coeffs = self.coeffs.iter().map(|p| p.shift(&shift)).collect();
        let initial = values.split_off(s);
        Ok(Normalized { shift: s, prefix: values, recurrence: Recurrence { coeffs, initial } })
    }

    /// First-order form `U_{n+1} = A(n) U_n` with `U_n = (u_n, ..., u_{n+d-1})`.
    pub fn companion(&self) -> Result<MatrixRecurrence> {
        let d = self.order();
        let lead = self.leading().clone();
        let mut rows = Vec::with_capacity(d);
        for i in 0..d - 1 {
            rows.push(
                (0..d)
                    .map(|j| RationalFunction::constant(if j == i + 1 { Rational::one() } else { Rational::zero() }))
                    .collect(),
            );
        }
        let last = self.coeffs[..d]
            .iter()
            .map(|p| RationalFunction::new(p.clone(), lead.clone()))
            .collect::<Result<Vec<_>>>()?;
        rows.push(last);
        let mut m = MatrixRecurrence::new(rows)?;
        m.companion = true;
        Ok(m)
    }

    /// `U_0 = (u_0, ..., u_{d-1})`.
    pub fn initial_vector(&self) -> Vec<Rational> {
        self.initial.clone()
    }
}

/// `U_{n+1} = A(n) U_n` with `A(n)` a square matrix of rational functions.
///
/// Alongside the entries a cleared form `A(n) = Num(n) / den(n)` is kept with
/// integer polynomial coefficients and a positive leading coefficient for
/// `den`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRecurrence {
    dim: usize,
    entries: Vec<RationalFunction>,
    num: Vec<Poly<Rational>>,
    den: Poly<Rational>,
    num_int: Vec<Vec<BigInt>>,
    den_int: Vec<BigInt>,
    companion: bool,
}

impl MatrixRecurrence {
    pub fn new(rows: Vec<Vec<RationalFunction>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("A(n) must be a nonempty square matrix".into()));
        }
        let entries: Vec<RationalFunction> = rows.into_iter().flatten().collect();
        let mut den = Poly::constant(Rational::one());
        for e in &entries {
            let g = Poly::gcd(&den, e.den());
            den = &den * &e.den().div_rem(&g).0;
        }
        let den = den.monic();
        let mut num: Vec<Poly<Rational>> =
            entries.iter().map(|e| &den.div_rem(e.den()).0 * e.num()).collect();
        // one integer scale for every coefficient, then divide out the content
        let all = num.iter().chain(core::iter::once(&den)).flat_map(|p| p.coeffs().iter());
        let lcm = all.clone().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = Rational::from_integer(lcm);
        let gcd = all.fold(BigInt::zero(), |acc, c| acc.gcd(&(c * &scale).to_integer()));
        let scale = scale / Rational::from_integer(gcd);
        let den = den.scale(&scale);
        num.iter_mut().for_each(|p| *p = p.scale(&scale));
        if let Some(&k) = den.nonnegative_integer_roots().first() {
            return Err(Error::DenominatorZero { index: k });
        }
        let to_int = |p: &Poly<Rational>| p.coeffs().iter().map(|c| c.to_integer()).collect::<Vec<_>>();
        let num_int = num.iter().map(to_int).collect();
        let den_int = to_int(&den);
        Ok(MatrixRecurrence { dim, entries, num, den, num_int, den_int, companion: false })
    }

    pub fn constant(a: &Matrix<Rational>) -> Result<Self> {
        Self::new(a.to_rows().into_iter().map(|r| r.into_iter().map(RationalFunction::constant).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_companion(&self) -> bool {
        self.companion
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.dim + j]
    }

    /// Row-major cleared numerators, `A(n) = Num(n) / den(n)`.
    pub fn numerators(&self) -> &[Poly<Rational>] {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn eval(&self, n: &Rational) -> Result<Matrix<Rational>> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Ok(Matrix::from_fn(self.dim, self.dim, |i, j| self.num[i * self.dim + j].eval(n) / &d))
    }

    pub fn limit_matrix(&self) -> Result<Matrix<Rational>> {
        let limits = self.entries.iter().map(RationalFunction::limit).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_fn(self.dim, self.dim, |i, j| limits[i * self.dim + j].clone()))
    }

    /// `A'(n) = A(n + s)`.
    pub fn shifted(&self, s: u64) -> Result<Self> {
        let c = Rational::from_integer(BigInt::from(s));
        let rows = (0..self.dim).map(|i| (0..self.dim).map(|j| self.entry(i, j).shift(&c)).collect()).collect();
        let mut m = Self::new(rows)?;
        m.companion = self.companion;
        Ok(m)
    }

    /// `det A(n)` as a rational function, via interpolation of `det Num(n)`.
    pub fn determinant(&self) -> Result<RationalFunction> {
        let degree: usize = (0..self.dim)
            .map(|i| (0..self.dim).filter_map(|j| self.num[i * self.dim + j].degree()).max().unwrap_or(0))
            .sum();
        let points: Vec<(Rational, Rational)> = (0..=degree)
            .map(|k| {
                let x = Rational::from_integer(BigInt::from(k));
                let m = Matrix::from_fn(self.dim, self.dim, |i, j| self.num[i * self.dim + j].eval(&x));
                (x, m.determinant())
            })
            .collect();
        let det = Poly::interpolate(&points);
        let mut den = Poly::constant(Rational::one());
        for _ in 0..self.dim {
            den = &den * &self.den;
        }
        RationalFunction::new(det, den)
    }

    /// Fails unless `A(n)` is invertible for every integer `n >= 0`.
    pub fn check_invertible(&self) -> Result<()> {
        let det = self.determinant()?;
        if det.is_zero() {
            return Err(Error::HypothesisViolation("A(n) is singular for every n".into()));
        }
        if let Some(k) = det.num().nonnegative_integer_roots().first() {
            return Err(Error::HypothesisViolation(format!("A(n) is singular at n = {k}")));
        }
        Ok(())
    }

    /// Cleared block product `Num(n+m-1) ... Num(n)` (row-major) and
    /// `den(n) ... den(n+m-1)`, so that `A(n+m-1) ... A(n)` is their quotient.
    pub fn block_product(&self, m: u32) -> (Vec<Poly<Rational>>, Poly<Rational>) {
        let d = self.dim;
        let mut prod = self.num.clone();
        let mut den = self.den.clone();
        for k in 1..m {
            let c = Rational::from_integer(BigInt::from(k));
            let step: Vec<Poly<Rational>> = self.num.iter().map(|p| p.shift(&c)).collect();
            prod = poly_matmul(&step, &prod, d);
            den = &den * &self.den.shift(&c);
        }
        (prod, den)
    }

    pub fn unroller(&self, u0: &[Rational]) -> Result<Unroller<'_>> {
        Unroller::new(self, u0)
    }
}

fn poly_matmul(a: &[Poly<Rational>], b: &[Poly<Rational>], d: usize) -> Vec<Poly<Rational>> {
    let mut out = vec![Poly::zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = &a[i * d + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..d {
                let bkj = &b[k * d + j];
                if !bkj.is_zero() {
                    out[i * d + j] = &out[i * d + j] + &(aik * bkj);
                }
            }
        }
    }
    out
}

fn eval_int(coeffs: &[BigInt], n: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

/// `numer / denom` with `denom > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledVector {
    pub numer: Vec<BigInt>,
    pub denom: BigInt,
}

impl ScaledVector {
    pub fn from_rationals(v: &[Rational]) -> Self {
        let denom = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numer = v.iter().map(|x| (x * Rational::from_integer(denom.clone())).to_integer()).collect();
        ScaledVector { numer, denom }
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.numer.iter().map(|x| Rational::new(x.clone(), self.denom.clone())).collect()
    }

    pub fn sign(&self, i: usize) -> Sign {
        Sign::of(&self.numer[i])
    }

    /// Divides out the common content. Numerators are reduced modulo the
    /// running gcd first, which stays small when the denominator does.
    pub fn reduce(&mut self) {
        let g = self.numer.iter().fold(self.denom.clone(), |acc, x| {
            if acc.is_one() {
                acc
            } else {
                acc.gcd(&x.mod_floor(&acc))
            }
        });
        if !g.is_one() && !g.is_zero() {
            self.numer.iter_mut().for_each(|x| *x /= &g);
            self.denom /= &g;
        }
    }
}

/// Streams `U_n, U_{n+1}, ...` in integer arithmetic without storing the
/// matrix product.
pub struct Unroller<'a> {
    rec: &'a MatrixRecurrence,
    index: u64,
    state: ScaledVector,
}

impl<'a> Unroller<'a> {
    pub fn new(rec: &'a MatrixRecurrence, u0: &[Rational]) -> Result<Self> {
        if u0.len() != rec.dim {
            return Err(Error::DimensionMismatch(format!("U_0 has length {}, expected {}", u0.len(), rec.dim)));
        }
        Ok(Unroller { rec, index: 0, state: ScaledVector::from_rationals(u0) })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn current(&self) -> &ScaledVector {
        &self.state
    }

    pub fn step(&mut self) -> Result<()> {
        let d = self.rec.dim;
        let n = BigInt::from(self.index);
        let q = eval_int(&self.rec.den_int, &n);
        if q.is_zero() {
            return Err(Error::DenominatorZero { index: self.index });
        }
        let mut next = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = BigInt::zero();
            for j in 0..d {
                let c = &self.rec.num_int[i * d + j];
                if c.is_empty() || self.state.numer[j].is_zero() {
                    continue;
                }
                acc += eval_int(c, &n) * &self.state.numer[j];
            }
            next.push(acc);
        }
        if q.is_negative() {
            next.iter_mut().for_each(|x| *x = -core::mem::take(x));
        }
        let q = q.abs();
        // cancel the new factor where it divides every numerator
        let g = next.iter().fold(q.clone(), |acc, x| if acc.is_one() { acc } else { acc.gcd(&x.mod_floor(&acc)) });
        if !g.is_one() {
            next.iter_mut().for_each(|x| *x /= &g);
        }
        self.state.numer = next;
        self.state.denom *= q / g;
        self.index += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        while self.index < n {
            self.step()?;
        }
        Ok(())
    }
}

/// `U_0, ..., U_n` as exact rational vectors.
pub fn unroll(rec: &MatrixRecurrence, u0: &[Rational], n: u64) -> Result<Vec<Vec<Rational>>> {
    let mut it = rec.unroller(u0)?;
    let mut out = vec![u0.to_vec()];
    while it.index() < n {
        it.step()?;
        let mut s = it.current().clone();
        s.reduce();
        out.push(s.to_rationals());
    }
    Ok(out)
}
