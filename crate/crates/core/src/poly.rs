//! Dense univariate polynomials with coefficients in ascending degree order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Scalar;
use crate::numtheory::{mobius, totient};

/// Coefficients are trimmed so the last one is nonzero. The zero polynomial
/// has no coefficients, degree 0 and `is_zero() == true`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![T::one()] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c·X^n`
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    /// `X^n·p(1/X)`; `n` must be at least the degree.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(self.is_zero() || n >= self.degree());
        let mut c = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[n - i] = a.clone();
        }
        Self::new(c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Power series product truncated to `n` terms.
    pub fn mul_trunc(&self, rhs: &Self, n: usize) -> Self {
        let mut out = vec![T::zero(); n.min(self.coeffs.len() + rhs.coeffs.len())];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        self.mul_trunc(rhs, n)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar + fmt::Display + Signed> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display + Signed> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `X - a`
    pub fn linear_root(a: BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact quotient `self / d` when `d` divides `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.to_rational().div_rem(&d.to_rational()).ok()?;
        if !r.is_zero() {
            return None;
        }
        q.to_integer()
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Squarefree decomposition into irreducible factors over the integers:
    /// `self = unit·content·∏ f_i^{e_i}` with each `f_i` primitive with
    /// positive leading coefficient. Constant polynomials give no factors.
    pub fn factor(&self) -> Vec<(IntPolynomial, u32)> {
        use algebraics::polynomial::Polynomial as APoly;
        if self.degree() == 0 {
            return Vec::new();
        }
        let prim = self.primitive_part();
        let ap: APoly<BigInt> = APoly::from(prim.coeffs.clone());
        let mut out: Vec<(IntPolynomial, u32)> = ap
            .factor()
            .polynomial_factors
            .into_iter()
            .map(|f| {
                let coeffs: Vec<BigInt> = f.polynomial.iter().collect();
                let p = IntPolynomial::new(coeffs).primitive_part();
                (p, f.power as u32)
            })
            .filter(|(p, _)| p.degree() > 0)
            .collect();
        out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.coeffs.cmp(&b.0.coeffs)));
        out
    }

    /// Returns `m` if this polynomial, up to sign, is the cyclotomic `Φ_m`.
    pub fn cyclotomic_index(&self) -> Option<u64> {
        let d = self.degree() as u64;
        if d == 0 {
            return None;
        }
        let p = self.primitive_part();
        if !p.is_monic() {
            return None;
        }
        // totient(m) >= sqrt(m/2), so m <= 2 d^2
        (1..=2 * d * d + 2)
            .filter(|&m| totient(m) == d)
            .find(|&m| cyclotomic(m) == p)
    }

    /// Lowest `m` such that `Φ_m` divides this polynomial, searching all `m`
    /// with `totient(m) <= degree`.
    pub fn cyclotomic_divisor(&self) -> Option<u64> {
        let d = self.degree() as u64;
        if self.is_zero() || d == 0 {
            return None;
        }
        (1..=2 * d * d + 2)
            .filter(|&m| totient(m) <= d)
            .find(|&m| cyclotomic(m).divides(self))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl RatPolynomial {
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial("inverse"));
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.leading();
        if self.is_zero() || self.degree() < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .all(|c| c.is_integer())
            .then(|| IntPolynomial::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
    }

    /// Primitive integer polynomial with the same roots.
    pub fn primitive_integer(&self) -> IntPolynomial {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer());
        IntPolynomial::new(scaled.collect()).primitive_part()
    }
}

/// Cyclotomic polynomial `Φ_m = ∏_{d | m} (X^d - 1)^{μ(m/d)}`.
pub fn cyclotomic(m: u64) -> IntPolynomial {
    assert!(m >= 1);
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let xd = &IntPolynomial::monomial(BigInt::one(), d as usize) - &IntPolynomial::one();
        match mobius(m / d) {
            1 => num = &num * &xd,
            -1 => den = &den * &xd,
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic quotient is exact")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn zero_polynomial_conventions() {
        let z = IntPolynomial::zero();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
        assert_eq!(p(&[0, 0, 0]), z);
        assert_eq!(p(&[1, 2, 0]).degree(), 1);
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 1]);
        let b = p(&[-2, 1]);
        assert_eq!(&a * &b, p(&[2, -3, 1]));
        assert_eq!(&a - &a, IntPolynomial::zero());
        assert_eq!(p(&[1, -3, 2]).reverse(2), p(&[2, -3, 1]));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert_eq!(a.pow(3), p(&[-1, 3, -3, 1]));
        assert_eq!(p(&[2, -3, 1]).eval(&BigInt::from(5)), BigInt::from(12));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 1]).to_string(), "X^2 - 3X + 1");
        assert_eq!(p(&[-2, 0, 1]).to_string(), "X^2 - 2");
        assert_eq!(p(&[0, -1]).to_string(), "-X");
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(p(&[1, 0, 1]).cyclotomic_index(), Some(4));
        assert_eq!(p(&[1, -3, 1]).cyclotomic_index(), None);
        assert_eq!(p(&[1, -2, 1]).cyclotomic_divisor(), Some(1));
        assert_eq!(p(&[1, -3, 1]).cyclotomic_divisor(), None);
    }

    #[test]
    fn factorization() {
        // (X^4 - 1)(X^2 - 3X + 1)
        let f = &p(&[-1, 0, 0, 0, 1]) * &p(&[1, -3, 1]);
        let fs = f.factor();
        let prod = fs.iter().fold(IntPolynomial::one(), |acc, (g, e)| &acc * &g.pow(*e));
        assert_eq!(prod, f);
        assert_eq!(fs.len(), 4);
        let sq = &p(&[-2, 1]).pow(2) * &p(&[1, 1]);
        let fs = sq.factor();
        assert!(fs.contains(&(p(&[-2, 1]), 2)));
        assert!(fs.contains(&(p(&[1, 1]), 1)));
    }

    #[test]
    fn rational_gcd_and_division() {
        let a = p(&[2, -3, 1]).to_rational();
        let b = p(&[-1, 1]).to_rational();
        assert_eq!(a.gcd(&b), b);
        assert_eq!(p(&[2, -3, 1]).div_exact(&p(&[-2, 1])), Some(p(&[-1, 1])));
        assert_eq!(p(&[2, -3, 1]).div_exact(&p(&[-3, 1])), None);
        let half = RatPolynomial::new(vec![
            BigRational::new((-1).into(), 2.into()),
            BigRational::one(),
        ]);
        assert_eq!(half.primitive_integer(), p(&[-1, 2]));
    }
}
