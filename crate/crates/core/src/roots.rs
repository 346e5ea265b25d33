//! Certified complex root enclosures for square-free integer polynomials.
//!
//! Approximations come from an Aberth iteration in `f64` refined by
//! Weierstrass (Durand–Kerner) steps in dyadic rational arithmetic at the
//! requested precision. Certification is exact: with approximations `z_i` and
//! Weierstrass corrections `w_i = f(z_i) / (a_n ∏_{j≠i} (z_i - z_j))`, the roots
//! of `f` are the eigenvalues of `diag(z) - w·1ᵀ`, so by Gershgorin every root
//! lies in some disk `D(z_i - w_i, (n-1)|w_i|)` and a union of `k` disks that
//! avoids the others holds exactly `k` roots. Pairwise disjoint disks thus
//! isolate one root each.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

pub type ComplexRational = Complex<BigRational>;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Precision ceiling for escalation loops.
pub const MAX_PRECISION: u32 = 8192;

#[derive(Clone, Debug, PartialEq)]
pub struct RootDisk {
    pub center: ComplexRational,
    /// Upper bound on the distance from `center` to the root.
    pub radius: BigRational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

pub fn round_dyadic(x: &BigRational, prec: u32) -> BigRational {
    let scale = BigRational::from_integer(pow2(prec));
    BigRational::new((x * &scale).round().to_integer(), pow2(prec))
}

fn round_complex(z: &ComplexRational, prec: u32) -> ComplexRational {
    Complex::new(round_dyadic(&z.re, prec), round_dyadic(&z.im, prec))
}

/// Lower and upper dyadic bounds on `sqrt(x)` for `x >= 0`.
pub fn sqrt_bounds(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative());
    let scaled = (x * BigRational::from_integer(pow2(2 * bits))).floor().to_integer();
    let s = num_integer::Roots::sqrt(&scaled);
    let den = pow2(bits);
    (BigRational::new(s.clone(), den.clone()), BigRational::new(s + 1, den))
}

pub fn abs_upper(z: &ComplexRational, bits: u32) -> BigRational {
    sqrt_bounds(&z.norm_sqr(), bits).1
}

pub fn abs_lower(z: &ComplexRational, bits: u32) -> BigRational {
    sqrt_bounds(&z.norm_sqr(), bits).0
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl RootDisk {
    pub fn exact(center: ComplexRational) -> Self {
        Self { center, radius: BigRational::zero() }
    }

    /// Certified bounds `lo <= |root| <= hi`.
    pub fn modulus_bounds(&self) -> (BigRational, BigRational) {
        let bits = bits_for(&self.radius);
        let (clo, chi) = sqrt_bounds(&self.center.norm_sqr(), bits);
        let lo = &clo - &self.radius;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        (lo, chi + &self.radius)
    }

    /// Certified bounds on `|root|^2`.
    pub fn modulus_squared_bounds(&self) -> (BigRational, BigRational) {
        let (lo, hi) = self.modulus_bounds();
        (&lo * &lo, &hi * &hi)
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.center.re), to_f64(&self.center.im))
    }

    pub fn modulus_f64(&self) -> f64 {
        self.center_f64().norm()
    }

    /// True when the two disks certainly do not meet.
    pub fn disjoint_from(&self, other: &RootDisk) -> bool {
        let d = (&self.center - &other.center).norm_sqr();
        let r = &self.radius + &other.radius;
        d > &r * &r
    }

    /// Mirror image in the real axis.
    pub fn conj(&self) -> Self {
        Self { center: self.center.conj(), radius: self.radius.clone() }
    }
}

/// Bits for sqrt bounds that are small next to `radius`.
fn bits_for(radius: &BigRational) -> u32 {
    if radius.is_zero() {
        return 2 * DEFAULT_PRECISION;
    }
    let r = to_f64(radius);
    let b = if r > 0.0 { (-r.log2()).ceil() as i64 + 8 } else { 2 * MAX_PRECISION as i64 };
    b.clamp(64, 4 * MAX_PRECISION as i64) as u32
}

fn eval_complex(f: &[BigRational], z: &ComplexRational) -> ComplexRational {
    let mut acc = Complex::new(BigRational::zero(), BigRational::zero());
    for c in f.iter().rev() {
        acc = &acc * z;
        acc.re += c;
    }
    acc
}

fn weierstrass(f: &[BigRational], z: &[ComplexRational]) -> Vec<ComplexRational> {
    let lead = f.last().expect("nonzero polynomial").clone();
    (0..z.len())
        .map(|i| {
            let mut den = Complex::new(lead.clone(), BigRational::zero());
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    den = &den * &(&z[i] - zj);
                }
            }
            if den.is_zero() {
                return Complex::new(BigRational::zero(), BigRational::zero());
            }
            eval_complex(f, &z[i]) / den
        })
        .collect()
}

fn aberth_f64(f: &IntPolynomial) -> Option<Vec<Complex64>> {
    let c = f.to_f64_coeffs();
    let n = f.degree();
    let lead = *c.last()?;
    if !c.iter().all(|x| x.is_finite()) || lead == 0.0 {
        return None;
    }
    let a: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let radius = a[..n].iter().map(|x| x.abs()).fold(0.0f64, f64::max).max(1e-3);
    let r0 = a[0].abs().powf(1.0 / n as f64).clamp(1e-3, 1.0 + radius);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r0, theta)
        })
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ci in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + ci;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z.iter().all(|x| x.is_finite()).then_some(z)
}

fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Isolating disks for the roots of a square-free `f` at `prec` bits.
/// `Ok(None)` means the disks could not yet be separated at this precision.
pub fn isolate_roots(f: &IntPolynomial, prec: u32) -> Result<Option<Vec<RootDisk>>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("roots"));
    }
    let n = f.degree();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if n == 1 {
        let root = BigRational::new(-f.coeff(0), f.coeff(1));
        return Ok(Some(vec![RootDisk::exact(Complex::new(root, BigRational::zero()))]));
    }
    let coeffs: Vec<BigRational> =
        f.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();

    let start = aberth_f64(f).unwrap_or_else(|| {
        (0..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
            .collect()
    });
    let mut z: Vec<ComplexRational> = start
        .iter()
        .map(|c| round_complex(&Complex::new(from_f64(c.re), from_f64(c.im)), prec))
        .collect();

    let tol = BigRational::new(BigInt::one(), pow2(2 * prec));
    for _ in 0..(200 + prec as usize) {
        let w = weierstrass(&coeffs, &z);
        let big = w.iter().map(|x| x.norm_sqr()).max().unwrap_or_else(BigRational::zero);
        for (zi, wi) in z.iter_mut().zip(&w) {
            *zi = round_complex(&(&*zi - wi), prec);
        }
        if big < tol {
            break;
        }
    }

    let w = weierstrass(&coeffs, &z);
    let spread = BigRational::from_integer(BigInt::from(n as u64 - 1));
    let round_err = BigRational::new(BigInt::one(), pow2(prec));
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        if z[i + 1..].contains(&z[i]) {
            return Ok(None);
        }
    }
    for (zi, wi) in z.iter().zip(&w) {
        let exact_center = zi - wi;
        let center = round_complex(&exact_center, prec + 8);
        let radius = &spread * abs_upper(wi, prec + 16) + &round_err;
        disks.push(RootDisk { center, radius });
    }
    for i in 0..n {
        for j in i + 1..n {
            if !disks[i].disjoint_from(&disks[j]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(disks))
}

/// Root disks for `f`, doubling precision from `start` until `accept` holds.
/// Returns the disks and the precision reached.
pub fn isolate_until(
    f: &IntPolynomial,
    start: u32,
    mut accept: impl FnMut(&[RootDisk]) -> bool,
) -> Result<(Vec<RootDisk>, u32)> {
    let mut prec = start.max(64);
    while prec <= MAX_PRECISION {
        if let Some(disks) = isolate_roots(f, prec)? {
            if accept(&disks) {
                return Ok((disks, prec));
            }
        }
        prec *= 2;
    }
    Err(Error::Indeterminate { bits: MAX_PRECISION })
}

/// Taylor coefficients of `g` at `c`: `g(c + d) = Σ t_k d^k`.
fn taylor_shift(g: &IntPolynomial, c: &ComplexRational) -> Vec<ComplexRational> {
    let mut a: Vec<ComplexRational> = g
        .coeffs()
        .iter()
        .map(|x| Complex::new(BigRational::from_integer(x.clone()), BigRational::zero()))
        .collect();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &a[j + 1] * c;
            a[j] = &a[j] + &t;
        }
    }
    a
}

/// True when `g` certainly has no zero in the closed disk.
pub fn certainly_nonzero_on(g: &IntPolynomial, disk: &RootDisk) -> bool {
    if g.is_zero() {
        return false;
    }
    let t = taylor_shift(g, &disk.center);
    let bits = bits_for(&disk.radius).max(DEFAULT_PRECISION);
    let value_lo = abs_lower(&t[0], bits);
    let mut tail = BigRational::zero();
    let mut rk = BigRational::one();
    for tk in &t[1..] {
        rk = &rk * &disk.radius;
        tail += abs_upper(tk, bits) * &rk;
    }
    value_lo > tail
}
