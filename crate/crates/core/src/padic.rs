//! p-adic valuations of rationals and, through Newton polygons, of the
//! eigenvalues of section matrices.
//!
//! Root valuations are never computed by p-adic root finding: a segment of the
//! Newton polygon with slope `s` and horizontal length `l` certifies exactly `l`
//! roots with `|root|_p = p^s` (valuation `-s`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::AbelianSection;
use crate::numtheory::is_prime;
use crate::poly::IntPolynomial;
use crate::spectrum::paired_spectrum;

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) { Ok(()) } else { Err(Error::NotPrime(p)) }
}

fn ord_int(a: &BigInt, p: &BigInt) -> i64 {
    let mut a = a.abs();
    let mut v = 0;
    loop {
        let (q, r) = a.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        a = q;
        v += 1;
    }
}

/// Exponent of `p` in the integer `a`; zero is an error.
pub fn ord_p_int(a: &BigInt, p: u64) -> Result<i64> {
    check_prime(p)?;
    if a.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(ord_int(a, &BigInt::from(p)))
}

/// `ord_p(a/b) = ord_p(a) - ord_p(b)`, so that `|q|_p = p^{-ord_p q}`.
pub fn ord_p(q: &BigRational, p: u64) -> Result<i64> {
    check_prime(p)?;
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let pb = BigInt::from(p);
    Ok(ord_int(q.numer(), &pb) - ord_int(q.denom(), &pb))
}

/// `|q|_p` as an exact rational.
pub fn padic_abs(q: &BigRational, p: u64) -> Result<BigRational> {
    let v = ord_p(q, p)?;
    let pp = BigRational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
    Ok(if v >= 0 { pp.recip() } else { pp })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: BigRational,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: u64,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// `(valuation, count)` pairs: each segment carries `length` roots of
    /// valuation `-slope`.
    pub fn root_valuations(&self) -> Vec<(BigRational, usize)> {
        self.segments.iter().map(|s| (-s.slope.clone(), s.length)).collect()
    }

    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// `e` with `∏ max(|root|_p, 1) = p^e` over the nonzero roots.
    pub fn expanding_exponent(&self) -> BigRational {
        self.segments
            .iter()
            .filter(|s| s.slope.is_positive())
            .map(|s| &s.slope * BigRational::from_integer(s.length.into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Lower convex hull of `{(i, ord_p a_i) : a_i != 0}`.
pub fn newton_polygon(f: &IntPolynomial, p: u64) -> Result<NewtonPolygon> {
    check_prime(p)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("Newton polygon"));
    }
    let pb = BigInt::from(p);
    let points: Vec<(i64, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, ord_int(c, &pb)))
        .collect();

    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless slope(a,b) < slope(b,pt)
            let lhs = (b.1 - a.1) * (pt.0 - b.0);
            let rhs = (pt.1 - b.1) * (b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let segments = hull
        .windows(2)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            Segment { slope: BigRational::new(dy.into(), dx.into()), length: dx as usize }
        })
        .collect();
    Ok(NewtonPolygon { prime: p, segments })
}

/// `p^exponent`, the p-adic contribution `∏_i max(|xi_i|_p, |eta_i|_p)` of a
/// section to the growth rate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicFactor {
    pub prime: u64,
    pub exponent: BigRational,
}

impl PadicFactor {
    pub fn value_f64(&self) -> f64 {
        (self.prime as f64).powf(crate::roots::to_f64(&self.exponent))
    }

    pub fn log_value(&self) -> f64 {
        crate::roots::to_f64(&self.exponent) * (self.prime as f64).ln()
    }
}

/// p-adic growth factor of a section. With `psi = id` this is
/// `∏ max(|xi_i|_p, 1)`; for commuting pairs the eigenvalues are paired through
/// `phi·psi^{-1}` (or `psi·phi^{-1}`), giving
/// `|det psi|_p · ∏ max(|xi_i/eta_i|_p, 1)`.
pub fn padic_growth_factor(sec: &AbelianSection, p: u64, section: usize) -> Result<PadicFactor> {
    check_prime(p)?;
    let paired = paired_spectrum(sec, section)?;
    let polygon = newton_polygon(&paired.ratio_char_poly, p)?;
    let scale = BigRational::from_integer(ord_p(&paired.scale_det, p)?.into());
    Ok(PadicFactor { prime: p, exponent: polygon.expanding_exponent() - scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_example;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        assert_eq!(ord_p(&q(12, 1), 2), Ok(2));
        assert_eq!(ord_p(&q(1, 9), 3), Ok(-2));
        assert_eq!(ord_p(&q(5, 1), 2), Ok(0));
        assert_eq!(ord_p(&q(0, 1), 2), Err(Error::ZeroValuation));
        assert_eq!(ord_p(&q(3, 1), 4), Err(Error::NotPrime(4)));
        assert_eq!(padic_abs(&q(1, 8), 2), Ok(q(8, 1)));
    }

    #[test]
    fn polygons() {
        let np = newton_polygon(&IntPolynomial::from_i64(&[-2, 0, 1]), 2).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(-1, 2), length: 2 }]);

        for p in [2, 3, 5, 7] {
            let np = newton_polygon(&IntPolynomial::from_i64(&[-1, 1]), p).unwrap();
            assert_eq!(np.segments, vec![Segment { slope: q(0, 1), length: 1 }]);
        }

        let np = newton_polygon(&IntPolynomial::from_i64(&[1, -3, 1]), 5).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(0, 1), length: 2 }]);

        // (X - 2)(X - 1/2) scaled: 2X^2 - 5X + 2 -> valuations 1 and -1
        let np = newton_polygon(&IntPolynomial::from_i64(&[2, -5, 2]), 2).unwrap();
        assert_eq!(
            np.root_valuations(),
            vec![(q(1, 1), 1), (q(-1, 1), 1)]
        );
        assert_eq!(np.expanding_exponent(), q(1, 1));
    }

    #[test]
    fn trailing_zero_roots_are_excluded() {
        // X^2 (X - 4)
        let np = newton_polygon(&IntPolynomial::from_i64(&[0, 0, -4, 1]), 2).unwrap();
        assert_eq!(np.total_length(), 1);
        assert_eq!(np.root_valuations(), vec![(q(2, 1), 1)]);
        assert!(newton_polygon(&IntPolynomial::zero(), 2).is_err());
    }

    #[test]
    fn growth_factors() {
        let two = builtin_example("s_integer:2,2").unwrap();
        let f = padic_growth_factor(&two.sections[0], 2, 1).unwrap();
        assert_eq!(f.exponent, q(0, 1));

        let half = builtin_example("s_integer:1/2,2").unwrap();
        let f = padic_growth_factor(&half.sections[0], 2, 1).unwrap();
        assert_eq!(f.exponent, q(1, 1));
        assert!((f.value_f64() - 2.0).abs() < 1e-12);

        let three = builtin_example("z_times_d:3").unwrap();
        assert_eq!(padic_growth_factor(&three.sections[0], 5, 1).unwrap().exponent, q(0, 1));
    }

    #[test]
    fn scalar_psi_pairing() {
        // phi = 1/4, psi = 1/2 on Z[1/2]: max(|1/4|_2, |1/2|_2) = 4
        let sec = AbelianSection::new(
            1,
            crate::linalg::RatMatrix::scalar(1, q(1, 4)),
            Some(crate::linalg::RatMatrix::scalar(1, q(1, 2))),
            &[2],
        );
        assert_eq!(padic_growth_factor(&sec, 2, 1).unwrap().exponent, q(2, 1));
    }
}
