//! Dominant spectral data of an exponential sum and the limit points of
//! `R_n / λ^n`.
//!
//! Moduli are compared exactly. `|λ|^2` is a root of the characteristic
//! polynomial of `C_f ⊗ C_f` (`C_f` the companion matrix of the factor `f`
//! carrying `λ`), so two roots have the same modulus iff their `|·|^2`
//! enclosures land on the same isolated root of those polynomials.
//!
//! Angles are decided exactly as well: `λ / |λ|` is a root of unity iff
//! `t = λ / conj(λ)` is, and `t` is a root of the characteristic polynomial of
//! `C_f ⊗ C_f^{-1}`, whose roots are the ratios `λ_i / λ_j`. The irreducible
//! factor vanishing at `t` is cyclotomic iff the angle is rational.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::companion_matrix;
use crate::numtheory::{lcm, max_order_with_totient_at_most};
use crate::poly::IntPolynomial;
use crate::roots::{
    abs_lower, abs_upper, certainly_nonzero_on, isolate_roots, sqrt_bounds, to_f64, RootDisk,
    MAX_PRECISION,
};
use crate::spectrum::ln_bigint;
use crate::zeta::ExponentialSum;

/// Largest period searched by the root-of-unity test.
pub const Q_MAX_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DominantTerm {
    pub root_polynomial: IntPolynomial,
    pub chi: BigInt,
    /// Enclosures of the roots of this factor on the dominant circle.
    pub roots: Vec<RootDisk>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominantSpectrum {
    /// `λ = max |λ_i|`, zero for the empty sum.
    pub lambda: f64,
    pub lambda_lower: BigRational,
    pub lambda_upper: BigRational,
    pub lambda_exact: Option<BigRational>,
    /// Number of bases on `|z| = λ`; `None` if the ceiling was hit before the
    /// moduli could be separated.
    pub count: Option<usize>,
    pub dominant_terms: Vec<DominantTerm>,
    pub precision: u32,
    pub source: ExponentialSum,
}

impl DominantSpectrum {
    fn empty(source: &ExponentialSum, precision: u32) -> Self {
        Self {
            lambda: 0.0,
            lambda_lower: BigRational::zero(),
            lambda_upper: BigRational::zero(),
            lambda_exact: Some(BigRational::zero()),
            count: Some(0),
            dominant_terms: Vec::new(),
            precision,
            source: source.clone(),
        }
    }
}

struct Root {
    term: usize,
    disk: RootDisk,
    sq_lo: BigRational,
    sq_hi: BigRational,
}

fn modulus_squared_poly(f: &IntPolynomial) -> Result<IntPolynomial> {
    let c = companion_matrix(f)?;
    c.kronecker(&c).char_poly()
}

fn ratio_poly(f: &IntPolynomial) -> Result<IntPolynomial> {
    let c = companion_matrix(f)?.to_rational();
    let inv = c.inverse()?;
    Ok(c.kronecker(&inv).char_poly()?.primitive_integer())
}

fn distinct_factors(polys: &[IntPolynomial]) -> Vec<IntPolynomial> {
    let mut out: Vec<IntPolynomial> = Vec::new();
    for p in polys {
        for (f, _) in p.factor() {
            if !out.contains(&f) {
                out.push(f);
            }
        }
    }
    out
}

fn exact_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}

enum Attempt {
    Done(DominantSpectrum),
    /// Disks exist but the dominant circle is not settled at this precision.
    Unsettled(DominantSpectrum),
    Retry,
}

fn attempt(es: &ExponentialSum, square_factors: &[IntPolynomial], prec: u32) -> Result<Attempt> {
    let mut roots = Vec::new();
    for (i, t) in es.terms.iter().enumerate() {
        let Some(disks) = isolate_roots(&t.root_polynomial, prec)? else {
            return Ok(Attempt::Retry);
        };
        for disk in disks {
            let (sq_lo, sq_hi) = disk.modulus_squared_bounds();
            roots.push(Root { term: i, disk, sq_lo, sq_hi });
        }
    }
    let floor = roots.iter().map(|r| r.sq_lo.clone()).max().expect("nonempty sum");
    let candidates: Vec<&Root> = roots.iter().filter(|r| r.sq_hi >= floor).collect();
    let ceiling = candidates.iter().map(|r| r.sq_hi.clone()).max().expect("nonempty");

    let unsettled = |cands: &[&Root]| {
        let (lo, hi) = (sqrt_bounds(&floor, prec).0, sqrt_bounds(&ceiling, prec).1);
        DominantSpectrum {
            lambda: 0.5 * (to_f64(&lo) + to_f64(&hi)),
            lambda_lower: lo,
            lambda_upper: hi,
            lambda_exact: None,
            count: None,
            dominant_terms: group_terms(es, cands),
            precision: prec,
            source: es.clone(),
        }
    };

    // Isolated roots of the |·|^2 polynomials, indexed by (factor, root).
    let mut square_disks: Vec<(usize, RootDisk)> = Vec::new();
    for (k, g) in square_factors.iter().enumerate() {
        let Some(disks) = isolate_roots(g, prec)? else {
            return Ok(Attempt::Unsettled(unsettled(&candidates)));
        };
        square_disks.extend(disks.into_iter().map(|d| (k, d)));
    }

    // class id per candidate: the unique square disk meeting its interval
    let mut classes: Vec<(usize, Vec<&Root>, BigRational, BigRational)> = Vec::new();
    for r in &candidates {
        let two = BigRational::from_integer(2.into());
        let probe = RootDisk {
            center: Complex::new((&r.sq_lo + &r.sq_hi) / &two, BigRational::zero()),
            radius: (&r.sq_hi - &r.sq_lo) / &two,
        };
        let hits: Vec<usize> = (0..square_disks.len())
            .filter(|&j| !square_disks[j].1.disjoint_from(&probe))
            .collect();
        let [j] = hits[..] else {
            return Ok(Attempt::Unsettled(unsettled(&candidates)));
        };
        match classes.iter_mut().find(|c| c.0 == j) {
            Some(c) => {
                c.1.push(r);
                c.2 = c.2.clone().max(r.sq_lo.clone());
                c.3 = c.3.clone().min(r.sq_hi.clone());
            }
            None => classes.push((j, vec![r], r.sq_lo.clone(), r.sq_hi.clone())),
        }
    }
    let top = (0..classes.len()).find(|&a| classes.iter().enumerate().all(|(b, c)| b == a || classes[a].2 > c.3));
    let Some(top) = top else {
        return Ok(Attempt::Unsettled(unsettled(&candidates)));
    };
    let (j, members, sq_lo, sq_hi) = &classes[top];

    let lambda_exact = members
        .iter()
        .find(|r| r.disk.is_exact())
        .map(|r| r.disk.center.re.abs())
        .or_else(|| {
            let (k, _) = &square_disks[*j];
            let g = &square_factors[*k];
            (g.degree() == 1)
                .then(|| BigRational::new(-g.coeff(0), g.coeff(1)))
                .and_then(|s| exact_sqrt(&s))
        });
    let (lambda_lower, lambda_upper) = match &lambda_exact {
        Some(x) => (x.clone(), x.clone()),
        None => (sqrt_bounds(sq_lo, prec).0, sqrt_bounds(sq_hi, prec).1),
    };
    Ok(Attempt::Done(DominantSpectrum {
        lambda: match &lambda_exact {
            Some(x) => to_f64(x),
            None => 0.5 * (to_f64(&lambda_lower) + to_f64(&lambda_upper)),
        },
        lambda_lower,
        lambda_upper,
        lambda_exact,
        count: Some(members.len()),
        dominant_terms: group_terms(es, members),
        precision: prec,
        source: es.clone(),
    }))
}

fn group_terms(es: &ExponentialSum, roots: &[&Root]) -> Vec<DominantTerm> {
    let mut out: Vec<DominantTerm> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for r in roots {
        match seen.iter().position(|&t| t == r.term) {
            Some(i) => out[i].roots.push(r.disk.clone()),
            None => {
                seen.push(r.term);
                let t = &es.terms[r.term];
                out.push(DominantTerm {
                    root_polynomial: t.root_polynomial.clone(),
                    chi: t.chi.clone(),
                    roots: vec![r.disk.clone()],
                });
            }
        }
    }
    out
}

/// `λ = max |λ_i|` and the bases attaining it, with certified enclosures.
pub fn dominant_spectrum(es: &ExponentialSum, precision: u32) -> Result<DominantSpectrum> {
    if es.is_empty() {
        return Ok(DominantSpectrum::empty(es, precision));
    }
    let squares = es
        .terms
        .iter()
        .map(|t| modulus_squared_poly(&t.root_polynomial))
        .collect::<Result<Vec<_>>>()?;
    let square_factors = distinct_factors(&squares);
    let mut prec = precision.max(64);
    let mut last = None;
    while prec <= MAX_PRECISION {
        match attempt(es, &square_factors, prec)? {
            Attempt::Done(ds) => return Ok(ds),
            Attempt::Unsettled(ds) => last = Some(ds),
            Attempt::Retry => {}
        }
        prec *= 2;
    }
    last.ok_or(Error::Indeterminate { bits: MAX_PRECISION })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    /// `R_n / λ^n` has the limit points of a sequence of period `period`.
    Periodic { period: u64, limit_points: Vec<f64> },
    /// Some dominant angle is irrational: the limit set contains an interval.
    /// `witness` is the non-cyclotomic factor vanishing at `λ / conj(λ)`,
    /// which rules out every period up to `q_max`.
    IntervalContaining { q_max: u64, witness: IntPolynomial },
    Indeterminate { reason: String },
}

enum Angle {
    /// Smallest `o` with `(λ/|λ|)^o = 1`.
    Rational(u64),
    Irrational { witness: IntPolynomial, q_max: u64 },
    Unsettled,
}

fn pow_complex(c: &Complex<BigRational>, m: u64) -> Complex<BigRational> {
    let mut acc = Complex::new(BigRational::one(), BigRational::zero());
    for _ in 0..m {
        acc = &acc * c;
    }
    acc
}

fn angle_of(f: &IntPolynomial, ratios: &[IntPolynomial], disk: &RootDisk, prec: u32) -> Angle {
    if f.degree() == 1 {
        return Angle::Rational(if disk.center.re.is_positive() { 1 } else { 2 });
    }
    let c = &disk.center;
    let r = &disk.radius;
    let norm = c.norm_sqr();
    let c_lo = abs_lower(c, prec);
    if c_lo <= *r {
        return Angle::Unsettled;
    }
    let t = RootDisk {
        center: Complex::new(
            (&c.re * &c.re - &c.im * &c.im) / &norm,
            (BigRational::from_integer(2.into()) * &c.re * &c.im) / &norm,
        ),
        radius: BigRational::from_integer(2.into()) * r / (&c_lo - r),
    };
    let live: Vec<&IntPolynomial> = ratios.iter().filter(|g| !certainly_nonzero_on(g, &t)).collect();
    let [g] = live[..] else {
        return Angle::Unsettled;
    };
    let Some(m) = g.cyclotomic_index() else {
        let q_max = max_order_with_totient_at_most((f.degree() * f.degree()) as u64).min(Q_MAX_CAP);
        return Angle::Irrational { witness: g.clone(), q_max };
    };
    // λ^m is real; its sign decides between m and 2m
    let cm = pow_complex(c, m);
    let up = abs_upper(c, prec) + r;
    let c_up = abs_upper(c, prec);
    let mut a = BigRational::one();
    let mut b = BigRational::one();
    for _ in 0..m {
        a *= &up;
        b *= &c_up;
    }
    let radius = a - b;
    if cm.re > radius {
        Angle::Rational(m)
    } else if -cm.re.clone() > radius {
        Angle::Rational(2 * m)
    } else {
        Angle::Unsettled
    }
}

fn limit_points(terms: &[DominantTerm], period: u64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for r in 0..period {
        let mut v = 0.0;
        for t in terms {
            let chi = t.chi.to_string().parse::<f64>().unwrap_or(f64::NAN);
            for d in &t.roots {
                let z = d.center_f64();
                let u: Complex64 = z / z.norm();
                v += chi * u.powu(r as u32).re;
            }
        }
        let v = if v.abs() < 1e-12 { 0.0 } else { v };
        if !out.iter().any(|x| (x - v).abs() < 1e-9) {
            out.push(v);
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Classifies the limit points of `R_n / λ^n`.
pub fn classify_limit_points(ds: &DominantSpectrum) -> Result<Classification> {
    if ds.count == Some(0) {
        return Ok(Classification::Periodic { period: 1, limit_points: vec![0.0] });
    }
    let mut ds = ds.clone();
    let ratios: Vec<Vec<IntPolynomial>> = ds
        .dominant_terms
        .iter()
        .map(|t| ratio_poly(&t.root_polynomial).map(|k| distinct_factors(&[k])))
        .collect::<Result<_>>()?;
    loop {
        if ds.count.is_none() {
            return Ok(Classification::Indeterminate {
                reason: format!("dominant moduli not separated at {} bits", ds.precision),
            });
        }
        let mut period = 1u64;
        let mut settled = true;
        'terms: for (t, ks) in ds.dominant_terms.iter().zip(&ratios) {
            for d in &t.roots {
                match angle_of(&t.root_polynomial, ks, d, ds.precision) {
                    Angle::Rational(o) => period = lcm(period, o),
                    Angle::Irrational { witness, q_max } => {
                        return Ok(Classification::IntervalContaining { q_max, witness });
                    }
                    Angle::Unsettled => {
                        settled = false;
                        break 'terms;
                    }
                }
            }
        }
        if settled {
            let limit_points = limit_points(&ds.dominant_terms, period);
            return Ok(Classification::Periodic { period, limit_points });
        }
        if ds.precision * 2 > MAX_PRECISION {
            return Ok(Classification::Indeterminate {
                reason: format!("dominant angles not settled at {} bits", ds.precision),
            });
        }
        let source = ds.source.clone();
        let next = dominant_spectrum(&source, ds.precision * 2)?;
        if next.dominant_terms.len() != ds.dominant_terms.len() {
            return Err(Error::Invalid("dominant terms changed under refinement".into()));
        }
        ds = next;
    }
}

/// `R_n / λ^n` for `n = 1..=len`.
pub fn limit_points_sample(seq: &[BigInt], ds: &DominantSpectrum, len: usize) -> Vec<f64> {
    let ln_lambda = ds.lambda.ln();
    seq.iter()
        .take(len)
        .enumerate()
        .map(|(i, v)| {
            if v.is_zero() {
                return 0.0;
            }
            let mag = (ln_bigint(&v.abs()) - (i + 1) as f64 * ln_lambda).exp();
            if v.is_negative() { -mag } else { mag }
        })
        .collect()
}

/// `max |R_n|^{1/n}` over the last `tail` terms, an estimate of `λ`.
pub fn root_test_estimate(seq: &[BigInt], tail: usize) -> f64 {
    let start = seq.len().saturating_sub(tail);
    seq.iter()
        .enumerate()
        .skip(start)
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (ln_bigint(&v.abs()) / (i + 1) as f64).exp())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::DEFAULT_PRECISION;

/// Exponential sum from `(root polynomial coefficients, chi)` pairs.
fn exponential_sum(terms: &[(&[i64], i64)]) -> ExponentialSum {
    ExponentialSum {
        terms: terms
            .iter()
            .map(|(c, chi)| crate::zeta::ExpTerm {
                root_polynomial: IntPolynomial::from_i64(c),
                chi: BigInt::from(*chi),
            })
            .collect(),
    }
}

    fn classify(terms: &[(&[i64], i64)]) -> (DominantSpectrum, Classification) {
        let ds = dominant_spectrum(&exponential_sum(terms), DEFAULT_PRECISION).unwrap();
        let c = classify_limit_points(&ds).unwrap();
        (ds, c)
    }

    #[test]
    fn two_to_the_n_minus_one() {
        let (ds, c) = classify(&[(&[-2, 1], 1), (&[-1, 1], -1)]);
        assert_eq!(ds.lambda_exact, Some(BigRational::from_integer(2.into())));
        assert_eq!(ds.count, Some(1));
        assert_eq!(c, Classification::Periodic { period: 1, limit_points: vec![1.0] });
    }

    #[test]
    fn alternating_dominant_pair() {
        let (ds, c) = classify(&[(&[-2, 1], 1), (&[2, 1], -1)]);
        assert_eq!(ds.count, Some(2));
        assert_eq!(c, Classification::Periodic { period: 2, limit_points: vec![0.0, 2.0] });
    }

    #[test]
    fn constant() {
        let (ds, c) = classify(&[(&[-1, 1], 1)]);
        assert_eq!((ds.lambda, ds.count), (1.0, Some(1)));
        assert!(matches!(c, Classification::Periodic { period: 1, .. }));
    }

    #[test]
    fn gaussian_pair() {
        let (ds, c) = classify(&[(&[2, -2, 1], 1)]);
        assert_eq!(ds.count, Some(2));
        assert!((ds.lambda - 2f64.sqrt()).abs() < 1e-15);
        // (1 + i)^8 = 16
        assert!(matches!(c, Classification::Periodic { period: 8, .. }), "{c:?}");
    }

    #[test]
    fn twelfth_roots() {
        // roots sqrt(3) e^{±iπ/6}
        let (ds, c) = classify(&[(&[3, -3, 1], 1)]);
        assert_eq!(ds.count, Some(2));
        assert!(matches!(c, Classification::Periodic { period: 12, .. }), "{c:?}");
    }

    #[test]
    fn irrational_angle() {
        let (ds, c) = classify(&[(&[5, -4, 1], 1), (&[-1, 1], -1)]);
        assert_eq!(ds.count, Some(2));
        assert!((ds.lambda - 5f64.sqrt()).abs() < 1e-15);
        match c {
            Classification::IntervalContaining { q_max, witness } => {
                assert!(q_max >= 12);
                assert_eq!(witness.cyclotomic_index(), None);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equal_moduli_across_factors() {
        // 3, -3 and ±3i all have modulus 3; 1 ± 2√2 have moduli 3.83 and 1.83
        let (ds, _) = classify(&[(&[-3, 1], 1), (&[3, 1], 1), (&[9, 0, 1], 1), (&[-7, -2, 1], -1)]);
        assert_eq!(ds.count, Some(1));
        assert!((ds.lambda - (1.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);

        let (ds, c) = classify(&[(&[-3, 1], 1), (&[3, 1], 1), (&[9, 0, 1], 1)]);
        assert_eq!(ds.count, Some(4));
        assert_eq!(ds.lambda_exact, Some(BigRational::from_integer(3.into())));
        assert!(matches!(c, Classification::Periodic { period: 4, .. }), "{c:?}");
    }

    #[test]
    fn quadratic_real_pair() {
        // ±√2 share a modulus, their ratio is -1
        let (ds, c) = classify(&[(&[-2, 0, 1], 1)]);
        assert_eq!(ds.count, Some(2));
        assert!(matches!(c, Classification::Periodic { period: 2, .. }), "{c:?}");
    }

    #[test]
    fn empty_sum() {
        let (ds, c) = classify(&[]);
        assert_eq!(ds.lambda, 0.0);
        assert_eq!(c, Classification::Periodic { period: 1, limit_points: vec![0.0] });
    }

    #[test]
    fn samples() {
        let es = exponential_sum(&[(&[-2, 1], 1), (&[-1, 1], -1)]);
        let ds = dominant_spectrum(&es, 128).unwrap();
        let s = limit_points_sample(&es.values(3), &ds, 3);
        for (got, want) in s.iter().zip([0.5, 0.75, 0.875]) {
            assert!((got - want).abs() < 1e-14);
        }
        let es = exponential_sum(&[(&[-2, 1], 1), (&[2, 1], -1)]);
        let ds = dominant_spectrum(&es, 128).unwrap();
        let s = limit_points_sample(&es.values(4), &ds, 4);
        assert_eq!(s, vec![2.0, 0.0, 2.0, 0.0]);
        let es = exponential_sum(&[(&[-2, 1], 1), (&[-1, 1], -1)]);
        assert!((root_test_estimate(&es.values(60), 2) - 2.0).abs() < 1e-3);
    }
}
