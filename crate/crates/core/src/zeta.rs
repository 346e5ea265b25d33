//! Rational zeta functions `exp(Σ R_n z^n / n)` reconstructed from exact
//! sequences, their exponential-sum normal form and a Lefschetz realization
//! on a bouquet of circles and 2-spheres.
//!
//! Sign convention, used everywhere: an exponential sum
//! `R_n = Σ_α χ_α · p_n(v_α)`, where `p_n(v_α)` is the n-th power sum of the
//! roots of the irreducible `v_α`, has zeta function `∏_α ṽ_α(z)^{-χ_α}` with
//! `ṽ_α(z) = ∏ (1 - λ z)` over the roots `λ` of `v_α`. Terms with `χ > 0` sit
//! in the denominator, terms with `χ < 0` in the numerator.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{companion_matrix, BigIntMatrix};
use crate::poly::IntPolynomial;

/// `numerator / denominator`, both with constant term 1 and coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", show_in_z(&self.numerator), show_in_z(&self.denominator))
    }
}

fn show_in_z(p: &IntPolynomial) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let body = match (i, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "z".to_string(),
            (1, false) => format!("{mag}z"),
            (_, true) => format!("z^{i}"),
            (_, false) => format!("{mag}z^{i}"),
        };
        if out.is_empty() {
            out = if c.is_negative() { format!("-{body}") } else { body };
        } else {
            out = format!("{out} {sign} {body}");
        }
    }
    if out.is_empty() { "0".into() } else { out }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpTerm {
    /// Monic irreducible polynomial in `X` whose roots are the bases.
    pub root_polynomial: IntPolynomial,
    pub chi: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExponentialSum {
    pub terms: Vec<ExpTerm>,
}

impl ExponentialSum {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct bases.
    pub fn order(&self) -> usize {
        self.terms.iter().map(|t| t.root_polynomial.degree()).sum()
    }

    /// `R_1, ..., R_len`.
    pub fn values(&self, len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for t in &self.terms {
            for (o, p) in out.iter_mut().zip(power_sums(&t.root_polynomial, len)) {
                *o += &t.chi * p;
            }
        }
        out
    }

    pub fn zeta(&self) -> RationalFunction {
        let mut numerator = IntPolynomial::one();
        let mut denominator = IntPolynomial::one();
        for t in &self.terms {
            let rev = reversed_unit(&t.root_polynomial);
            let e = t.chi.abs().to_u32().expect("exponent fits in u32");
            if t.chi.is_positive() {
                denominator = &denominator * &rev.pow(e);
            } else {
                numerator = &numerator * &rev.pow(e);
            }
        }
        RationalFunction { numerator, denominator }
    }
}

/// `∏ (1 - λ z)` over the roots of a monic `f`.
fn reversed_unit(f: &IntPolynomial) -> IntPolynomial {
    f.reverse(f.degree())
}

/// Power sums `p_1, ..., p_len` of the roots of a monic polynomial, by
/// Newton's identities.
pub fn power_sums(f: &IntPolynomial, len: usize) -> Vec<BigInt> {
    let d = f.degree();
    // e-coefficients: f = X^d + a_1 X^{d-1} + ... + a_d
    let a: Vec<BigInt> = (0..=d).map(|i| f.coeff(d - i)).collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(len);
    for k in 1..=len {
        let mut s = if k <= d { BigInt::from(k) * &a[k] } else { BigInt::zero() };
        for i in 1..k.min(d + 1) {
            s += &a[i] * &p[k - i - 1];
        }
        p.push(-s);
    }
    p
}

/// Shortest recurrence `v(z) = 1 + c_1 z + ... + c_L z^L` annihilating `seq`
/// (Berlekamp–Massey over the rationals), with its order `L`.
fn berlekamp_massey(seq: &[BigRational]) -> (Vec<BigRational>, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let (mut l, mut m) = (0usize, 1usize);
    let mut last = BigRational::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=l {
            if let Some(ci) = c.get(i) {
                d += ci * &seq[n - i];
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            last = d;
            m = 1;
        } else {
            c = next;
            m += 1;
        }
    }
    c.truncate(l + 1);
    (c, l)
}

/// Minimal integer recurrence denominator `v(z)` with `v(0) = 1` and its
/// order, requiring `2·max_order + 4` terms.
pub fn minimal_recurrence(seq: &[BigInt], max_order: usize) -> Result<(IntPolynomial, usize)> {
    let needed = 2 * max_order + 4;
    if seq.len() < needed {
        return Err(Error::SequenceTooShort { needed, got: seq.len() });
    }
    let rat: Vec<BigRational> = seq.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let (c, order) = berlekamp_massey(&rat);
    if order > max_order {
        return Err(Error::NoRecurrence { max_order, window: seq.len() });
    }
    if !c.iter().all(|x| x.is_integer()) {
        return Err(Error::NonIntegerRecurrence);
    }
    Ok((IntPolynomial::new(c.iter().map(|x| x.to_integer()).collect()), order))
}

/// Solves `Σ_α χ_α p_n(v_α) = R_n` exactly, given `S(z) = u/v` with
/// `S(z) = Σ R_{n+1} z^n`.
pub fn residue_exponents(u: &IntPolynomial, v: &IntPolynomial, order: usize) -> Result<ExponentialSum> {
    if v.coeff(0) != BigInt::one() {
        return Err(Error::Invalid("recurrence denominator must have constant term 1".into()));
    }
    if order == 0 {
        return Ok(ExponentialSum::default());
    }
    let char_poly = v.reverse(order);
    if char_poly.coeff(0).is_zero() {
        return Err(Error::Invalid(
            "sequence is not an exponential sum: its recurrence has a zero root".into(),
        ));
    }
    let factors = char_poly.factor();
    if factors.iter().any(|(_, e)| *e > 1) {
        return Err(Error::NotSquareFree);
    }
    let factors: Vec<IntPolynomial> = factors.into_iter().map(|(f, _)| f).collect();

    // Target values R_1..R_order from u/v.
    let targets = series_quotient(u, v, order);
    let k = factors.len();
    let sums: Vec<Vec<BigInt>> = factors.iter().map(|f| power_sums(f, order)).collect();
    let mut rows = Vec::with_capacity(order);
    for n in 0..order {
        let mut row: Vec<BigRational> =
            sums.iter().map(|s| BigRational::from_integer(s[n].clone())).collect();
        row.push(BigRational::from_integer(targets[n].clone()));
        rows.push(row);
    }
    let chi = solve_consistent(rows, k).ok_or_else(|| Error::NonIntegerResidue {
        factor: factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "),
        value: "no rational exponents fit the sequence".into(),
    })?;

    let mut terms = Vec::new();
    for (f, x) in factors.into_iter().zip(chi) {
        if !x.is_integer() {
            return Err(Error::NonIntegerResidue { factor: f.to_string(), value: x.to_string() });
        }
        if !x.is_zero() {
            terms.push(ExpTerm { root_polynomial: f, chi: x.to_integer() });
        }
    }
    Ok(ExponentialSum { terms })
}

/// First `len` coefficients of `u / v` for `v(0) = 1`.
fn series_quotient(u: &IntPolynomial, v: &IntPolynomial, len: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut c = u.coeff(n);
        for j in 1..=n.min(v.degree()) {
            c -= v.coeff(j) * &out[n - j];
        }
        out.push(c);
    }
    out
}

/// Gaussian elimination on an augmented system with `k` unknowns; `None` if
/// inconsistent. Free variables (which cannot occur for distinct bases) are
/// set to zero.
fn solve_consistent(mut rows: Vec<Vec<BigRational>>, k: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot).take(k + 1) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][k].clone();
    }
    Some(x)
}

/// Exact first `len` values `R_n` of the sequence whose zeta function is
/// `rf`: the coefficients of `z·(log rf)'`.
pub fn expand(rf: &RationalFunction, len: usize) -> Vec<BigInt> {
    let (p, q) = (&rf.numerator, &rf.denominator);
    // z (p'/p - q'/q) = z (p' q - q' p) / (p q)
    let top = &(&p.derivative() * q) - &(&q.derivative() * p);
    let shifted = IntPolynomial::new(
        std::iter::once(BigInt::zero()).chain(top.coeffs().iter().cloned()).collect(),
    );
    let mut series = series_quotient(&shifted, &(p * q), len + 1);
    series.remove(0);
    series
}

/// Exact zeta data of a sequence `R_1, R_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaData {
    pub rational_function: RationalFunction,
    pub exponential_sum: ExponentialSum,
    /// Recurrence denominator `v(z)` of `Σ R_{n+1} z^n`.
    pub recurrence: IntPolynomial,
    pub order: usize,
    /// Number of sequence terms reproduced by re-expansion.
    pub verified_terms: usize,
}

pub fn zeta_from_sequence(seq: &[BigInt], max_order: usize) -> Result<ZetaData> {
    let (v, order) = minimal_recurrence(seq, max_order)?;
    let u = {
        let mut u = vec![BigInt::zero(); order];
        for (n, slot) in u.iter_mut().enumerate() {
            for j in 0..=n.min(v.degree()) {
                *slot += v.coeff(j) * &seq[n - j];
            }
        }
        IntPolynomial::new(u)
    };
    let es = residue_exponents(&u, &v, order)?;
    let rf = es.zeta();
    let back = expand(&rf, seq.len());
    if let Some(n) = back.iter().zip(seq).position(|(a, b)| a != b) {
        return Err(Error::RoundtripMismatch { n: n + 1 });
    }
    Ok(ZetaData {
        rational_function: rf,
        exponential_sum: es,
        recurrence: v,
        order,
        verified_terms: seq.len(),
    })
}

/// Integer matrices with `tr A_e^n - tr A_o^n = R_n`, acting on the degree 2
/// and degree 1 homology of a bouquet of `n2` spheres and `n1` circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BouquetRealization {
    pub a_e: BigIntMatrix,
    pub a_o: BigIntMatrix,
    pub n1: usize,
    pub n2: usize,
}

impl BouquetRealization {
    /// `n` for which [`BouquetRealization::verify`] checks the trace identity
    /// by default.
    pub fn check_range(&self) -> usize {
        2 * (self.a_e.rows() + self.a_o.rows()) + 5
    }

    /// Lefschetz numbers `L(f^n) = tr A_e^n - tr A_o^n` for `n = 1..=len`.
    pub fn lefschetz_numbers(&self, len: usize) -> Vec<BigInt> {
        let te = trace_powers(&self.a_e, len);
        let to = trace_powers(&self.a_o, len);
        te.into_iter().zip(to).map(|(a, b)| a - b).collect()
    }

    /// Checks the trace identity against `es` over [`Self::check_range`].
    pub fn verify(&self, es: &ExponentialSum) -> Result<()> {
        let len = self.check_range();
        let want = es.values(len);
        match self.lefschetz_numbers(len).iter().zip(&want).position(|(a, b)| a != b) {
            Some(n) => Err(Error::RoundtripMismatch { n: n + 1 }),
            None => Ok(()),
        }
    }
}

pub fn trace_powers(a: &BigIntMatrix, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let mut p = a.clone();
    for _ in 0..len {
        out.push(p.trace());
        p = p.try_mul(a).expect("square matrix");
    }
    out
}

pub fn realize_bouquet(es: &ExponentialSum) -> Result<BouquetRealization> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for t in &es.terms {
        let c = companion_matrix(&t.root_polynomial)?;
        let copies = t
            .chi
            .abs()
            .to_usize()
            .ok_or_else(|| Error::Invalid(format!("exponent {} too large to realize", t.chi)))?;
        let target = if t.chi.is_positive() { &mut even } else { &mut odd };
        target.extend(std::iter::repeat_n(c, copies));
    }
    let zero = BigIntMatrix::zeros(1, 1);
    if even.is_empty() {
        even.push(zero.clone());
    }
    if odd.is_empty() {
        odd.push(zero);
    }
    let a_e = BigIntMatrix::block_diagonal(&even).expect("square blocks");
    let a_o = BigIntMatrix::block_diagonal(&odd).expect("square blocks");
    let (n2, n1) = (a_e.rows(), a_o.rows() + 1);
    Ok(BouquetRealization { a_e, a_o, n1, n2 })
}
