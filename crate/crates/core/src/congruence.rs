//! Gauss, Euler and Dold congruences: `Σ_{d | n} μ(n/d) a_d ≡ 0 (mod n)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
pub use crate::numtheory::mobius;
use crate::numtheory::divisors;
use crate::reidemeister::{Count, ReidemeisterSequence};
use crate::zeta::BouquetRealization;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub n: u64,
    /// The exact combination being reduced.
    pub combination: BigInt,
    /// `combination mod n`, in `0..n`.
    pub residue: BigInt,
    pub passed: bool,
}

impl CongruenceReport {
    fn new(n: u64, combination: BigInt) -> Self {
        let residue = combination.mod_floor(&BigInt::from(n));
        let passed = residue.is_zero();
        Self { n, combination, residue, passed }
    }
}

/// `Σ_{d | n} μ(n/d) a_d` for a 1-based sequence `values[d - 1] = a_d`.
pub fn mobius_combination(values: &[BigInt], n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| BigInt::from(mobius(n / d)) * &values[d as usize - 1])
        .sum()
}

fn check_len(len: usize, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    if n as usize > len {
        return Err(Error::SequenceTooShort { needed: n as usize, got: len });
    }
    Ok(())
}

/// Finite values at the divisors of `n`, as a dense prefix (other slots zero).
fn finite_prefix(seq: &ReidemeisterSequence, n: u64) -> Result<Vec<BigInt>> {
    check_len(seq.len(), n)?;
    let mut out = vec![BigInt::zero(); n as usize];
    for d in divisors(n) {
        match &seq.values[d as usize - 1] {
            Count::Finite(v) => out[d as usize - 1] = v.clone(),
            Count::Infinite => return Err(Error::InfiniteEntry { n: d as usize }),
        }
    }
    Ok(out)
}

pub fn gauss_check_values(values: &[BigInt], n: u64) -> Result<CongruenceReport> {
    check_len(values.len(), n)?;
    Ok(CongruenceReport::new(n, mobius_combination(values, n)))
}

pub fn gauss_check(seq: &ReidemeisterSequence, n: u64) -> Result<CongruenceReport> {
    gauss_check_values(&finite_prefix(seq, n)?, n)
}

/// `a_{p^r} - a_{p^{r-1}} mod p^r`.
pub fn euler_check_values(values: &[BigInt], p: u64, r: u32) -> Result<CongruenceReport> {
    if !crate::numtheory::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::Invalid("Euler congruence needs r >= 1".into()));
    }
    let n = p
        .checked_pow(r)
        .ok_or_else(|| Error::Invalid(format!("{p}^{r} overflows")))?;
    check_len(values.len(), n)?;
    let hi = &values[n as usize - 1];
    let lo = &values[(n / p) as usize - 1];
    Ok(CongruenceReport::new(n, hi - lo))
}

pub fn euler_check(seq: &ReidemeisterSequence, p: u64, r: u32) -> Result<CongruenceReport> {
    let n = p.checked_pow(r).unwrap_or(u64::MAX);
    euler_check_values(&finite_prefix(seq, n)?, p, r)
}

/// Gauss congruence for the Lefschetz numbers `tr A_e^d - tr A_o^d`.
pub fn dold_check_realization(br: &BouquetRealization, n: u64) -> CongruenceReport {
    let values = br.lefschetz_numbers(n as usize);
    CongruenceReport::new(n, mobius_combination(&values, n))
}

/// Prime powers `(p, r)` with `p^r <= bound`.
pub fn prime_powers_up_to(bound: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (2..=bound).filter(|&p| crate::numtheory::is_prime(p)) {
        let (mut q, mut r) = (p, 1);
        while q <= bound {
            out.push((p, r));
            q *= p;
            r += 1;
        }
    }
    out
}

pub fn all_passed(reports: &[CongruenceReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
