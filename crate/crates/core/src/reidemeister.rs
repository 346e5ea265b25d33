//! Reidemeister coincidence numbers `R(phi^n, psi^n)` and Nielsen numbers
//! `N(f^n, g^n)` of iterated pairs.
//!
//! Per section the number is the adelically weighted determinant
//! `|det(phi^n - psi^n)|_∞ · ∏_{p ∈ S} |det(phi^n - psi^n)|_p`, and the value
//! for the whole system is the product over sections.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{validated, AbelianSection, NilpotentSystem};
use crate::linalg::{smith_normal_form, RatMatrix};
use crate::padic::ord_p;

/// A Reidemeister number: a positive integer or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(BigInt),
    Infinite,
}

impl Count {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Count::Finite(v) => Some(v),
            Count::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Count::Infinite)
    }

    fn times(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a * b),
            _ => Count::Infinite,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    Reidemeister,
    Nielsen,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceKind::Reidemeister => "reidemeister",
            SequenceKind::Nielsen => "nielsen",
        })
    }
}

/// Values for `n = 1..=N`; `values[0]` is `n = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReidemeisterSequence {
    pub system_name: String,
    pub kind: SequenceKind,
    pub values: Vec<Count>,
}

impl ReidemeisterSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at `n` (1-based).
    pub fn at(&self, n: usize) -> Option<&Count> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    /// All values as integers, failing on the first infinite entry.
    pub fn finite_values(&self) -> Result<Vec<BigInt>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, c)| c.finite().cloned().ok_or(Error::InfiniteEntry { n: i + 1 }))
            .collect()
    }
}

/// Adelic weight of a nonzero rational over the archimedean place and the
/// primes in `primes`: `|q| · ∏ p^{-ord_p q}`.
fn s_weighted_abs(q: &BigRational, primes: &[u64]) -> Result<BigRational> {
    let mut value = q.abs();
    for &p in primes {
        let v = ord_p(q, p)?;
        let pp = BigRational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
        if v > 0 {
            value /= pp;
        } else {
            value *= pp;
        }
    }
    Ok(value)
}

fn coincidence_from_difference(sec: &AbelianSection, diff: &RatMatrix) -> Result<Count> {
    let det = diff.det()?;
    if det.is_zero() {
        return Ok(Count::Infinite);
    }
    let value = s_weighted_abs(&det, &sec.primes)?;
    if !value.is_integer() {
        return Err(Error::Invalid(format!(
            "weighted determinant {value} is not an integer; section entries leave Z_S"
        )));
    }
    Ok(Count::Finite(value.to_integer()))
}

/// `R(phi^n, psi^n)` on one section via the weighted determinant.
pub fn section_coincidence_number(sec: &AbelianSection, n: u64) -> Result<Count> {
    let diff = sec.phi.pow(n)?.try_sub(&sec.psi.pow(n)?)?;
    coincidence_from_difference(sec, &diff)
}

/// `R(phi^n, psi^n)` on an integral section as the order of the cokernel of
/// `phi^n - psi^n`, read off the Smith normal form.
pub fn section_coincidence_number_snf(sec: &AbelianSection, n: u64) -> Result<Count> {
    if !sec.is_finitely_generated() {
        return Err(Error::NotFinitelyGenerated { section: 0 });
    }
    let diff = sec.phi.pow(n)?.try_sub(&sec.psi.pow(n)?)?;
    let Some(diff) = diff.to_integer() else {
        return Err(Error::Invalid("section matrices are not integral".into()));
    };
    Ok(match smith_normal_form(&diff).cokernel_order() {
        Some(v) => Count::Finite(v),
        None => Count::Infinite,
    })
}

/// `R(phi^n, psi^n)` for `n = 1..=len`: the product of the section values.
pub fn coincidence_sequence(system: &NilpotentSystem, len: usize) -> Result<ReidemeisterSequence> {
    validated(system)?;
    let mut values = vec![Count::Finite(BigInt::one()); len];
    for sec in &system.sections {
        let mut phi_n = RatMatrix::identity(sec.rank);
        let mut psi_n = RatMatrix::identity(sec.rank);
        for value in values.iter_mut() {
            phi_n = phi_n.try_mul(&sec.phi)?;
            psi_n = psi_n.try_mul(&sec.psi)?;
            let c = coincidence_from_difference(sec, &phi_n.try_sub(&psi_n)?)?;
            *value = std::mem::replace(value, Count::Infinite).times(c);
        }
    }
    Ok(ReidemeisterSequence {
        system_name: system.name.clone(),
        kind: SequenceKind::Reidemeister,
        values,
    })
}

/// `N(f^n, g^n)`: equal to the Reidemeister number when finite and zero
/// otherwise. Only defined for finitely generated systems.
pub fn nielsen_sequence(system: &NilpotentSystem, len: usize) -> Result<ReidemeisterSequence> {
    validated(system)?;
    if let Some(k) = system.sections.iter().position(|s| !s.is_finitely_generated()) {
        return Err(Error::NotFinitelyGenerated { section: k + 1 });
    }
    let r = coincidence_sequence(system, len)?;
    let values = r
        .values
        .into_iter()
        .map(|c| match c {
            Count::Infinite => Count::Finite(BigInt::zero()),
            finite => finite,
        })
        .collect();
    Ok(ReidemeisterSequence { system_name: system.name.clone(), kind: SequenceKind::Nielsen, values })
}
