//! Endomorphism pairs of torsion-free nilpotent groups, described by the
//! matrices they induce on the abelian sections of the isolated lower central
//! series.
//!
//! A section of rank `d` is modelled as the S-integer module `Z_S^d`: for an
//! empty prime support the matrices must be integral, otherwise denominators
//! may only involve primes from the support.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{BigIntMatrix, RatMatrix};
use crate::numtheory::{factorize, is_prime, max_order_with_totient_at_most};

#[derive(Clone, Debug, PartialEq)]
pub struct AbelianSection {
    pub rank: usize,
    pub phi: RatMatrix,
    pub psi: RatMatrix,
    /// Primes allowed in denominators, sorted and deduplicated.
    pub primes: Vec<u64>,
    /// User assertion that `(phi, psi)` is simultaneously triangularizable
    /// over the algebraic closure. Never verified; commuting pairs satisfy it.
    pub triangularizable: bool,
}

impl AbelianSection {
    pub fn new(rank: usize, phi: RatMatrix, psi: Option<RatMatrix>, primes: &[u64]) -> Self {
        let psi = psi.unwrap_or_else(|| RatMatrix::identity(phi.rows()));
        let primes: BTreeSet<u64> = primes.iter().copied().collect();
        Self { rank, phi, psi, primes: primes.into_iter().collect(), triangularizable: false }
    }

    pub fn integral(phi: BigIntMatrix, psi: Option<BigIntMatrix>) -> Self {
        let rank = phi.rows();
        Self::new(rank, phi.to_rational(), psi.map(|m| m.to_rational()), &[])
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn psi_is_identity(&self) -> bool {
        self.psi.is_identity()
    }

    /// `det(phi^n - psi^n)` as an exact rational.
    pub fn det_difference(&self, n: u64) -> Result<BigRational> {
        let a = self.phi.pow(n)?;
        let b = self.psi.pow(n)?;
        a.try_sub(&b)?.det()
    }

    fn violations(&self, index: usize, out: &mut Vec<String>) {
        if self.rank == 0 {
            out.push(format!("rank must be at least 1 in section {index}"));
        }
        for (name, m) in [("phi", &self.phi), ("psi", &self.psi)] {
            if m.rows() != self.rank || m.cols() != self.rank {
                out.push(format!(
                    "size mismatch in section {index}: {name} is {}x{}, rank is {}",
                    m.rows(),
                    m.cols(),
                    self.rank
                ));
            }
        }
        for &p in &self.primes {
            if !is_prime(p) {
                out.push(format!("prime support of section {index} contains non-prime {p}"));
            }
        }
        let mut bad: BTreeSet<u64> = BTreeSet::new();
        for m in [&self.phi, &self.psi] {
            for e in m.entries() {
                let den = e.denom();
                if den.is_one() {
                    continue;
                }
                match den.to_u64() {
                    Some(d) => {
                        for (q, _) in factorize(d) {
                            if !self.primes.contains(&q) {
                                bad.insert(q);
                            }
                        }
                    }
                    None => {
                        out.push(format!("denominator {den} too large to factor in section {index}"));
                    }
                }
            }
        }
        for q in bad {
            out.push(format!("denominator {q} outside prime support in section {index}"));
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentSystem {
    pub name: String,
    pub sections: Vec<AbelianSection>,
}

impl NilpotentSystem {
    pub fn new(name: impl Into<String>, sections: Vec<AbelianSection>) -> Self {
        Self { name: name.into(), sections }
    }

    pub fn nilpotency_class(&self) -> usize {
        self.sections.len()
    }

    pub fn max_rank(&self) -> usize {
        self.sections.iter().map(|s| s.rank).max().unwrap_or(0)
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.sections.iter().all(AbelianSection::is_finitely_generated)
    }

    /// Upper bound on the number of exponential terms in the coincidence
    /// sequence: each section contributes at most `2^{d_k}` terms and the
    /// sequence is their product.
    pub fn max_exponential_terms(&self) -> usize {
        self.sections
            .iter()
            .map(|s| 1usize.checked_shl(s.rank as u32).unwrap_or(usize::MAX))
            .fold(1usize, usize::saturating_mul)
    }

    /// Number of terms needed to certify a minimal recurrence.
    pub fn recurrence_window(&self) -> usize {
        self.max_exponential_terms().saturating_mul(2).saturating_add(4)
    }
}

/// Checks every structural invariant, reporting violations by section
/// (1-based).
pub fn validate(system: &NilpotentSystem) -> std::result::Result<(), Vec<String>> {
    let mut out = Vec::new();
    if system.sections.is_empty() {
        out.push("system has no sections".to_string());
    }
    for (k, sec) in system.sections.iter().enumerate() {
        sec.violations(k + 1, &mut out);
    }
    if out.is_empty() { Ok(()) } else { Err(out) }
}

pub fn validated(system: &NilpotentSystem) -> Result<()> {
    validate(system).map_err(Error::InvalidSystem)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamenessVerdict {
    pub tame: bool,
    pub witness_n: Option<u64>,
    pub checked_up_to: u64,
}

/// Iteration bound for the tameness check: twice the largest order `m` of a
/// root of unity of degree at most `d^2`, i.e. with `totient(m) <= d^2`.
pub fn tameness_bound(max_rank: usize) -> u64 {
    let d = max_rank as u64;
    2 * max_order_with_totient_at_most(d * d)
}

/// Finds the least `n <= N*` with `det(phi_k^n - psi_k^n) = 0` for some section.
pub fn tameness_check(system: &NilpotentSystem) -> Result<TamenessVerdict> {
    validated(system)?;
    let bound = tameness_bound(system.max_rank());
    for n in 1..=bound {
        for sec in &system.sections {
            if sec.det_difference(n)?.is_zero() {
                return Ok(TamenessVerdict { tame: false, witness_n: Some(n), checked_up_to: bound });
            }
        }
    }
    Ok(TamenessVerdict { tame: true, witness_n: None, checked_up_to: bound })
}

/// Keys accepted by [`builtin_example`], with an example argument list.
pub const BUILTIN_CATALOG: &[&str] = &[
    "z_times_d:2",
    "z_pair:2,1",
    "torus_matrix:2,1,1,1",
    "heisenberg:2,0,0,3",
    "s_integer:1/2,2",
];

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer `{s}`")))
}

fn square_matrix(args: &[BigInt], key: &str) -> Result<BigIntMatrix> {
    let n = (args.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != args.len() {
        return Err(Error::Parse(format!("`{key}` needs a square number of entries")));
    }
    BigIntMatrix::from_vec(n, n, args.to_vec())
}

fn int_scalar(d: BigInt) -> RatMatrix {
    RatMatrix::scalar(1, BigRational::from_integer(d))
}

/// Ready-made systems addressed as `name:args`:
///
/// * `z_times_d:d`: `Z` with `phi = d·x`
/// * `z_pair:a,b`: `Z` with `phi = a·x`, `psi = b·x`
/// * `torus_matrix:a11,a12,...`: `Z^d` with `phi = A` (row-major, square)
/// * `heisenberg:a,b,c,d`: sections `A` and `[det A]`
/// * `s_integer:d,p1,p2,...`: `Z_S` with `phi = d·x`, `d` rational
pub fn builtin_example(key: &str) -> Result<NilpotentSystem> {
    let (name, args) = key.split_once(':').unwrap_or((key, ""));
    let args: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    let ints = || args.iter().map(|a| parse_int(a)).collect::<Result<Vec<_>>>();
    match name {
        "z_times_d" => {
            let [d] = &ints()?[..] else {
                return Err(Error::Parse("z_times_d takes one integer".into()));
            };
            let sec = AbelianSection::new(1, int_scalar(d.clone()), None, &[]);
            Ok(NilpotentSystem::new(format!("z_times_d({d})"), vec![sec]))
        }
        "z_pair" => {
            let [a, b] = &ints()?[..] else {
                return Err(Error::Parse("z_pair takes two integers".into()));
            };
            let sec = AbelianSection::new(1, int_scalar(a.clone()), Some(int_scalar(b.clone())), &[]);
            Ok(NilpotentSystem::new(format!("z_pair({a},{b})"), vec![sec]))
        }
        "torus_matrix" => {
            let a = square_matrix(&ints()?, key)?;
            let name = format!("torus_matrix({a})");
            Ok(NilpotentSystem::new(name, vec![AbelianSection::integral(a, None)]))
        }
        "heisenberg" => {
            let a = square_matrix(&ints()?, key)?;
            if a.rows() != 2 {
                return Err(Error::Parse("heisenberg takes a 2x2 matrix".into()));
            }
            let det = a.det()?;
            let name = format!("heisenberg({a})");
            let center = BigIntMatrix::from_vec(1, 1, vec![det])?;
            Ok(NilpotentSystem::new(
                name,
                vec![AbelianSection::integral(a, None), AbelianSection::integral(center, None)],
            ))
        }
        "s_integer" => {
            let Some((d, primes)) = args.split_first() else {
                return Err(Error::Parse("s_integer takes d followed by primes".into()));
            };
            let d = parse_rational(d)?;
            let primes = primes
                .iter()
                .map(|p| p.parse::<u64>().map_err(|_| Error::Parse(format!("bad prime `{p}`"))))
                .collect::<Result<Vec<_>>>()?;
            let list = primes.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            let sec = AbelianSection::new(1, RatMatrix::scalar(1, d.clone()), None, &primes);
            Ok(NilpotentSystem::new(format!("s_integer({d};{{{list}}})"), vec![sec]))
        }
        _ => Err(Error::UnknownBuiltin(key.to_string())),
    }
}
