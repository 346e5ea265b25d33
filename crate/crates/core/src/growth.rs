//! Growth rates `lim R_n^{1/n}` as products over places of
//! `∏_i max(|xi_i|_v, |eta_i|_v)`, with the empirical `R_n^{1/n}` alongside,
//! and the entropy of dual torus maps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::group::{tameness_check, NilpotentSystem};
use crate::linalg::BigIntMatrix;
use crate::padic::{padic_growth_factor, PadicFactor};
use crate::reidemeister::coincidence_sequence;
use crate::roots::to_f64;
use crate::spectrum::{expanding_modulus_terms, ln_bigint, paired_spectrum, ModulusTerm, PairingMode};

/// Growth data of one section.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionGrowth {
    pub section: usize,
    pub mode: PairingMode,
    /// `|det psi|` (or `|det phi|`) from the eigenvalue pairing.
    pub scale: BigRational,
    /// Roots of the paired spectrum outside the unit circle.
    pub archimedean: Vec<ModulusTerm>,
    /// One factor per prime of the section's support.
    pub padic: Vec<PadicFactor>,
}

impl SectionGrowth {
    /// Certified bounds on the log of the archimedean factor.
    pub fn archimedean_log_bounds(&self) -> (f64, f64) {
        let s = ln_rational(&self.scale);
        let lo: f64 = self.archimedean.iter().map(|t| t.log_lower).sum();
        let hi: f64 = self.archimedean.iter().map(|t| t.log_upper).sum();
        (s + lo, s + hi)
    }

    /// The archimedean factor exactly, when every expanding root is rational.
    pub fn archimedean_exact(&self) -> Option<BigRational> {
        let mut v = self.scale.clone();
        for t in &self.archimedean {
            v *= pow_rational(t.exact_modulus.as_ref()?, t.multiplicity);
        }
        Some(v)
    }

    pub fn padic_log(&self) -> f64 {
        self.padic.iter().map(PadicFactor::log_value).sum()
    }

    /// `∏_p p^{e_p}` exactly, when every exponent is an integer.
    pub fn padic_exact(&self) -> Option<BigRational> {
        let mut v = BigRational::one();
        for f in &self.padic {
            if !f.exponent.is_integer() {
                return None;
            }
            let e = f.exponent.to_integer().to_i64()?;
            let pe = BigRational::from_integer(BigInt::from(f.prime).pow(e.unsigned_abs() as u32));
            v *= if e >= 0 { pe } else { pe.recip() };
        }
        Some(v)
    }
}

fn pow_rational(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(&x.numer().abs()) - ln_bigint(x.denom())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub system_name: String,
    pub sections: Vec<SectionGrowth>,
    /// Certified bounds on `log R^∞` (up to `f64` rounding of the logs).
    pub log_lower: f64,
    pub log_upper: f64,
    pub closed_form: f64,
    /// `R^∞` as an exact rational when all factors are rational.
    pub exact: Option<BigRational>,
    /// `R_n^{1/n}` for `n = 1..=N`.
    pub empirical: Vec<f64>,
    /// Relative gap between `R_N^{1/N}` and the closed form.
    pub agreement: f64,
    pub precision: u32,
    pub assumptions: Vec<String>,
}

impl GrowthReport {
    pub fn log_closed_form(&self) -> f64 {
        0.5 * (self.log_lower + self.log_upper)
    }

    /// Product of the archimedean factors over all sections.
    pub fn archimedean_part(&self) -> f64 {
        self.sections
            .iter()
            .map(|s| {
                let (lo, hi) = s.archimedean_log_bounds();
                0.5 * (lo + hi)
            })
            .sum::<f64>()
            .exp()
    }

    /// Product of the p-adic factors over all sections.
    pub fn padic_part(&self) -> f64 {
        self.sections.iter().map(SectionGrowth::padic_log).sum::<f64>().exp()
    }
}

/// Growth data of every section, without tameness or sequence work.
pub fn section_growth(system: &NilpotentSystem, precision: u32) -> Result<Vec<SectionGrowth>> {
    let mut out = Vec::with_capacity(system.sections.len());
    for (k, sec) in system.sections.iter().enumerate() {
        let index = k + 1;
        let paired = paired_spectrum(sec, index)?;
        let archimedean = expanding_modulus_terms(&paired.ratio_char_poly, precision, true, index)?;
        let padic = sec
            .primes
            .iter()
            .map(|&p| padic_growth_factor(sec, p, index))
            .collect::<Result<Vec<_>>>()?;
        out.push(SectionGrowth {
            section: index,
            mode: paired.mode,
            scale: paired.scale_det.abs(),
            archimedean,
            padic,
        });
    }
    Ok(out)
}

/// `R^∞(phi, psi)` for a tame system, compared against `R_n^{1/n}` for
/// `n <= len`.
pub fn growth_rate(system: &NilpotentSystem, len: usize, precision: u32) -> Result<GrowthReport> {
    let verdict = tameness_check(system)?;
    if let Some(n) = verdict.witness_n {
        return Err(Error::NotTame { n: n as usize });
    }
    let sections = section_growth(system, precision)?;

    let (mut log_lower, mut log_upper) = (0.0, 0.0);
    let mut exact = Some(BigRational::one());
    for s in &sections {
        let (lo, hi) = s.archimedean_log_bounds();
        log_lower += lo + s.padic_log();
        log_upper += hi + s.padic_log();
        exact = match (exact, s.archimedean_exact(), s.padic_exact()) {
            (Some(acc), Some(a), Some(p)) => Some(acc * a * p),
            _ => None,
        };
    }
    let closed_form = match &exact {
        Some(x) => to_f64(x),
        None => (0.5 * (log_lower + log_upper)).exp(),
    };

    let values = coincidence_sequence(system, len)?.finite_values()?;
    let empirical: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (ln_bigint(&v.abs()) / (i + 1) as f64).exp())
        .collect();
    let agreement = empirical.last().map_or(f64::NAN, |e| (e - closed_form).abs() / closed_form);

    let mut assumptions = Vec::new();
    if sections.iter().any(|s| s.mode != PairingMode::Identity) {
        assumptions.push("phi and psi commute, so eigenvalues pair through phi·psi^-1".to_string());
    }
    for (k, s) in system.sections.iter().enumerate() {
        if s.triangularizable {
            assumptions.push(format!("section {} declared simultaneously triangularizable, not verified", k + 1));
        }
    }
    Ok(GrowthReport {
        system_name: system.name.clone(),
        sections,
        log_lower,
        log_upper,
        closed_form,
        exact,
        empirical,
        agreement,
        precision,
        assumptions,
    })
}

/// `h = Σ log max(|xi_i|, 1)` with certified bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Entropy {
    pub lower: f64,
    pub upper: f64,
}

impl Entropy {
    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Topological entropy of the toral endomorphism dual to `x -> A x` on
/// `Z^d`. Eigenvalues that are roots of unity are rejected.
pub fn entropy_dual_torus(a: &BigIntMatrix, precision: u32) -> Result<Entropy> {
    let f = a.char_poly()?;
    if let Some(m) = f.cyclotomic_divisor() {
        return Err(Error::CyclotomicEigenvalue { m });
    }
    let terms = expanding_modulus_terms(&f, precision, false, 1)?;
    Ok(Entropy {
        lower: terms.iter().map(|t| t.log_lower).sum(),
        upper: terms.iter().map(|t| t.log_upper).sum(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyIdentity {
    pub log_growth: f64,
    pub entropies: Vec<Entropy>,
    pub entropy_sum: f64,
    /// `|log R^∞ - Σ h| / max(1, |log R^∞|)`.
    pub gap: f64,
    pub assumptions: Vec<String>,
}

/// Compares `log R^∞(phi)` with `Σ_k h(dual of phi_k)`.
pub fn verify_entropy_identity(system: &NilpotentSystem, len: usize, precision: u32) -> Result<EntropyIdentity> {
    if let Some(k) = system.sections.iter().position(|s| !s.is_finitely_generated()) {
        return Err(Error::NotFinitelyGenerated { section: k + 1 });
    }
    if let Some(k) = system.sections.iter().position(|s| !s.psi_is_identity()) {
        return Err(Error::Invalid(format!("entropy identity needs psi = id (section {})", k + 1)));
    }
    let growth = growth_rate(system, len, precision)?;
    let entropies = system
        .sections
        .iter()
        .map(|s| {
            let a = s.phi.to_integer().ok_or_else(|| Error::Invalid("section is not integral".into()))?;
            entropy_dual_torus(&a, precision)
        })
        .collect::<Result<Vec<_>>>()?;
    let entropy_sum: f64 = entropies.iter().map(Entropy::value).sum();
    let log_growth = growth.log_closed_form();
    let gap = (log_growth - entropy_sum).abs() / log_growth.abs().max(1.0);
    Ok(EntropyIdentity {
        log_growth,
        entropies,
        entropy_sum,
        gap,
        assumptions: vec!["dual maps assumed expansive with the specification property".into()],
    })
}
