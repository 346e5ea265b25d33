//! Eigenvalue pairing for coincidence pairs and certified modulus data for
//! the roots of integer polynomials.
//!
//! Commuting `phi`, `psi` are simultaneously triangularizable, so with `psi`
//! invertible the eigenvalues of `phi·psi^{-1}` are the paired ratios
//! `xi_i / eta_i` and, at every place `v`,
//! `∏ max(|xi_i|_v, |eta_i|_v) = |det psi|_v · ∏ max(|xi_i/eta_i|_v, 1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::AbelianSection;
use crate::poly::IntPolynomial;
use crate::roots::{isolate_until, to_f64, RootDisk};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingMode {
    /// `psi = id`: the ratios are the eigenvalues of `phi`.
    Identity,
    /// Ratios `xi/eta` from `phi·psi^{-1}`, scale `det psi`.
    PhiOverPsi,
    /// Ratios `eta/xi` from `psi·phi^{-1}`, scale `det phi`.
    PsiOverPhi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairedSpectrum {
    pub mode: PairingMode,
    pub scale_det: BigRational,
    /// Primitive integer polynomial whose roots are the paired ratios.
    pub ratio_char_poly: IntPolynomial,
}

/// Pairs the eigenvalues of `phi` and `psi` on a section (`section` is the
/// 1-based index used in errors).
pub fn paired_spectrum(sec: &AbelianSection, section: usize) -> Result<PairedSpectrum> {
    if sec.psi_is_identity() {
        return Ok(PairedSpectrum {
            mode: PairingMode::Identity,
            scale_det: BigRational::one(),
            ratio_char_poly: sec.phi.char_poly()?.primitive_integer(),
        });
    }
    if !sec.phi.commutes_with(&sec.psi)? {
        return Err(Error::UnsupportedPairing {
            section,
            reason: "phi and psi do not commute; the eigenvalue pairing cannot be certified".into(),
        });
    }
    let det_psi = sec.psi.det()?;
    if !det_psi.is_zero() {
        let ratio = sec.phi.try_mul(&sec.psi.inverse()?)?;
        return Ok(PairedSpectrum {
            mode: PairingMode::PhiOverPsi,
            scale_det: det_psi,
            ratio_char_poly: ratio.char_poly()?.primitive_integer(),
        });
    }
    let det_phi = sec.phi.det()?;
    if !det_phi.is_zero() {
        let ratio = sec.psi.try_mul(&sec.phi.inverse()?)?;
        return Ok(PairedSpectrum {
            mode: PairingMode::PsiOverPhi,
            scale_det: det_phi,
            ratio_char_poly: ratio.char_poly()?.primitive_integer(),
        });
    }
    Err(Error::UnsupportedPairing {
        section,
        reason: "phi and psi are both singular".into(),
    })
}

/// Contribution `multiplicity · Σ log|root|` of the roots of one irreducible
/// factor that lie outside the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusTerm {
    pub factor: IntPolynomial,
    pub multiplicity: u32,
    pub expanding_roots: usize,
    /// `|root|` for a linear factor whose root lies outside the unit circle.
    pub exact_modulus: Option<BigRational>,
    pub log_lower: f64,
    pub log_upper: f64,
}

impl ModulusTerm {
    pub fn log_value(&self) -> f64 {
        0.5 * (self.log_lower + self.log_upper)
    }
}

fn ln_rational(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (n, d) = (x.numer().abs(), x.denom().clone());
    ln_bigint(&n) - ln_bigint(&d)
}

/// Natural log of a positive integer without overflowing `f64`.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return to_f64(&BigRational::from_integer(x.clone())).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift as usize;
    to_f64(&BigRational::from_integer(top)).ln() + shift as f64 * std::f64::consts::LN_2
}

fn width_below(disks: &[RootDisk], limit: f64) -> bool {
    disks.iter().all(|d| to_f64(&d.radius) < limit)
}

/// Width at which a root still touching the unit circle is declared to lie
/// on it.
pub const CIRCLE_TOLERANCE: f64 = 1e-30;

/// Sums `log max(|root|, 1)` over the roots of `f`, factor by factor.
///
/// With `require_separation` every root must be certified off the unit
/// circle; a root whose enclosure still meets the circle at width
/// [`CIRCLE_TOLERANCE`] yields [`Error::HypothesisViolated`] for `section`.
pub fn expanding_modulus_terms(
    f: &IntPolynomial,
    precision: u32,
    require_separation: bool,
    section: usize,
) -> Result<Vec<ModulusTerm>> {
    let one = BigRational::one();
    let mut out = Vec::new();
    for (factor, multiplicity) in f.factor() {
        if factor.degree() == 1 {
            let root = BigRational::new(-factor.coeff(0), factor.coeff(1)).abs();
            if root == one && require_separation {
                return Err(Error::HypothesisViolated { section });
            }
            if root > one {
                let l = multiplicity as f64 * ln_rational(&root);
                out.push(ModulusTerm {
                    factor,
                    multiplicity,
                    expanding_roots: 1,
                    exact_modulus: Some(root),
                    log_lower: l,
                    log_upper: l,
                });
            }
            continue;
        }
        let separated = |ds: &[RootDisk]| {
            ds.iter().all(|d| {
                let (lo, hi) = d.modulus_bounds();
                hi < one || lo > one
            })
        };
        let (disks, _) = isolate_until(&factor, precision, |ds| {
            !require_separation || separated(ds) || width_below(ds, CIRCLE_TOLERANCE)
        })?;
        if require_separation && !separated(&disks) {
            return Err(Error::HypothesisViolated { section });
        }
        let (mut lo_sum, mut hi_sum, mut count) = (0.0, 0.0, 0);
        for d in &disks {
            let (lo, hi) = d.modulus_bounds();
            if hi > one {
                hi_sum += ln_rational(&hi);
                if lo > one {
                    lo_sum += ln_rational(&lo);
                    count += 1;
                }
            }
        }
        if hi_sum > 0.0 {
            let m = multiplicity as f64;
            out.push(ModulusTerm {
                factor,
                multiplicity,
                expanding_roots: count,
                exact_modulus: None,
                log_lower: m * lo_sum,
                log_upper: m * hi_sum,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_example;
    use crate::linalg::RatMatrix;

    #[test]
    fn identity_pairing() {
        let sys = builtin_example("torus_matrix:2,1,1,1").unwrap();
        let p = paired_spectrum(&sys.sections[0], 1).unwrap();
        assert_eq!(p.mode, PairingMode::Identity);
        assert_eq!(p.ratio_char_poly, IntPolynomial::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn scalar_and_singular_pairings() {
        let sys = builtin_example("z_pair:6,2").unwrap();
        let p = paired_spectrum(&sys.sections[0], 1).unwrap();
        assert_eq!(p.mode, PairingMode::PhiOverPsi);
        assert_eq!(p.scale_det, BigRational::from_integer(2.into()));
        assert_eq!(p.ratio_char_poly, IntPolynomial::from_i64(&[-3, 1]));

        let sys = builtin_example("z_pair:3,0").unwrap();
        let p = paired_spectrum(&sys.sections[0], 1).unwrap();
        assert_eq!(p.mode, PairingMode::PsiOverPhi);

        let sys = builtin_example("z_pair:0,0").unwrap();
        assert!(matches!(paired_spectrum(&sys.sections[0], 1), Err(Error::UnsupportedPairing { .. })));
    }

    #[test]
    fn non_commuting_pairs_are_rejected() {
        let a = RatMatrix::from_integer_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let b = RatMatrix::from_integer_rows(&[&[1, 0], &[1, 1]]).unwrap();
        let sec = AbelianSection::new(2, a, Some(b), &[]);
        assert!(matches!(paired_spectrum(&sec, 3), Err(Error::UnsupportedPairing { section: 3, .. })));
    }

    #[test]
    fn mahler_terms() {
        let terms = expanding_modulus_terms(&IntPolynomial::from_i64(&[1, -3, 1]), 128, true, 1).unwrap();
        assert_eq!(terms.len(), 1);
        let golden = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((terms[0].log_value() - golden).abs() < 1e-14);

        let terms = expanding_modulus_terms(&IntPolynomial::from_i64(&[-5, 1]), 128, true, 1).unwrap();
        assert_eq!(terms[0].exact_modulus, Some(BigRational::from_integer(5.into())));

        // X^2 + 1 has both roots on the circle
        let err = expanding_modulus_terms(&IntPolynomial::from_i64(&[1, 0, 1]), 128, true, 2);
        assert_eq!(err, Err(Error::HypothesisViolated { section: 2 }));
        let ok = expanding_modulus_terms(&IntPolynomial::from_i64(&[1, 0, 1]), 128, false, 2).unwrap();
        assert!(ok.iter().all(|t| t.log_upper < 1e-20));
    }

    #[test]
    fn big_integer_logs() {
        let x = BigInt::from(3).pow(2000);
        assert!((ln_bigint(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
