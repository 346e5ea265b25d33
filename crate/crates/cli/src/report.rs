//! JSON encodings. Exact integers and rationals are strings; enclosures and
//! estimates are floats.

use std::fmt::Display;

use serde_json::{json, Value};
use tdyn_core::asymptotics::{Classification, DominantSpectrum};
use tdyn_core::congruence::CongruenceReport;
use tdyn_core::growth::GrowthReport;
use tdyn_core::linalg::Matrix;
use tdyn_core::poly::IntPolynomial;
use tdyn_core::roots::to_f64;
use tdyn_core::spectrum::PairingMode;
use tdyn_core::zeta::ExponentialSum;

pub fn strings<T: Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Coefficients in ascending degree.
pub fn poly_json(p: &IntPolynomial) -> Value {
    json!(strings(p.coeffs()))
}

pub fn matrix_json<T: tdyn_core::linalg::Scalar + Display>(m: &Matrix<T>) -> Value {
    json!(m.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>())
}

pub fn mode_name(m: PairingMode) -> &'static str {
    match m {
        PairingMode::Identity => "identity",
        PairingMode::PhiOverPsi => "phi_over_psi",
        PairingMode::PsiOverPhi => "psi_over_phi",
    }
}

pub fn exponential_sum_json(es: &ExponentialSum) -> Value {
    json!(es
        .terms
        .iter()
        .map(|t| json!({ "root_polynomial": poly_json(&t.root_polynomial), "chi": t.chi.to_string() }))
        .collect::<Vec<_>>())
}

pub fn congruence_json(r: &CongruenceReport) -> Value {
    json!({
        "n": r.n,
        "combination": r.combination.to_string(),
        "residue": r.residue.to_string(),
        "passed": r.passed,
    })
}

pub fn growth_json(g: &GrowthReport) -> Value {
    let mut terms = Vec::new();
    for s in &g.sections {
        terms.push(json!({
            "section": s.section,
            "place": "scale",
            "mode": mode_name(s.mode),
            "value": s.scale.to_string(),
        }));
        for m in &s.archimedean {
            terms.push(json!({
                "section": s.section,
                "place": "inf",
                "factor": poly_json(&m.factor),
                "multiplicity": m.multiplicity,
                "expanding_roots": m.expanding_roots,
                "exact_modulus": m.exact_modulus.as_ref().map(|x| x.to_string()),
                "log_lower": m.log_lower,
                "log_upper": m.log_upper,
            }));
        }
        for p in &s.padic {
            terms.push(json!({
                "section": s.section,
                "place": p.prime.to_string(),
                "exponent": p.exponent.to_string(),
                "log": p.log_value(),
            }));
        }
    }
    json!({
        "closed_form_log_terms": terms,
        "numeric": g.closed_form,
        "exact": g.exact.as_ref().map(|x| x.to_string()),
        "log_lower": g.log_lower,
        "log_upper": g.log_upper,
        "archimedean_part": g.archimedean_part(),
        "padic_part": g.padic_part(),
        "empirical": g.empirical,
        "agreement": g.agreement,
        "precision": g.precision,
        "assumptions": g.assumptions,
    })
}

pub fn dominant_json(ds: &DominantSpectrum) -> Value {
    json!({
        "lambda": ds.lambda,
        "lambda_lower": to_f64(&ds.lambda_lower),
        "lambda_upper": to_f64(&ds.lambda_upper),
        "lambda_exact": ds.lambda_exact.as_ref().map(|x| x.to_string()),
        "count": ds.count,
        "precision": ds.precision,
        "terms": ds.dominant_terms.iter().map(|t| json!({
            "root_polynomial": poly_json(&t.root_polynomial),
            "chi": t.chi.to_string(),
            "roots": t.roots.iter().map(|r| {
                let c = r.center_f64();
                json!({ "re": c.re, "im": c.im, "radius": to_f64(&r.radius) })
            }).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::Periodic { period, limit_points } => {
            json!({ "verdict": "periodic", "period": period, "limit_points": limit_points })
        }
        Classification::IntervalContaining { q_max, witness } => {
            json!({ "verdict": "interval_containing", "q_max": q_max, "witness": poly_json(witness) })
        }
        Classification::Indeterminate { reason } => json!({ "verdict": "indeterminate", "reason": reason }),
    }
}

pub fn classification_line(c: &Classification) -> String {
    match c {
        Classification::Periodic { period, limit_points } => {
            let pts: Vec<String> = limit_points.iter().map(|x| format!("{x:.6}")).collect();
            format!("periodic with period {period}, limit points {{{}}}", pts.join(", "))
        }
        Classification::IntervalContaining { q_max, witness } => {
            format!("limit set contains an interval (no period up to {q_max}; witness {witness})")
        }
        Classification::Indeterminate { reason } => format!("indeterminate: {reason}"),
    }
}
