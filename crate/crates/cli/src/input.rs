//! JSON system descriptors.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;
use tdyn_core::group::{AbelianSection, NilpotentSystem};
use tdyn_core::linalg::RatMatrix;
use tdyn_core::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    #[serde(default)]
    name: Option<String>,
    sections: Vec<SectionDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionDoc {
    rank: usize,
    phi: Vec<Vec<Value>>,
    #[serde(default)]
    psi: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    primes: Vec<u64>,
    #[serde(default)]
    triangularizable: bool,
}

fn entry(v: &Value) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(Error::Parse(format!("matrix entry {other} must be an integer or a rational string"))),
    };
    if let Ok(i) = BigInt::from_str(&text) {
        return Ok(BigRational::from_integer(i));
    }
    BigRational::from_str(&text).map_err(|_| Error::Parse(format!("bad rational `{text}`")))
}

fn matrix(rows: &[Vec<Value>], what: &str, section: usize) -> Result<RatMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(entry).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(parsed).map_err(|_| Error::Parse(format!("{what} in section {section} has ragged rows")))
}

/// Parses a system descriptor. Structural problems (sizes, denominators) are
/// left to validation so they can be reported together.
pub fn parse_system(text: &str) -> Result<NilpotentSystem> {
    let doc: SystemDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut sections = Vec::with_capacity(doc.sections.len());
    for (k, s) in doc.sections.iter().enumerate() {
        let phi = matrix(&s.phi, "phi", k + 1)?;
        let psi = s.psi.as_deref().map(|p| matrix(p, "psi", k + 1)).transpose()?;
        let psi = psi.unwrap_or_else(|| RatMatrix::identity(s.rank));
        let mut sec = AbelianSection::new(s.rank, phi, Some(psi), &s.primes);
        sec.triangularizable = s.triangularizable;
        sections.push(sec);
    }
    Ok(NilpotentSystem::new(doc.name.unwrap_or_else(|| "input".into()), sections))
}
