//! JSON documents: polynomials and command reports.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::text::parse_poly;
use crate::error::{Error, Result};
use crate::mixed_poly::{MixedPolynomial, MixedTerm};
use crate::planar::SolverOptions;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: CoeffDoc,
    pub nu: [u32; 2],
    pub mu: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub variables: u32,
    pub terms: Vec<TermDoc>,
}

impl From<&MixedPolynomial> for PolynomialDocument {
    fn from(f: &MixedPolynomial) -> Self {
        PolynomialDocument {
            variables: 2,
            terms: f
                .terms()
                .iter()
                .map(|t| TermDoc { coeff: CoeffDoc { re: t.coeff.re, im: t.coeff.im }, nu: t.nu, mu: t.mu })
                .collect(),
        }
    }
}

impl PolynomialDocument {
    pub fn to_polynomial(&self) -> Result<MixedPolynomial> {
        if self.variables != 2 {
            return Err(Error::InvalidConfiguration(format!("expected 2 variables, got {}", self.variables)));
        }
        let mut seen = BTreeSet::new();
        for t in &self.terms {
            if !seen.insert((t.nu, t.mu)) {
                return Err(Error::InvalidConfiguration(format!("duplicate term nu = {:?}, mu = {:?}", t.nu, t.mu)));
            }
        }
        Ok(MixedPolynomial::canonicalize(
            self.terms.iter().map(|t| MixedTerm::new(Complex64::new(t.coeff.re, t.coeff.im), t.nu, t.mu)),
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Reads a polynomial from JSON (a [`PolynomialDocument`]) or text.
pub fn read_polynomial(input: &str) -> Result<MixedPolynomial> {
    if input.trim_start().starts_with('{') {
        let doc: PolynomialDocument = serde_json::from_str(input).map_err(|e| Error::SyntaxError {
            offset: 0,
            message: format!("invalid polynomial document: {e}"),
        })?;
        doc.to_polynomial()
    } else {
        parse_poly(input.trim())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        ErrorInfo { code: e.code().into(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub profile: String,
    pub options: SolverOptions,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Diagnostics,
}

impl ReportDocument {
    pub fn new(command: &str, inputs: Value, results: Value, diagnostics: Diagnostics) -> Self {
        ReportDocument { schema_version: SCHEMA_VERSION.into(), command: command.into(), inputs, results, diagnostics }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
