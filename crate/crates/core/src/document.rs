//! JSON example documents.
//!
//! Canonical form is compact JSON with sorted keys and rationals written as
//! `"a/b"` strings. Loading runs in three stages, each with its own error:
//! JSON syntax ([`Error::Parse`]), shape ([`Error::Schema`], naming the
//! field path), and mathematical validity ([`Error::Validation`]).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arith::LensDatum;
use crate::cohomology::{BettiVector, OracleModel};
use crate::error::{Error, Result};
use crate::eta::SignatureProblem;
use crate::strata::{FoliationExample, LeafClosureModel, RhoTable, Stratum};
use crate::Rational;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cited<T> {
    pub value: T,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitedRational {
    #[serde(with = "crate::arith::rational_string")]
    pub value: Rational,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoExpectation {
    pub index: u64,
    pub value: i64,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaExpectation {
    pub p: i64,
    pub m: i64,
    pub n: i64,
    /// `eta(B)` of the lens-space boundary signature operator.
    #[serde(with = "crate::arith::rational_string")]
    pub value: Rational,
    pub citation: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<Cited<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Cited<BettiVector>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho: Vec<RhoExpectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<CitedRational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eta: Vec<EtaExpectation>,
}

impl Expected {
    fn citations(&self) -> Vec<&str> {
        let mut out = Vec::new();
        out.extend(self.euler.iter().map(|c| c.citation.as_str()));
        out.extend(self.betti.iter().map(|c| c.citation.as_str()));
        out.extend(self.rho.iter().map(|c| c.citation.as_str()));
        out.extend(self.signature.iter().map(|c| c.citation.as_str()));
        out.extend(self.eta.iter().map(|c| c.citation.as_str()));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPoint {
    pub m: i64,
    pub n: i64,
}

/// Signature problem as written in a document; fixed points share `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureBlock {
    pub p: i64,
    pub fixed_points: Vec<FixedPoint>,
    #[serde(with = "crate::arith::rational_string")]
    pub p1_integral_blowup: Rational,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::arith::rational_string::option"
    )]
    pub p1_integral_original: Option<Rational>,
}

impl SignatureBlock {
    pub fn to_problem(&self) -> Result<SignatureProblem> {
        let fixed_points = self
            .fixed_points
            .iter()
            .map(|f| LensDatum::new(self.p, f.m, f.n))
            .collect::<Result<Vec<_>>>()?;
        let problem = SignatureProblem {
            p: self.p,
            fixed_points,
            p1_integral_blowup: self.p1_integral_blowup.clone(),
            p1_integral_original: self.p1_integral_original.clone(),
        };
        problem.validate()?;
        Ok(problem)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleDocument {
    pub schema_version: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<Stratum>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_table: Option<RhoTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureBlock>,
    pub expected: Expected,
}

fn schema(field: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn invalid(context: &str, err: Error) -> Error {
    match err {
        Error::Validation(msg) => Error::Validation(format!("{context}: {msg}")),
        other => Error::Validation(format!("{context}: {other}")),
    }
}

impl ExampleDocument {
    /// The stratified data as an assembly input, if the document has strata.
    pub fn foliation(&self) -> Option<FoliationExample> {
        self.strata.as_ref().map(|strata| FoliationExample {
            name: self.name.clone(),
            strata: strata.clone(),
            rho_table: self.rho_table.clone(),
        })
    }

    pub fn signature_problem(&self) -> Option<Result<SignatureProblem>> {
        self.signature.as_ref().map(SignatureBlock::to_problem)
    }

    fn check_schema(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!(
                    "expected {SCHEMA_VERSION:?}, found {:?}",
                    self.schema_version
                ),
            ));
        }
        if self.name.is_empty() {
            return Err(schema("name", "must not be empty"));
        }
        match &self.strata {
            Some(s) if s.is_empty() => {
                return Err(schema("strata", "must contain at least one stratum"))
            }
            None if self.signature.is_none() => {
                return Err(schema(
                    "strata",
                    "required unless a signature block is present",
                ))
            }
            _ => {}
        }
        if self.strata.is_none() && (self.rho_table.is_some() || self.oracle.is_some()) {
            return Err(schema("strata", "required by rho_table and oracle"));
        }
        Ok(())
    }

    /// Checks every mathematical invariant of the inner types.
    pub fn validate(&self) -> Result<()> {
        self.check_schema()?;
        if self
            .expected
            .citations()
            .iter()
            .any(|c| c.trim().is_empty())
        {
            return Err(Error::Validation(
                "every expected value needs a citation".into(),
            ));
        }
        if let Some(ex) = self.foliation() {
            ex.validate().map_err(|e| invalid("strata", e))?;
            for s in &ex.strata {
                if let LeafClosureModel::SuspensionClosure { fiber, group_order } = &s.leaf_closure
                {
                    fiber
                        .graded_action(*group_order)
                        .and_then(|a| crate::group::validate_action(&a))
                        .map_err(|e| invalid(&format!("stratum {:?}", s.name), e))?;
                }
            }
        }
        if let Some(oracle) = &self.oracle {
            oracle.validate().map_err(|e| invalid("oracle", e))?;
        }
        if let Some(problem) = self.signature_problem() {
            problem.map_err(|e| invalid("signature", e))?;
        }
        for e in &self.expected.eta {
            LensDatum::new(e.p, e.m, e.n).map_err(|err| invalid("expected.eta", err))?;
        }
        if let Some(table) = &self.rho_table {
            if let Some(r) = self
                .expected
                .rho
                .iter()
                .find(|r| r.index >= table.group_order.order())
            {
                return Err(Error::Validation(format!(
                    "expected.rho index {} outside Z/{}",
                    r.index,
                    table.group_order.order()
                )));
            }
        }
        Ok(())
    }

    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("documents always serialize");
        value.to_string()
    }
}

/// Re-serializes arbitrary JSON text in canonical form.
pub fn canonicalize(text: &str) -> Result<String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(value.to_string())
}

pub fn parse_example(text: &str) -> Result<ExampleDocument> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let doc: ExampleDocument = serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        Error::Schema {
            field,
            message: e.into_inner().to_string(),
        }
    })?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_example(path: impl AsRef<Path>) -> Result<ExampleDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_example(&text)
}
