//! Built-in example catalog and the cross-checking verify pipeline.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    cotangent_pair_sum_float, format_rational, rational_to_f64, LensDatum, COTANGENT_TOLERANCE,
};
use crate::cohomology::basic_euler_oracle;
use crate::document::{load_example, parse_example, ExampleDocument};
use crate::error::{Error, Result};
use crate::eta::{
    blowup_defect_check, eta_lens_signature, transverse_signature, transverse_signature_original,
};
use crate::group::CyclicGroup;
use crate::strata::{gauss_bonnet, rep_valued_gauss_bonnet};

/// Environment variable naming a directory of `*.json` documents that
/// replaces the built-in catalog.
pub const CATALOG_DIR_ENV: &str = "FOLIDX_CATALOG_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("rotation-s2", include_str!("../catalog/rotation-s2.json")),
    (
        "double-rotation-s1xs2",
        include_str!("../catalog/double-rotation-s1xs2.json"),
    ),
    ("klein-bottle", include_str!("../catalog/klein-bottle.json")),
    (
        "dense-leaves-s2",
        include_str!("../catalog/dense-leaves-s2.json"),
    ),
    ("carriere", include_str!("../catalog/carriere.json")),
    ("z4-torus", include_str!("../catalog/z4-torus.json")),
    (
        "lens-signature",
        include_str!("../catalog/lens-signature.json"),
    ),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(name, _)| *name)
}

/// Source text of a built-in document.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| *src)
}

pub fn builtin_example(name: &str) -> Option<ExampleDocument> {
    builtin_source(name).map(|src| parse_example(src).expect("built-in documents are valid"))
}

pub fn builtin_catalog() -> Vec<ExampleDocument> {
    builtin_names().filter_map(builtin_example).collect()
}

/// Every `*.json` file in `dir`, sorted by file name.
pub fn load_catalog_dir(dir: impl AsRef<Path>) -> Result<Vec<ExampleDocument>> {
    let dir = dir.as_ref();
    let io = |e: std::io::Error| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(load_example).collect()
}

/// The built-in catalog, or the directory named by [`CATALOG_DIR_ENV`].
pub fn catalog_from_env() -> Result<Vec<ExampleDocument>> {
    match std::env::var_os(CATALOG_DIR_ENV) {
        Some(dir) => load_catalog_dir(dir),
        None => Ok(builtin_catalog()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Evaluate the independent cohomology and float channels.
    pub oracle: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { oracle: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub name: String,
    pub check: String,
    pub assembled: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub summary: Summary,
}

impl VerifyReport {
    fn from_rows(rows: Vec<VerifyRow>) -> Self {
        let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
        Self {
            summary: Summary {
                total: rows.len(),
                passed: rows.len() - failed,
                failed,
            },
            rows,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_value(self)
            .expect("reports serialize")
            .to_string()
    }

    /// Fixed-width text table.
    pub fn render_table(&self) -> String {
        let header = [
            "example",
            "check",
            "assembled",
            "oracle",
            "expected",
            "status",
        ];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    r.check.clone(),
                    r.assembled.clone(),
                    r.oracle.clone().unwrap_or_else(|| "-".into()),
                    r.expected.clone().unwrap_or_else(|| "-".into()),
                    match r.status {
                        Status::Pass => "pass".into(),
                        Status::Fail => "FAIL".into(),
                    },
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| {
            row.iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        out.push_str(&line(&header.map(String::from)));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        for r in self.rows.iter().filter(|r| r.note.is_some()) {
            out.push_str(&format!(
                "note [{} / {}]: {}\n",
                r.name,
                r.check,
                r.note.as_deref().unwrap()
            ));
        }
        out.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            self.summary.total, self.summary.passed, self.summary.failed
        ));
        out
    }
}

struct RowBuilder<'a> {
    name: &'a str,
    check: String,
    assembled: Result<String>,
    oracle: Option<Result<String>>,
    expected: Option<String>,
    extra_ok: bool,
    note: Option<String>,
}

impl RowBuilder<'_> {
    fn finish(self) -> VerifyRow {
        let mut notes: Vec<String> = self.note.into_iter().collect();
        let render = |r: Result<String>, notes: &mut Vec<String>| match r {
            Ok(v) => (v, true),
            Err(e) => {
                notes.push(e.to_string());
                ("error".to_string(), false)
            }
        };
        let (assembled, a_ok) = render(self.assembled, &mut notes);
        let (oracle, o_ok) = match self.oracle {
            Some(r) => {
                let (v, ok) = render(r, &mut notes);
                (Some(v), ok)
            }
            None => (None, true),
        };
        let mut pass = a_ok && o_ok && self.extra_ok;
        if let Some(o) = &oracle {
            pass &= *o == assembled;
        }
        if let Some(e) = &self.expected {
            pass &= *e == assembled;
        }
        VerifyRow {
            name: self.name.to_string(),
            check: self.check,
            assembled,
            oracle,
            expected: self.expected,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }
}

fn foliation_rows(doc: &ExampleDocument, opts: VerifyOptions) -> Vec<VerifyRow> {
    let Some(example) = doc.foliation() else {
        return Vec::new();
    };
    let mut rows = Vec::new();

    let oracle_betti = doc
        .oracle
        .as_ref()
        .filter(|_| opts.oracle)
        .map(|o| o.basic_betti());
    let mut note = None;
    let mut betti_ok = true;
    if let (Some(Ok(b)), Some(exp)) = (&oracle_betti, &doc.expected.betti) {
        if *b != exp.value {
            betti_ok = false;
            note = Some(format!("oracle betti {b} != expected {}", exp.value));
        }
    }
    if let Some(Ok(b)) = &oracle_betti {
        if note.is_none() {
            note = Some(format!("oracle betti {b}"));
        }
    }
    rows.push(
        RowBuilder {
            name: &doc.name,
            check: "euler".into(),
            assembled: gauss_bonnet(&example).map(|v| v.to_string()),
            oracle: oracle_betti.map(|r| r.map(|b| basic_euler_oracle(&b).to_string())),
            expected: doc.expected.euler.as_ref().map(|e| e.value.to_string()),
            extra_ok: betti_ok,
            note,
        }
        .finish(),
    );

    for exp in &doc.expected.rho {
        let order = doc
            .rho_table
            .as_ref()
            .map(|t| t.group_order)
            .or(match &doc.oracle {
                Some(crate::cohomology::OracleModel::Suspension { group_order, .. }) => {
                    Some(*group_order)
                }
                _ => None,
            })
            .unwrap_or_else(CyclicGroup::trivial);
        let rho = order.character(exp.index as i64);
        let oracle = doc.oracle.as_ref().filter(|_| opts.oracle).and_then(|o| {
            match o.isotypic_betti(&rho) {
                Ok(Some(b)) => Some(Ok(basic_euler_oracle(&b).to_string())),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            }
        });
        rows.push(
            RowBuilder {
                name: &doc.name,
                check: format!("rho_{}", exp.index),
                assembled: rep_valued_gauss_bonnet(&example, &rho).map(|v| v.to_string()),
                oracle,
                expected: Some(exp.value.to_string()),
                extra_ok: true,
                note: None,
            }
            .finish(),
        );
    }
    rows
}

fn eta_rows(doc: &ExampleDocument, opts: VerifyOptions) -> Vec<VerifyRow> {
    doc.expected
        .eta
        .iter()
        .map(|exp| {
            let datum = LensDatum::new(exp.p, exp.m, exp.n);
            let check = format!("eta L({};{},{})", exp.p, exp.m, exp.n);
            let (assembled, extra_ok, note) = match &datum {
                Ok(d) => {
                    let eta = eta_lens_signature(d).eta;
                    let (ok, note) = if opts.oracle {
                        let float = -cotangent_pair_sum_float::<f64>(d) / exp.p as f64;
                        let diff = (float - rational_to_f64(&eta)).abs();
                        (
                            diff < COTANGENT_TOLERANCE,
                            Some(format!("float channel {float:.12}, |diff| = {diff:.1e}")),
                        )
                    } else {
                        (true, None)
                    };
                    (Ok(format_rational(&eta)), ok, note)
                }
                Err(e) => (Err(e.clone()), false, None),
            };
            RowBuilder {
                name: &doc.name,
                check,
                assembled,
                oracle: None,
                expected: Some(format_rational(&exp.value)),
                extra_ok,
                note,
            }
            .finish()
        })
        .collect()
}

fn signature_rows(doc: &ExampleDocument, opts: VerifyOptions) -> Vec<VerifyRow> {
    let Some(problem) = doc.signature_problem() else {
        return Vec::new();
    };
    let expected = doc
        .expected
        .signature
        .as_ref()
        .map(|s| format_rational(&s.value));
    let problem = match problem {
        Ok(p) => p,
        Err(e) => {
            return vec![RowBuilder {
                name: &doc.name,
                check: "signature".into(),
                assembled: Err(e),
                oracle: None,
                expected,
                extra_ok: false,
                note: None,
            }
            .finish()]
        }
    };
    let assembled = transverse_signature(&problem);
    let mut note = Vec::new();
    if let Ok(v) = &assembled {
        if !v.integral {
            note.push("non-integral signature".to_string());
        }
    }
    let (oracle, extra_ok) = if opts.oracle && problem.p1_integral_original.is_some() {
        let defect = blowup_defect_check(&problem);
        let ok = matches!(defect, Ok(true));
        if !ok {
            note.push("blowup defect differs from the fixed point count".into());
        }
        (
            Some(transverse_signature_original(&problem).map(|v| format_rational(&v.value))),
            ok,
        )
    } else {
        (None, true)
    };
    vec![RowBuilder {
        name: &doc.name,
        check: "signature".into(),
        assembled: assembled.map(|v| format_rational(&v.value)),
        oracle,
        expected,
        extra_ok,
        note: (!note.is_empty()).then(|| note.join("; ")),
    }
    .finish()]
}

/// All rows for one document, in a fixed order.
pub fn verify_document(doc: &ExampleDocument, opts: VerifyOptions) -> Vec<VerifyRow> {
    let mut rows = foliation_rows(doc, opts);
    rows.extend(signature_rows(doc, opts));
    rows.extend(eta_rows(doc, opts));
    rows
}

/// Verifies documents in parallel; row order follows document order.
pub fn verify_documents(docs: &[ExampleDocument], opts: VerifyOptions) -> VerifyReport {
    let rows: Vec<Vec<VerifyRow>> = docs.par_iter().map(|d| verify_document(d, opts)).collect();
    VerifyReport::from_rows(rows.into_iter().flatten().collect())
}

pub fn verify_catalog() -> VerifyReport {
    verify_documents(&builtin_catalog(), VerifyOptions::default())
}
