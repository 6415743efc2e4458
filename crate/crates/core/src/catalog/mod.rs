//! The surface catalogue: JSON schema, loading with unknown-field detection,
//! the per-entry verifier and the negative-curve table.

mod table;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::delpezzo::PointConfiguration;
use crate::lattice::SurfaceLattice;
use crate::pqsurf::FiberIncidence;
use crate::rational::Q;

pub use table::{negative_curve_table, render_multiset, render_table, sorted_multiset, TableRow, Unverified};
pub use verify::{resolve_entry, verify_entry, CheckLine, ResolvedEntry, Status, VerificationReport};

pub const CATALOG_VERSION: u32 = 1;
pub const CATALOG_ENV: &str = "CONELAB_CATALOG";
const BUNDLED: &str = include_str!("../../data/catalog.json");

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unknown field {0}")]
    UnknownField(String),
    #[error("unsupported catalog_version {0}, expected {CATALOG_VERSION}")]
    Version(u32),
    #[error("entry {id}: {message}")]
    Entry { id: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    FakeProjectivePlane,
    IsogenousUnmixed,
    Inoue,
    Chen,
    Kulikov,
    Burniat { k2: i64, nodal: bool },
    Pq { k2: i64, group: String },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FakeProjectivePlane => f.write_str("fake projective plane"),
            Family::IsogenousUnmixed => f.write_str("isogenous to a product, unmixed"),
            Family::Inoue => f.write_str("Inoue"),
            Family::Chen => f.write_str("Chen"),
            Family::Kulikov => f.write_str("Kulikov"),
            Family::Burniat { k2, nodal: false } => write!(f, "Burniat K^2={k2}"),
            Family::Burniat { k2, nodal: true } => write!(f, "Burniat K^2={k2} nodal"),
            Family::Pq { k2, group } => write!(f, "product-quotient K^2={k2}, G={group}"),
        }
    }
}

/// The three ways an entry can describe its Néron–Severi lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeSource {
    Explicit {
        basis: Vec<String>,
        gram: Vec<Vec<Q>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        canonical: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        torsion_note: Option<String>,
    },
    Blowup(PointConfiguration),
    ProductQuotient(FiberIncidence),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub label: String,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub degree: u32,
    pub multiplier: u32,
    pub pullback_class: String,
    #[serde(default)]
    pub ramification: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Holds,
    Discrepancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSpec {
    NotNef { negative: String, positive: String },
    Nef(Vec<String>),
}

/// A checkable statement about an entry. Class expressions are read in the
/// lattice the entry declares (the base of the cover, if there is one).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClaimKind {
    Canonical { class: String },
    Determinant { classes: Vec<String>, value: Q },
    Equivalence { lhs: String, rhs: String },
    Witness {
        name: String,
        subset: Vec<String>,
        vector: String,
        claim: WitnessSpec,
    },
    NefAndBig { class: String },
    Effective { class: String },
    Exclusion { class: String },
    BaseCurveCount { self_int: i64, count: usize },
    Annotation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    #[serde(flatten)]
    pub kind: ClaimKind,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceEntry {
    pub id: String,
    pub family: Family,
    pub k2: i64,
    pub lattice: LatticeSource,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eff_generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef_generators: Option<Vec<String>>,
    /// `[self_int, genus, multiplicity]` triples.
    pub expected_negatives: Vec<[i64; 3]>,
    #[serde(default)]
    pub claims: Vec<Claim>,
    #[serde(default)]
    pub notes: String,
}

impl SurfaceEntry {
    /// Structural checks that do not need any cone computation.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let fail = |message: String| CatalogError::Entry {
            id: self.id.clone(),
            message,
        };
        if let LatticeSource::Explicit { basis, gram, .. } = &self.lattice {
            let g = gram.iter().map(|row| row.iter().map(|q| q.0.clone()).collect()).collect();
            SurfaceLattice::new(g, basis.clone()).map_err(|e| fail(e.to_string()))?;
        } else if !self.curves.is_empty() {
            return Err(fail("curves are derived from the configuration and may not be listed".into()));
        }
        if let LatticeSource::Blowup(cfg) = &self.lattice {
            cfg.validate().map_err(|e| fail(e.to_string()))?;
        }
        let mut seen = BTreeSet::new();
        for [_, genus, mult] in &self.expected_negatives {
            if *mult <= 0 || *genus < 0 {
                return Err(fail("expected_negatives need positive multiplicity and genus >= 0".into()));
            }
        }
        for c in &self.curves {
            if !seen.insert(c.label.as_str()) {
                return Err(fail(format!("duplicate curve label {}", c.label)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub catalog_version: u32,
    pub entries: Vec<SurfaceEntry>,
}

/// Keys present in `original` that did not survive deserialization.
fn unknown_fields(original: &Value, parsed: &Value, path: &str, out: &mut Vec<String>) {
    match (original, parsed) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, v) in a {
                let here = format!("{path}.{k}");
                match b.get(k) {
                    Some(w) => unknown_fields(v, w, &here, out),
                    None if v.is_null() => {}
                    None => out.push(here),
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (v, w)) in a.iter().zip(b).enumerate() {
                unknown_fields(v, w, &format!("{path}[{i}]"), out);
            }
        }
        _ => {}
    }
}

/// Parses catalogue text. Unknown fields are errors in strict mode and are
/// logged otherwise.
pub fn parse_catalog(text: &str, strictness: Strictness) -> Result<Vec<SurfaceEntry>, CatalogError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: CatalogFile = serde_path_to_error::deserialize(de).map_err(|e| CatalogError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if file.catalog_version != CATALOG_VERSION {
        return Err(CatalogError::Version(file.catalog_version));
    }
    let original: Value = serde_json::from_str(text).map_err(|e| CatalogError::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    let parsed = serde_json::to_value(&file).expect("catalog types serialize");
    let mut extra = Vec::new();
    unknown_fields(&original, &parsed, "", &mut extra);
    if let Some(first) = extra.first() {
        match strictness {
            Strictness::Strict => return Err(CatalogError::UnknownField(first.clone())),
            Strictness::Lenient => {
                for f in &extra {
                    log::warn!("ignoring unknown field {f}");
                }
            }
        }
    }
    let mut ids = BTreeSet::new();
    for e in &file.entries {
        if !ids.insert(e.id.as_str()) {
            return Err(CatalogError::Entry {
                id: e.id.clone(),
                message: "duplicate id".into(),
            });
        }
        e.validate()?;
    }
    Ok(file.entries)
}

pub fn load_catalog(path: Option<&Path>, strictness: Strictness) -> Result<Vec<SurfaceEntry>, CatalogError> {
    let env = std::env::var_os(CATALOG_ENV).map(std::path::PathBuf::from);
    match path.map(Path::to_path_buf).or(env) {
        None => parse_catalog(BUNDLED, strictness),
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|source| CatalogError::Io {
                path: p.display().to_string(),
                source,
            })?;
            parse_catalog(&text, strictness)
        }
    }
}

pub fn bundled_catalog() -> Vec<SurfaceEntry> {
    parse_catalog(BUNDLED, Strictness::Strict).expect("bundled catalogue is valid")
}

pub fn bundled_text() -> &'static str {
    BUNDLED
}

/// Canonical text of a catalogue: pretty JSON with a trailing newline.
pub fn serialize_catalog(entries: &[SurfaceEntry]) -> String {
    let file = CatalogFile {
        catalog_version: CATALOG_VERSION,
        entries: entries.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("catalog types serialize");
    s.push('\n');
    s
}

pub fn normalize(text: &str) -> Result<String, CatalogError> {
    parse_catalog(text, Strictness::Strict).map(|e| serialize_catalog(&e))
}

/// Entries whose id matches a glob such as `burniat-*`.
pub fn filter_entries(entries: Vec<SurfaceEntry>, pattern: Option<&str>) -> Result<Vec<SurfaceEntry>, glob::PatternError> {
    match pattern {
        None => Ok(entries),
        Some(p) => {
            let pat = glob::Pattern::new(p)?;
            Ok(entries.into_iter().filter(|e| pat.matches(&e.id)).collect())
        }
    }
}
