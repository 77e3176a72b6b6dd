//! JSON documents for every object the library reads or writes, and
//! canonical serialization: keys sorted, two-space indentation, trailing
//! newline.

mod inputs;
mod outputs;

use serde::Serialize;
use serde_json::Value;

use crate::Result;

pub use inputs::{
    AttachingDoc, BundleDoc, CategoryDoc, ComplexDoc, DiagramDoc, FMapDoc, FunctorDoc, MapDoc, MorphismDoc,
    TransitionDoc,
};
pub use outputs::{
    certificate_doc, coend_doc, covering_doc, iso_doc, stratification_doc, triviality_doc, CoendDoc,
    FamilyTransitionDoc,
};

/// Serializes any document canonically. Going through [`Value`] sorts every
/// object's keys, so equal documents give identical bytes.
pub fn to_canonical_string<T: Serialize>(doc: &T) -> Result<String> {
    let value = serde_json::to_value(doc)?;
    canonical_value(&value)
}

pub fn canonical_value(value: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Document kinds, recognized by their top-level keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DocKind {
    Category,
    Complex,
    Map,
    FMap,
    Attaching,
    Functor,
    Bundle,
    Diagram,
    Family,
    Iso,
    Trivialization,
    Certificate,
    Covering,
    Stratification,
    Report,
    Nkc,
}

impl DocKind {
    pub fn name(self) -> &'static str {
        match self {
            DocKind::Category => "category",
            DocKind::Complex => "complex",
            DocKind::Map => "map",
            DocKind::FMap => "fmap",
            DocKind::Attaching => "attaching",
            DocKind::Functor => "functor",
            DocKind::Bundle => "bundle",
            DocKind::Diagram => "diagram",
            DocKind::Family => "family",
            DocKind::Iso => "iso",
            DocKind::Trivialization => "trivialization",
            DocKind::Certificate => "certificate",
            DocKind::Covering => "covering",
            DocKind::Stratification => "stratification",
            DocKind::Report => "report",
            DocKind::Nkc => "nkc",
        }
    }
}

pub fn detect_kind(value: &Value) -> Option<DocKind> {
    let obj = value.as_object()?;
    let has = |k: &str| obj.contains_key(k);
    Some(if has("base") && has("category") {
        DocKind::Bundle
    } else if has("objects") && has("morphisms") && has("compose") {
        DocKind::Category
    } else if has("objects") && has("morphisms") {
        DocKind::Functor
    } else if has("cells") {
        DocKind::Complex
    } else if has("components") && has("actions") {
        DocKind::Diagram
    } else if has("subcomplex") {
        DocKind::Attaching
    } else if has("fibre_morphisms") {
        DocKind::FMap
    } else if has("vertex_map") {
        DocKind::Map
    } else if has("classes") {
        DocKind::Family
    } else if has("iso") {
        DocKind::Iso
    } else if has("atlas") || has("counterexample") {
        DocKind::Certificate
    } else if has("charts") || has("obstruction") {
        DocKind::Trivialization
    } else if has("sheets") || has("monodromy") {
        DocKind::Covering
    } else if has("pieces") {
        DocKind::Stratification
    } else if has("suite") {
        DocKind::Report
    } else if has("max_hom_size") {
        DocKind::Nkc
    } else {
        return None;
    })
}
