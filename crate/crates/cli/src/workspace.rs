//! A workspace is a directory of JSON documents with a manifest recording
//! each document's kind and SHA-256 digest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stratbundle::doc::detect_kind;
use stratbundle::{Error, Result};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub kind: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub documents: BTreeMap<String, Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub document: String,
    pub problem: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn entry(path: &Path) -> Result<Entry> {
    let bytes = fs::read(path)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let kind = detect_kind(&value)
        .ok_or_else(|| Error::Malformed(format!("{}: not a recognised document", path.display())))?;
    Ok(Entry {
        kind: kind.name().to_string(),
        sha256: digest(&bytes),
    })
}

fn documents(dir: &Path) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for item in fs::read_dir(dir)? {
        let name = item?.file_name().to_string_lossy().into_owned();
        if name.ends_with(".json") && name != MANIFEST {
            names.push(name);
        }
    }
    names.sort();
    Ok(names)
}

pub fn build(dir: &Path) -> Result<Manifest> {
    let mut m = Manifest::default();
    for name in documents(dir)? {
        m.documents.insert(name.clone(), entry(&dir.join(&name))?);
    }
    Ok(m)
}

/// Compares the directory against its manifest.
pub fn check(dir: &Path, manifest: &Manifest) -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    let present = documents(dir)?;
    for name in &present {
        if !manifest.documents.contains_key(name) {
            out.push(Mismatch {
                document: name.clone(),
                problem: "not listed in the manifest".into(),
            });
        }
    }
    for (name, want) in &manifest.documents {
        if !present.contains(name) {
            out.push(Mismatch {
                document: name.clone(),
                problem: "listed but missing".into(),
            });
            continue;
        }
        match entry(&dir.join(name)) {
            Ok(got) if got.sha256 != want.sha256 => out.push(Mismatch {
                document: name.clone(),
                problem: format!("digest is {}, manifest has {}", got.sha256, want.sha256),
            }),
            Ok(got) if got.kind != want.kind => out.push(Mismatch {
                document: name.clone(),
                problem: format!("document is a {}, manifest says {}", got.kind, want.kind),
            }),
            Ok(_) => {}
            Err(e) => out.push(Mismatch {
                document: name.clone(),
                problem: e.to_string(),
            }),
        }
    }
    out.sort_by(|a, b| a.document.cmp(&b.document));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(digest(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn tampering_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("c.json"), r#"{"cells": []}"#).unwrap();
        let m = build(dir.path()).unwrap();
        assert_eq!(m.documents["c.json"].kind, "complex");
        assert!(check(dir.path(), &m).unwrap().is_empty());
        fs::write(dir.path().join("c.json"), r#"{"cells": [ ]}"#).unwrap();
        fs::write(dir.path().join("extra.json"), r#"{"vertex_map": {}}"#).unwrap();
        let bad = check(dir.path(), &m).unwrap();
        assert_eq!(bad.len(), 2);
        assert!(bad[0].problem.starts_with("digest"));
        assert_eq!(bad[1].document, "extra.json");
    }
}
