use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use stratbundle::doc::BundleDoc;
use stratbundle::strabundle::{validate_bundle, StratBundle};
use stratbundle::{Error, Result};

pub fn read_value(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn read_doc<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_value(read_value(path)?).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// Reads a bundle document and checks the bundle conditions.
pub fn read_bundle(path: &Path) -> Result<StratBundle> {
    let x = read_doc::<BundleDoc>(path)?.to_bundle()?;
    validate_bundle(&x).into_result()?;
    Ok(x)
}

/// Writes through a temporary file in the target directory, so readers
/// never see a partial document.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
