//! Checksummed text files with atomic replacement.
//!
//! Every file ends with a `checksum sha256=<hex>` trailer over all preceding
//! lines. Writers go through a temporary file in the target directory and a
//! rename, so readers never observe a partial file.

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const TRAILER: &str = "checksum sha256=";

/// Outcome of reading a checksummed file.
#[derive(Debug, Clone, PartialEq)]
pub enum Lookup<T> {
    Hit(T),
    Miss,
    /// File present but unusable (checksum, version or parse failure).
    Invalid(String),
}

fn digest(lines: &[String]) -> String {
    let mut h = Sha256::new();
    for l in lines {
        h.update(l.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn write_checksummed(path: &Path, lines: &[String]) -> Result<()> {
    let dir = path
        .parent()
        .ok_or_else(|| Error::Cache(format!("{} has no parent directory", path.display())))?;
    fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let mut body = String::new();
    for l in lines {
        body.push_str(l);
        body.push('\n');
    }
    body.push_str(TRAILER);
    body.push_str(&digest(lines));
    body.push('\n');
    tmp.write_all(body.as_bytes()).map_err(|e| Error::Cache(e.to_string()))?;
    tmp.persist(path).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(())
}

/// Lines of the file without the trailer, after verifying the checksum.
pub fn read_checksummed(path: &Path) -> Lookup<Vec<String>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
        Err(e) => return Lookup::Invalid(e.to_string()),
    };
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let Some(last) = lines.pop() else {
        return Lookup::Invalid("empty file".into());
    };
    let Some(sum) = last.strip_prefix(TRAILER) else {
        return Lookup::Invalid("missing checksum trailer".into());
    };
    if sum != digest(&lines) {
        return Lookup::Invalid("checksum mismatch".into());
    }
    Lookup::Hit(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/f.txt");
        assert_eq!(read_checksummed(&path), Lookup::Miss);
        let lines = vec!["a b".to_string(), "c".to_string()];
        write_checksummed(&path, &lines).unwrap();
        assert_eq!(read_checksummed(&path), Lookup::Hit(lines));
        let text = fs::read_to_string(&path).unwrap().replace("a b", "a c");
        fs::write(&path, text).unwrap();
        assert!(matches!(read_checksummed(&path), Lookup::Invalid(_)));
    }
}
