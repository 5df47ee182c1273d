//! On-disk Jack coefficient tables.
//!
//! Format (`jackcache v1`):
//!
//! ```text
//! jackcache v1 alpha=<string> m=<int> weight=<int> mode=<float|exact>
//! <τ>; <μ>:<coeff>, <μ>:<coeff>, ...
//! ...
//! checksum sha256=<hex>
//! ```
//!
//! Partitions are written as space-separated parts (`0` for the empty
//! partition). Float coefficients use 17 significant digits, exact ones
//! `num/den`, so both round-trip bit for bit.

use std::path::{Path, PathBuf};

use log::warn;

use super::{JackLayer, JackTable, Scalar};
use crate::cache::{read_checksummed, write_checksummed, Lookup};
use crate::error::Result;
use crate::partitions::{enumerate_partitions, Partition};

const VERSION: &str = "jackcache v1";

#[derive(Debug, Clone)]
pub struct JackCache {
    dir: PathBuf,
}

fn encode_partition(p: &Partition) -> String {
    if p.is_empty() {
        "0".into()
    } else {
        p.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn decode_partition(s: &str) -> Option<Partition> {
    let parts = s
        .split_whitespace()
        .map(|t| t.parse::<u32>().ok())
        .collect::<Option<Vec<_>>>()?;
    Partition::new(parts).ok()
}

fn header<T: Scalar>(alpha_key: &str, m: usize, weight: u32) -> String {
    format!("{VERSION} alpha={alpha_key} m={m} weight={weight} mode={}", T::MODE)
}

/// Canonical key for α: shortest round-trip decimal for floats, `n/d` for
/// rationals.
pub fn alpha_key<T: Scalar>(alpha: &T) -> String {
    match T::MODE {
        "float" => format!("{:?}", alpha.to_f64()),
        _ => alpha.encode(),
    }
}

impl JackCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for<T: Scalar>(&self, alpha: &T, m: usize, weight: u32) -> PathBuf {
        let key = alpha_key(alpha).replace('/', "over").replace('-', "m");
        self.dir.join(format!("jackcache_v1_{}_a{key}_m{m}_w{weight}.txt", T::MODE))
    }

    pub fn put<T: Scalar>(&self, table: &JackTable<T>) -> Result<PathBuf> {
        let path = self.path_for(table.alpha(), table.m(), table.max_weight());
        let mut lines = vec![header::<T>(&alpha_key(table.alpha()), table.m(), table.max_weight())];
        for layer in table.layers() {
            for (t, tau) in layer.partitions.iter().enumerate() {
                let entries: Vec<String> = layer
                    .partitions
                    .iter()
                    .zip(&layer.c[t])
                    .zip(&layer.p[t])
                    .map(|((mu, c), p)| format!("{}:{}:{}", encode_partition(mu), c.encode(), p.encode()))
                    .collect();
                lines.push(format!("{}; {}", encode_partition(tau), entries.join(", ")));
            }
        }
        write_checksummed(&path, &lines)?;
        Ok(path)
    }

    pub fn get<T: Scalar>(&self, alpha: &T, m: usize, weight: u32) -> Lookup<JackTable<T>> {
        let path = self.path_for(alpha, m, weight);
        let lines = match read_checksummed(&path) {
            Lookup::Hit(l) => l,
            Lookup::Miss => return Lookup::Miss,
            Lookup::Invalid(e) => return Lookup::Invalid(e),
        };
        match parse_table(alpha, m, weight, &lines) {
            Ok(t) => Lookup::Hit(t),
            Err(e) => Lookup::Invalid(e),
        }
    }

    /// Reads the table if a valid file exists, otherwise builds and stores it.
    /// An unusable file is reported and replaced.
    pub fn load_or_build<T: Scalar>(&self, alpha: T, m: usize, weight: u32) -> Result<JackTable<T>> {
        match self.get(&alpha, m, weight) {
            Lookup::Hit(t) => return Ok(t),
            Lookup::Miss => {}
            Lookup::Invalid(reason) => {
                warn!(
                    "ignoring Jack cache {}: {reason}; recomputing",
                    self.path_for(&alpha, m, weight).display()
                );
            }
        }
        let table = JackTable::build(alpha, m, weight)?;
        if let Err(e) = self.put(&table) {
            warn!("could not write Jack cache: {e}");
        }
        Ok(table)
    }
}

fn parse_table<T: Scalar>(alpha: &T, m: usize, weight: u32, lines: &[String]) -> std::result::Result<JackTable<T>, String> {
    let (head, body) = lines.split_first().ok_or("missing header")?;
    if *head != header::<T>(&alpha_key(alpha), m, weight) {
        return Err(format!("header mismatch: '{head}'"));
    }
    let mut rows = body.iter();
    let mut layers = Vec::new();
    for n in 0..=weight {
        let partitions = enumerate_partitions(n, m);
        let mut c = Vec::with_capacity(partitions.len());
        let mut p = Vec::with_capacity(partitions.len());
        for tau in &partitions {
            let line = rows.next().ok_or("truncated table")?;
            let (t, rest) = line.split_once("; ").ok_or("malformed record")?;
            if decode_partition(t).as_ref() != Some(tau) {
                return Err(format!("unexpected record for {t}"));
            }
            let mut crow = Vec::with_capacity(partitions.len());
            let mut prow = Vec::with_capacity(partitions.len());
            for (entry, mu) in rest.split(", ").zip(&partitions) {
                let mut f = entry.split(':');
                let (Some(mu_s), Some(cs), Some(ps), None) = (f.next(), f.next(), f.next(), f.next()) else {
                    return Err(format!("malformed entry '{entry}'"));
                };
                if decode_partition(mu_s).as_ref() != Some(mu) {
                    return Err(format!("unexpected entry {mu_s}"));
                }
                crow.push(T::decode(cs).ok_or_else(|| format!("bad number '{cs}'"))?);
                prow.push(T::decode(ps).ok_or_else(|| format!("bad number '{ps}'"))?);
            }
            if crow.len() != partitions.len() {
                return Err("short record".into());
            }
            c.push(crow);
            p.push(prow);
        }
        // Eigenvalues are cheap to recompute and not stored.
        let eigenvalues = super::solve_eigenvalues(alpha, m, &partitions);
        layers.push(JackLayer { weight: n, partitions, c, p, eigenvalues });
    }
    if rows.next().is_some() {
        return Err("trailing records".into());
    }
    Ok(JackTable::from_layers(alpha.clone(), m, layers))
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    fn same<T: Scalar>(a: &JackTable<T>, b: &JackTable<T>) {
        assert_eq!(a.layers().len(), b.layers().len());
        for (x, y) in a.layers().iter().zip(b.layers()) {
            assert_eq!(x.partitions, y.partitions);
            assert_eq!(x.c, y.c);
            assert_eq!(x.p, y.p);
            assert_eq!(x.eigenvalues, y.eigenvalues);
        }
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = JackCache::new(dir.path());
        assert!(matches!(cache.get(&1.0f64, 3, 10), Lookup::Miss));
        let table = JackTable::build(1.0f64, 3, 10).unwrap();
        cache.put(&table).unwrap();
        let Lookup::Hit(back) = cache.get(&1.0f64, 3, 10) else { panic!("miss") };
        same(&table, &back);
        let alpha = 1.0 / 3.0;
        let t = JackTable::build(alpha, 2, 6).unwrap();
        cache.put(&t).unwrap();
        let Lookup::Hit(back) = cache.get(&alpha, 2, 6) else { panic!("miss") };
        same(&t, &back);
    }

    #[test]
    fn exact_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = JackCache::new(dir.path());
        let alpha = BigRational::new(2.into(), 3.into());
        let table = JackTable::build(alpha.clone(), 3, 5).unwrap();
        cache.put(&table).unwrap();
        let Lookup::Hit(back) = cache.get(&alpha, 3, 5) else { panic!("miss") };
        same(&table, &back);
    }

    #[test]
    fn corrupted_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = JackCache::new(dir.path());
        let table = JackTable::build(2.0f64, 2, 4).unwrap();
        let path = cache.put(&table).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replacen("1.0", "1.1", 1)).unwrap();
        assert!(matches!(cache.get(&2.0f64, 2, 4), Lookup::Invalid(_)));
        let rebuilt = cache.load_or_build(2.0f64, 2, 4).unwrap();
        same(&table, &rebuilt);
        assert!(matches!(cache.get(&2.0f64, 2, 4), Lookup::Hit(_)));
    }

    #[test]
    fn version_mismatch_is_invalid() {
        let dir = tempfile::tempdir().unwrap();
        let cache = JackCache::new(dir.path());
        let path = cache.path_for(&1.0f64, 2, 1);
        write_checksummed(&path, &["jackcache v0 alpha=1.0 m=2 weight=1 mode=float".into()]).unwrap();
        assert!(matches!(cache.get(&1.0f64, 2, 1), Lookup::Invalid(_)));
    }
}
