//! Instance serialization: matrices go out as MatrixMarket/CSV files and a
//! plain `key = value` manifest records the generator parameters and seed
//! for exact replay.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::{RecoveryInstance, SparseQpInstance, SpcaInstance};
use crate::linalg::io::{write_csv_vector, write_matrix_market};
use crate::{Error, Result};

/// Write a sorted `key = value` manifest.
pub fn write_manifest(path: &Path, entries: &[(&str, String)]) -> Result<()> {
    let map: BTreeMap<&str, &String> = entries.iter().map(|(k, v)| (*k, v)).collect();
    let mut out = String::new();
    for (k, v) in map {
        out.push_str(&format!("{k} = {v}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Parse a `key = value` manifest into a map. Blank lines and `#` comments
/// are skipped.
pub fn read_manifest(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| {
            Error::Parse(format!("manifest line {} is not key = value", lineno + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

impl RecoveryInstance {
    /// Write `ground_truth.mtx`, `observations.mtx`, `mask.csv` (one `i,j`
    /// pair per line) and `manifest.txt` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_matrix_market(&dir.join("ground_truth.mtx"), &self.ground_truth)?;
        write_matrix_market(&dir.join("observations.mtx"), &self.observations)?;
        let mask_lines: String = self
            .mask
            .observed()
            .iter()
            .map(|(i, j)| format!("{i},{j}\n"))
            .collect();
        fs::write(dir.join("mask.csv"), mask_lines)?;
        let p = &self.params;
        write_manifest(
            &dir.join("manifest.txt"),
            &[
                ("kind", "recovery".into()),
                ("n", p.n.to_string()),
                ("rank", p.rank.to_string()),
                ("zero_frac", p.zero_frac.to_string()),
                ("noise_variance", p.noise_variance.to_string()),
                ("obs_frac", p.obs_frac.to_string()),
                ("seed", p.seed.to_string()),
                ("p_obs", self.p_obs.to_string()),
            ],
        )
    }

    /// Regenerate the instance recorded by a manifest.
    pub fn replay(manifest: &Path) -> Result<Self> {
        let m = read_manifest(manifest)?;
        let get = |k: &str| {
            m.get(k)
                .ok_or_else(|| Error::Parse(format!("manifest missing key {k}")))
        };
        super::gen_recovery_instance(
            parse(get("n")?)?,
            parse(get("rank")?)?,
            parse(get("zero_frac")?)?,
            parse(get("noise_variance")?)?,
            parse(get("obs_frac")?)?,
            parse(get("seed")?)?,
        )
    }
}

impl SpcaInstance {
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_matrix_market(&dir.join("c.mtx"), &self.c)?;
        write_csv_vector(&dir.join("planted.csv"), &self.planted)?;
        write_manifest(
            &dir.join("manifest.txt"),
            &[
                ("kind", "spca".into()),
                ("n", self.params.n.to_string()),
                ("seed", self.params.seed.to_string()),
                ("lambda", self.lambda.to_string()),
            ],
        )
    }

    pub fn replay(manifest: &Path) -> Result<Self> {
        let m = read_manifest(manifest)?;
        let get = |k: &str| {
            m.get(k)
                .ok_or_else(|| Error::Parse(format!("manifest missing key {k}")))
        };
        super::gen_spca_instance(parse(get("n")?)?, parse(get("seed")?)?)
    }
}

impl SparseQpInstance {
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        write_matrix_market(&dir.join("q.mtx"), &self.q)?;
        write_csv_vector(&dir.join("c.csv"), &self.c)?;
        write_manifest(
            &dir.join("manifest.txt"),
            &[
                ("kind", "qp".into()),
                ("dim", self.params.dim.to_string()),
                ("b", self.b.to_string()),
                ("penalty_weight", self.penalty_weight.to_string()),
                ("seed", self.params.seed.to_string()),
            ],
        )
    }

    pub fn replay(manifest: &Path) -> Result<Self> {
        let m = read_manifest(manifest)?;
        let get = |k: &str| {
            m.get(k)
                .ok_or_else(|| Error::Parse(format!("manifest missing key {k}")))
        };
        super::gen_sparse_qp_instance(
            parse(get("dim")?)?,
            parse(get("b")?)?,
            parse(get("penalty_weight")?)?,
            parse(get("seed")?)?,
        )
    }
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse()
        .map_err(|e| Error::Parse(format!("bad manifest value {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovery_round_trip_via_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let inst = super::super::gen_recovery_instance(12, 3, 0.9, 1e-4, 0.4, 42).unwrap();
        inst.save(dir.path()).unwrap();
        let again = RecoveryInstance::replay(&dir.path().join("manifest.txt")).unwrap();
        assert_eq!(inst.ground_truth, again.ground_truth);
        assert_eq!(inst.observations, again.observations);
        // The saved matrix files parse back to the same values.
        let y = crate::linalg::io::read_matrix_market(&dir.path().join("observations.mtx")).unwrap();
        assert_eq!(y, inst.observations);
    }

    #[test]
    fn spca_and_qp_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let inst = super::super::gen_spca_instance(11, 5).unwrap();
        inst.save(dir.path()).unwrap();
        let again = SpcaInstance::replay(&dir.path().join("manifest.txt")).unwrap();
        assert_eq!(inst.c, again.c);
        assert_eq!(inst.planted, again.planted);

        let dir2 = tempfile::tempdir().unwrap();
        let qp = super::super::gen_sparse_qp_instance(9, 1.5, 0.01, 8).unwrap();
        qp.save(dir2.path()).unwrap();
        let again = SparseQpInstance::replay(&dir2.path().join("manifest.txt")).unwrap();
        assert_eq!(qp.q, again.q);
        assert_eq!(qp.c, again.c);
    }

    #[test]
    fn manifest_rejects_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "kind recovery\n").unwrap();
        assert!(read_manifest(&path).is_err());
    }
}
