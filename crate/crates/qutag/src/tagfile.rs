//! Line-oriented tag files: one JSON record per line, re-verified on load.
//!
//! Stored metrics are claims, not trust: loading recomputes the comma-free
//! index from the support and, when a difference-set mu is present, re-runs
//! the difference-set check. Any mismatch fails the load.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constructions::{verify_difference_set, ConstructedTag};
use crate::error::{Error, Result};
use crate::tags::{comma_free_index, QuantumTag};

pub const SCHEMA_VERSION: u32 = 1;

/// One stored tag: parameters, provenance label, and claimed metrics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagFileRecord {
    pub schema_version: u32,
    pub v: usize,
    pub k: usize,
    pub support: Vec<usize>,
    pub family: String,
    pub rho: i64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl TagFileRecord {
    pub fn from_tag(tag: &QuantumTag, family: &str, notes: &str) -> TagFileRecord {
        TagFileRecord {
            schema_version: SCHEMA_VERSION,
            v: tag.v(),
            k: tag.k(),
            support: tag.support().to_vec(),
            family: family.to_string(),
            rho: tag.rho(),
            mu: None,
            delta: None,
            notes: notes.to_string(),
        }
    }

    /// Carries the construction's certificate along: mu and the header
    /// dissimilarity delta = k - mu.
    pub fn from_constructed(
        built: &ConstructedTag,
        family: &str,
        notes: &str,
    ) -> TagFileRecord {
        let mut record = TagFileRecord::from_tag(&built.tag, family, notes);
        record.mu = Some(built.certificate.mu);
        record.delta = Some(built.delta());
        record
    }

    /// Recomputes every claimed metric and compares.
    pub fn verify(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::MalformedRecord(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        if self.k != self.support.len() {
            return Err(Error::VerificationMismatch {
                field: "k",
                stored: self.k as i64,
                actual: self.support.len() as i64,
            });
        }
        let rho = comma_free_index(&self.support, self.v)?;
        if rho != self.rho {
            return Err(Error::VerificationMismatch {
                field: "rho",
                stored: self.rho,
                actual: rho,
            });
        }
        if let Some(mu) = self.mu {
            match verify_difference_set(&self.support, self.v)? {
                Some(actual) if actual == mu => {}
                Some(actual) => {
                    return Err(Error::VerificationMismatch {
                        field: "mu",
                        stored: mu as i64,
                        actual: actual as i64,
                    });
                }
                None => {
                    return Err(Error::VerificationMismatch {
                        field: "mu",
                        stored: mu as i64,
                        actual: -1,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_tag(&self) -> Result<QuantumTag> {
        QuantumTag::new(self.v, &self.support)
    }
}

/// Renders records as newline-terminated JSON lines.
pub fn render_records(records: &[TagFileRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parses JSON lines (blank lines allowed) without verifying metrics.
pub fn parse_records(text: &str) -> Result<Vec<TagFileRecord>> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: TagFileRecord = serde_json::from_str(line)
            .map_err(|e| Error::MalformedRecord(format!("line {}: {e}", i + 1)))?;
        records.push(record);
    }
    Ok(records)
}

pub fn save(path: &Path, records: &[TagFileRecord]) -> Result<()> {
    fs::write(path, render_records(records))?;
    Ok(())
}

/// Loads and verifies. A file whose claims do not reproduce fails here.
pub fn load(path: &Path) -> Result<Vec<TagFileRecord>> {
    let text = fs::read_to_string(path)?;
    let records = parse_records(&text)?;
    if records.is_empty() {
        return Err(Error::MalformedRecord("file holds no records".into()));
    }
    for r in &records {
        r.verify()?;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::singer_difference_set;
    use proptest::prelude::*;

    #[test]
    fn round_trip_preserves_records() {
        let built = singer_difference_set(2, 2).unwrap();
        let records = vec![
            TagFileRecord::from_constructed(&built, "singer", "q=2 m=2"),
            TagFileRecord::from_tag(&QuantumTag::new(27, &[0, 3, 11, 21, 26]).unwrap(), "external", ""),
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tags.jsonl");
        save(&path, &records).unwrap();
        let loaded = load(&path).unwrap();
        assert_eq!(loaded, records);
        assert_eq!(loaded[0].mu, Some(1));
        assert_eq!(loaded[0].delta, Some(2));
    }

    #[test]
    fn tampered_metrics_fail_verification() {
        let tag = QuantumTag::new(7, &[0, 1, 3]).unwrap();
        let mut record = TagFileRecord::from_tag(&tag, "external", "");
        record.rho = 6;
        assert!(matches!(
            record.verify(),
            Err(Error::VerificationMismatch { field: "rho", stored: 6, actual: 4 })
        ));

        let mut record = TagFileRecord::from_tag(&tag, "external", "");
        record.mu = Some(2);
        assert!(matches!(
            record.verify(),
            Err(Error::VerificationMismatch { field: "mu", .. })
        ));

        let mut record = TagFileRecord::from_tag(&tag, "external", "");
        record.k = 4;
        assert!(matches!(
            record.verify(),
            Err(Error::VerificationMismatch { field: "k", .. })
        ));

        let mut record = TagFileRecord::from_tag(&tag, "external", "");
        record.schema_version = 2;
        assert!(matches!(record.verify(), Err(Error::MalformedRecord(_))));
    }

    #[test]
    fn malformed_lines_name_their_line_number() {
        let err = parse_records("\n{not json}\n").unwrap_err();
        match err {
            Error::MalformedRecord(msg) => assert!(msg.starts_with("line 2:")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        std::fs::write(&path, "\n").unwrap();
        assert!(matches!(load(&path), Err(Error::MalformedRecord(_))));
    }

    proptest! {
        #[test]
        fn any_valid_tag_survives_the_file_round_trip(
            v in 4usize..24,
            seed in 0u64..10_000,
        ) {
            // derive a support pseudo-randomly from the seed
            let k = 2 + (seed as usize) % (v / 2 - 1).max(1);
            let mut support: Vec<usize> = Vec::new();
            let mut x = seed;
            while support.len() < k {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let e = (x >> 33) as usize % v;
                if !support.contains(&e) {
                    support.push(e);
                }
            }
            support.sort_unstable();
            let tag = QuantumTag::new(v, &support).unwrap();
            let record = TagFileRecord::from_tag(&tag, "external", "prop");
            let text = render_records(&[record.clone()]);
            let parsed = parse_records(&text).unwrap();
            prop_assert_eq!(&parsed, &vec![record]);
            parsed[0].verify().unwrap();
            prop_assert_eq!(parsed[0].to_tag().unwrap().rho(), tag.rho());
        }
    }
}
