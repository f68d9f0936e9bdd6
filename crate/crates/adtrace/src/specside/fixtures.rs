//! Newform fixture files: a small JSON schema for Hecke eigenvalue data,
//! with validation on load and a deterministic generator for the level-one
//! weights.

use super::{level1_newform, NewformData};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk schema (version 1):
/// {"schema":1,"field":"Q","level":N,"weight":k,"label":"...",
///  "expected_form_count":n,"ap":[[p,a_p],...]}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureFile {
    pub schema: u32,
    pub field: String,
    pub level: u64,
    pub weight: u32,
    pub label: String,
    pub expected_form_count: u32,
    pub ap: Vec<(u64, i128)>,
}

impl FixtureFile {
    pub fn into_newform(self) -> Result<NewformData> {
        if self.schema != 1 {
            return Err(Error::InvalidInput(format!("unsupported schema {}", self.schema)));
        }
        if self.field != "Q" {
            return Err(Error::InvalidInput(format!("unsupported field {}", self.field)));
        }
        let mut ap = self.ap;
        ap.sort_by_key(|&(p, _)| p);
        ap.dedup_by_key(|&mut (p, _)| p);
        let f = NewformData {
            level: self.level,
            weight: self.weight,
            label: self.label,
            ap,
            expected_form_count: self.expected_form_count,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_newform(f: &NewformData) -> Self {
        FixtureFile {
            schema: 1,
            field: "Q".into(),
            level: f.level,
            weight: f.weight,
            label: f.label.clone(),
            expected_form_count: f.expected_form_count,
            ap: f.ap.clone(),
        }
    }
}

/// Load every `*.json` fixture in a directory, validating each. Returns the
/// forms sorted by (level, label) together with per-file error strings for
/// malformed entries.
pub fn load_fixture_dir(dir: &Path) -> Result<(Vec<NewformData>, Vec<(String, String)>)> {
    let mut forms = Vec::new();
    let mut errors = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::InvalidInput(format!("cannot read {dir:?}: {e}")))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
        .collect();
    entries.sort();
    for path in entries {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let parse = std::fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| serde_json::from_str::<FixtureFile>(&text).map_err(|e| e.to_string()))
            .and_then(|ff| ff.into_newform().map_err(|e| e.to_string()));
        match parse {
            Ok(f) => forms.push(f),
            Err(e) => errors.push((name, e)),
        }
    }
    forms.sort_by(|a, b| (a.level, a.label.clone()).cmp(&(b.level, b.label.clone())));
    Ok((forms, errors))
}

/// Write the internally generated level-one fixture for the given weight;
/// byte-identical across runs (stable JSON field order, sorted eigenvalues).
pub fn write_level1_fixture(dir: &Path, weight: u32, bound: u64) -> Result<std::path::PathBuf> {
    let f = level1_newform(weight, bound)?;
    let ff = FixtureFile::from_newform(&f);
    let path = dir.join(format!("newform_q_{}_{}.json", f.level, weight));
    let mut text = serde_json::to_string_pretty(&ff)
        .map_err(|e| Error::InvalidInput(format!("serialize: {e}")))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::InvalidInput(format!("write: {e}")))?;
    Ok(path)
}
