//! Resumable snapshots of a partially filled value table.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{SeedSpec, ValueTable};
use crate::error::{Error, Result};
use crate::kostant::KostantFrame;
use crate::poly::{JsonTerm, Poly, VarNames};
use crate::termgen::{Scope, TermKey};

/// Identifies one computation: algebra, frame, degree, scope and seeds.
pub fn content_hash(frame: &KostantFrame, d: u32, scope: Scope, seeds: &SeedSpec) -> String {
    #[derive(Serialize)]
    struct Content<'a> {
        algebra: crate::rootdata::AlgebraDocument,
        frame: crate::kostant::FrameDocument,
        degree: u32,
        scope: Scope,
        seed_index: Option<usize>,
        seed_target: &'a [JsonTerm],
    }
    let target = seeds.target.to_json_terms(&VarNames::slice(frame.rank()));
    let content = Content {
        algebra: frame.alg.to_document(),
        frame: frame.to_document(),
        degree: d,
        scope,
        seed_index: seeds.index,
        seed_target: &target,
    };
    let bytes = serde_json::to_vec(&content).expect("serializable content");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointEntry {
    pub w: Vec<usize>,
    pub u: Vec<usize>,
    pub b: u32,
    pub a: u32,
    pub value: Vec<JsonTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub hash: String,
    pub algebra: String,
    pub degree: u32,
    pub scope: Scope,
    pub completed_strata: usize,
    pub total_strata: usize,
    pub entries: Vec<CheckpointEntry>,
}

impl Checkpoint {
    pub fn from_table(table: &ValueTable, frame: &KostantFrame) -> Self {
        let names = VarNames::cartan(frame.rank());
        Checkpoint {
            format: "lieinv.checkpoint".into(),
            version: 1,
            hash: table.hash.clone(),
            algebra: table.algebra.clone(),
            degree: table.degree,
            scope: table.scope,
            completed_strata: table.completed_strata,
            total_strata: table.total_strata,
            entries: table
                .values
                .iter()
                .map(|(k, v)| CheckpointEntry {
                    w: k.w.clone(),
                    u: k.u.clone(),
                    b: k.b,
                    a: k.a,
                    value: v.to_json_terms(&names),
                })
                .collect(),
        }
    }

    /// The stored values, checked against the frame.
    pub fn values(&self, frame: &KostantFrame) -> Result<Vec<(TermKey, Poly)>> {
        if self.format != "lieinv.checkpoint" || self.version != 1 {
            return Err(Error::Parse(format!(
                "unsupported checkpoint {} v{}",
                self.format, self.version
            )));
        }
        let names = VarNames::cartan(frame.rank());
        let n = frame.dim();
        self.entries
            .iter()
            .map(|e| {
                if let Some(&k) = e.w.iter().chain(&e.u).find(|&&k| k >= n) {
                    return Err(Error::IndexOutOfRange { index: k, max: n });
                }
                let key = TermKey::new(e.w.clone(), e.u.clone(), e.b, e.a);
                Ok((key, Poly::from_json_terms(&e.value, &names)?))
            })
            .collect()
    }

    /// Writes through a temporary file so an interrupted save leaves the
    /// previous checkpoint intact.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}
