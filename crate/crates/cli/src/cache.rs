//! JSON-lines persistence for count tables.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use grsn::table::{CountKey, CountTable, Provenance};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub key: CountKey,
    pub value: String,
    pub provenance: Provenance,
    pub tool_version: String,
}

/// An append-only cache file. Each line is one [`Record`].
#[derive(Debug, Clone)]
pub struct CacheFile {
    path: PathBuf,
}

impl CacheFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        CacheFile { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn records(&self) -> Result<Vec<Record>, CliError> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(CliError::Io(format!("{}: {e}", self.path.display()))),
        };
        let mut out = Vec::new();
        for (no, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| CliError::Io(format!("{}: {e}", self.path.display())))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)
                .map_err(|e| CliError::Io(format!("{}:{}: bad record: {e}", self.path.display(), no + 1)))?;
            out.push(rec);
        }
        Ok(out)
    }

    /// Reads the whole file; records for one key must agree.
    pub fn load(&self) -> Result<CountTable, CliError> {
        let mut table = CountTable::new();
        for rec in self.records()? {
            let value: BigUint = rec
                .value
                .parse()
                .map_err(|_| CliError::Io(format!("{}: bad count {:?}", self.path.display(), rec.value)))?;
            table.insert(rec.key, value, rec.provenance)?;
        }
        Ok(table)
    }

    /// Appends a record for every (key, provenance) pair not yet on disk.
    pub fn append(&self, table: &CountTable) -> Result<usize, CliError> {
        let seen: BTreeSet<(CountKey, Provenance)> =
            self.records()?.into_iter().map(|r| (r.key, r.provenance)).collect();
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| CliError::Io(format!("{}: {e}", self.path.display())))?;
        let mut written = 0;
        for (key, entry) in table.iter() {
            for &p in &entry.provenance {
                if seen.contains(&(key.clone(), p)) {
                    continue;
                }
                let rec = Record {
                    key: key.clone(),
                    value: entry.value.to_string(),
                    provenance: p,
                    tool_version: TOOL_VERSION.to_string(),
                };
                let line = serde_json::to_string(&rec).expect("records serialize");
                writeln!(file, "{line}").map_err(|e| CliError::Io(format!("{}: {e}", self.path.display())))?;
                written += 1;
            }
        }
        Ok(written)
    }
}
