//! Keyed store of exact factorization counts with provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Total length `m`, or the split `(m1, m2)` into swap and diagonal factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Length {
    Refined { m1: u32, m2: u32 },
    Total { m: u32 },
}

impl Length {
    pub fn total(&self) -> u32 {
        match *self {
            Length::Total { m } => m,
            Length::Refined { m1, m2 } => m1 + m2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountKey {
    pub element: GroupElement,
    #[serde(flatten)]
    pub length: Length,
    pub connected: bool,
}

impl CountKey {
    pub fn total(element: GroupElement, m: u32, connected: bool) -> Self {
        CountKey { element, length: Length::Total { m }, connected }
    }

    pub fn refined(element: GroupElement, m1: u32, m2: u32, connected: bool) -> Self {
        CountKey { element, length: Length::Refined { m1, m2 }, connected }
    }
}

impl fmt::Display for CountKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.connected { "connected" } else { "all" };
        match self.length {
            Length::Total { m } => write!(f, "{name}[m={m}] of {:?}", self.element),
            Length::Refined { m1, m2 } => write!(f, "{name}[m1={m1},m2={m2}] of {:?}", self.element),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Dp,
    Enumeration,
    Inversion,
    ClosedForm,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Dp => "dp",
            Provenance::Enumeration => "enumeration",
            Provenance::Inversion => "inversion",
            Provenance::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub value: BigUint,
    pub provenance: BTreeSet<Provenance>,
}

/// Counts keyed by [`CountKey`]. Re-inserting a key from another source must
/// agree with the stored value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    entries: BTreeMap<CountKey, Entry>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: CountKey, value: BigUint, provenance: Provenance) -> Result<()> {
        match self.entries.get_mut(&key) {
            Some(entry) if entry.value != value => Err(Error::Conflict {
                key: key.to_string(),
                left: entry.value.to_string(),
                right: value.to_string(),
            }),
            Some(entry) => {
                entry.provenance.insert(provenance);
                Ok(())
            }
            None => {
                self.entries.insert(key, Entry { value, provenance: BTreeSet::from([provenance]) });
                Ok(())
            }
        }
    }

    pub fn get(&self, key: &CountKey) -> Option<&BigUint> {
        self.entries.get(key).map(|e| &e.value)
    }

    pub fn entry(&self, key: &CountKey) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CountKey, &Entry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merges `other` into `self`, failing on the first conflicting key.
    pub fn merge(&mut self, other: &CountTable) -> Result<()> {
        for (k, e) in other.iter() {
            for &p in &e.provenance {
                self.insert(k.clone(), e.value.clone(), p)?;
            }
        }
        Ok(())
    }
}

/// A table shared between threads: one writer at a time, readers take
/// immutable snapshots.
#[derive(Debug, Default)]
pub struct SharedTable {
    inner: Mutex<Arc<CountTable>>,
}

impl SharedTable {
    pub fn new(table: CountTable) -> Self {
        SharedTable { inner: Mutex::new(Arc::new(table)) }
    }

    pub fn snapshot(&self) -> Arc<CountTable> {
        self.inner.lock().expect("count table lock poisoned").clone()
    }

    pub fn insert(&self, key: CountKey, value: BigUint, provenance: Provenance) -> Result<()> {
        let mut guard = self.inner.lock().expect("count table lock poisoned");
        Arc::make_mut(&mut guard).insert(key, value, provenance)
    }
}
