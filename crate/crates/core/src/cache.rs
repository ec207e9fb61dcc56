//! Known values of f(n,w) and f(n,w,k), exact or one-sided.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WitnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CacheKey {
    pub n: usize,
    pub w: usize,
    pub k: Option<usize>,
}

impl CacheKey {
    pub fn new(n: usize, w: usize) -> Self {
        CacheKey { n, w, k: None }
    }

    pub fn constant_weight(n: usize, w: usize, k: usize) -> Self {
        CacheKey { n, w, k: Some(k) }
    }
}

impl fmt::Display for CacheKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{},{},{}", self.n, self.w, k),
            None => write!(f, "{},{}", self.n, self.w),
        }
    }
}

impl FromStr for CacheKey {
    type Err = WitnessError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| WitnessError::InvalidArgument(format!("bad cache key {s:?}")))
        };
        match parts.as_slice() {
            [n, w] => Ok(CacheKey::new(num(n)?, num(w)?)),
            [n, w, k] => Ok(CacheKey::constant_weight(num(n)?, num(w)?, num(k)?)),
            _ => Err(WitnessError::InvalidArgument(format!("bad cache key {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    Exact,
    LowerBound,
    UpperBound,
}

impl CacheStatus {
    fn rank(self) -> u8 {
        match self {
            CacheStatus::Exact => 1,
            CacheStatus::LowerBound | CacheStatus::UpperBound => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    #[serde(with = "crate::serde_big::biguint")]
    pub value: BigUint,
    pub status: CacheStatus,
    pub provenance: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CacheEntry {
    pub fn new(value: BigUint, status: CacheStatus, provenance: impl Into<String>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CacheEntry {
            value,
            status,
            provenance: provenance.into(),
            tool_version: crate::VERSION.to_string(),
            timestamp,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactValueCache {
    entries: BTreeMap<CacheKey, CacheEntry>,
}

impl ExactValueCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CacheKey, &CacheEntry)> {
        self.entries.iter()
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CacheEntry> {
        self.entries.get(key)
    }

    /// Insert with the merge policy: exact beats bounds, and among equal
    /// strength the newer timestamp wins. Returns whether the entry was stored.
    pub fn insert(&mut self, key: CacheKey, entry: CacheEntry) -> Result<bool> {
        if entry.value == BigUint::from(0u32) {
            return Err(WitnessError::InvalidArgument(format!(
                "cache value for {key} must be positive"
            )));
        }
        let replace = match self.entries.get(&key) {
            None => true,
            Some(old) => {
                let (a, b) = (entry.status.rank(), old.status.rank());
                a > b || (a == b && entry.timestamp > old.timestamp)
            }
        };
        if replace {
            self.entries.insert(key, entry);
        }
        Ok(replace)
    }

    pub fn insert_exact(&mut self, key: CacheKey, value: BigUint, provenance: &str) -> Result<bool> {
        self.insert(key, CacheEntry::new(value, CacheStatus::Exact, provenance))
    }

    pub fn merge(&mut self, other: &ExactValueCache) -> Result<()> {
        for (k, e) in other.iter() {
            self.insert(*k, e.clone())?;
        }
        Ok(())
    }

    pub fn exact(&self, key: &CacheKey) -> Option<&BigUint> {
        self.get(key)
            .filter(|e| e.status == CacheStatus::Exact)
            .map(|e| &e.value)
    }

    /// A value known to be at least the true one.
    pub fn upper(&self, key: &CacheKey) -> Option<&BigUint> {
        self.get(key)
            .filter(|e| e.status != CacheStatus::LowerBound)
            .map(|e| &e.value)
    }

    /// A value known to be at most the true one.
    pub fn lower(&self, key: &CacheKey) -> Option<&BigUint> {
        self.get(key)
            .filter(|e| e.status != CacheStatus::UpperBound)
            .map(|e| &e.value)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    tool_version: String,
    entries: BTreeMap<String, CacheEntry>,
}

impl Serialize for ExactValueCache {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CacheFile {
            tool_version: crate::VERSION.to_string(),
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactValueCache {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let file = CacheFile::deserialize(d)?;
        let mut cache = ExactValueCache::new();
        for (k, v) in file.entries {
            let key: CacheKey = k.parse().map_err(D::Error::custom)?;
            cache.insert(key, v).map_err(D::Error::custom)?;
        }
        Ok(cache)
    }
}
