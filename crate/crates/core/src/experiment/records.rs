use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kerr::Oracle;

/// One `(N, sigma, k)` evaluation with the truncation and route that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub k: u32,
    pub epsilon: f64,
    pub witness: Option<f64>,
    pub dim: usize,
    pub tail_tol: f64,
    pub seed: Option<u64>,
    pub oracle_used: Oracle,
}

impl SweepRecord {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) || !self.epsilon.is_finite() || self.dim == 0 {
            return Err(Error::Contract(format!("malformed record at N = {}, sigma = {}", self.n, self.sigma)));
        }
        if (self.alpha * self.alpha - self.n).abs() > 1e-12 * self.n.max(1.0) {
            return Err(Error::Contract(format!("N = {} does not match alpha^2 = {}", self.n, self.alpha * self.alpha)));
        }
        if !(-1e-12..=0.5 + 1e-9).contains(&self.epsilon) {
            return Err(Error::Contract(format!("epsilon {} outside [0, 1/2]", self.epsilon)));
        }
        Ok(())
    }
}

/// A sweep point that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub index: usize,
    pub n: f64,
    pub sigma: f64,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub failures: Vec<PointFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecord {
    pub n: f64,
    pub alpha: f64,
    pub dim: usize,
    pub tail_tol: f64,
}

/// Everything needed to regenerate a dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, serde_json::Value>,
    pub seeds: Vec<u64>,
    pub truncations: Vec<TruncationRecord>,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub outputs: Vec<String>,
    /// Seconds since the Unix epoch; excluded from the content hash.
    pub wall_clock_unix: u64,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            config: BTreeMap::new(),
            seeds: Vec::new(),
            truncations: Vec::new(),
            tolerances: BTreeMap::new(),
            notes: Vec::new(),
            outputs: Vec::new(),
            wall_clock_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        }
    }

    pub fn set<V: Serialize>(&mut self, key: &str, value: V) -> Result<()> {
        self.config.insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn add_truncation(&mut self, n: f64, dim: usize, tail_tol: f64) {
        let rec = TruncationRecord { n, alpha: n.sqrt(), dim, tail_tol };
        if !self.truncations.contains(&rec) {
            self.truncations.push(rec);
        }
    }

    /// SHA-256 of the manifest with the wall-clock field zeroed.
    pub fn content_hash(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.wall_clock_unix = 0;
        let bytes = serde_json::to_vec(&copy)?;
        Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Per-point seed from a base seed and the point's index in the sweep.
pub fn derive_seed(base: u64, index: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = base.wrapping_add((index as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trip_and_hash() {
        let mut m = RunManifest::new("figure fig5a");
        m.set("sigma", vec![0.1, 1.0 / 3.0]).unwrap();
        m.seeds.push(7);
        m.add_truncation(4.0, 36, 1e-12);
        m.tolerances.insert("tail_tol".into(), 1e-12);
        let back = RunManifest::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        let mut later = m.clone();
        later.wall_clock_unix += 100;
        assert_eq!(later.content_hash().unwrap(), m.content_hash().unwrap());
        later.seeds.push(8);
        assert_ne!(later.content_hash().unwrap(), m.content_hash().unwrap());
    }

    #[test]
    fn seeds_differ_per_point() {
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }

    #[test]
    fn record_validation() {
        let r = SweepRecord {
            n: 4.0,
            alpha: 2.0,
            sigma: 0.0,
            k: 1,
            epsilon: 0.7,
            witness: None,
            dim: 36,
            tail_tol: 1e-12,
            seed: None,
            oracle_used: Oracle::ClosedForm,
        };
        assert!(r.validate().is_err());
    }
}
