//! Enumeration of the prime tuples behind each statement, verification
//! campaigns against the independent oracles, a persistent quadratic-field
//! cache and JSON-lines reports.

pub mod cache;
pub mod campaign;
pub mod family;

use std::path::PathBuf;

use thiserror::Error;

pub use cache::{CacheRecord, DiskCache};
pub use campaign::{classify_tuple, run_campaign, verify_one, verify_campaign, write_report, Check, Summary, VerificationRecord};
pub use family::{enumerate_tuples, Family};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One campaign. `family` is a statement-id prefix such as `Thm1-item3`,
/// `Rank3`, `ThirdMain-nu1` or `TrivialIwasawa`; see [`Family::parse`].
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub family: String,
    /// primes are taken strictly below this
    pub prime_bound: u64,
    /// at most this many tuples are enumerated
    pub tuple_cap: usize,
    /// largest discriminant a class number may be computed for
    pub disc_bound: i64,
    pub parallelism: usize,
    pub out_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(family: &str, prime_bound: u64) -> SweepConfig {
        SweepConfig {
            family: family.to_string(),
            prime_bound,
            tuple_cap: usize::MAX,
            disc_bound: 1 << 34,
            parallelism: 1,
            out_path: None,
        }
    }

    pub fn validate(&self) -> Result<Family, HarnessError> {
        if self.parallelism == 0 {
            return Err(HarnessError::Config("parallelism must be at least 1".into()));
        }
        if self.disc_bound < 5 {
            return Err(HarnessError::Config(format!("disc bound {} is too small", self.disc_bound)));
        }
        Family::parse(&self.family)
    }
}
