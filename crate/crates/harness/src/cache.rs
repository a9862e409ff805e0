//! Append-only JSON-lines store of quadratic field data.
//!
//! The first line is a header `{"v":1,"kind":"biquad-quad-cache"}`. Every
//! further line is one record
//! `{"v":1,"m":399,"h":8,"h_narrow":16,"h2":8,"eps":[20,1,1],"norm":1}`
//! where `eps = [a, b, den]` stands for `(a + b sqrt m)/den`. The class fields
//! may be absent when only the unit was asked for; `cf_period` is optional. The newest valid line for
//! an `m` wins. Lines that fail to parse or whose unit does not have norm
//! `norm` are ignored, which covers a torn trailing line.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, RwLock};

use biquad_iwasawa::error::QuadError;
use biquad_iwasawa::quad::{class_number, fundamental_unit, ClassData, FundUnit, QuadElem};
use biquad_iwasawa::units::QuadSource;
use num_bigint::BigInt;
use serde_json::{json, Number, Value};

use crate::HarnessError;

pub const CACHE_VERSION: u64 = 1;
pub const CACHE_FILE: &str = "quad.jsonl";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub m: i64,
    pub class: Option<(u64, u64, u64)>,
    pub unit: FundUnit,
}

impl CacheRecord {
    pub fn to_line(&self) -> String {
        let big = |n: &BigInt| Value::Number(Number::from_str(&n.to_string()).expect("integer literal"));
        let u = &self.unit.value;
        let mut v = json!({
            "v": CACHE_VERSION,
            "m": self.m,
            "eps": [big(&u.a), big(&u.b), big(&u.den)],
            "norm": self.unit.norm,
            "cf_period": self.unit.cf_period,
        });
        if let Some((h, hn, h2)) = self.class {
            v["h"] = json!(h);
            v["h_narrow"] = json!(hn);
            v["h2"] = json!(h2);
        }
        v.to_string()
    }

    pub fn parse(line: &str) -> Option<CacheRecord> {
        let v: Value = serde_json::from_str(line).ok()?;
        if v.get("v")?.as_u64()? != CACHE_VERSION {
            return None;
        }
        let m = v.get("m")?.as_i64()?;
        let eps = v.get("eps")?.as_array()?;
        if eps.len() != 3 {
            return None;
        }
        let int = |x: &Value| match x {
            Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
            _ => None,
        };
        let (a, b, den) = (int(&eps[0])?, int(&eps[1])?, int(&eps[2])?);
        let norm = v.get("norm")?.as_i64()?;
        if norm.abs() != 1 || (den != BigInt::from(1) && den != BigInt::from(2)) {
            return None;
        }
        if &a * &a - &b * &b * m != &den * &den * norm {
            return None;
        }
        let class = match (v.get("h"), v.get("h_narrow"), v.get("h2")) {
            (Some(h), Some(hn), Some(h2)) => Some((h.as_u64()?, hn.as_u64()?, h2.as_u64()?)),
            (None, None, None) => None,
            _ => return None,
        };
        let cf_period = v.get("cf_period").and_then(Value::as_u64).unwrap_or(0) as usize;
        let unit = FundUnit { value: QuadElem::new(a, b, den, m), norm: norm as i8, cf_period };
        Some(CacheRecord { m, class, unit })
    }

    fn class_data(&self) -> Option<ClassData> {
        self.class.map(|(h, h_narrow, h2)| ClassData { m: self.m, h, h_narrow, h2, structure: None })
    }
}

fn header() -> String {
    json!({"v": CACHE_VERSION, "kind": "biquad-quad-cache"}).to_string()
}

/// Persistent [`QuadSource`]. Misses are computed, appended and kept in
/// memory. Appends are serialized through one writer; an entry becomes
/// visible to readers only after its line is written.
pub struct DiskCache {
    path: PathBuf,
    disc_bound: i64,
    records: RwLock<HashMap<i64, Arc<CacheRecord>>>,
    writer: Mutex<File>,
}

impl DiskCache {
    pub fn open(dir: &Path, disc_bound: i64) -> Result<DiskCache, HarnessError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut records = HashMap::new();
        let mut valid_header = false;
        if path.exists() {
            let f = BufReader::new(File::open(&path)?);
            let mut lines = f.lines();
            if let Some(Ok(h)) = lines.next() {
                valid_header = serde_json::from_str::<Value>(&h)
                    .ok()
                    .and_then(|v| v.get("v").and_then(Value::as_u64))
                    == Some(CACHE_VERSION);
            }
            if valid_header {
                for line in lines.map_while(Result::ok) {
                    if let Some(r) = CacheRecord::parse(&line) {
                        records.insert(r.m, Arc::new(r));
                    }
                }
            }
        }
        if !valid_header {
            // missing, empty or another schema version: start over
            let mut f = File::create(&path)?;
            writeln!(f, "{}", header())?;
            records.clear();
        }
        let mut writer = OpenOptions::new().read(true).append(true).open(&path)?;
        // a torn last line must not swallow the next record
        let len = writer.metadata()?.len();
        if len > 0 {
            writer.seek(SeekFrom::Start(len - 1))?;
            let mut last = [0u8; 1];
            writer.read_exact(&mut last)?;
            if last[0] != b'\n' {
                writer.write_all(b"\n")?;
            }
        }
        Ok(DiskCache { path, disc_bound, records: RwLock::new(records), writer: Mutex::new(writer) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, m: i64) -> Option<Arc<CacheRecord>> {
        self.records.read().unwrap().get(&m).cloned()
    }

    /// Appends `r` unless the stored record for `r.m` is identical.
    pub fn put(&self, r: CacheRecord) -> Result<Arc<CacheRecord>, HarnessError> {
        let mut w = self.writer.lock().unwrap();
        if let Some(old) = self.get(r.m) {
            if *old == r {
                return Ok(old);
            }
        }
        writeln!(w, "{}", r.to_line())?;
        w.flush()?;
        let r = Arc::new(r);
        self.records.write().unwrap().insert(r.m, r.clone());
        Ok(r)
    }

    fn put_quad(&self, r: CacheRecord) -> Result<Arc<CacheRecord>, QuadError> {
        // an unwritable cache degrades to memory only
        let m = r.m;
        self.put(r.clone()).or_else(|_| {
            let r = Arc::new(r);
            self.records.write().unwrap().insert(m, r.clone());
            Ok(r)
        })
    }
}

impl QuadSource for DiskCache {
    fn unit(&self, m: i64) -> Result<Arc<FundUnit>, QuadError> {
        if let Some(r) = self.get(m) {
            return Ok(Arc::new(r.unit.clone()));
        }
        let unit = fundamental_unit(m)?;
        let r = self.put_quad(CacheRecord { m, class: None, unit })?;
        Ok(Arc::new(r.unit.clone()))
    }

    fn class_data(&self, m: i64) -> Result<ClassData, QuadError> {
        let old = self.get(m);
        if let Some(c) = old.as_ref().and_then(|r| r.class_data()) {
            return Ok(c);
        }
        let c = ClassData { structure: None, ..class_number(m, self.disc_bound)? };
        let unit = match old {
            Some(r) => r.unit.clone(),
            None => fundamental_unit(m)?,
        };
        self.put_quad(CacheRecord { m, class: Some((c.h, c.h_narrow, c.h2)), unit })?;
        Ok(c)
    }
}
