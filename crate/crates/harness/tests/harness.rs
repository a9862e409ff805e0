use std::fs;
use std::sync::Arc;

use biquad_harness::cache::{CacheRecord, CACHE_FILE};
use biquad_harness::*;
use biquad_iwasawa::classify::FamilyInput;
use biquad_iwasawa::units::{Memo, QuadSource};
use serde_json::Value;

fn cfg(family: &str, bound: u64) -> SweepConfig {
    SweepConfig::new(family, bound)
}

fn report(c: &SweepConfig) -> (String, Summary) {
    let (records, s) = run_campaign(c, &Memo::new(c.disc_bound)).unwrap();
    let mut buf = Vec::new();
    write_report(&mut buf, &records, &s, false).unwrap();
    (String::from_utf8(buf).unwrap(), s)
}

#[test]
fn enumerate_item11_bound_50() {
    let v: Vec<FamilyInput> = enumerate_tuples(&cfg("Thm1-item11", 50)).unwrap().collect();
    for (p, d) in [(5, 3), (5, 7), (13, 3)] {
        assert!(v.contains(&FamilyInput::PD { p, d }), "({p}, {d})");
    }
    for k in &v {
        let FamilyInput::PD { p, d } = *k else { panic!("{k:?}") };
        assert!(p % 8 == 5 && d % 4 == 3 && p < 50 && d < 50);
    }
    let keys: Vec<(u64, u64)> = v.iter().map(|k| if let FamilyInput::PD { p, d } = *k { (p, d) } else { unreachable!() }).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn enumerate_third_main_bound_20() {
    let v: Vec<FamilyInput> = enumerate_tuples(&cfg("ThirdMain-nu1", 20)).unwrap().collect();
    assert!(v.contains(&FamilyInput::ThirdMain { q: 7, r: 3, s: 19, nu: 1 }));
    assert!(v.iter().all(|k| matches!(k, FamilyInput::ThirdMain { nu: 1, .. })));
}

#[test]
fn enumerate_empty_window_and_cap() {
    assert_eq!(enumerate_tuples(&cfg("Thm1-item5", 3)).unwrap().count(), 0);
    assert_eq!(enumerate_tuples(&cfg("ThirdMain", 7)).unwrap().count(), 0);
    let mut c = cfg("RankBounds", 60);
    c.tuple_cap = 17;
    assert_eq!(enumerate_tuples(&c).unwrap().count(), 17);
    let a: Vec<_> = enumerate_tuples(&cfg("Rank3", 40)).unwrap().collect();
    let b: Vec<_> = enumerate_tuples(&cfg("Rank3", 40)).unwrap().collect();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn config_errors() {
    for f in ["Thm1-item13", "Nope", "ThirdMain-nu3"] {
        assert!(matches!(cfg(f, 50).validate(), Err(HarnessError::Config(_))), "{f}");
    }
    let mut c = cfg("Thm1", 50);
    c.parallelism = 0;
    assert!(matches!(run_campaign(&c, &Memo::default()), Err(HarnessError::Config(_))));
}

#[test]
fn third_main_campaign_bound_60() {
    let (rep, s) = report(&cfg("ThirdMain", 60));
    assert_eq!(s.exit_code, 0);
    assert!(s.records > 5);
    for line in rep.lines().take(s.records) {
        let v: Value = serde_json::from_str(line).unwrap();
        let orders = v["predicted"]["orders"].as_array().unwrap();
        let want = |n: &str| orders.iter().find(|o| o["invariant"] == n).map(|o| o["values"][0].as_u64().unwrap());
        if v["predicted"]["statement_id"] == "ThirdMain-1" {
            assert_eq!(v["oracle"]["q(K1)"].as_u64(), Some(32));
            assert_eq!(v["oracle"]["h2(K)"].as_u64(), want("h2(K_nu)"));
        }
        assert_eq!(v["agree"], true);
    }
}

#[test]
fn item1_campaign_is_rank_stable() {
    let mut c = cfg("Thm1-item1", 80);
    c.parallelism = 2;
    let (records, s) = run_campaign(&c, &Memo::default()).unwrap();
    assert_eq!(s.exit_code, 0);
    assert!(records.len() > 50);
    for r in &records {
        assert!(r.checks.iter().any(|c| c.name == "rank stable from layer 0" && c.ok));
        assert_eq!(r.oracle["rank_A(K)"], 1);
    }
}

/// Failures of the literal check all come from K1/K unramified; they
/// reproduce when the tuple is run on its own.
#[test]
fn trivial_campaign_disagreements_are_unramified() {
    let c = cfg("TrivialIwasawa", 30);
    let memo = Memo::default();
    let (records, s) = run_campaign(&c, &memo).unwrap();
    assert!(s.records > 50);
    let fam = Family::parse("TrivialIwasawa").unwrap();
    for r in &records {
        if r.predicted.as_ref().unwrap().id() == "LemmaCaseE" {
            assert!(r.agree);
            continue;
        }
        assert_eq!(r.oracle["h2(K1)"], 1);
        assert_eq!(!r.agree, r.oracle["K1/K unramified"] == true, "{:?}", r.tuple);
        if !r.agree {
            let again = verify_one(&fam, &r.tuple, &memo).unwrap();
            assert_eq!((again.agree, &again.checks), (false, &r.checks));
        }
    }
    assert_eq!(s.exit_code, if s.disagree > 0 { 1 } else { 0 });
}

#[test]
fn resource_bound_gives_exit_3() {
    let mut c = cfg("ThirdMain-nu1", 40);
    c.disc_bound = 1000;
    let (records, s) = run_campaign(&c, &Memo::new(c.disc_bound)).unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r.resource && !r.agree && r.error.is_some()));
    assert_eq!((s.resource, s.disagree, s.exit_code), (records.len(), 0, 3));
}

#[test]
fn reports_are_deterministic() {
    let mut a = cfg("Thm1", 40);
    let (r1, _) = report(&a);
    a.parallelism = 4;
    let (r2, _) = report(&a);
    assert_eq!(r1, r2);
    let summary: Value = serde_json::from_str(r1.lines().last().unwrap()).unwrap();
    assert_eq!(summary["summary"]["family"], "Thm1");
}

#[test]
fn cache_round_trip_and_reopen() {
    let dir = tempfile::tempdir().unwrap();
    let cache = DiskCache::open(dir.path(), 1 << 30).unwrap();
    assert!(cache.get(399).is_none());
    let memo = Memo::default();
    let c = cache.class_data(399).unwrap();
    assert_eq!((c.h, c.h_narrow, c.h2), (8, 16, 8));
    let r = cache.get(399).unwrap();
    assert_eq!(r.unit.value, memo.unit(399).unwrap().value);
    assert_eq!(CacheRecord::parse(&r.to_line()).as_ref(), Some(&*r));
    let line = r.to_line();
    assert!(line.contains("\"eps\":[20,1,1]"), "{line}");

    for m in [2, 5, 13, 94, 151, 1155] {
        cache.unit(m).unwrap();
        cache.class_data(m).unwrap();
    }
    drop(cache);
    let again = DiskCache::open(dir.path(), 1 << 30).unwrap();
    for m in [2, 5, 13, 94, 151, 399, 1155] {
        let c = again.get(m).unwrap();
        assert_eq!(c.unit.value, memo.unit(m).unwrap().value, "m = {m}");
        let cd = memo.class_data(m).unwrap();
        assert_eq!(c.class, Some((cd.h, cd.h_narrow, cd.h2)));
    }
}

#[test]
fn cache_put_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = DiskCache::open(dir.path(), 1 << 30).unwrap();
    cache.class_data(79).unwrap();
    let lines = || fs::read_to_string(dir.path().join(CACHE_FILE)).unwrap().lines().count();
    let n = lines();
    let r = (*cache.get(79).unwrap()).clone();
    cache.put(r.clone()).unwrap();
    cache.put(r).unwrap();
    assert_eq!(lines(), n);
}

#[test]
fn cache_tolerates_torn_line_and_version_bump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(CACHE_FILE);
    {
        let cache = DiskCache::open(dir.path(), 1 << 30).unwrap();
        cache.class_data(399).unwrap();
        cache.class_data(82).unwrap();
    }
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{\"v\":1,\"m\":229,\"h\":3,\"h_na");
    fs::write(&path, &text).unwrap();
    let cache = DiskCache::open(dir.path(), 1 << 30).unwrap();
    assert!(cache.get(229).is_none());
    assert!(cache.get(82).is_some());
    cache.class_data(229).unwrap();
    drop(cache);
    let cache = DiskCache::open(dir.path(), 1 << 30).unwrap();
    assert_eq!(cache.get(229).unwrap().class, Some((3, 3, 1)));
    drop(cache);

    // a record whose unit has the wrong norm is ignored
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{\"v\":1,\"m\":7,\"eps\":[8,3,1],\"norm\":-1}\n");
    fs::write(&path, &text).unwrap();
    assert!(DiskCache::open(dir.path(), 1 << 30).unwrap().get(7).is_none());

    let bumped = text.replacen("{\"kind\":\"biquad-quad-cache\",\"v\":1}", "{\"kind\":\"biquad-quad-cache\",\"v\":2}", 1);
    assert_ne!(bumped, text);
    fs::write(&path, bumped).unwrap();
    let cache = DiskCache::open(dir.path(), 1 << 30).unwrap();
    assert!(cache.is_empty());
}

#[test]
fn cache_reads_during_writes_are_never_torn() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Arc::new(DiskCache::open(dir.path(), 1 << 30).unwrap());
    let expected = Memo::default();
    let ms: Vec<i64> = (2..400).filter(|&m| biquad_iwasawa::arith::is_squarefree(m)).collect();
    std::thread::scope(|s| {
        let writer = cache.clone();
        let ms2 = ms.clone();
        s.spawn(move || {
            for m in ms2 {
                writer.class_data(m).unwrap();
            }
        });
        for _ in 0..3 {
            let reader = cache.clone();
            let ms = ms.clone();
            let expected = &expected;
            s.spawn(move || {
                for _ in 0..20 {
                    for &m in &ms {
                        if let Some(r) = reader.get(m) {
                            assert_eq!(r.unit.value, expected.unit(m).unwrap().value);
                        }
                    }
                }
            });
        }
    });
    assert_eq!(cache.len(), ms.len());
}

#[test]
fn cached_campaign_matches_memo() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg("ThirdMain-nu2", 60);
    let cache = DiskCache::open(dir.path(), c.disc_bound).unwrap();
    let (a, _) = run_campaign(&c, &cache).unwrap();
    let (b, _) = run_campaign(&c, &Memo::new(c.disc_bound)).unwrap();
    let strip = |v: &[VerificationRecord]| {
        let mut out = Vec::new();
        write_report(&mut out, v, &Summary::default(), false).unwrap();
        out
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(!cache.is_empty());
}
