//! Families of tuples and their deterministic enumeration.

use std::sync::Arc;

use biquad_iwasawa::arith::{legendre, primes_below, quartic_symbol};
use biquad_iwasawa::classify::{classify_first_main, rank3_families, FamilyInput, Q1Q2Input};
use biquad_iwasawa::units::Memo;
use itertools::Itertools;

use crate::{HarnessError, SweepConfig};

/// In the second main theorem sweep q1 and q2 range over this many of the
/// smallest odd primes; every other prime runs up to the bound.
pub const TRIVIAL_Q_PRIMES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// items 1 to 12 of the first main theorem, or one item
    FirstMain { item: Option<u8> },
    /// rank 3 shapes and families
    Rank3,
    /// the layer-0 rank lemmas for forms D and E
    RankBounds,
    ThirdMain { nu: Option<u64> },
    Lemgen { nu: Option<u64> },
    /// second main theorem and the form E lemma; `part` is an id prefix
    Trivial { part: Option<String> },
}

pub type TupleStream = Box<dyn Iterator<Item = FamilyInput> + Send>;

/// `id` is `prefix` or one of its clauses.
pub fn id_matches(id: &str, prefix: &str) -> bool {
    id == prefix || id.strip_prefix(prefix).is_some_and(|r| r.starts_with('-'))
}

impl Family {
    pub fn parse(s: &str) -> Result<Family, HarnessError> {
        let nu = |t: &str| match t {
            "" => Ok(None),
            "-nu1" => Ok(Some(1)),
            "-nu2" => Ok(Some(2)),
            _ => Err(HarnessError::Config(format!("unknown family {s}"))),
        };
        if s == "Thm1" {
            return Ok(Family::FirstMain { item: None });
        }
        if let Some(n) = s.strip_prefix("Thm1-item") {
            return match n.parse::<u8>() {
                Ok(k @ 1..=12) => Ok(Family::FirstMain { item: Some(k) }),
                _ => Err(HarnessError::Config(format!("no item {n} in the first main theorem"))),
            };
        }
        if let Some(t) = s.strip_prefix("ThirdMain") {
            return Ok(Family::ThirdMain { nu: nu(t)? });
        }
        if let Some(t) = s.strip_prefix("Lemgen") {
            return Ok(Family::Lemgen { nu: nu(t)? });
        }
        match s {
            "Rank3" => Ok(Family::Rank3),
            "RankBounds" => Ok(Family::RankBounds),
            "TrivialIwasawa" | "SecondMain" => Ok(Family::Trivial { part: None }),
            "SecondMain-1" | "SecondMain-2" | "SecondMain-3" | "LemmaCaseE" => {
                Ok(Family::Trivial { part: Some(s.to_string()) })
            }
            _ => Err(HarnessError::Config(format!("unknown family {s}"))),
        }
    }

    pub fn name(&self) -> String {
        let nu = |n: &Option<u64>| n.map_or(String::new(), |k| format!("-nu{k}"));
        match self {
            Family::FirstMain { item: None } => "Thm1".into(),
            Family::FirstMain { item: Some(k) } => format!("Thm1-item{k}"),
            Family::Rank3 => "Rank3".into(),
            Family::RankBounds => "RankBounds".into(),
            Family::ThirdMain { nu: n } => format!("ThirdMain{}", nu(n)),
            Family::Lemgen { nu: n } => format!("Lemgen{}", nu(n)),
            Family::Trivial { part: None } => "TrivialIwasawa".into(),
            Family::Trivial { part: Some(p) } => p.clone(),
        }
    }
}

fn odd_primes(bound: u64) -> Arc<Vec<u64>> {
    Arc::new(primes_below(bound).into_iter().filter(|&p| p > 2).collect())
}

/// `Q(sqrt(q1 q2), sqrt(eta d))` with `n` primes in d, ordered by
/// (q1, q2, primes, delta).
fn q1q2_shape(ps: Arc<Vec<u64>>, q1_mod8: &'static [u64], n: usize, two: bool) -> TupleStream {
    let q1s: Vec<u64> = ps.iter().copied().filter(|p| q1_mod8.contains(&(p % 8))).collect();
    Box::new(q1s.into_iter().flat_map(move |q1| {
        let ps = ps.clone();
        let q2s: Vec<u64> = ps.iter().copied().filter(|&p| p % 8 == 3 && p != q1).collect();
        q2s.into_iter().flat_map(move |q2| {
            let rest: Vec<u64> = ps.iter().copied().filter(|&p| p != q1 && p != q2).collect();
            rest.into_iter().combinations(n).flat_map(move |set| {
                [1, q1, q2]
                    .into_iter()
                    .filter_map(move |delta| Q1Q2Input::new(q1, q2, delta, set.clone(), two).ok())
                    .map(FamilyInput::Q1Q2)
            })
        })
    }))
}

fn pq1q2_shape(ps: Arc<Vec<u64>>) -> TupleStream {
    let v: Vec<FamilyInput> = ps
        .iter()
        .flat_map(|&p| pairs(&ps).into_iter().map(move |(q1, q2)| FamilyInput::PQ1Q2 { p, q1, q2 }))
        .filter(|k| k.validate().is_ok())
        .collect();
    Box::new(v.into_iter())
}

fn pairs(ps: &[u64]) -> Vec<(u64, u64)> {
    ps.iter().flat_map(|&a| ps.iter().map(move |&b| (a, b))).collect()
}

fn pd_shape(ps: Arc<Vec<u64>>) -> TupleStream {
    Box::new(
        pairs(&ps)
            .into_iter()
            .map(|(p, d)| FamilyInput::PD { p, d })
            .filter(|k| k.validate().is_ok()),
    )
}

fn pp_shape(ps: Arc<Vec<u64>>) -> TupleStream {
    Box::new(
        pairs(&ps)
            .into_iter()
            .filter(|(a, b)| a < b)
            .map(|(p1, p2)| FamilyInput::PP { p1, p2 })
            .filter(|k| k.validate().is_ok()),
    )
}

/// The symbol part of item 12: `(p/d) = -1` or differing quartic symbols.
fn item12_symbols(k: &FamilyInput) -> bool {
    let FamilyInput::PP { p1, p2 } = *k else { return false };
    if legendre(p1 as i64, p2) == -1 {
        return true;
    }
    match (quartic_symbol(p1 as i64, p2), quartic_symbol(p2 as i64, p1)) {
        (Ok(a), Ok(b)) => a != b,
        _ => false,
    }
}

/// Hypotheses of the third main theorem, in (q, r, s, nu) order.
fn third_main_tuples(ps: Arc<Vec<u64>>, nu: Option<u64>) -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    let three: Vec<u64> = ps.iter().copied().filter(|p| p % 8 == 3).collect();
    for &q in ps.iter().filter(|p| *p % 8 == 7) {
        for &r in &three {
            for &s in &three {
                for n in [1u64, 2] {
                    if r == s || nu.is_some_and(|k| k != n) {
                        continue;
                    }
                    let sign = if n == 2 { -1 } else { 1 };
                    if legendre(q as i64, s) == sign && legendre(q as i64, r) == sign && legendre(s as i64, r) == 1 {
                        out.push((q, r, s, n));
                    }
                }
            }
        }
    }
    out
}

fn first_main_item(ps: &Arc<Vec<u64>>, item: u8) -> TupleStream {
    let prefix = format!("Thm1-item{item}");
    let shape = match item {
        1 | 2 => q1q2_shape(ps.clone(), &[7], 1, false),
        3 | 4 => q1q2_shape(ps.clone(), &[7], 2, false),
        5 | 6 => q1q2_shape(ps.clone(), &[7], 1, true),
        7..=9 => q1q2_shape(ps.clone(), &[7], 2, true),
        10 => pq1q2_shape(ps.clone()),
        11 => pd_shape(ps.clone()),
        _ => return Box::new(pp_shape(ps.clone()).filter(item12_symbols)),
    };
    // only symbols are consulted here, so no class numbers are computed
    let memo = Memo::default();
    Box::new(shape.filter(move |k| classify_first_main(k, &memo).is_ok_and(|c| id_matches(c.id(), &prefix))))
}

fn trivial_inputs(ps: Arc<Vec<u64>>) -> TupleStream {
    let small: Vec<u64> = ps.iter().copied().take(TRIVIAL_Q_PRIMES).collect();
    let mut v = Vec::new();
    for &q in ps.iter() {
        for &r in ps.iter() {
            for eta1 in [1, 2] {
                for eta2 in [1, 2] {
                    v.push(FamilyInput::EtaQR { eta1, eta2, q, r });
                }
            }
        }
    }
    for &q1 in &small {
        for &q2 in &small {
            for &r in ps.iter() {
                for delta in [1, q1, q2] {
                    for eta1 in [1, 2] {
                        for eta2 in [1, 2] {
                            v.push(FamilyInput::EtaQ1Q2R { eta1, eta2, q1, q2, delta, r });
                        }
                    }
                }
            }
        }
    }
    for (p1, p2) in pairs(&ps) {
        if p1 < p2 {
            v.push(FamilyInput::PP { p1, p2 });
        }
    }
    for &q1 in &small {
        for &q2 in &small {
            for &r in ps.iter() {
                for two in [false, true] {
                    if let Ok(x) = Q1Q2Input::resolve(q1, q2, vec![r], two) {
                        if x.form() == 'E' {
                            v.push(FamilyInput::Q1Q2(x));
                        }
                    }
                }
            }
        }
    }
    Box::new(v.into_iter().filter(|k| k.validate().is_ok()))
}

/// Every tuple below the prime bound meeting the congruence and symbol
/// conditions of the family, capped at `tuple_cap`. Conditions that need
/// class numbers (item 12, the second main theorem) are left to the
/// campaign, which drops tuples the classifier does not match.
pub fn enumerate_tuples(cfg: &SweepConfig) -> Result<TupleStream, HarnessError> {
    let fam = cfg.validate()?;
    let ps = odd_primes(cfg.prime_bound);
    let s: TupleStream = match fam {
        Family::FirstMain { item: Some(k) } => first_main_item(&ps, k),
        Family::FirstMain { item: None } => {
            let ps = ps.clone();
            Box::new((1..=12).flat_map(move |k| first_main_item(&ps, k)))
        }
        Family::Rank3 => {
            let shapes = q1q2_shape(ps.clone(), &[7], 2, false).chain(q1q2_shape(ps.clone(), &[7], 3, false));
            Box::new(shapes.filter(|k| rank3_families(k).is_ok_and(|c| c.matched())))
        }
        Family::RankBounds => Box::new(
            q1q2_shape(ps.clone(), &[3, 7], 1, false)
                .chain(q1q2_shape(ps.clone(), &[3, 7], 1, true))
                .chain(q1q2_shape(ps.clone(), &[3, 7], 2, false))
                .chain(q1q2_shape(ps.clone(), &[3, 7], 2, true)),
        ),
        Family::ThirdMain { nu } | Family::Lemgen { nu } => Box::new(
            third_main_tuples(ps, nu)
                .into_iter()
                .map(|(q, r, s, nu)| FamilyInput::ThirdMain { q, r, s, nu }),
        ),
        Family::Trivial { .. } => trivial_inputs(ps),
    };
    Ok(Box::new(s.take(cfg.tuple_cap)))
}
