//! Verification campaigns: classifier prediction against the oracles, one
//! record per tuple, written as JSON lines in enumeration order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use biquad_iwasawa::arith::is_perfect_square;
use biquad_iwasawa::classify::*;
use biquad_iwasawa::error::ClassifyError;
use biquad_iwasawa::local::ambiguous_rank;
use biquad_iwasawa::multiquad::{first_layer, MultiQuadField};
use biquad_iwasawa::quad::QuadField;
use biquad_iwasawa::units::{kuroda_h2, KurodaValue, QuadSource};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::family::{enumerate_tuples, id_matches, Family};
use crate::{HarnessError, SweepConfig};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationRecord {
    pub family: String,
    pub tuple: FamilyInput,
    pub predicted: Option<Classification>,
    pub oracle: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    /// all checks hold and no error occurred
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// the error was a disc, step or precision bound
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub resource: bool,
    pub timings: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub family: String,
    pub enumerated: usize,
    /// tuples the classifier did not match, dropped from the report
    pub unmatched: usize,
    pub records: usize,
    pub agree: usize,
    pub disagree: usize,
    pub errors: usize,
    pub resource: usize,
    /// records whose classification carries findings
    pub with_findings: usize,
    pub exit_code: i32,
}

struct Ctx<'a> {
    src: &'a dyn QuadSource,
    oracle: BTreeMap<String, Value>,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.push(Check { name: name.to_string(), ok });
    }

    fn put(&mut self, key: &str, v: impl Serialize) {
        self.oracle.insert(key.to_string(), json!(v));
    }

    fn kuroda(&mut self, name: &str, gens: &[i64]) -> Result<KurodaValue, ClassifyError> {
        let f = MultiQuadField::new(gens)?;
        let k = kuroda_h2(&f, self.src)?;
        self.put(&format!("h2({name})"), k.h2);
        self.put(&format!("q({name})"), k.q_index);
        Ok(k)
    }

    fn layers(&mut self, gens: [i64; 2]) -> Result<(KurodaValue, KurodaValue), ClassifyError> {
        let k0 = self.kuroda("K", &gens)?;
        let l1 = first_layer(&MultiQuadField::new(&gens)?)?;
        let k1 = self.kuroda("K1", l1.gens())?;
        let st = fukuda_stable(&[LayerValue::H2 { layer: 0, h2: k0.h2 }, LayerValue::H2 { layer: 1, h2: k1.h2 }])?;
        self.put("fukuda_h2", format!("{st:?}"));
        Ok((k0, k1))
    }

    fn ambiguous(&mut self, x: &Q1Q2Input) -> Result<u32, ClassifyError> {
        let cert = ambiguous_rank(&QuadField::new(x.m())?, x.radicand(), self.src)?;
        self.put("rank_A(K)", cert.rank);
        self.put("t", cert.t);
        self.put("e", cert.e);
        Ok(cert.rank)
    }
}

fn q1q2_of(k: &FamilyInput) -> Result<&Q1Q2Input, ClassifyError> {
    match k {
        FamilyInput::Q1Q2(x) => Ok(x),
        other => Err(ClassifyError::Malformed(format!("expected a q1q2 tuple, got {other:?}"))),
    }
}

/// `K1/K` unramified at 2: the subfields unramified at 2 form a subgroup of
/// index `e_2`, so the ramification indices agree iff the count doubles.
fn first_layer_unramified(k: &FamilyInput) -> bool {
    let sf = k.subfields();
    let u0 = sf.iter().filter(|m| m.rem_euclid(4) == 1).count();
    let twisted = sf.iter().map(|&m| if m % 2 == 0 { m / 2 } else { 2 * m });
    let u1 = u0 + twisted.filter(|m| m.rem_euclid(4) == 1).count();
    u1 + 1 == 2 * (u0 + 1)
}

fn first_main(k: &FamilyInput, c: &Classification, cx: &mut Ctx) -> Result<(), ClassifyError> {
    let r = c.predicted_rank_a.as_ref().and_then(|p| p.exact()).unwrap_or(u32::MAX);
    let (k0, k1) = cx.layers(k.gens())?;
    if let FamilyInput::Q1Q2(x) = k {
        let orc = cx.ambiguous(x)?;
        let l1 = rank_k1(k)?;
        let r1 = l1.predicted_rank_a.as_ref().and_then(|p| p.exact());
        cx.put("rank_A(K1) by LemmaK1", (l1.id(), r1));
        cx.check("rank A(K) = ambiguous class rank", orc == r);
        cx.check("2^rank divides h2(K)", r < 64 && k0.h2 % (1 << r) == 0);
        cx.check("h2(K) = 1 iff rank 0", (k0.h2 == 1) == (r == 0));
        cx.check("2^rank divides h2(K1)", r < 64 && k1.h2 % (1 << r) == 0);
        let st = r1.map(|r1| fukuda_stable(&[LayerValue::Rank { layer: 0, rank: orc }, LayerValue::Rank { layer: 1, rank: r1 }]));
        cx.check("rank stable from layer 0", matches!(st, Some(Ok(Stability::RankStableFrom(0)))));
    } else {
        cx.put("K1/K unramified", first_layer_unramified(k));
        cx.check("h2(K) = 1", k0.h2 == 1);
        cx.check("h2(K1) = 1", k1.h2 == 1);
    }
    Ok(())
}

fn rank3(k: &FamilyInput, c: &Classification, cx: &mut Ctx) -> Result<(), ClassifyError> {
    let orc = cx.ambiguous(q1q2_of(k)?)?;
    let p = c.predicted_rank_a.clone().unwrap_or(RankPrediction::OneOf(vec![]));
    cx.check("rank A(K) admitted", p.admits(orc));
    let (k0, k1) = cx.layers(k.gens())?;
    cx.check("8 divides h2(K)", k0.h2 % 8 == 0);
    if c.predicted_rank_ainf.is_some() {
        cx.check("8 divides h2(K1)", k1.h2 % 8 == 0);
    }
    Ok(())
}

fn rank_bounds(k: &FamilyInput, c: &Classification, cx: &mut Ctx) -> Result<(), ClassifyError> {
    let orc = cx.ambiguous(q1q2_of(k)?)?;
    let p = c.predicted_rank_a.clone().unwrap_or(RankPrediction::OneOf(vec![]));
    cx.check("rank A(K) admitted", p.admits(orc));
    Ok(())
}

fn third_main(k: &FamilyInput, c: &Classification, cx: &mut Ctx) -> Result<(), ClassifyError> {
    let FamilyInput::ThirdMain { q, r, s, nu } = *k else { return Err(ClassifyError::Malformed("not a ThirdMain tuple".into())) };
    let (q, r, s, nu) = (q as i64, r as i64, s as i64, nu as i64);
    let (k0, k1) = cx.layers(k.gens())?;
    let f1 = cx.kuroda("F_nu1", &[q * r * s, 2])?;
    let prod = cx.src.class_data(q * r * s)?.h2 * cx.src.class_data(2 * q * r * s)?.h2;
    let h2rs = cx.src.class_data(2 * r * s)?.h2;
    cx.put("h2(qrs)h2(2qrs)", prod);
    cx.put("h2(2rs)", h2rs);
    let mut observed: BTreeMap<&str, u64> = BTreeMap::new();
    observed.insert("h2(K_nu)", k0.h2);
    observed.insert("q(K_nu)", k0.q_index);
    observed.insert("h2(K_nu1)", k1.h2);
    observed.insert("q(K_nu1)", k1.q_index);
    observed.insert("h2(F_nu1)", f1.h2);
    observed.insert("q(F_nu1)", f1.q_index);
    observed.insert("h2(qrs)h2(2qrs)", prod);
    observed.insert("h2(2rs)", h2rs);
    observed.insert("h2(K'_nu)", cx.kuroda("K'_nu", &[nu * r, q * s])?.h2);
    observed.insert("h2(K''_nu)", cx.kuroda("K''_nu", &[nu * s, q * r])?.h2);
    let mut unchecked = Vec::new();
    for o in &c.orders {
        match observed.get(o.invariant.as_str()) {
            Some(&v) => cx.check(&o.invariant, o.values.contains(&v) && o.divisible_by.is_none_or(|d| v % d == 0)),
            None => unchecked.push(o.invariant.clone()),
        }
    }
    cx.put("unchecked", unchecked);
    if c.id() == "ThirdMain-1" {
        let h = cx.src.class_data(nu * q * r * s)?.h2;
        cx.check("h2(qrs)h2(2qrs) = 4 h2(nu qrs)", prod == 4 * h);
        cx.check(
            "fukuda fires at layer 0",
            fukuda_stable(&[LayerValue::H2 { layer: 0, h2: k0.h2 }, LayerValue::H2 { layer: 1, h2: k1.h2 }])?
                == Stability::H2StableFrom(0),
        );
    }
    Ok(())
}

fn lemgen(k: &FamilyInput, cx: &mut Ctx) -> Result<Classification, ClassifyError> {
    let FamilyInput::ThirdMain { q, r, s, nu } = *k else { return Err(ClassifyError::Malformed("not a ThirdMain tuple".into())) };
    let lg = lemgen_case(q, r, s, nu, cx.src)?;
    // recomputed from the unit, independently of lemgen_case
    let u = cx.src.unit((nu * q * r * s) as i64)?;
    let (a, b) = (&u.value.a, &u.value.b);
    let (pw1, pw2, pm) = if nu == 1 { (2u64, 1u64, -1i64) } else { (1, 2, 1) };
    let ints = [
        BigInt::from(pw1 * r) * (a + pm),
        BigInt::from(pw2 * q) * (a - 1),
        BigInt::from(pw2 * s) * (a + pm),
    ];
    let squares = ints.iter().filter(|n| is_perfect_square(n).is_some()).count();
    cx.put("eps", [a.to_string(), b.to_string()]);
    cx.put("squares", squares);
    cx.check("exactly one integer is a square", squares == 1);
    cx.check("integers agree", ints == lg.integers);
    cx.check("witness squared is the square", {
        let i = lg.case as usize;
        &lg.witness * &lg.witness == ints[i]
    });
    let e = &lg.expansion;
    let (sa, sb) = (BigInt::from(e.sqrt_of[0]), BigInt::from(e.sqrt_of[1]));
    let kappa = BigInt::from(e.kappa);
    cx.check("rational part of the square", &e.b1 * &e.b1 * &sa + &e.b2 * &e.b2 * &sb == &kappa * a);
    cx.check("irrational part of the square", BigInt::from(2) * &e.b1 * &e.b2 == &kappa * b);
    cx.check("sqrt_of multiplies to the radicand", e.sqrt_of[0] * e.sqrt_of[1] == nu * q * r * s);
    cx.check("no findings", lg.findings.is_empty());
    let mut c = Classification::empty();
    c.statement_id = Some(format!("Lemgen-{:?}", lg.case));
    c.trace = lg.trace;
    c.findings = lg.findings;
    Ok(c)
}

fn trivial(k: &FamilyInput, c: &Classification, cx: &mut Ctx) -> Result<(), ClassifyError> {
    let (k0, k1) = cx.layers(k.gens())?;
    cx.put("K1/K unramified", first_layer_unramified(k));
    if c.id() == "LemmaCaseE" {
        cx.check("h2(K1) even", k1.h2 % 2 == 0);
    } else {
        cx.check("h2(K) = 1", k0.h2 == 1);
        cx.check("h2(K1) = 1", k1.h2 == 1);
    }
    Ok(())
}

fn classify(fam: &Family, k: &FamilyInput, cx: &mut Ctx) -> Result<Option<Classification>, ClassifyError> {
    let c = match fam {
        Family::FirstMain { .. } => classify_first_main(k, cx.src)?,
        Family::Rank3 => rank3_families(k)?,
        Family::RankBounds => rank_bounds_form_d(k)?,
        Family::ThirdMain { .. } => {
            let FamilyInput::ThirdMain { q, r, s, nu } = *k else { return Ok(None) };
            third_main_predict(q, r, s, nu, cx.src)?
        }
        Family::Lemgen { .. } => return lemgen(k, cx).map(Some),
        Family::Trivial { part } => {
            let c = classify_trivial_iwasawa(k, cx.src)?;
            let keep = match part {
                Some(p) => id_matches(c.id(), p),
                None => c.predicted_trivial == Some(true) || c.id() == "LemmaCaseE",
            };
            if !keep {
                return Ok(None);
            }
            c
        }
    };
    if let Family::FirstMain { item: Some(i) } = fam {
        if !id_matches(c.id(), &format!("Thm1-item{i}")) {
            return Ok(None);
        }
    }
    Ok(c.matched().then_some(c))
}

/// The family's classifier alone, without oracles. `None` on a no-match.
pub fn classify_tuple(fam: &Family, k: &FamilyInput, src: &dyn QuadSource) -> Result<Option<Classification>, ClassifyError> {
    let mut cx = Ctx { src, oracle: BTreeMap::new(), checks: Vec::new() };
    classify(fam, k, &mut cx)
}

/// Classifies and checks one tuple. `None` when the classifier does not
/// match it. Errors become a record with `agree = false`.
pub fn verify_one(fam: &Family, k: &FamilyInput, src: &dyn QuadSource) -> Option<VerificationRecord> {
    let t = Instant::now();
    let mut cx = Ctx { src, oracle: BTreeMap::new(), checks: Vec::new() };
    let res = classify(fam, k, &mut cx).and_then(|c| {
        let Some(c) = c else { return Ok(None) };
        match fam {
            Family::FirstMain { .. } => first_main(k, &c, &mut cx)?,
            Family::Rank3 => rank3(k, &c, &mut cx)?,
            Family::RankBounds => rank_bounds(k, &c, &mut cx)?,
            Family::ThirdMain { .. } => third_main(k, &c, &mut cx)?,
            Family::Lemgen { .. } => {}
            Family::Trivial { .. } => trivial(k, &c, &mut cx)?,
        }
        Ok(Some(c))
    });
    let (predicted, error, resource) = match res {
        Ok(None) => return None,
        Ok(Some(c)) => (Some(c), None, false),
        Err(e) => (None, Some(e.to_string()), e.is_resource()),
    };
    let agree = error.is_none() && cx.checks.iter().all(|c| c.ok);
    let mut timings = BTreeMap::new();
    timings.insert("total_ms".to_string(), t.elapsed().as_secs_f64() * 1e3);
    Some(VerificationRecord {
        family: fam.name(),
        tuple: k.clone(),
        predicted,
        oracle: cx.oracle,
        checks: cx.checks,
        agree,
        error,
        resource,
        timings,
    })
}

/// Runs the campaign in memory: enumeration, then the tuples in parallel,
/// results kept in enumeration order.
pub fn run_campaign(cfg: &SweepConfig, src: &dyn QuadSource) -> Result<(Vec<VerificationRecord>, Summary), HarnessError> {
    let fam = cfg.validate()?;
    let tuples: Vec<FamilyInput> = enumerate_tuples(cfg)?.collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let out: Vec<Option<VerificationRecord>> = pool.install(|| tuples.par_iter().map(|k| verify_one(&fam, k, src)).collect());
    let records: Vec<VerificationRecord> = out.into_iter().flatten().collect();
    let mut s = Summary {
        family: fam.name(),
        enumerated: tuples.len(),
        unmatched: tuples.len() - records.len(),
        records: records.len(),
        ..Summary::default()
    };
    for r in &records {
        if r.agree {
            s.agree += 1;
        } else if r.resource {
            s.resource += 1;
        } else {
            s.disagree += 1;
        }
        if r.error.is_some() {
            s.errors += 1;
        }
        if r.predicted.as_ref().is_some_and(|c| !c.findings.is_empty()) {
            s.with_findings += 1;
        }
    }
    s.exit_code = if s.disagree > 0 {
        1
    } else if s.resource > 0 {
        3
    } else {
        0
    };
    Ok((records, s))
}

/// One JSON line per record, then `{"summary": ...}`. Timings are left out
/// when `timings` is false, which makes reports byte-identical across runs.
pub fn write_report(w: &mut dyn Write, records: &[VerificationRecord], s: &Summary, timings: bool) -> Result<(), HarnessError> {
    for r in records {
        let mut v = serde_json::to_value(r)?;
        if !timings {
            v.as_object_mut().map(|o| o.remove("timings"));
        }
        writeln!(w, "{v}")?;
    }
    writeln!(w, "{}", json!({ "summary": s }))?;
    Ok(())
}

/// [`run_campaign`] plus the report at `out_path` (stdout when unset).
pub fn verify_campaign(cfg: &SweepConfig, src: &dyn QuadSource, timings: bool) -> Result<Summary, HarnessError> {
    let (records, s) = run_campaign(cfg, src)?;
    match &cfg.out_path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write_report(&mut w, &records, &s, timings)?;
            w.flush()?;
        }
        None => write_report(&mut std::io::stdout().lock(), &records, &s, timings)?,
    }
    Ok(s)
}
