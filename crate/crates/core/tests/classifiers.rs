use biquad_iwasawa::arith::{legendre, primes_below, quartic_symbol};
use biquad_iwasawa::classify::*;
use biquad_iwasawa::error::ClassifyError;
use biquad_iwasawa::local::ambiguous_rank;
use biquad_iwasawa::multiquad::{first_layer, MultiQuadField};
use biquad_iwasawa::quad::QuadField;
use biquad_iwasawa::units::{kuroda_h2, Memo};
use num_bigint::BigInt;

fn q1q2(q1: u64, q2: u64, delta: u64, primes: &[u64], two: bool) -> FamilyInput {
    FamilyInput::Q1Q2(Q1Q2Input::new(q1, q2, delta, primes.to_vec(), two).unwrap())
}

fn resolved(q1: u64, q2: u64, primes: &[u64], two: bool) -> FamilyInput {
    FamilyInput::Q1Q2(Q1Q2Input::resolve(q1, q2, primes.to_vec(), two).unwrap())
}

fn oracle(k: &FamilyInput, memo: &Memo) -> u32 {
    let FamilyInput::Q1Q2(x) = k else { panic!("not a q1q2 input") };
    ambiguous_rank(&QuadField::new(x.m()).unwrap(), x.radicand(), memo).unwrap().rank
}

fn h2_layers(gens: [i64; 2], memo: &Memo) -> (u64, u64) {
    let f = MultiQuadField::new(&gens).unwrap();
    let h0 = kuroda_h2(&f, memo).unwrap().h2;
    let h1 = kuroda_h2(&first_layer(&f).unwrap(), memo).unwrap().h2;
    (h0, h1)
}

/// All form D / E q1q2 inputs with `n` primes in d below `bound`, using the
/// first two admissible q1 and q2.
fn inputs(bound: u64, n: usize, q1_mod8: u64) -> Vec<FamilyInput> {
    let ps: Vec<u64> = primes_below(bound).into_iter().filter(|&p| p > 2).collect();
    let q1s: Vec<u64> = ps.iter().copied().filter(|p| p % 8 == q1_mod8).take(2).collect();
    let q2s: Vec<u64> = ps.iter().copied().filter(|p| p % 8 == 3).take(2).collect();
    let mut out = Vec::new();
    for &q1 in &q1s {
        for &q2 in &q2s {
            if q1 == q2 {
                continue;
            }
            let rest: Vec<u64> = ps.iter().copied().filter(|&p| p != q1 && p != q2).collect();
            let mut sets: Vec<Vec<u64>> = Vec::new();
            for i in 0..rest.len() {
                if n == 1 {
                    sets.push(vec![rest[i]]);
                    continue;
                }
                for j in i + 1..rest.len() {
                    if n == 2 {
                        sets.push(vec![rest[i], rest[j]]);
                        continue;
                    }
                    for k in j + 1..rest.len() {
                        sets.push(vec![rest[i], rest[j], rest[k]]);
                    }
                }
            }
            for set in sets {
                for delta in [1, q1, q2] {
                    for two in [false, true] {
                        if let Ok(x) = Q1Q2Input::new(q1, q2, delta, set.clone(), two) {
                            out.push(FamilyInput::Q1Q2(x));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn first_main_examples() {
    let memo = Memo::default();
    let c = classify_first_main(&q1q2(7, 3, 1, &[11], false), &memo).unwrap();
    assert_eq!(c.id(), "Thm1-item1-C1");
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::Exact(1)));
    assert!(c.trace.iter().any(|e| e.instance == "(21/11)" && e.value == -1));

    assert_eq!(classify_first_main(&q1q2(7, 3, 1, &[11], true), &memo).unwrap().id(), "Thm1-item5-C1");
    // (21/13) = (21/11) = -1, 13 = 5 mod 8, (7/13) = -1
    let c = classify_first_main(&q1q2(7, 3, 1, &[11, 13], false), &memo).unwrap();
    assert_eq!(c.id(), "Thm1-item3-C1");
    assert_eq!(c.predicted_rank_ainf, Some(RankPrediction::Exact(2)));

    let c = classify_first_main(&FamilyInput::PQ1Q2 { p: 5, q1: 19, q2: 3 }, &memo).unwrap();
    assert_eq!(c.id(), "Thm1-item10-C1");
    assert_eq!(c.predicted_trivial, Some(true));
    let c = classify_first_main(&FamilyInput::PD { p: 5, d: 3 }, &memo).unwrap();
    assert_eq!(c.id(), "Thm1-item11");
    assert_eq!(c.predicted_structure, Some(Structure::Trivial));

    // same field given by its generators
    let c = classify_first_main(&FamilyInput::Field { gens: [21, 11] }, &memo).unwrap();
    assert_eq!(c.id(), "Thm1-item1-C1");
}

#[test]
fn first_main_rejects_form_e() {
    let memo = Memo::default();
    // 11 * 3 = 1 mod 8
    let k = resolved(11, 3, &[7], false);
    assert!(matches!(classify_first_main(&k, &memo), Err(ClassifyError::Hypothesis(_))));
}

#[test]
fn excluded_r_is_rejected() {
    // 17 = 1 mod 8 and (21/17) = 1
    assert!(matches!(Q1Q2Input::new(7, 3, 1, vec![17], false), Err(ClassifyError::ExcludedL { r: 17 })));
}

#[test]
fn remark_condition_examples() {
    // (21/37) = 1, 37 = 1 mod 4, (7/37) = 1; (21/11) = -1
    let (h, tr) = remark_conditions(7, 3, 37, 11, RemarkCondition::C1).unwrap();
    assert!(h);
    assert!(!tr.is_empty());
    assert!(!remark_conditions(7, 3, 11, 37, RemarkCondition::C1).unwrap().0);
    // (21/17) = 1, both 1 mod 4
    assert!(remark_conditions(7, 3, 37, 17, RemarkCondition::C2).unwrap().0);
    assert!(remark_conditions(7, 3, 37, 11, RemarkCondition::C3).unwrap().0);
    assert!(remark_conditions(5, 3, 37, 11, RemarkCondition::C1).is_err());
}

#[test]
fn rank_bound_examples() {
    let memo = Memo::default();
    let c = rank_bounds_form_d(&q1q2(7, 3, 1, &[11], false)).unwrap();
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::Exact(1)));
    assert!(c.findings.is_empty());

    // (21/43) = 1, (7/43) = (-1/43) = -1: rank 1, outside the listed conditions
    let k = q1q2(7, 3, 1, &[43], false);
    let c = rank_bounds_form_d(&k).unwrap();
    assert_eq!(c.id(), "LemmaD3mod4-1b-unlisted");
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::Exact(1)));
    assert_eq!(c.findings.len(), 1);
    assert_eq!(oracle(&k, &memo), 1);

    // three primes with every symbol -1
    let c = rank_bounds_form_d(&resolved(7, 3, &[11, 13, 19], false)).unwrap();
    assert!(c.predicted_rank_a.unwrap().admits(3));
}

#[test]
fn rank_k1_examples() {
    let c = rank_k1(&q1q2(7, 3, 1, &[11], false)).unwrap();
    assert_eq!(c.id(), "LemmaK1-1-rank1-b1");
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::Exact(1)));
    let c = rank_k1(&resolved(7, 3, &[13], false)).unwrap();
    assert_eq!(c.id(), "LemmaK1-1-rank1-b2");
    let c = rank_k1(&resolved(7, 3, &[37], false)).unwrap();
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::Exact(2)));
    let c = rank_k1(&q1q2(7, 3, 1, &[11, 13], false)).unwrap();
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::Exact(2)));
    let c = rank_k1(&resolved(7, 3, &[11, 13, 19], false)).unwrap();
    assert_eq!(c.predicted_rank_a, Some(RankPrediction::OneOf(vec![4, 5, 6])));
    assert!(matches!(rank_k1(&resolved(11, 3, &[7], false)), Err(ClassifyError::Hypothesis(_))));
}

#[test]
fn rank3_examples() {
    // (21/11) = -1; 37 = 5 mod 8, (21/37) = (7/37) = 1
    let c = rank3_families(&q1q2(7, 3, 1, &[11, 37], false)).unwrap();
    assert_eq!(c.id(), "Rank3Prop-2-b2");
    assert_eq!(c.predicted_rank_ainf, Some(RankPrediction::Exact(3)));
    assert!(c.findings.iter().any(|f| f == "also Rank3Lemma-item1"));
    // 43 = 67 = 3 mod 8, (21/.) = 1, (7/43) = (7/67) = -1
    let c = rank3_families(&resolved(7, 3, &[43, 67], false)).unwrap();
    assert_eq!(c.id(), "Rank3Prop-1-b1");
    let c = rank3_families(&resolved(7, 3, &[11, 13, 19], false)).unwrap();
    assert_eq!(c.id(), "Rank3Lemma-item5");
    assert_eq!(c.predicted_rank_ainf, None);
    assert!(!rank3_families(&q1q2(7, 3, 1, &[11, 13], false)).unwrap().matched());
}

#[test]
fn lemgen_and_third_main_example() {
    let memo = Memo::default();
    let lg = lemgen_case(7, 3, 19, 1, &memo).unwrap();
    assert_eq!(lg.a, BigInt::from(20));
    assert_eq!(lg.b, BigInt::from(1));
    assert_eq!(lg.integers, [BigInt::from(114), BigInt::from(133), BigInt::from(361)]);
    assert_eq!(lg.case, LemgenCase::C);
    assert_eq!(lg.witness, BigInt::from(19));
    assert!(lg.findings.is_empty());
    // sqrt(2 eps) = b1 sqrt(s) + b2 sqrt(qr)
    let e = &lg.expansion;
    assert_eq!((e.kappa, e.sqrt_of), (2, [19, 21]));
    assert_eq!(&e.b1 * &e.b1 * 19u32 + &e.b2 * &e.b2 * 21u32, BigInt::from(40));

    let c = third_main_predict(7, 3, 19, 1, &memo).unwrap();
    assert_eq!(c.id(), "ThirdMain-1");
    assert_eq!(c.predicted_structure, Some(Structure::TwoTimesCyclic { exp: 1 }));
    let get = |n: &str| c.orders.iter().find(|o| o.invariant == n).unwrap().values[0];
    assert_eq!((get("h2(K_nu)"), get("q(K_nu1)"), get("h2(F_nu1)")), (4, 32, 8));

    assert!(matches!(lemgen_case(7, 3, 11, 1, &memo), Err(ClassifyError::Hypothesis(_))));
    assert!(matches!(lemgen_case(7, 3, 19, 3, &memo), Err(ClassifyError::Malformed(_))));
}

#[test]
fn trivial_examples() {
    let memo = Memo::default();
    let c = classify_trivial_iwasawa(&FamilyInput::Field { gens: [3, 5] }, &memo).unwrap();
    assert_eq!(c.id(), "SecondMain-1-C1");
    assert_eq!(c.predicted_trivial, Some(true));

    let c = classify_trivial_iwasawa(&resolved(11, 3, &[7], false), &memo).unwrap();
    assert_eq!(c.id(), "LemmaCaseE");
    assert_eq!(c.predicted_trivial, Some(false));

    // (5/29) = 1 and both quartic symbols are -1
    assert_eq!(legendre(5, 29), 1);
    assert_eq!(quartic_symbol(5, 29).unwrap(), quartic_symbol(29, 5).unwrap());
    let c = classify_trivial_iwasawa(&FamilyInput::PP { p1: 5, p2: 29 }, &memo).unwrap();
    assert!(!c.matched());
}

#[test]
fn fukuda_examples() {
    use LayerValue::*;
    assert_eq!(fukuda_stable(&[H2 { layer: 0, h2: 4 }, H2 { layer: 1, h2: 4 }]).unwrap(), Stability::H2StableFrom(0));
    assert_eq!(
        fukuda_stable(&[Rank { layer: 0, rank: 2 }, Rank { layer: 1, rank: 2 }]).unwrap(),
        Stability::RankStableFrom(0)
    );
    assert_eq!(fukuda_stable(&[H2 { layer: 0, h2: 4 }, H2 { layer: 1, h2: 8 }]).unwrap(), Stability::NoVerdict);
    assert_eq!(
        fukuda_stable(&[H2 { layer: 0, h2: 2 }, H2 { layer: 1, h2: 4 }, H2 { layer: 2, h2: 4 }]).unwrap(),
        Stability::H2StableFrom(1)
    );
    assert!(fukuda_stable(&[H2 { layer: 0, h2: 4 }, H2 { layer: 2, h2: 4 }]).is_err());
    assert!(fukuda_stable(&[H2 { layer: 0, h2: 4 }, Rank { layer: 1, rank: 2 }]).is_err());
}

/// Every rank the classifiers predict is admitted by the ambiguous class
/// rank, and the three routes agree where they overlap.
#[test]
fn oracle_agreement_and_consistency() {
    let memo = Memo::default();
    let mut checked = 0;
    for n in [1, 2] {
        for k in inputs(if n == 1 { 150 } else { 70 }, n, 7) {
            let orc = oracle(&k, &memo);
            let fm = classify_first_main(&k, &memo).unwrap();
            let bd = rank_bounds_form_d(&k).unwrap();
            let bdp = bd.predicted_rank_a.clone().unwrap();
            assert!(bdp.admits(orc), "{k:?}: {} predicts {bdp:?}, oracle {orc}", bd.id());
            if let Some(p) = &fm.predicted_rank_a {
                let r = p.exact().unwrap();
                assert_eq!(r, orc, "{k:?}: {}", fm.id());
                assert!(bdp.admits(r));
                let k1 = rank_k1(&k).unwrap();
                assert_eq!(k1.predicted_rank_a.as_ref().and_then(|p| p.exact()), Some(r), "{k:?}: {} vs {}", fm.id(), k1.id());
                assert!(fm.findings.is_empty(), "{k:?}: {:?}", fm.findings);
            }
            let r3 = rank3_families(&k).unwrap();
            if let Some(p) = &r3.predicted_rank_a {
                assert!(p.admits(orc), "{k:?}: {}", r3.id());
                assert!(!fm.matched());
            }
            checked += 1;
        }
    }
    assert!(checked > 1500, "{checked}");
}

#[test]
fn form_e_unlisted_rank_cases() {
    let memo = Memo::default();
    let (mut r3, mut r2) = (0, 0);
    for k in inputs(60, 2, 3) {
        let c = rank_bounds_form_d(&k).unwrap();
        if c.id().contains("unlisted-rank3") {
            assert!(oracle(&k, &memo) >= 3);
            r3 += 1;
        } else if c.id().contains("unlisted-rank2") {
            assert_eq!(oracle(&k, &memo), 2);
            r2 += 1;
        }
        if c.id().contains("unlisted") {
            assert_eq!(c.findings.len(), 1);
        }
    }
    assert!(r3 > 0 && r2 > 0, "{r3} {r2}");
}

/// Items 7 to 9 with delta rs = 7 mod 8: classified at stable rank 2, though
/// the congruence read mod 8 would exclude them.
#[test]
fn items_7_to_9_mod_8_reading_drops_fields() {
    let memo = Memo::default();
    let mut dropped = 0;
    for k in inputs(45, 2, 7) {
        let FamilyInput::Q1Q2(x) = &k else { unreachable!() };
        if !x.two || (x.delta * x.primes[0] * x.primes[1]) % 8 != 7 {
            continue;
        }
        let c = classify_first_main(&k, &memo).unwrap();
        if !["Thm1-item7", "Thm1-item8", "Thm1-item9"].iter().any(|p| c.id().starts_with(p)) {
            continue;
        }
        assert_eq!(oracle(&k, &memo), 2);
        assert_eq!(rank_k1(&k).unwrap().predicted_rank_a, Some(RankPrediction::Exact(2)));
        dropped += 1;
    }
    assert!(dropped > 0);
}

#[test]
fn clause_exclusivity() {
    let memo = Memo::default();
    for k in inputs(45, 2, 7) {
        let c = classify_first_main(&k, &memo).unwrap();
        assert!(!c.findings.iter().any(|f| f.starts_with("also matches")), "{k:?}: {:?}", c.findings);
    }
}

/// Stable at rank <= 2, yet unmatched: h2 agrees at layers 0 and 1.
#[test]
fn first_main_converse_counterexamples() {
    let memo = Memo::default();
    for (k, rank, h2) in [(q1q2(7, 3, 1, &[43], false), 1, 2), (q1q2(7, 3, 3, &[37], false), 2, 4)] {
        assert!(!classify_first_main(&k, &memo).unwrap().matched(), "{k:?}");
        assert_eq!(oracle(&k, &memo), rank);
        assert_eq!(h2_layers(k.gens(), &memo), (h2, h2));
        let h = fukuda_stable(&[LayerValue::H2 { layer: 0, h2 }, LayerValue::H2 { layer: 1, h2 }]).unwrap();
        assert_eq!(h, Stability::H2StableFrom(0));
    }
    assert_eq!(q1q2(7, 3, 3, &[37], false).gens(), [21, 111]);
}

/// K1 = K(sqrt 2) unramified over K: h(K) is even though A(K_inf) is trivial.
#[test]
fn trivial_field_with_unramified_first_layer() {
    let memo = Memo::default();
    let c = classify_trivial_iwasawa(&FamilyInput::Field { gens: [3, 10] }, &memo).unwrap();
    assert_eq!(c.predicted_trivial, Some(true), "{}", c.id());
    assert_eq!(h2_layers([3, 10], &memo), (2, 1));
    assert_eq!(h2_layers([3, 5], &memo), (1, 1));
}

#[test]
fn third_main_sweep_small() {
    let memo = Memo::new(1 << 34);
    let ps: Vec<u64> = primes_below(100).into_iter().filter(|&p| p > 2).collect();
    let mut hits = 0;
    for &q in ps.iter().filter(|p| *p % 8 == 7) {
        for &r in ps.iter().filter(|p| *p % 8 == 3) {
            for &s in ps.iter().filter(|p| *p % 8 == 3) {
                for nu in [1, 2] {
                    let Ok(c) = third_main_predict(q, r, s, nu, &memo) else { continue };
                    if c.id() != "ThirdMain-1" {
                        continue;
                    }
                    let get = |n: &str| c.orders.iter().find(|o| o.invariant == n).unwrap().values[0];
                    let (h0, h1) = h2_layers([(nu * q) as i64, (r * s) as i64], &memo);
                    assert_eq!((h0, h1), (get("h2(K_nu)"), get("h2(K_nu1)")), "({q}, {r}, {s}, {nu})");
                    hits += 1;
                }
            }
        }
    }
    assert!(hits > 5, "{hits}");
}
