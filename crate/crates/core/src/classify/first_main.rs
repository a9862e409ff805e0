//! Real biquadratic fields of forms D and F whose 2-Iwasawa module has rank
//! at most 2 and equal to the rank of `A(K)`: items 1 to 12.

use super::input::Q1Q2Input;
use super::lemmas::{any_order, Ctx};
use super::{Classification, FamilyInput, RankPrediction, Structure, Trace};
use crate::arith::quartic_symbol;
use crate::error::ClassifyError;
use crate::multiquad::MultiQuadField;
use crate::units::{wada_unit_system, QuadSource};

fn items_1_to_9(x: &Q1Q2Input, tr: &mut Trace) -> Vec<(String, u32)> {
    let mut ctx = Ctx { q1: x.q1, q2: x.q2, tr };
    let mut hits: Vec<(String, u32)> = Vec::new();
    if x.q1 % 8 != 7 {
        return hits;
    }
    let delta = x.delta;
    match (x.two, &x.primes[..]) {
        (false, &[r]) => {
            let r8 = ctx.m8("r", r);
            let c = ctx.chi("r", r);
            if r8 == 3 && c == -1 {
                hits.push(("Thm1-item1-C1".into(), 1));
            } else if r8 == 3 && c == 1 && ctx.l1("r", r) == 1 {
                hits.push(("Thm1-item1-C2".into(), 1));
            } else if r8 == 5 && ctx.l1("r", r) == -1 {
                hits.push(("Thm1-item1-C3".into(), 1));
            }
            if delta == x.q1 && ctx.m4("r", r) == 1 && c == 1 && ctx.l1("r", r) == 1 {
                hits.push(("Thm1-item2".into(), 2));
            }
        }
        (true, &[r]) => {
            let r8 = ctx.m8("r", r);
            if r8 == 3 {
                hits.push(("Thm1-item5-C1".into(), 1));
            } else if r8 == 5 && ctx.l1("r", r) == -1 {
                hits.push(("Thm1-item5-C2".into(), 1));
            }
            if delta == x.q1 && r8 == 5 && ctx.chi("r", r) == 1 && ctx.l1("r", r) == 1 {
                hits.push(("Thm1-item6".into(), 2));
            }
        }
        (false, &[r0, s0]) => {
            let item3 = any_order(&mut ctx, &[r0, s0], |c, v| {
                let (r, s) = (v[0], v[1]);
                if c.chi("r", r) != -1 || c.chi("s", s) != -1 {
                    return None;
                }
                let (r8, s8) = (c.m8("r", r), c.m8("s", s));
                if r8 == 5 && s8 == 3 && c.l1("r", r) == -1 {
                    Some("C1")
                } else if r8 == 3 && s8 == 3 && c.l1("r", r) != c.l1("s", s) {
                    Some("C2")
                } else {
                    None
                }
            });
            if let Some((cl, _)) = item3 {
                hits.push((format!("Thm1-item3-{cl}"), 2));
            }
            let item4 = any_order(&mut ctx, &[r0, s0], |c, v| {
                let (r, s) = (v[0], v[1]);
                if c.chi("r", r) != -1 || c.chi("s", s) != 1 {
                    return None;
                }
                let (r8, s8) = (c.m8("r", r), c.m8("s", s));
                if r8 == 3 && s8 == 3 && c.l1("r", r) != c.l1("s", s) {
                    Some("C1")
                } else if r8 == 3 && s8 == 5 && c.l1("s", s) == -1 {
                    Some("C2")
                } else if r8 == 5 && s8 == 3 && c.l1("r", r) == -1 {
                    Some("C3")
                } else {
                    None
                }
            });
            if let Some((cl, _)) = item4 {
                hits.push((format!("Thm1-item4-{cl}"), 2));
            }
        }
        (true, &[r0, s0]) => {
            // Items 7 to 9 print "delta rs = 3 (mod 8)". Read literally this
            // empties several clauses whose fields the layer-0 and layer-1
            // rank lemmas put at stable rank 2, so the congruence is taken
            // mod 4, where it restates d = 3 mod 4.
            let drs = delta * r0 * s0;
            ctx.tr.push("delta rs mod 4".into(), format!("{drs} mod 4"), (drs % 4) as i64);
            if drs % 4 != 3 {
                return hits;
            }
            let item7 = any_order(&mut ctx, &[r0, s0], |c, v| {
                let (r, s) = (v[0], v[1]);
                if c.chi("r", r) != -1 || c.chi("s", s) != -1 {
                    return None;
                }
                let (r8, s8) = (c.m8("r", r), c.m8("s", s));
                if r8 == 5 && s8 == 3 && c.l1("r", r) == -1 {
                    Some("C1")
                } else if r8 == 3 && s8 == 3 && c.l1("r", r) != c.l1("s", s) {
                    Some("C2")
                } else {
                    None
                }
            });
            if let Some((cl, _)) = item7 {
                hits.push((format!("Thm1-item7-{cl}"), 2));
            }
            let item8 = any_order(&mut ctx, &[r0, s0], |c, v| {
                let (r, s) = (v[0], v[1]);
                if c.chi("r", r) != -1 || c.chi("s", s) != 1 {
                    return None;
                }
                let (r8, s8) = (c.m8("r", r), c.m8("s", s));
                if r8 == 3 && s8 == 3 && c.l1("r", r) != c.l1("s", s) {
                    Some("C1")
                } else if r8 == 5 && s8 == 3 && c.l1("r", r) == -1 {
                    Some("C2")
                } else if r8 == 3 && s8 == 5 && c.l1("s", s) == -1 {
                    Some("C3")
                } else {
                    None
                }
            });
            if let Some((cl, _)) = item8 {
                hits.push((format!("Thm1-item8-{cl}"), 2));
            }
            let item9 = any_order(&mut ctx, &[r0, s0], |c, v| {
                let (r, s) = (v[0], v[1]);
                if c.chi("r", r) != 1 || c.chi("s", s) != 1 {
                    return None;
                }
                let (r8, s8) = (c.m8("r", r), c.m8("s", s));
                if r8 == 3 && s8 == 3 && c.l1("r", r) == 1 && c.l1("s", s) == -1 {
                    Some("b1")
                } else if r8 == 5 && s8 == 3 && c.l1("r", r) == -1 {
                    Some("b2")
                } else {
                    None
                }
            });
            if let Some((cl, _)) = item9 {
                hits.push((format!("Thm1-item9-{cl}"), 2));
            }
        }
        _ => {}
    }
    hits
}

fn item_12(p: u64, d: u64, src: &dyn QuadSource, tr: &mut Trace) -> Result<Option<String>, ClassifyError> {
    let l = tr.leg("p", p as i64, "d", d);
    let a = if l == -1 {
        Some("a1")
    } else {
        let (pd, dp) = (quartic_symbol(p as i64, d)?, quartic_symbol(d as i64, p)?);
        tr.push("(p/d)_4".into(), format!("({p}/{d})_4"), pd as i64);
        tr.push("(d/p)_4".into(), format!("({d}/{p})_4"), dp as i64);
        (pd != dp).then_some("a2")
    };
    let Some(a) = a else { return Ok(None) };
    let pd = (p * d) as i64;
    let h = src.class_data(2 * pd)?.h2;
    tr.push("h2(2pd)".into(), format!("h2({})", 2 * pd), h as i64);
    if h != 4 {
        return Ok(None);
    }
    let k1 = MultiQuadField::new(&[pd, 2])?;
    let q = wada_unit_system(&k1, src)?.q_index;
    tr.push("q(Q(sqrt pd, sqrt 2))".into(), format!("q(Q(sqrt {pd}, sqrt 2))"), q as i64);
    Ok((q == 1).then(|| format!("Thm1-item12-{a}")))
}

fn form_f(k: &FamilyInput, src: &dyn QuadSource, tr: &mut Trace) -> Result<Option<String>, ClassifyError> {
    Ok(match *k {
        FamilyInput::PQ1Q2 { p, q1, q2 } => {
            if q2 % 8 != 3 || tr.leg("q2", q2 as i64, "p", p) != -1 {
                return Ok(None);
            }
            let (p8, q8) = (tr.md("p", p, 8), tr.md("q1", q1, 8));
            let l = tr.leg("q1", q1 as i64, "p", p);
            if p8 == 5 && q8 == 3 && l == 1 {
                Some("Thm1-item10-C1".into())
            } else if p8 == 5 && q8 == 7 && l == -1 {
                Some("Thm1-item10-C2".into())
            } else {
                None
            }
        }
        FamilyInput::PD { p, d } => {
            (tr.md("p", p, 8) == 5 && tr.md("d", d, 4) == 3).then(|| "Thm1-item11".to_string())
        }
        FamilyInput::PP { p1, p2 } => item_12(p1, p2, src, tr)?,
        _ => None,
    })
}

/// Matches items 1 to 12. On a match the rank of `A(K)` and of `A(K_inf)`
/// are predicted equal to the value the item states; otherwise the
/// classification is an explicit no-match. Inputs read in several ways
/// (`FamilyInput::Field`) are tried reading by reading.
pub fn classify_first_main(k: &FamilyInput, src: &dyn QuadSource) -> Result<Classification, ClassifyError> {
    k.validate()?;
    let readings = match k {
        FamilyInput::Field { gens } => FamilyInput::recognize(*gens),
        other => vec![other.clone()],
    };
    let in_scope = |rd: &FamilyInput| match rd {
        FamilyInput::Q1Q2(x) => x.form() == 'D',
        FamilyInput::PQ1Q2 { .. } | FamilyInput::PD { .. } | FamilyInput::PP { .. } => true,
        _ => false,
    };
    if !readings.iter().any(in_scope) {
        return Err(ClassifyError::Hypothesis(format!("{:?} is not of form D or F", k.gens())));
    }
    let mut tr = Trace::default();
    let mut hits: Vec<(String, u32)> = Vec::new();
    for rd in readings.iter().filter(|rd| in_scope(rd)) {
        match rd {
            FamilyInput::Q1Q2(x) => hits.extend(items_1_to_9(x, &mut tr)),
            FamilyInput::PQ1Q2 { .. } | FamilyInput::PD { .. } | FamilyInput::PP { .. } => {
                if let Some(id) = form_f(rd, src, &mut tr)? {
                    hits.push((id, 0));
                }
            }
            _ => {}
        }
    }
    hits.dedup();
    let mut c = Classification::new(tr);
    if let Some((id, rank)) = hits.first().cloned() {
        c.statement_id = Some(id);
        c.predicted_rank_a = Some(RankPrediction::Exact(rank));
        c.predicted_rank_ainf = Some(RankPrediction::Exact(rank));
        if rank == 0 {
            c.predicted_structure = Some(Structure::Trivial);
            c.predicted_trivial = Some(true);
        }
        for (other, r2) in &hits[1..] {
            c.findings.push(format!("also matches {other} (rank {r2})"));
        }
    }
    Ok(c)
}
