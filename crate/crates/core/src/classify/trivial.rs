//! Real biquadratic fields with trivial 2-Iwasawa module.

use super::{Classification, FamilyInput, OrderPrediction, Structure, Trace};
use crate::arith::quartic_symbol;
use crate::error::ClassifyError;
use crate::multiquad::MultiQuadField;
use crate::units::{wada_unit_system, QuadSource};

fn form_3(p1: u64, p2: u64, src: &dyn QuadSource, tr: &mut Trace) -> Result<Option<String>, ClassifyError> {
    let a = if tr.leg("p1", p1 as i64, "p2", p2) == -1 {
        "a1"
    } else {
        let (x, y) = (quartic_symbol(p1 as i64, p2)?, quartic_symbol(p2 as i64, p1)?);
        tr.push("(p1/p2)_4".into(), format!("({p1}/{p2})_4"), x as i64);
        tr.push("(p2/p1)_4".into(), format!("({p2}/{p1})_4"), y as i64);
        if x == y {
            return Ok(None);
        }
        "a2"
    };
    let pp = (p1 * p2) as i64;
    let h = src.class_data(2 * pp)?.h2;
    tr.push("h2(2p1p2)".into(), format!("h2({})", 2 * pp), h as i64);
    if h != 4 {
        return Ok(None);
    }
    let q = wada_unit_system(&MultiQuadField::new(&[pp, 2])?, src)?.q_index;
    tr.push("q(k1)".into(), format!("q(Q(sqrt {pp}, sqrt 2))"), q as i64);
    Ok((q == 1).then(|| format!("SecondMain-3-{a}")))
}

fn reading(k: &FamilyInput, src: &dyn QuadSource, tr: &mut Trace) -> Result<Option<String>, ClassifyError> {
    Ok(match *k {
        FamilyInput::EtaQR { q, r, .. } => {
            // taken as printed: no symbol condition, none on eta1, eta2
            let r8 = tr.md("r", r, 8);
            if r8 == 3 || r8 == 5 {
                Some("SecondMain-1-C1".into())
            } else if r8 == 7 && tr.md("q", q, 8) == 3 {
                Some("SecondMain-1-C2".into())
            } else {
                None
            }
        }
        FamilyInput::EtaQ1Q2R { q1, q2, r, .. } => {
            let (r8, q8) = (tr.md("r", r, 8), tr.md("q1", q1, 8));
            if r8 == 3 {
                Some("SecondMain-2-C1".into())
            } else if r8 == 5 && q8 == 3 && tr.leg("q1q2", (q1 * q2) as i64, "r", r) == -1 {
                Some("SecondMain-2-C2".into())
            } else if r8 == 5 && q8 == 7 && tr.leg("q1", q1 as i64, "r", r) == -1 {
                Some("SecondMain-2-C3".into())
            } else if r8 == 7 && q8 == 3 {
                Some("SecondMain-2-C4".into())
            } else {
                None
            }
        }
        FamilyInput::PP { p1, p2 } => form_3(p1, p2, src, tr)?,
        _ => None,
    })
}

fn is_form_e(k: &FamilyInput) -> bool {
    matches!(k, FamilyInput::Q1Q2(x) if x.form() == 'E')
}

/// Decides triviality of `A(K_inf)` for any real biquadratic `K`: trivial
/// exactly on the three listed forms. Form E inputs are classified
/// non-trivial with `h2(K1)` even. `FamilyInput::Field` is read in every
/// way [`FamilyInput::recognize`] finds.
pub fn classify_trivial_iwasawa(k: &FamilyInput, src: &dyn QuadSource) -> Result<Classification, ClassifyError> {
    k.validate()?;
    let readings = match k {
        FamilyInput::Field { gens } => FamilyInput::recognize(*gens),
        other => vec![other.clone()],
    };
    let mut tr = Trace::default();
    let mut hits = Vec::new();
    let mut case_e = false;
    for rd in &readings {
        case_e |= is_form_e(rd);
        if let Some(id) = reading(rd, src, &mut tr)? {
            if !hits.contains(&id) {
                hits.push(id);
            }
        }
    }
    let mut c = Classification::new(tr);
    if case_e {
        if !hits.is_empty() {
            c.findings.push(format!("form E field also matches {hits:?}"));
        }
        c.statement_id = Some("LemmaCaseE".into());
        c.predicted_trivial = Some(false);
        c.orders.push(OrderPrediction {
            invariant: "h2(K1)".into(),
            values: Vec::new(),
            divisible_by: Some(2),
        });
        return Ok(c);
    }
    match hits.first() {
        Some(id) => {
            c.statement_id = Some(id.clone());
            c.predicted_trivial = Some(true);
            c.predicted_structure = Some(Structure::Trivial);
            for inv in ["h2(K)", "h2(K1)"] {
                c.orders.push(OrderPrediction {
                    invariant: inv.into(),
                    values: vec![1],
                    divisible_by: None,
                });
            }
            for other in &hits[1..] {
                c.findings.push(format!("also matches {other}"));
            }
        }
        None => c.predicted_trivial = Some(false),
    }
    Ok(c)
}
