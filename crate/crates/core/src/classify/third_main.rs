//! The fields `K_nu = Q(sqrt(nu q), sqrt(rs))` with q = 7 and r = s = 3 mod 8:
//! square roots of `eps_{nu qrs}` and the predicted 2-class groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Classification, OrderPrediction, RankPrediction, Structure, Trace};
use crate::arith::{is_perfect_square, is_prime_u64};
use crate::error::ClassifyError;
use crate::units::QuadSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LemgenCase {
    /// `2^{d(nu,1)} r (a + (-1)^{d(nu,1)})` is a square
    A,
    /// `2^{d(nu,2)} q (a - 1)` is a square
    B,
    /// `2^{d(nu,2)} s (a + (-1)^{d(nu,1)})` is a square
    C,
}

/// `sqrt(kappa eps) = b1 sqrt(A) + b2 sqrt(B)` with `A B = class of the radicand`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    pub kappa: u64,
    pub sqrt_of: [u64; 2],
    pub b1: BigInt,
    pub b2: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemgenResult {
    pub case: LemgenCase,
    /// `eps_{nu qrs} = a + b sqrt(nu qrs)`
    pub a: BigInt,
    pub b: BigInt,
    /// the three integers in the order of cases a, b, c
    pub integers: [BigInt; 3],
    /// square root of the square among them
    pub witness: BigInt,
    pub expansion: Expansion,
    /// `sqrt(rho eps_{rho qrs}) = y1 sqrt q + y2 sqrt(rho rs)`, `rho != nu`
    pub part2: Option<Expansion>,
    pub trace: Vec<super::TraceEntry>,
    pub findings: Vec<String>,
}

fn check_hypotheses(q: u64, r: u64, s: u64, nu: u64, tr: &mut Trace) -> Result<(), ClassifyError> {
    for (n, p) in [("q", q), ("r", r), ("s", s)] {
        if !is_prime_u64(p) {
            return Err(ClassifyError::Malformed(format!("{n} = {p} is not prime")));
        }
    }
    if nu != 1 && nu != 2 {
        return Err(ClassifyError::Malformed(format!("nu = {nu} not in {{1, 2}}")));
    }
    let sign = if nu == 2 { -1 } else { 1 };
    let ok = q != r
        && r != s
        && q != s
        && tr.md("q", q, 8) == 7
        && tr.md("r", r, 8) == 3
        && tr.md("s", s, 8) == 3
        && tr.leg("q", q as i64, "s", s) == sign
        && tr.leg("q", q as i64, "r", r) == sign
        && tr.leg("s", s as i64, "r", r) == 1;
    if ok {
        Ok(())
    } else {
        Err(ClassifyError::Hypothesis(format!(
            "(q, r, s, nu) = ({q}, {r}, {s}, {nu}) needs q = 7, r = s = 3 mod 8, (q/s) = (q/r) = {sign}, (s/r) = 1"
        )))
    }
}

/// `(a + sigma) kappa / 2 = A b1^2`, then `b2 = kappa b / (2 b1)`, checked by
/// squaring back.
fn expand(a: &BigInt, b: &BigInt, sigma: i64, kappa: u64, sa: u64, sb: u64) -> Option<Expansion> {
    let t = (a + sigma) * kappa;
    let (half, rem) = t.div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return None;
    }
    let (q, rem) = half.div_rem(&BigInt::from(sa));
    if !rem.is_zero() {
        return None;
    }
    let b1 = is_perfect_square(&q)?;
    if b1.is_zero() {
        return None;
    }
    let (b2, rem) = (b * kappa).div_rem(&(&b1 * 2));
    if !rem.is_zero() {
        return None;
    }
    let lhs = &b1 * &b1 * sa + &b2 * &b2 * sb;
    (lhs == a * kappa).then_some(Expansion {
        kappa,
        sqrt_of: [sa, sb],
        b1,
        b2,
    })
}

/// Which of the three integers attached to `eps_{nu qrs}` is a square, with
/// the square root of `nu eps` or `2 eps` it yields. The three stated
/// identities between `b1`, `b2` are checked exactly.
pub fn lemgen_case(q: u64, r: u64, s: u64, nu: u64, src: &dyn QuadSource) -> Result<LemgenResult, ClassifyError> {
    let mut tr = Trace::default();
    check_hypotheses(q, r, s, nu, &mut tr)?;
    let (d1, d2) = if nu == 1 { (1u32, 0u32) } else { (0, 1) };
    let big = |n: u64| BigInt::from(n);
    let pm1 = if d1 == 1 { -1i64 } else { 1 };
    let unit = |m: u64| -> Result<(BigInt, BigInt), ClassifyError> {
        let u = src.unit(m as i64)?;
        if !u.value.den.is_one() {
            return Err(ClassifyError::Finding(format!("eps_{m} has denominator {}", u.value.den)));
        }
        Ok((u.value.a.clone(), u.value.b.clone()))
    };
    let (a, b) = unit(nu * q * r * s)?;
    let ints = [
        (big(1 << d1) * r) * (&a + pm1),
        (big(1 << d2) * q) * (&a - 1),
        (big(1 << d2) * s) * (&a + pm1),
    ];
    let roots: Vec<Option<BigInt>> = ints.iter().map(|n| if n.is_negative() { None } else { is_perfect_square(n) }).collect();
    for (i, n) in ints.iter().enumerate() {
        tr.push(
            format!("integer {} is a square", ["a", "b", "c"][i]),
            n.to_string(),
            roots[i].is_some() as i64,
        );
    }
    let squares: Vec<usize> = (0..3).filter(|&i| roots[i].is_some()).collect();
    if squares.len() != 1 {
        return Err(ClassifyError::Finding(format!(
            "({q}, {r}, {s}, {nu}): {} of the three integers {:?} are squares",
            squares.len(),
            ints.iter().map(|n| n.to_string()).collect::<Vec<_>>()
        )));
    }
    let i = squares[0];
    let (case, sigma, kappa, sa, sb) = match i {
        0 => (LemgenCase::A, pm1, nu, r, nu * q * s),
        1 => (LemgenCase::B, -1, 2, nu * q, r * s),
        _ => (LemgenCase::C, pm1, 2, nu * s, q * r),
    };
    let ex = expand(&a, &b, sigma, kappa, sa, sb)
        .ok_or_else(|| ClassifyError::Finding(format!("no integral square root of {kappa} eps_{}", nu * q * r * s)))?;
    let (b1, b2) = (&ex.b1, &ex.b2);
    let sq = |x: &BigInt| x * x;
    let neg = |e: u32, x: BigInt| if e == 1 { -x } else { x };
    let stated = match case {
        LemgenCase::A => neg(d1, sq(b1) * r) + neg(d2, sq(b2) * (nu * q * s)) == big(1 << d2),
        LemgenCase::B => -(sq(b1) * ((1 << d2) * q)) + sq(b2) * (r * s) == big(2),
        LemgenCase::C => neg(d1, sq(b1) * ((1 << d2) * s)) + neg(d2, sq(b2) * (q * r)) == big(2),
    };
    if !stated {
        return Err(ClassifyError::Finding(format!("identity for case {case:?} fails at ({q}, {r}, {s}, {nu})")));
    }
    let mut findings = Vec::new();
    let rho = 3 - nu;
    let (x, y) = unit(rho * q * r * s)?;
    let p2int = (big(1 << d2) * q) * (&x - 1);
    let p2 = is_perfect_square(&p2int).and_then(|_| expand(&x, &y, -1, rho, q, rho * r * s));
    match &p2 {
        Some(e) if -(sq(&e.b1) * q) + sq(&e.b2) * (rho * r * s) == big(rho) => {}
        _ => findings.push(format!("part 2 fails: {p2int} is not a square or the identity does not hold")),
    }
    tr.push("part 2 integer is a square".into(), p2int.to_string(), p2.is_some() as i64);
    Ok(LemgenResult {
        case,
        a,
        b,
        witness: roots[i].clone().unwrap(),
        integers: ints,
        expansion: ex,
        part2: p2,
        trace: tr.0,
        findings,
    })
}

/// A(K_nu) = Z/2 x Z/2^{m-2} with `h2(nu qrs) = 2^m`, the orders at layers 0
/// and 1, the unit indices, `h2(F_{nu,1})` and the two cyclic companions.
/// For tuples where `2^{d(nu,2)} q (a - 1)` is a square only the
/// `h2(F_{nu,1})` relation is predicted (statement `CorollaryCorr-square`).
pub fn third_main_predict(q: u64, r: u64, s: u64, nu: u64, src: &dyn QuadSource) -> Result<Classification, ClassifyError> {
    let lg = lemgen_case(q, r, s, nu, src)?;
    let mut c = Classification::new(Trace(lg.trace.clone()));
    c.findings = lg.findings.clone();
    let h = src.class_data((nu * q * r * s) as i64)?.h2;
    let m = h.trailing_zeros();
    c.trace.push(super::TraceEntry {
        symbol: "m".into(),
        instance: format!("h2({}) = {h}", nu * q * r * s),
        value: m as i64,
    });
    let pw = |e: u32| 1u64 << e;
    let order = |name: &str, v: u64| OrderPrediction {
        invariant: name.to_string(),
        values: vec![v],
        divisible_by: None,
    };
    if lg.case == LemgenCase::B {
        c.statement_id = Some("CorollaryCorr-square".into());
        c.orders.push(order("h2(F_nu1)", pw(m + 1)));
        c.orders.push(order("q(F_nu1)", 2));
        return Ok(c);
    }
    if m < 2 {
        return Err(ClassifyError::Finding(format!("h2({}) = {h}: m < 2", nu * q * r * s)));
    }
    if m == 2 {
        c.findings.push("m = 2: Z/2 x Z/2^0 has rank 1".into());
    }
    c.statement_id = Some("ThirdMain-1".into());
    let st = Structure::TwoTimesCyclic { exp: m - 2 };
    let rank = if m >= 3 { 2 } else { 1 };
    c.predicted_rank_a = Some(RankPrediction::Exact(rank));
    c.predicted_rank_ainf = Some(RankPrediction::Exact(rank));
    c.predicted_structure = Some(st);
    for (name, v) in [
        ("h2(K_nu)", pw(m - 1)),
        ("q(K_nu)", 2),
        ("h2(K_nu1)", pw(m - 1)),
        ("q(K_nu1)", 32),
        ("h2(F_nu1)", pw(m)),
        ("q(F_nu1)", 1),
        ("h2(qrs)h2(2qrs)", pw(m + 2)),
        ("h2(2rs)", 2),
        ("h2(K'_nu)", pw(m - 1)),
        ("h2(K''_nu)", pw(m - 1)),
    ] {
        c.orders.push(order(name, v));
    }
    Ok(c)
}
