//! Hilbert symbols over Q_p and over completions of a real quadratic field
//! F = Q(sqrt m), and the rank of the ambiguous 2-class group of F(sqrt d)/F.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factor_u64, is_squarefree, legendre, pow_mod, sqrt_mod_prime};
use crate::error::LocalError;
use crate::quad::{QuadElem, QuadField};
use crate::units::QuadSource;

/// Default cap on the number of residues enumerated by the dyadic solver.
pub const DYADIC_SEARCH_CAP: usize = 1 << 22;

/// A place of Q. `Prime(2)` is the dyadic place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QPlace {
    Real,
    Prime(u64),
}

/// Splits `x = p^v * w` with `p` not dividing `w`.
fn split_val(x: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut w = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = w.div_rem(&p);
        if !r.is_zero() {
            return (v, w);
        }
        w = q;
        v += 1;
    }
}

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Square class representative: an integer with the same class as the rational.
fn integer_class(q: &BigRational) -> BigInt {
    q.numer() * q.denom()
}

/// The quadratic Hilbert symbol `(a, b)_p` over Q.
pub fn hilbert_qp(a: &BigRational, b: &BigRational, place: QPlace) -> Result<i8, LocalError> {
    if a.is_zero() || b.is_zero() {
        return Err(LocalError::ZeroArgument);
    }
    let (a, b) = (integer_class(a), integer_class(b));
    Ok(hilbert_int(&a, &b, place))
}

pub(crate) fn hilbert_int(a: &BigInt, b: &BigInt, place: QPlace) -> i8 {
    match place {
        QPlace::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        QPlace::Prime(2) => {
            let (al, u) = split_val(a, 2);
            let (be, v) = split_val(b, 2);
            let (u, v) = (mod_u64(&u, 8), mod_u64(&v, 8));
            let eps = |x: u64| ((x - 1) / 2) & 1;
            let omega = |x: u64| ((x * x - 1) / 8) & 1;
            let e = eps(u) * eps(v) + al as u64 * omega(v) + be as u64 * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        QPlace::Prime(p) => {
            let (al, u) = split_val(a, p);
            let (be, v) = split_val(b, p);
            let mut s = 1i8;
            if (al as u64 * be as u64) % 2 == 1 && p % 4 == 3 {
                s = -s;
            }
            if be % 2 == 1 {
                s *= legendre(mod_u64(&u, p) as i64, p);
            }
            if al % 2 == 1 {
                s *= legendre(mod_u64(&v, p) as i64, p);
            }
            s
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// A place of F = Q(sqrt m). For split primes `sheet` picks the embedding:
/// sheet 0 sends sqrt m to the root r (least root mod odd p; the 2-adic root
/// with r = 1 mod 4), sheet 1 to -r. Real places use sheet 0 for the
/// positive square root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FPlace {
    Real { sheet: u8 },
    Finite { p: u64, split: SplitType, sheet: u8 },
}

impl FPlace {
    pub fn rational_prime(&self) -> Option<u64> {
        match self {
            FPlace::Real { .. } => None,
            FPlace::Finite { p, .. } => Some(*p),
        }
    }
}

impl std::fmt::Display for FPlace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FPlace::Real { sheet } => write!(f, "inf{sheet}"),
            FPlace::Finite { p, split: SplitType::Split, sheet } => write!(f, "P{p}.{sheet}"),
            FPlace::Finite { p, .. } => write!(f, "P{p}"),
        }
    }
}

pub fn split_type(m: i64, p: u64) -> SplitType {
    if p == 2 {
        return match m.rem_euclid(8) {
            1 => SplitType::Split,
            5 => SplitType::Inert,
            _ => SplitType::Ramified,
        };
    }
    if m.rem_euclid(p as i64) == 0 {
        SplitType::Ramified
    } else if legendre(m, p) == 1 {
        SplitType::Split
    } else {
        SplitType::Inert
    }
}

/// All places of F over the rational prime `p`.
pub fn places_over(m: i64, p: u64) -> Vec<FPlace> {
    let split = split_type(m, p);
    let n = if split == SplitType::Split { 2 } else { 1 };
    (0..n).map(|sheet| FPlace::Finite { p, split, sheet }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamifiedPrime {
    /// 2 stands for the dyadic place
    pub rational_prime: u64,
    pub split_type_in_f: SplitType,
    pub count_in_f: u8,
    pub ramifies_in_k: bool,
}

impl RamifiedPrime {
    pub fn places(&self, m: i64) -> Vec<FPlace> {
        places_over(m, self.rational_prime)
    }
}

/// Class of a nonzero integer in Q_2^* / Q_2^{*2}: (v mod 2, unit mod 8).
fn q2_class(x: i64) -> (u32, u64) {
    let v = x.trailing_zeros();
    (v % 2, ((x >> v).rem_euclid(8)) as u64)
}

fn q2_mul(x: (u32, u64), y: (u32, u64)) -> (u32, u64) {
    ((x.0 + y.0) % 2, (x.1 * y.1) % 8)
}

/// Ramification index over Q_2 of Q_2(sqrt x : x in gens).
fn dyadic_ram_index(gens: &[i64]) -> usize {
    let mut h = vec![(0u32, 1u64)];
    for &g in gens {
        let c = q2_class(g);
        if !h.contains(&c) {
            let more: Vec<_> = h.iter().map(|&x| q2_mul(x, c)).collect();
            h.extend(more);
        }
    }
    let unram = h.iter().filter(|&&(v, u)| v == 0 && (u == 1 || u == 5)).count();
    h.len() / unram
}

fn check_extension(m: i64, d: i64) -> Result<(), LocalError> {
    if d <= 1 || !is_squarefree(d) {
        return Err(if d == 1 {
            LocalError::Degenerate { m, d }
        } else {
            LocalError::BadExtension(d)
        });
    }
    if d == m {
        return Err(LocalError::Degenerate { m, d });
    }
    Ok(())
}

/// Finite primes of F that could ramify in K = F(sqrt d) (those over 2 and
/// over primes dividing m d), each flagged, and the number `t` of ramified
/// places. Infinite places never ramify: d > 0.
pub fn ramified_primes(f: &QuadField, d: i64) -> Result<(Vec<RamifiedPrime>, usize), LocalError> {
    let m = f.m();
    check_extension(m, d)?;
    let mut ps: Vec<u64> = factor_u64((m as u64) * (d as u64)).into_iter().map(|(p, _)| p).collect();
    if !ps.contains(&2) {
        ps.push(2);
    }
    ps.sort_unstable();
    let mut out = Vec::new();
    let mut t = 0;
    for p in ps {
        let split = split_type(m, p);
        let count = if split == SplitType::Split { 2 } else { 1 };
        let ramifies = if p == 2 {
            dyadic_ram_index(&[m, d]) / dyadic_ram_index(&[m]) == 2
        } else {
            d % p as i64 == 0 && m % p as i64 != 0
        };
        if ramifies {
            t += count as usize;
        }
        out.push(RamifiedPrime {
            rational_prime: p,
            split_type_in_f: split,
            count_in_f: count,
            ramifies_in_k: ramifies,
        });
    }
    Ok((out, t))
}

/// Residues of the dyadic completion: Z/2^64 [w] with w^2 = t w + n.
#[derive(Clone, Copy, Debug)]
struct Dyadic {
    t: u64,
    n: u64,
    /// v_pi(2)
    e: u32,
    /// whether the basis is (1, pi) with pi ramified
    ramified: bool,
    /// residue field degree over F_2
    f: u32,
    split: bool,
}

type Res = (u64, u64);

impl Dyadic {
    fn new(m: i64) -> Self {
        let mw = m as u64;
        match m.rem_euclid(8) {
            1 => Dyadic { t: 0, n: 0, e: 1, ramified: false, f: 1, split: true },
            5 => Dyadic { t: 1, n: (mw - 1) / 4, e: 1, ramified: false, f: 2, split: false },
            2 | 6 => Dyadic { t: 0, n: mw, e: 2, ramified: true, f: 1, split: false },
            _ => Dyadic { t: 2, n: mw.wrapping_sub(1), e: 2, ramified: true, f: 1, split: false },
        }
    }

    fn mul(&self, x: Res, y: Res) -> Res {
        let bb = x.1.wrapping_mul(y.1);
        (
            x.0.wrapping_mul(y.0).wrapping_add(self.n.wrapping_mul(bb)),
            x.0.wrapping_mul(y.1)
                .wrapping_add(x.1.wrapping_mul(y.0))
                .wrapping_add(self.t.wrapping_mul(bb)),
        )
    }

    fn add(&self, x: Res, y: Res) -> Res {
        (x.0.wrapping_add(y.0), x.1.wrapping_add(y.1))
    }

    fn val(&self, x: Res) -> u32 {
        let (ta, tb) = (x.0.trailing_zeros(), x.1.trailing_zeros());
        if self.ramified {
            (2 * ta).min(2 * tb + 1)
        } else {
            ta.min(tb)
        }
    }

    /// Bit widths of the two coordinates of O / pi^l.
    fn widths(&self, l: u32) -> (u32, u32) {
        if self.ramified {
            (l.div_ceil(2), l / 2)
        } else if self.split {
            (l, 0)
        } else {
            (l, l)
        }
    }

    fn reduce(&self, x: Res, l: u32) -> Res {
        let (wa, wb) = self.widths(l);
        let mask = |w: u32| if w >= 64 { u64::MAX } else { (1u64 << w) - 1 };
        (x.0 & mask(wa), x.1 & mask(wb))
    }

    fn uniformizer(&self) -> Res {
        if self.ramified {
            (0, 1)
        } else {
            (2, 0)
        }
    }

    fn residues(&self, l: u32) -> impl Iterator<Item = Res> {
        let (wa, wb) = self.widths(l);
        (0..1u64 << wb).flat_map(move |b| (0..1u64 << wa).map(move |a| (a, b)))
    }
}

fn big_mod_2_64(x: &BigInt) -> u64 {
    let m = BigInt::from(1u128 << 64);
    x.mod_floor(&m).to_u64().unwrap()
}

fn big_mod_2_128(x: &BigInt) -> u128 {
    let m = BigInt::from(1u128 << 64) * BigInt::from(1u128 << 64);
    x.mod_floor(&m).to_u128().unwrap()
}

/// The 2-adic square root of m = 1 mod 8 congruent to 1 mod 4, modulo 2^126.
fn sqrt_2adic(m: i64) -> u128 {
    let mw = m as u128;
    let mut x: u128 = 1;
    for k in 3..127u32 {
        if x.wrapping_mul(x).wrapping_sub(mw) & ((1u128 << (k + 1)) - 1) != 0 {
            x = x.wrapping_add(1u128 << (k - 1));
        }
    }
    if x & 3 == 3 {
        x.wrapping_neg()
    } else {
        x
    }
}

/// Odd part inverse modulo 2^64 (Newton iteration).
fn inv_odd_u64(a: u64) -> u64 {
    let mut x = a;
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
    }
    x
}

/// Image of an integral element of F in the dyadic residue ring of `place`.
fn embed_dyadic(dy: &Dyadic, u: &QuadElem, sheet: u8) -> Result<Res, LocalError> {
    let m = u.m;
    let s = u.den.trailing_zeros().unwrap_or(0);
    let odd: BigInt = &u.den >> s;
    if s > 1 || (s == 1 && m.rem_euclid(4) != 1) {
        return Err(LocalError::NotUnit { p: 2 });
    }
    let inv = inv_odd_u64(big_mod_2_64(&odd));
    let (a, b) = (&u.a, &u.b);
    let raw: Res = if dy.split {
        let mut r = sqrt_2adic(m);
        if sheet == 1 {
            r = r.wrapping_neg();
        }
        let v = big_mod_2_128(a).wrapping_add(big_mod_2_128(b).wrapping_mul(r));
        ((v >> s) as u64, 0)
    } else if !dy.ramified {
        // sqrt m = 2 theta - 1
        let c0: BigInt = (a - b) >> s;
        let c1: BigInt = (b << 1) >> s;
        (big_mod_2_64(&c0), big_mod_2_64(&c1))
    } else if m.rem_euclid(4) == 3 {
        // sqrt m = pi - 1
        (big_mod_2_64(&(a - b)), big_mod_2_64(b))
    } else {
        (big_mod_2_64(a), big_mod_2_64(b))
    };
    Ok((raw.0.wrapping_mul(inv), raw.1.wrapping_mul(inv)))
}

/// Generator d' of the same local extension with v_pi(d') in {0, 1}.
fn dyadic_radicand(dy: &Dyadic, m: i64, d: i64) -> Res {
    if dy.ramified && d % 2 == 0 {
        let d0 = (d / 2) as u64;
        if m % 2 == 0 {
            ((d0 as u128 * (m / 2) as u128) as u64, 0)
        } else {
            // 2 = pi^2 / (pi + (m-1)/2)
            let w = (((m - 1) / 2) as u64, 1u64);
            dy.mul((d0, 0), w)
        }
    } else {
        (d as u64, 0)
    }
}

/// Smallest valuation of a square root of each square residue mod pi^l.
fn square_table(dy: &Dyadic, l: u32) -> HashMap<Res, u32> {
    let mut tab: HashMap<Res, u32> = HashMap::new();
    for x in dy.residues(l) {
        let key = dy.reduce(dy.mul(x, x), l);
        let v = dy.val(x).min(l);
        tab.entry(key).and_modify(|w| *w = (*w).min(v)).or_insert(v);
    }
    tab
}

/// Unit square test: a unit is a square iff it is one modulo pi^(2e+1).
fn is_unit_square(dy: &Dyadic, w: Res) -> bool {
    let l = 2 * dy.e + 1;
    square_table(dy, l).contains_key(&dy.reduce(w, l))
}

fn dyadic_symbol(
    dy: &Dyadic,
    u: Res,
    dprime: Res,
    extra: u32,
    cap: usize,
) -> Result<i8, LocalError> {
    let vd = dy.val(dprime);
    if vd == 0 && is_unit_square(dy, dprime) {
        return Ok(1);
    }
    let l = 2 * dy.e + vd + 3 + extra;
    let size = 1usize << (dy.f * l);
    if size > cap {
        return Err(LocalError::SearchBound(size));
    }
    let tab = square_table(dy, l);
    let pi2 = dy.mul(dy.uniformizer(), dy.uniformizer());
    let mut c = u;
    for _ in 0..=dy.e {
        for y in dy.residues(l) {
            let w = dy.reduce(dy.add(dy.mul(dprime, dy.mul(y, y)), c), l);
            if let Some(&vx) = tab.get(&w) {
                let vy = dy.val(y).min(l);
                let bound = 2 * (dy.e + vx).min(dy.e + vd + vy);
                if l > bound {
                    return Ok(1);
                }
            }
        }
        c = dy.mul(c, pi2);
    }
    Ok(-1)
}

fn elem_mod_p(u: &QuadElem, r: u64, p: u64) -> Result<u64, LocalError> {
    let den = mod_u64(&u.den, p);
    if den == 0 {
        return Err(LocalError::NotUnit { p });
    }
    let num = (mod_u64(&u.a, p) as u128 + mod_u64(&u.b, p) as u128 * r as u128) % p as u128;
    let inv = pow_mod(den, p - 2, p);
    Ok(((num * inv as u128) % p as u128) as u64)
}

/// Whether the unit `u` of F is a local norm from F_P(sqrt d) at `place`.
pub fn hilbert_quad_local(u: &QuadElem, d: i64, place: &FPlace) -> Result<i8, LocalError> {
    hilbert_quad_local_with(u, d, place, 0, DYADIC_SEARCH_CAP)
}

/// As `hilbert_quad_local`, raising the dyadic search exponent by `extra`.
pub fn hilbert_quad_local_with(
    u: &QuadElem,
    d: i64,
    place: &FPlace,
    extra: u32,
    cap: usize,
) -> Result<i8, LocalError> {
    if u.is_zero() || d == 0 {
        return Err(LocalError::ZeroArgument);
    }
    let m = u.m;
    match *place {
        FPlace::Real { sheet } => {
            let s = if sheet == 0 { u.sign() } else { u.conj().sign() };
            Ok(if s < 0 && d < 0 { -1 } else { 1 })
        }
        FPlace::Finite { p: 2, sheet, .. } => {
            let dy = Dyadic::new(m);
            let uu = embed_dyadic(&dy, u, sheet)?;
            if dy.val(uu) != 0 {
                return Err(LocalError::NotUnit { p: 2 });
            }
            dyadic_symbol(&dy, uu, dyadic_radicand(&dy, m, d), extra, cap)
        }
        FPlace::Finite { p, split, sheet } => {
            let vd = if d % p as i64 == 0 { 1 } else { 0 };
            match split {
                SplitType::Split => {
                    let r0 = sqrt_mod_prime(m.rem_euclid(p as i64) as u64, p).unwrap();
                    let r0 = r0.min(p - r0);
                    let r = if sheet == 0 { r0 } else { p - r0 };
                    let x = elem_mod_p(u, r, p)?;
                    if x == 0 {
                        return Err(LocalError::NotUnit { p });
                    }
                    Ok(hilbert_int(&BigInt::from(x), &BigInt::from(d), QPlace::Prime(p)))
                }
                SplitType::Inert => {
                    let n = u.norm();
                    let nn = mod_u64(n.numer(), p);
                    let nd = mod_u64(n.denom(), p);
                    if nn == 0 || nd == 0 {
                        return Err(LocalError::NotUnit { p });
                    }
                    let chi = legendre((nn * nd % p) as i64, p);
                    Ok(if vd == 1 { chi } else { 1 })
                }
                SplitType::Ramified => {
                    // residue of u is a / den; v_P(d) = 2 v_p(d) is even
                    let x = elem_mod_p(u, 0, p)?;
                    if x == 0 {
                        return Err(LocalError::NotUnit { p });
                    }
                    Ok(1)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<FPlace>,
    pub entries: Vec<Vec<i8>>,
}

impl SymbolMatrix {
    /// Rank over F_2 of the matrix with -1 read as 1.
    pub fn f2_rank(&self) -> u32 {
        let mut rows: Vec<u128> = self
            .entries
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &s)| s == -1).fold(0u128, |acc, (i, _)| acc | 1 << i))
            .collect();
        let mut rank = 0;
        for bit in 0..self.cols.len() {
            let Some(piv) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
                continue;
            };
            rows.swap(rank, piv);
            for i in 0..rows.len() {
                if i != rank && rows[i] >> bit & 1 == 1 {
                    rows[i] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank as u32
    }

    pub fn row_products(&self) -> Vec<i8> {
        self.entries.iter().map(|r| r.iter().product()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankMethod {
    LocalNormOracle,
    PaperCriterion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub t: u32,
    pub e: u32,
    pub rank: u32,
    pub method: RankMethod,
    pub matrix: SymbolMatrix,
}

/// Rank of the 2-class group of K = F(sqrt d) for F = Q(sqrt m) of odd class
/// number: t - 1 - e, with 2^e the index of the local-norm units in E_F.
pub fn ambiguous_rank(f: &QuadField, d: i64, src: &dyn QuadSource) -> Result<RankCertificate, LocalError> {
    let m = f.m();
    check_extension(m, d)?;
    let cd = src.class_data(m)?;
    if cd.h2 != 1 {
        return Err(LocalError::NotQo { m, h: cd.h });
    }
    let (primes, t) = ramified_primes(f, d)?;
    let cols: Vec<FPlace> = primes
        .iter()
        .filter(|p| p.ramifies_in_k)
        .flat_map(|p| p.places(m))
        .collect();
    debug_assert_eq!(cols.len(), t);
    let eps = src.unit(m)?.value.clone();
    let gens = [QuadElem::from_int(-1, m), eps];
    let entries = gens
        .iter()
        .map(|g| cols.iter().map(|pl| hilbert_quad_local(g, d, pl)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = SymbolMatrix {
        rows: vec!["-1".into(), format!("eps_{m}")],
        cols,
        entries,
    };
    if matrix.row_products().iter().any(|&s| s != 1) {
        return Err(LocalError::Consistency(format!(
            "product formula fails for Q(sqrt {m}), d = {d}: {:?}",
            matrix.entries
        )));
    }
    let e = matrix.f2_rank();
    if t == 0 || (t as u32) < 1 + e {
        return Err(LocalError::Consistency(format!("t = {t}, e = {e} for Q(sqrt {m}), d = {d}")));
    }
    Ok(RankCertificate {
        t: t as u32,
        e,
        rank: t as u32 - 1 - e,
        method: RankMethod::LocalNormOracle,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Memo;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_symbols() {
        assert_eq!(hilbert_qp(&q(-1), &q(-1), QPlace::Real).unwrap(), -1);
        assert_eq!(hilbert_qp(&q(2), &q(7), QPlace::Prime(7)).unwrap(), 1);
        assert_eq!(hilbert_qp(&q(-1), &q(2), QPlace::Prime(2)).unwrap(), 1);
        assert_eq!(hilbert_qp(&q(-1), &q(-1), QPlace::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_qp(&q(3), &q(5), QPlace::Prime(5)).unwrap(), -1);
    }

    #[test]
    fn ramification_counts() {
        let f = QuadField::new(21).unwrap();
        let (ps, t) = ramified_primes(&f, 35).unwrap();
        assert_eq!(t, 3);
        assert!(ps.iter().any(|p| p.rational_prime == 7 && !p.ramifies_in_k));
        // q1 q2 = 1 mod 8, (q1q2/r) = -1: 3*11 = 33, r = 7
        let (_, t) = ramified_primes(&QuadField::new(33).unwrap(), 7).unwrap();
        assert_eq!(t, 3);
        // q1 q2 = 5 mod 8: 3*7 = 21, r = 11 with (21/11) = -1
        let (_, t) = ramified_primes(&QuadField::new(21).unwrap(), 11).unwrap();
        assert_eq!(t, 2);
        assert!(ramified_primes(&f, 21).is_err());
        assert!(ramified_primes(&f, 1).is_err());
    }

    #[test]
    fn corrected_dyadic_values() {
        // F = Q(sqrt 33), q1 = 3, q2 = 11 both 3 mod 8, 2d with d = 7
        let memo = Memo::default();
        let eps = memo.unit(33).unwrap().value.clone();
        for sheet in 0..2 {
            let pl = FPlace::Finite { p: 2, split: SplitType::Split, sheet };
            assert_eq!(hilbert_quad_local(&QuadElem::from_int(-1, 33), 14, &pl).unwrap(), -1);
            assert_eq!(hilbert_quad_local(&eps, 14, &pl).unwrap(), 1);
        }
    }

    #[test]
    fn rank_examples() {
        let memo = Memo::default();
        let c = ambiguous_rank(&QuadField::new(21).unwrap(), 35, &memo).unwrap();
        assert_eq!((c.t, c.e, c.rank), (3, 1, 1));
        assert!(matches!(
            ambiguous_rank(&QuadField::new(21).unwrap(), 21, &memo),
            Err(LocalError::Degenerate { .. })
        ));
        assert!(matches!(
            ambiguous_rank(&QuadField::new(10).unwrap(), 3, &memo),
            Err(LocalError::NotQo { .. })
        ));
    }
}
