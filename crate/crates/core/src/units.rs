//! Unit groups of multiquadratic fields and Kuroda's class number formula.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::RwLock;
use serde::Serialize;

use crate::arith::{is_prime_u64, legendre, sqrt_mod_prime};
use crate::error::{MqError, QuadError};
use crate::multiquad::{mq_square_test, MQElem, MultiQuadField};
use crate::quad::{class_number, fundamental_unit, ClassData, FundUnit, DEFAULT_DISC_BOUND};

/// Source of quadratic-field data (fundamental units and class numbers).
pub trait QuadSource: Send + Sync {
    fn unit(&self, m: i64) -> Result<Arc<FundUnit>, QuadError>;
    fn class_data(&self, m: i64) -> Result<ClassData, QuadError>;
}

/// In-memory memoizing source.
pub struct Memo {
    disc_bound: i64,
    units: RwLock<HashMap<i64, Arc<FundUnit>>>,
    classes: RwLock<HashMap<i64, ClassData>>,
}

impl Memo {
    pub fn new(disc_bound: i64) -> Self {
        Memo {
            disc_bound,
            units: RwLock::new(HashMap::new()),
            classes: RwLock::new(HashMap::new()),
        }
    }

    pub fn disc_bound(&self) -> i64 {
        self.disc_bound
    }

    pub fn insert_unit(&self, m: i64, u: FundUnit) {
        self.units.write().insert(m, Arc::new(u));
    }

    pub fn insert_class(&self, c: ClassData) {
        self.classes.write().insert(c.m, c);
    }
}

impl Default for Memo {
    fn default() -> Self {
        Memo::new(DEFAULT_DISC_BOUND)
    }
}

impl QuadSource for Memo {
    fn unit(&self, m: i64) -> Result<Arc<FundUnit>, QuadError> {
        if let Some(u) = self.units.read().get(&m) {
            return Ok(u.clone());
        }
        let u = Arc::new(fundamental_unit(m)?);
        self.units.write().insert(m, u.clone());
        Ok(u)
    }

    fn class_data(&self, m: i64) -> Result<ClassData, QuadError> {
        if let Some(c) = self.classes.read().get(&m) {
            return Ok(c.clone());
        }
        let c = class_number(m, self.disc_bound)?;
        if !self.units.read().contains_key(&m) {
            // class_number computed the unit internally; keep the cache warm
            self.unit(m)?;
        }
        self.classes.write().insert(m, c.clone());
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    SubfieldUnit { m: i64 },
    /// Square root adjoined while saturating at the named field.
    SquareRoot { over: Vec<i64> },
}

#[derive(Clone, Debug)]
pub struct Unit {
    pub value: MQElem,
    /// Exponents relative to the quadratic fundamental units, in the order of
    /// `UnitSystem::subfields`.
    pub exps: Vec<BigRational>,
    pub label: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct UnitSystem {
    pub field: MultiQuadField,
    pub subfields: Vec<i64>,
    pub units: Vec<Unit>,
    pub q_index: u64,
}

impl UnitSystem {
    pub fn q_exp(&self) -> u32 {
        self.q_index.trailing_zeros()
    }

    /// Labels of the adjoined square roots.
    pub fn root_labels(&self) -> Vec<String> {
        self.units
            .iter()
            .filter(|u| matches!(u.provenance, Provenance::SquareRoot { .. }))
            .map(|u| u.label.clone())
            .collect()
    }

    /// Nonzero determinant of the exponent matrix: the generators are
    /// multiplicatively independent modulo torsion.
    pub fn exponent_determinant(&self) -> BigRational {
        determinant(self.units.iter().map(|u| u.exps.clone()).collect())
    }
}

fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Coordinates `c` with `sum_k c_k basis_k = v`.
fn solve(basis: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    let n = basis.len();
    // augmented rows: equation per coordinate i: sum_k basis[k][i] c_k = v[i]
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|k| basis[k][i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("singular unit lattice");
        m.swap(piv, col);
        let p = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

/// Quadratic characters at primes splitting completely, one per
/// (prime, embedding) pair, used to discard non-squares before exact tests.
struct Characters {
    field: MultiQuadField,
    /// per prime: (ell, images of beta_e for every embedding)
    places: Vec<(u64, Vec<Vec<u64>>)>,
}

impl Characters {
    fn new(field: &MultiQuadField, count: usize) -> Self {
        let deg = field.degree();
        let mut places = Vec::new();
        let mut ell = 101u64;
        while places.len() < count {
            ell += 2;
            if !is_prime_u64(ell) {
                continue;
            }
            if field
                .gens()
                .iter()
                .any(|&g| legendre(g, ell) != 1)
            {
                continue;
            }
            let roots: Vec<u64> = field
                .gens()
                .iter()
                .map(|&g| sqrt_mod_prime(g.rem_euclid(ell as i64) as u64, ell).unwrap())
                .collect();
            let mut per_emb = Vec::with_capacity(deg);
            for s in 0..deg {
                let imgs = (0..deg)
                    .map(|e| {
                        let mut v = 1u64;
                        for (i, &r) in roots.iter().enumerate() {
                            if e >> i & 1 == 1 {
                                let r = if s >> i & 1 == 1 { ell - r } else { r };
                                v = v * r % ell;
                            }
                        }
                        v
                    })
                    .collect();
                per_emb.push(imgs);
            }
            places.push((ell, per_emb));
        }
        Characters {
            field: field.clone(),
            places,
        }
    }

    /// Bit vector of character values (bit set = non-residue). `None` if the
    /// element is not a unit at one of the chosen places.
    fn eval(&self, x: &MQElem) -> Option<u128> {
        debug_assert_eq!(x.field, self.field);
        let mut bits = 0u128;
        let mut k = 0;
        for (ell, per_emb) in &self.places {
            let l = BigInt::from(*ell);
            let red: Vec<u64> = x
                .coords
                .iter()
                .map(|c| {
                    let r = c % &l;
                    let r = if r.is_negative() { r + &l } else { r };
                    r.to_u64().unwrap()
                })
                .collect();
            let den = {
                let r = &x.den % &l;
                r.to_u64().unwrap()
            };
            if den == 0 {
                return None;
            }
            for imgs in per_emb {
                let mut v = 0u64;
                for (c, w) in red.iter().zip(imgs) {
                    v = (v + (*c as u128 * *w as u128 % *ell as u128) as u64) % ell;
                }
                let v = (v as u128 * den as u128 % *ell as u128) as i64;
                match legendre(v, *ell) {
                    0 => return None,
                    -1 => bits |= 1 << k,
                    _ => {}
                }
                k += 1;
            }
        }
        Some(bits)
    }
}

/// Subsets of `gens` (bit 0 = -1, bit j = gens[j-1]) whose product is a
/// square, found in Gray-code order with greedy adjunction: each new root is
/// independent, modulo squares, of the roots found before it.
fn square_subsets(field: &MultiQuadField, gens: &[MQElem]) -> Result<Vec<(u32, MQElem)>, MqError> {
    let n = gens.len() + 1;
    let deg = field.degree();
    let chars = Characters::new(field, 128 / deg);
    let mut vecs = Vec::with_capacity(n);
    vecs.push(chars.eval(&field.from_int(-1)).unwrap());
    for g in gens {
        vecs.push(
            chars
                .eval(g)
                .ok_or_else(|| MqError::Consistency("unit vanishes modulo a split prime".into()))?,
        );
    }
    let mut found: Vec<(u32, MQElem)> = Vec::new();
    let mut span: Vec<u32> = Vec::new(); // echelon basis over F2
    let reduce = |span: &[u32], mut v: u32| -> u32 {
        for &b in span {
            let top = 1u32 << (31 - b.leading_zeros());
            if v & top != 0 {
                v ^= b;
            }
        }
        v
    };
    let mut acc = 0u128;
    let mut mask = 0u32;
    for i in 1u32..(1 << n) {
        let bit = i.trailing_zeros() as usize;
        acc ^= vecs[bit];
        mask ^= 1 << bit;
        if acc != 0 || reduce(&span, mask) == 0 {
            continue;
        }
        let mut prod = if mask & 1 == 1 {
            field.from_int(-1)
        } else {
            field.one()
        };
        for (j, g) in gens.iter().enumerate() {
            if mask >> (j + 1) & 1 == 1 {
                prod = &prod * g;
            }
        }
        if let Some(root) = mq_square_test(&prod) {
            let r = reduce(&span, mask);
            span.push(r);
            span.sort_by_key(|b| std::cmp::Reverse(31 - b.leading_zeros()));
            found.push((mask, root));
        }
    }
    Ok(found)
}

fn insert_root(basis: &mut [Unit], root: Unit) -> bool {
    let bexps: Vec<Vec<BigRational>> = basis.iter().map(|u| u.exps.clone()).collect();
    let c = solve(&bexps, &root.exps);
    let two = BigRational::from_integer(2.into());
    debug_assert!(c.iter().all(|x| (x * &two).is_integer()));
    match c.iter().position(|x| !x.is_integer()) {
        Some(p) => {
            basis[p] = root;
            true
        }
        None => false,
    }
}

fn half_sum(units: &[&Unit]) -> Vec<BigRational> {
    let n = units[0].exps.len();
    let half = BigRational::new(1.into(), 2.into());
    (0..n)
        .map(|i| units.iter().map(|u| u.exps[i].clone()).sum::<BigRational>() * &half)
        .collect()
}

fn root_label(units: &[&Unit]) -> String {
    let inner: Vec<&str> = units.iter().map(|u| u.label.as_str()).collect();
    format!("sqrt({})", inner.join("*"))
}

/// Saturates `basis` (units of `field`) to the full unit group of `field`,
/// returning the roots adjoined.
fn saturate(field: &MultiQuadField, basis: &mut Vec<Unit>) -> Result<u32, MqError> {
    let gens: Vec<MQElem> = basis.iter().map(|u| u.value.clone()).collect();
    let found = square_subsets(field, &gens)?;
    let snapshot: Vec<Unit> = basis.clone();
    let mut added = 0;
    for (mask, root) in found {
        let members: Vec<&Unit> = (0..snapshot.len())
            .filter(|j| mask >> (j + 1) & 1 == 1)
            .map(|j| &snapshot[j])
            .collect();
        let unit = Unit {
            value: root,
            exps: half_sum(&members),
            label: root_label(&members),
            provenance: Provenance::SquareRoot {
                over: field.gens().to_vec(),
            },
        };
        if insert_root(basis, unit) {
            added += 1;
        }
    }
    Ok(added)
}

fn quadratic_units(
    field: &MultiQuadField,
    subfields: &[i64],
    src: &dyn QuadSource,
) -> Result<Vec<Unit>, MqError> {
    let r = subfields.len();
    subfields
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let eps = src.unit(m)?;
            let mut exps = vec![BigRational::zero(); r];
            exps[i] = BigRational::one();
            Ok(Unit {
                value: field.embed_quad(&eps.value).expect("subfield"),
                exps,
                label: format!("eps{m}"),
                provenance: Provenance::SubfieldUnit { m },
            })
        })
        .collect()
}

/// Quartic subfields of a triquadratic field containing its last generator.
pub fn quartic_chain(field: &MultiQuadField) -> Vec<MultiQuadField> {
    let g = field.gens();
    let last = g[2];
    [g[0], g[1], field.class_of_mask(0b011) as i64]
        .iter()
        .map(|&x| MultiQuadField::new(&[last, x]).expect("quartic subfield"))
        .collect()
}

/// A fundamental system of units of `field` and the unit index
/// `q = [E : prod E_{k_i}]`.
pub fn wada_unit_system(field: &MultiQuadField, src: &dyn QuadSource) -> Result<UnitSystem, MqError> {
    let subfields = field.subfield_square_classes();
    let mut basis = quadratic_units(field, &subfields, src)?;
    let mut roots = 0u32;
    if field.rank() == 3 {
        for k in quartic_chain(field) {
            let ksub = k.subfield_square_classes();
            let mut kbasis = quadratic_units(&k, &ksub, src)?;
            let pos: Vec<usize> = ksub
                .iter()
                .map(|m| subfields.iter().position(|x| x == m).unwrap())
                .collect();
            let before: Vec<String> = kbasis.iter().map(|u| u.label.clone()).collect();
            saturate(&k, &mut kbasis)?;
            for u in kbasis {
                if before.contains(&u.label) {
                    continue;
                }
                let mut exps = vec![BigRational::zero(); subfields.len()];
                for (j, &p) in pos.iter().enumerate() {
                    exps[p] = u.exps[j].clone();
                }
                let lifted = Unit {
                    value: field.embed_from(&u.value).expect("quartic subfield"),
                    exps,
                    label: u.label,
                    provenance: u.provenance,
                };
                if insert_root(&mut basis, lifted) {
                    roots += 1;
                }
            }
        }
    }
    roots += saturate(field, &mut basis)?;
    Ok(UnitSystem {
        field: field.clone(),
        subfields,
        units: basis,
        q_index: 1u64 << roots,
    })
}

static KURODA_CALLS: AtomicU64 = AtomicU64::new(0);
static KURODA_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// `(evaluations, non-integral results)` of [`kuroda_h2`] in this process.
pub fn kuroda_stats() -> (u64, u64) {
    (
        KURODA_CALLS.load(Ordering::Relaxed),
        KURODA_VIOLATIONS.load(Ordering::Relaxed),
    )
}

/// Exponent `v` of the Kuroda divisor `2^v` for a real field of rank `n`.
pub fn kuroda_divisor_exp(n: usize) -> u32 {
    (n as u32) * ((1u32 << (n - 1)) - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct KurodaValue {
    pub h2: u64,
    pub q_index: u64,
    pub v: u32,
    pub subfield_h2: Vec<(i64, u64)>,
    /// odd part of the class number
    pub h_odd: u64,
}

pub fn kuroda_from_parts(
    n: usize,
    q_index: u64,
    subfield: &[ClassData],
) -> Result<KurodaValue, MqError> {
    KURODA_CALLS.fetch_add(1, Ordering::Relaxed);
    let v = kuroda_divisor_exp(n);
    let num_exp: u32 = q_index.trailing_zeros() + subfield.iter().map(|c| c.h2_exp()).sum::<u32>();
    if num_exp < v || !q_index.is_power_of_two() {
        KURODA_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        return Err(MqError::NonIntegral { num_exp, v });
    }
    let h_odd = subfield.iter().map(|c| c.h / c.h2).product();
    Ok(KurodaValue {
        h2: 1u64 << (num_exp - v),
        q_index,
        v,
        subfield_h2: subfield.iter().map(|c| (c.m, c.h2)).collect(),
        h_odd,
    })
}

/// 2-part of the class number of a real multiquadratic field via Kuroda.
pub fn kuroda_h2(field: &MultiQuadField, src: &dyn QuadSource) -> Result<KurodaValue, MqError> {
    let us = wada_unit_system(field, src)?;
    kuroda_with_units(field, &us, src)
}

pub fn kuroda_with_units(
    field: &MultiQuadField,
    us: &UnitSystem,
    src: &dyn QuadSource,
) -> Result<KurodaValue, MqError> {
    let cds = field
        .subfield_square_classes()
        .into_iter()
        .map(|m| src.class_data(m))
        .collect::<Result<Vec<_>, _>>()?;
    kuroda_from_parts(field.rank(), us.q_index, &cds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(g: &[i64]) -> MultiQuadField {
        MultiQuadField::new(g).unwrap()
    }

    #[test]
    fn divisor_constants() {
        assert_eq!(kuroda_divisor_exp(2), 2);
        assert_eq!(kuroda_divisor_exp(3), 9);
    }

    #[test]
    fn q_index_of_q_sqrt2_sqrt3() {
        // sqrt(eps3) = (1 + sqrt 3)/sqrt 2 and sqrt(eps2 eps3 eps6) lie in k
        let memo = Memo::default();
        let k = field(&[2, 3]);
        let us = wada_unit_system(&k, &memo).unwrap();
        assert_eq!(us.q_index, 4);
        assert!(!us.exponent_determinant().is_zero());
        assert_eq!(kuroda_h2(&k, &memo).unwrap().h2, 1);
    }

    #[test]
    fn small_biquadratic_indices() {
        let memo = Memo::default();
        // Q(sqrt2, sqrt5): h = 1 while h(10) = 2, forcing q = 2
        assert_eq!(wada_unit_system(&field(&[2, 5]), &memo).unwrap().q_index, 2);
        assert_eq!(kuroda_h2(&field(&[2, 5]), &memo).unwrap().h2, 1);
        for g in [[3, 5], [5, 13], [2, 7], [3, 7], [21, 35], [6, 10]] {
            let us = wada_unit_system(&field(&g), &memo).unwrap();
            assert!([1, 2, 4].contains(&us.q_index), "{g:?}");
            let h = kuroda_h2(&field(&g), &memo).unwrap();
            assert!(h.h2 >= 1);
        }
    }

    #[test]
    fn triquadratic_index_bounds() {
        // q(Q(sqrt2, sqrt3, sqrt7)) = 2^8: only h(42) = 2 among the seven
        // subfields, so Kuroda integrality alone forces q >= 256.
        let memo = Memo::default();
        for (g, q) in [([3, 5, 2], 64), ([7, 3, 2], 256), ([21, 35, 2], 32)] {
            let f = field(&g);
            let us = wada_unit_system(&f, &memo).unwrap();
            assert_eq!(us.q_index, q, "{g:?}");
            assert!((1u64 << 14) % us.q_index == 0);
            assert_eq!(us.exponent_determinant().abs(), BigRational::new(1.into(), q.into()));
            assert!(kuroda_h2(&f, &memo).is_ok());
        }
    }
}
