//! Real multiquadratic fields `Q(sqrt m1, ..., sqrt mn)`, n in {2, 3}, in the
//! basis `beta_e = prod_{i in e} sqrt(m_i)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_squarefree, squarefree_part};
use crate::error::MqError;
use crate::quad::{rational_sqrt, QuadElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiQuadField {
    gens: Vec<i64>,
}

impl MultiQuadField {
    pub fn new(gens: &[i64]) -> Result<Self, MqError> {
        let bad = |reason: &str| MqError::Generators {
            gens: gens.to_vec(),
            reason: reason.to_string(),
        };
        if gens.len() < 2 || gens.len() > 3 {
            return Err(bad("need 2 or 3 generators"));
        }
        if gens.iter().any(|&g| g <= 1 || !is_squarefree(g)) {
            return Err(bad("generators must be squarefree integers > 1"));
        }
        let f = MultiQuadField {
            gens: gens.to_vec(),
        };
        let mut classes: Vec<u128> = (1..f.degree()).map(|e| f.class_of_mask(e)).collect();
        if classes.iter().any(|&c| c == 1) {
            return Err(bad("generators are multiplicatively dependent"));
        }
        classes.sort_unstable();
        classes.dedup();
        if classes.len() != f.degree() - 1 {
            return Err(bad("generators are multiplicatively dependent"));
        }
        Ok(f)
    }

    /// Subfield of lower rank, not validated (used for tower recursion).
    fn prefix(&self, k: usize) -> Self {
        MultiQuadField {
            gens: self.gens[..k].to_vec(),
        }
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.gens.len()
    }

    /// `P_e = prod_{i in e} m_i`.
    pub fn mask_product(&self, e: usize) -> u128 {
        (0..self.rank())
            .filter(|i| e >> i & 1 == 1)
            .map(|i| self.gens[i] as u128)
            .product()
    }

    pub fn class_of_mask(&self, e: usize) -> u128 {
        squarefree_part(self.mask_product(e))
    }

    /// Squarefree representatives of the quadratic subfields, ascending.
    pub fn subfield_square_classes(&self) -> Vec<i64> {
        let mut v: Vec<i64> = (1..self.degree())
            .map(|e| self.class_of_mask(e) as i64)
            .collect();
        v.sort_unstable();
        v
    }

    /// Mask `e` and cofactor `t` with `P_e = t^2 m`, so `sqrt m = beta_e / t`.
    pub fn locate(&self, m: i64) -> Option<(usize, BigInt)> {
        (1..self.degree()).find_map(|e| {
            let p = self.mask_product(e);
            if squarefree_part(p) == m as u128 {
                let t = num_integer::Roots::sqrt(&(p / m as u128));
                Some((e, BigInt::from(t)))
            } else {
                None
            }
        })
    }

    pub fn contains_sqrt(&self, m: i64) -> bool {
        m == 1 || self.locate(m).is_some()
    }

    pub fn one(&self) -> MQElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> MQElem {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = BigInt::from(n);
        MQElem::new(self.clone(), c, BigInt::one())
    }

    pub fn from_rational(&self, q: &BigRational) -> MQElem {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = q.numer().clone();
        MQElem::new(self.clone(), c, q.denom().clone())
    }

    pub fn embed_quad(&self, u: &QuadElem) -> Option<MQElem> {
        let (e, t) = self.locate(u.m)?;
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = &u.a * &t;
        c[e] = u.b.clone();
        Some(MQElem::new(self.clone(), c, &u.den * &t))
    }

    /// Image of an element of a subfield given by its own generators.
    pub fn embed_from(&self, x: &MQElem) -> Option<MQElem> {
        let sub = &x.field;
        let mut images = Vec::with_capacity(sub.rank());
        for &g in sub.gens() {
            let (e, t) = self.locate(g)?;
            let mut c = vec![BigInt::zero(); self.degree()];
            c[e] = BigInt::one();
            images.push(MQElem::new(self.clone(), c, t));
        }
        let mut acc = self.from_int(0);
        for f in 0..sub.degree() {
            if x.coords[f].is_zero() {
                continue;
            }
            let mut term = self.from_int(1);
            for (j, im) in images.iter().enumerate() {
                if f >> j & 1 == 1 {
                    term = &term * im;
                }
            }
            let mut c = term.coords;
            for v in c.iter_mut() {
                *v *= &x.coords[f];
            }
            acc = &acc + &MQElem::new(self.clone(), c, term.den * &x.den);
        }
        Some(acc)
    }

    /// The biquadratic field with a given pair of generators, checked to be a
    /// subfield.
    pub fn quartic_subfield(&self, a: i64, b: i64) -> Result<MultiQuadField, MqError> {
        let k = MultiQuadField::new(&[a, b])?;
        if !(self.contains_sqrt(a) && self.contains_sqrt(b)) {
            return Err(MqError::Generators {
                gens: vec![a, b],
                reason: "not a subfield".into(),
            });
        }
        Ok(k)
    }
}

/// Element `(sum_e coords[e] beta_e) / den`, `den > 0`, content-reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MQElem {
    pub field: MultiQuadField,
    pub coords: Vec<BigInt>,
    pub den: BigInt,
}

impl MQElem {
    pub fn new(field: MultiQuadField, coords: Vec<BigInt>, den: BigInt) -> Self {
        assert_eq!(coords.len(), field.degree());
        assert!(!den.is_zero());
        let mut x = MQElem { field, coords, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.coords.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.coords {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.coords.iter_mut() {
                *c /= &g;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn coord(&self, e: usize) -> BigRational {
        BigRational::new(self.coords[e].clone(), self.den.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Galois conjugate negating `sqrt m_i` for each bit `i` of `s`.
    pub fn conj(&self, s: usize) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(e, c)| {
                if (e & s).count_ones() % 2 == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        MQElem {
            field: self.field.clone(),
            coords,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let coords = self.coords.iter().map(|c| c * q.numer()).collect();
        MQElem::new(self.field.clone(), coords, &self.den * q.denom())
    }

    /// Returns `(c, N)` with `c * self = N`, where `N` is the absolute norm.
    fn cofactor_norm(&self) -> (MQElem, BigRational) {
        let mut c = self.field.one();
        let mut p = self.clone();
        for i in (0..self.field.rank()).rev() {
            let t = p.conj(1 << i);
            c = &c * &t;
            p = &p * &t;
        }
        debug_assert!(p.is_rational());
        let n = p.coord(0);
        (c, n)
    }

    pub fn norm(&self) -> BigRational {
        self.cofactor_norm().1
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (c, n) = self.cofactor_norm();
        Some(c.scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Bit length of the largest coordinate numerator.
    pub fn height_bits(&self) -> u64 {
        self.coords.iter().map(|c| c.bits()).max().unwrap_or(0) + self.den.bits()
    }

    /// Split `x + y sqrt(g)` over the subfield generated by all but the last generator.
    fn split_top(&self) -> (MQElem, MQElem) {
        let k = self.field.rank();
        let half = 1 << (k - 1);
        let sub = self.field.prefix(k - 1);
        (
            MQElem::new(sub.clone(), self.coords[..half].to_vec(), self.den.clone()),
            MQElem::new(sub, self.coords[half..].to_vec(), self.den.clone()),
        )
    }
}

fn join_top(field: &MultiQuadField, x: &MQElem, y: &MQElem) -> MQElem {
    let den = x.den.lcm(&y.den);
    let fx = &den / &x.den;
    let fy = &den / &y.den;
    let mut coords: Vec<BigInt> = x.coords.iter().map(|c| c * &fx).collect();
    coords.extend(y.coords.iter().map(|c| c * &fy));
    MQElem::new(field.clone(), coords, den)
}

impl Add for &MQElem {
    type Output = MQElem;
    fn add(self, o: &MQElem) -> MQElem {
        assert_eq!(self.field, o.field, "elements from different fields");
        let den = self.den.lcm(&o.den);
        let fa = &den / &self.den;
        let fb = &den / &o.den;
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        MQElem::new(self.field.clone(), coords, den)
    }
}

impl Neg for &MQElem {
    type Output = MQElem;
    fn neg(self) -> MQElem {
        MQElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &MQElem {
    type Output = MQElem;
    fn sub(self, o: &MQElem) -> MQElem {
        self + &(-o)
    }
}

impl Mul for &MQElem {
    type Output = MQElem;
    fn mul(self, o: &MQElem) -> MQElem {
        assert_eq!(self.field, o.field, "elements from different fields");
        let f = &self.field;
        let deg = f.degree();
        let mut out = vec![BigInt::zero(); deg];
        for e in 0..deg {
            if self.coords[e].is_zero() {
                continue;
            }
            for g in 0..deg {
                if o.coords[g].is_zero() {
                    continue;
                }
                let k = f.mask_product(e & g);
                let mut t = &self.coords[e] * &o.coords[g];
                if k != 1 {
                    t *= BigInt::from(k);
                }
                out[e ^ g] += t;
            }
        }
        MQElem::new(f.clone(), out, &self.den * &o.den)
    }
}

fn sqrt_rec(u: &MQElem) -> Option<MQElem> {
    let field = &u.field;
    if field.rank() == 0 {
        let r = rational_sqrt(&u.coord(0))?;
        return Some(field.from_rational(&r));
    }
    if u.is_zero() {
        return Some(u.clone());
    }
    let g = *field.gens.last().unwrap();
    let (x, y) = u.split_top();
    let sub = x.field.clone();
    let zero = sub.from_int(0);
    if y.is_zero() {
        if let Some(r) = sqrt_rec(&x) {
            return Some(join_top(field, &r, &zero));
        }
        let xg = x.scale(&BigRational::new(BigInt::one(), BigInt::from(g)));
        let r = sqrt_rec(&xg)?;
        return Some(join_top(field, &zero, &r));
    }
    let n = &(&x * &x) - &(&(&y * &y) * &sub.from_int(g));
    let c = sqrt_rec(&n)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for w in [(&x + &c).scale(&half), (&x - &c).scale(&half)] {
        let Some(alpha) = sqrt_rec(&w) else { continue };
        if alpha.is_zero() {
            continue;
        }
        let beta = &y * &alpha.scale(&BigRational::from_integer(2.into())).inv()?;
        let root = join_top(field, &alpha, &beta);
        if &(&root * &root) == u {
            return Some(root);
        }
    }
    None
}

/// Exact square root by relative norm descent through the tower
/// `Q ⊂ Q(sqrt m1) ⊂ ... ⊂ K`.
pub fn mq_square_test(u: &MQElem) -> Option<MQElem> {
    sqrt_rec(u)
}

/// Fixed-point approximations of the real embeddings.
struct Embeddings {
    /// `sqrt(P_e) * 2^bits`, floored
    roots: Vec<BigInt>,
}

impl Embeddings {
    fn new(f: &MultiQuadField, bits: u64) -> Self {
        let roots = (0..f.degree())
            .map(|e| num_integer::Roots::sqrt(&(BigInt::from(f.mask_product(e)) << (2 * bits))))
            .collect();
        Embeddings { roots }
    }

    /// `den * sigma_s(u) * 2^bits` with an absolute error bound.
    fn eval(&self, u: &MQElem, s: usize) -> (BigInt, BigInt) {
        let mut acc = BigInt::zero();
        let mut err = BigInt::one();
        for (e, c) in u.coords.iter().enumerate() {
            let t = c * &self.roots[e];
            if (e & s).count_ones() % 2 == 1 {
                acc -= t;
            } else {
                acc += t;
            }
            err += c.abs();
        }
        (acc, err)
    }
}

/// Square test by numerical sign-pattern reconstruction: evaluate all real
/// embeddings, try every sign pattern of the embedded roots, round the
/// coordinates to the bounded denominator and verify exactly.
pub fn mq_square_test_numeric(u: &MQElem, max_bits: u32) -> Result<Option<MQElem>, MqError> {
    let f = &u.field;
    let n = f.rank();
    let deg = f.degree();
    let mut bits = 256u64;
    let mut clean_misses = 0;
    while bits <= max_bits as u64 {
        let emb = Embeddings::new(f, bits);
        let mut vals = Vec::with_capacity(deg);
        let mut undetermined = false;
        let mut worst_err = BigInt::zero();
        for s in 0..deg {
            let (v, err) = emb.eval(u, s);
            if v.abs() <= err {
                undetermined = true;
                break;
            }
            if v.is_negative() {
                return Ok(None);
            }
            if err > worst_err {
                worst_err = err;
            }
            vals.push(v);
        }
        if undetermined {
            clean_misses = 0;
            bits *= 2;
            continue;
        }
        // r_s ~ sqrt(sigma_s(u)) * 2^bits
        let roots: Vec<BigInt> = vals
            .iter()
            .map(|v| num_integer::Roots::sqrt(&((v << bits) / &u.den)))
            .collect();
        let min_root = roots.iter().min().unwrap().clone();
        let max_root = roots.iter().max().unwrap().clone();
        if min_root.is_zero() {
            clean_misses = 0;
            bits *= 2;
            continue;
        }
        // error of each r_s in units of 2^-bits
        let root_err: BigInt = ((&worst_err << bits) / (&u.den * &min_root * 2u32)) + 2u32;
        let pmax = BigInt::from(f.mask_product(deg - 1));
        let sqrt_pmax = num_integer::Roots::sqrt(&pmax) + 1u32;
        let coord_err = &u.den
            * BigInt::from(deg as u64)
            * (&sqrt_pmax * &root_err + &max_root / (BigInt::one() << bits) + 1u32);
        // coordinate error (scaled by 2^bits) must stay below a quarter
        let precise = (&coord_err << 2u32) < (BigInt::one() << bits);
        for pattern in 0..(1usize << (deg - 1)) {
            let sign = |s: usize| -> bool { s != 0 && (pattern >> (s - 1)) & 1 == 1 };
            let mut coords = Vec::with_capacity(deg);
            let mut dens = Vec::with_capacity(deg);
            for e in 0..deg {
                let mut acc = BigInt::zero();
                for (s, r) in roots.iter().enumerate() {
                    let neg = ((e & s).count_ones() % 2 == 1) ^ sign(s);
                    if neg {
                        acc -= r;
                    } else {
                        acc += r;
                    }
                }
                // Y_e = den * sqrt(P_e) * acc / 2^(2 bits), coordinate y_e = Y_e / (den 2^n P_e)
                let num = &u.den * &emb.roots[e] * acc;
                let shift = 2 * bits;
                let y = (num + (BigInt::one() << (shift - 1))) >> shift;
                coords.push(y);
                dens.push(&u.den * BigInt::from(1u64 << n) * BigInt::from(f.mask_product(e)));
            }
            let common = dens.iter().fold(BigInt::one(), |a, d| a.lcm(d));
            let cs = coords
                .iter()
                .zip(&dens)
                .map(|(c, d)| c * (&common / d))
                .collect();
            let cand = MQElem::new(f.clone(), cs, common);
            if &(&cand * &cand) == u {
                return Ok(Some(cand));
            }
        }
        if precise {
            clean_misses += 1;
            if clean_misses >= 2 {
                return Ok(None);
            }
        } else {
            clean_misses = 0;
        }
        bits *= 2;
    }
    Err(MqError::PrecisionExhausted { bits: max_bits })
}

/// `K(sqrt 2)` for a biquadratic `K` not containing `sqrt 2`.
pub fn first_layer(k: &MultiQuadField) -> Result<MultiQuadField, MqError> {
    if k.rank() != 2 {
        return Err(MqError::NotBiquadratic);
    }
    if k.contains_sqrt(2) {
        return Err(MqError::ContainsSqrt2);
    }
    MultiQuadField::new(&[k.gens[0], k.gens[1], 2])
}

pub fn is_one_or_minus_one(x: &MQElem) -> bool {
    x.is_rational() && x.den.is_one() && x.coords[0].abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::fundamental_unit;

    fn field(g: &[i64]) -> MultiQuadField {
        MultiQuadField::new(g).unwrap()
    }

    #[test]
    fn square_classes() {
        assert_eq!(field(&[21, 35]).subfield_square_classes(), vec![15, 21, 35]);
        assert_eq!(field(&[2, 5]).subfield_square_classes(), vec![2, 5, 10]);
        assert_eq!(field(&[399, 2]).subfield_square_classes(), vec![2, 399, 798]);
        assert_eq!(
            field(&[3, 5, 2]).subfield_square_classes(),
            vec![2, 3, 5, 6, 10, 15, 30]
        );
        assert!(MultiQuadField::new(&[6, 10, 15]).is_err());
        assert!(MultiQuadField::new(&[3, 12]).is_err());
        assert!(MultiQuadField::new(&[3]).is_err());
    }

    #[test]
    fn first_layer_rules() {
        assert_eq!(first_layer(&field(&[21, 35])).unwrap().gens(), &[21, 35, 2]);
        assert_eq!(first_layer(&field(&[2, 5])), Err(MqError::ContainsSqrt2));
        assert_eq!(first_layer(&field(&[6, 3])), Err(MqError::ContainsSqrt2));
        assert_eq!(first_layer(&field(&[6, 5, 2])), Err(MqError::NotBiquadratic));
    }

    #[test]
    fn arithmetic_in_basis() {
        let k = field(&[21, 35]);
        // sqrt21 * sqrt35 = 7 sqrt15 lives at mask 3
        let s15 = k.embed_quad(&QuadElem::new(0.into(), 1.into(), 1.into(), 15)).unwrap();
        let sq = &s15 * &s15;
        assert_eq!(sq, k.from_int(15));
        let x = MQElem::new(k.clone(), vec![3.into(), 1.into(), (-2).into(), 5.into()], 7.into());
        assert_eq!(&x * &x.inv().unwrap(), k.one());
    }

    #[test]
    fn squares_biquadratic() {
        let k = field(&[2, 5]);
        let e2 = k.embed_quad(&fundamental_unit(2).unwrap().value).unwrap();
        let sq = &e2 * &e2;
        let r = mq_square_test(&sq).unwrap();
        assert!(r == e2 || r == -&e2);
        assert_eq!(mq_square_test(&e2), None);
        let r = mq_square_test_numeric(&sq, 1 << 14).unwrap().unwrap();
        assert!(r == e2 || r == -&e2);
        // 2 + sqrt 2 ... not a square; 5 = sqrt5^2 is
        assert!(mq_square_test(&k.from_int(5)).is_some());
        assert!(mq_square_test(&k.from_int(10)).is_some());
        assert!(mq_square_test(&k.from_int(3)).is_none());
        assert!(mq_square_test_numeric(&k.from_int(3), 1 << 14).unwrap().is_none());
    }

    #[test]
    fn squares_in_compositum() {
        // sqrt(2 + sqrt 3) = (sqrt 2 + sqrt 6)/2 lies in Q(sqrt2, sqrt3)
        let k = field(&[2, 3]);
        let u = k.embed_quad(&QuadElem::new(2.into(), 1.into(), 1.into(), 3)).unwrap();
        let r = mq_square_test(&u).unwrap();
        assert_eq!(&r * &r, u);
        let r2 = mq_square_test_numeric(&u, 1 << 14).unwrap().unwrap();
        assert_eq!(&r2 * &r2, u);
    }

    #[test]
    fn embedding_of_subfields() {
        let big = field(&[21, 35, 2]);
        let sub = field(&[15, 2]);
        let x = MQElem::new(sub.clone(), vec![1.into(), 2.into(), 3.into(), 4.into()], 5.into());
        let y = MQElem::new(sub, vec![(-1).into(), 0.into(), 7.into(), 1.into()], 1.into());
        let ex = big.embed_from(&x).unwrap();
        let ey = big.embed_from(&y).unwrap();
        assert_eq!(big.embed_from(&(&x * &y)).unwrap(), &ex * &ey);
    }
}
