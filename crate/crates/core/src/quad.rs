//! Real quadratic fields: element arithmetic, fundamental units, class numbers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, is_perfect_square, is_squarefree};
use crate::error::QuadError;
use crate::forms;

pub const CF_STEP_CAP: usize = 1_000_000;
pub const DEFAULT_DISC_BOUND: i64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self, QuadError> {
        if m <= 1 || !is_squarefree(m) {
            return Err(QuadError::BadRadicand(m));
        }
        Ok(QuadField { m })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn disc(&self) -> i64 {
        if self.m % 4 == 1 {
            self.m
        } else {
            4 * self.m
        }
    }
}

/// `(a + b sqrt m) / den` with `den > 0` and `gcd(a, b, den) = 1`.
/// Algebraic integers have `den` in {1, 2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    pub a: BigInt,
    pub b: BigInt,
    pub den: BigInt,
    pub m: i64,
}

impl QuadElem {
    pub fn new(a: BigInt, b: BigInt, den: BigInt, m: i64) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut e = QuadElem { a, b, den, m };
        e.normalize();
        e
    }

    pub fn from_int(n: impl Into<BigInt>, m: i64) -> Self {
        QuadElem::new(n.into(), BigInt::zero(), BigInt::one(), m)
    }

    pub fn from_rational(q: &BigRational, m: i64) -> Self {
        QuadElem::new(q.numer().clone(), BigInt::zero(), q.denom().clone(), m)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.a = -&self.a;
            self.b = -&self.b;
        }
        let g = self.a.gcd(&self.b).gcd(&self.den);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.den /= &g;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.a.clone(), self.den.clone())
    }

    pub fn irrational_part(&self) -> BigRational {
        BigRational::new(self.b.clone(), self.den.clone())
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            b: -&self.b,
            den: self.den.clone(),
            m: self.m,
        }
    }

    pub fn norm(&self) -> BigRational {
        let n = &self.a * &self.a - BigInt::from(self.m) * &self.b * &self.b;
        BigRational::new(n, &self.den * &self.den)
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(BigInt::from(2) * &self.a, self.den.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    pub fn inv(&self) -> Result<Self, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        let nrm = self.norm();
        let c = self.conj();
        // c / nrm
        Ok(QuadElem::new(
            c.a * nrm.denom(),
            c.b * nrm.denom(),
            c.den * nrm.numer(),
            self.m,
        ))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QuadElem::new(
            &self.a * q.numer(),
            &self.b * q.numer(),
            &self.den * q.denom(),
            self.m,
        )
    }

    /// Sign of the real embedding with `sqrt m > 0`, computed exactly.
    pub fn sign(&self) -> i8 {
        // sign(a + b sqrt m)
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb.is_zero() {
            return sa.to_i8().unwrap();
        }
        if sa.is_zero() || sa == sb {
            return sb.to_i8().unwrap();
        }
        let aa = &self.a * &self.a;
        let bb = BigInt::from(self.m) * &self.b * &self.b;
        if aa > bb {
            sa.to_i8().unwrap()
        } else {
            sb.to_i8().unwrap()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadElem::from_int(1, self.m);
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

    pub fn approx_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        (a + b * (self.m as f64).sqrt()) / d
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.m, other.m, "quadratic elements from different fields");
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.m)
        } else {
            write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.m, self.den)
        }
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        self.check_field(o);
        QuadElem::new(
            &self.a * &o.den + &o.a * &self.den,
            &self.b * &o.den + &o.b * &self.den,
            &self.den * &o.den,
            self.m,
        )
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        self + &(-o)
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -&self.a,
            b: -&self.b,
            den: self.den.clone(),
            m: self.m,
        }
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        self.check_field(o);
        let m = BigInt::from(self.m);
        QuadElem::new(
            &self.a * &o.a + m * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
            &self.den * &o.den,
            self.m,
        )
    }
}

/// Binary/unary operation selector for [`quad_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Mul,
    Conj,
    Norm,
    Inv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadValue {
    Elem(QuadElem),
    Rational(BigRational),
}

pub fn quad_arith(x: &QuadElem, y: Option<&QuadElem>, op: QuadOp) -> Result<QuadValue, QuadError> {
    let need = |y: Option<&QuadElem>| -> Result<QuadElem, QuadError> {
        let y = y.expect("binary operation needs two operands");
        if y.m != x.m {
            return Err(QuadError::FieldMismatch(x.m, y.m));
        }
        Ok(y.clone())
    };
    Ok(match op {
        QuadOp::Add => QuadValue::Elem(x + &need(y)?),
        QuadOp::Mul => QuadValue::Elem(x * &need(y)?),
        QuadOp::Conj => QuadValue::Elem(x.conj()),
        QuadOp::Norm => QuadValue::Rational(x.norm()),
        QuadOp::Inv => QuadValue::Elem(x.inv()?),
    })
}

pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = is_perfect_square(q.numer())?;
    let d = is_perfect_square(q.denom())?;
    Some(BigRational::new(n, d))
}

/// A square root of `u` inside `Q(sqrt m)`, if one exists.
pub fn square_in_quad(u: &QuadElem) -> Option<QuadElem> {
    if u.is_zero() {
        return Some(u.clone());
    }
    let m = u.m;
    let c = rational_sqrt(&u.norm())?;
    let x = u.rational_part();
    let y = u.irrational_part();
    if y.is_zero() {
        if let Some(r) = rational_sqrt(&x) {
            return Some(QuadElem::from_rational(&r, m));
        }
        let r = rational_sqrt(&(&x / BigRational::from_integer(m.into())))?;
        return Some(QuadElem::new(
            BigInt::zero(),
            r.numer().clone(),
            r.denom().clone(),
            m,
        ));
    }
    let two = BigRational::from_integer(2.into());
    for cand in [(&x + &c) / &two, (&x - &c) / &two] {
        if let Some(alpha) = rational_sqrt(&cand) {
            if alpha.is_zero() {
                continue;
            }
            let beta = &y / (&two * &alpha);
            let den = alpha.denom().lcm(beta.denom());
            let root = QuadElem::new(
                alpha.numer() * (&den / alpha.denom()),
                beta.numer() * (&den / beta.denom()),
                den,
                m,
            );
            if &(&root * &root) == u {
                return Some(root);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundUnit {
    pub value: QuadElem,
    pub norm: i8,
    pub cf_period: usize,
}

/// Fundamental unit of the maximal order of `Q(sqrt m)` from the continued
/// fraction of `sqrt m` or `(1 + sqrt m)/2`.
pub fn fundamental_unit(m: i64) -> Result<FundUnit, QuadError> {
    fundamental_unit_capped(m, CF_STEP_CAP)
}

pub fn fundamental_unit_capped(m: i64, cap: usize) -> Result<FundUnit, QuadError> {
    QuadField::new(m)?;
    // omega = (P0 + sqrt D)/Q0
    let d = m;
    let (p0, q0) = if m % 4 == 1 { (1i64, 2i64) } else { (0, 1) };
    let s = (d as f64).sqrt() as i64;
    let s = {
        let mut s = s;
        while s * s > d {
            s -= 1;
        }
        while (s + 1) * (s + 1) <= d {
            s += 1;
        }
        s
    };
    let (mut p, mut q) = (p0, q0);
    // convergents h_k / k_k of omega
    let (mut h_prev, mut h_cur) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k_cur) = (BigInt::one(), BigInt::zero());
    let mut first: Option<(i64, i64)> = None;
    let mut steps = 0usize;
    loop {
        let a = (p + s).div_euclid(q);
        let h_next = BigInt::from(a) * &h_cur + &h_prev;
        let k_next = BigInt::from(a) * &k_cur + &k_prev;
        h_prev = std::mem::replace(&mut h_cur, h_next);
        k_prev = std::mem::replace(&mut k_cur, k_next);
        let p_next = a * q - p;
        let q_next = (d - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        steps += 1;
        if steps > cap {
            return Err(QuadError::CfCap { m, cap });
        }
        match first {
            None => first = Some((p, q)),
            Some(f) if f == (p, q) => break,
            _ => {}
        }
    }
    // h_cur/k_cur is now convergent index `period`; the unit uses index period-1
    let period = steps - 1;
    let (hp, kp) = (h_prev, k_prev);
    let value = if m % 4 == 1 {
        QuadElem::new(BigInt::from(2) * &hp - &kp, kp, BigInt::from(2), m)
    } else {
        QuadElem::new(hp, kp, BigInt::one(), m)
    };
    let nrm = value.norm();
    let norm = if nrm.is_one() {
        1
    } else if nrm == -BigRational::one() {
        -1
    } else {
        unreachable!("continued fraction produced a non-unit for m = {m}")
    };
    debug_assert_eq!(norm, if period % 2 == 0 { 1 } else { -1 });
    Ok(FundUnit {
        value,
        norm,
        cf_period: period,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub m: i64,
    pub h: u64,
    pub h_narrow: u64,
    pub h2: u64,
    pub structure: Option<Vec<u64>>,
}

impl ClassData {
    /// Exponent `k` with `h2 = 2^k`.
    pub fn h2_exp(&self) -> u32 {
        self.h2.trailing_zeros()
    }
}

pub fn two_part(n: u64) -> u64 {
    1u64 << n.trailing_zeros()
}

/// Class numbers from cycles of reduced forms; `h` is the wide class number.
pub fn class_number(m: i64, disc_bound: i64) -> Result<ClassData, QuadError> {
    let field = QuadField::new(m)?;
    let disc = field.disc();
    if disc > disc_bound {
        return Err(QuadError::DiscBound {
            disc,
            bound: disc_bound,
        });
    }
    let unit = fundamental_unit(m)?;
    let h_narrow = forms::narrow_class_number(disc);
    let h = if unit.norm == -1 { h_narrow } else { h_narrow / 2 };
    Ok(ClassData {
        m,
        h,
        h_narrow,
        h2: two_part(h),
        structure: None,
    })
}

/// As [`class_number`], also filling the elementary divisors of the wide
/// 2-class group from composition of cycle representatives.
pub fn class_number_with_structure(m: i64, disc_bound: i64) -> Result<ClassData, QuadError> {
    let mut cd = class_number(m, disc_bound)?;
    let disc = QuadField::new(m)?.disc();
    let group = forms::ClassGroup::new(disc);
    cd.structure = Some(group.wide_two_structure());
    Ok(cd)
}

/// Number of distinct primes dividing the discriminant.
pub fn disc_prime_count(disc: i64) -> usize {
    factor_u64(disc.unsigned_abs()).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qe(a: i64, b: i64, den: i64, m: i64) -> QuadElem {
        QuadElem::new(a.into(), b.into(), den.into(), m)
    }

    #[test]
    fn unit_examples() {
        let u = fundamental_unit(2).unwrap();
        assert_eq!(u.value, qe(1, 1, 1, 2));
        assert_eq!(u.norm, -1);
        assert_eq!(u.cf_period, 1);
        let u = fundamental_unit(5).unwrap();
        assert_eq!(u.value, qe(1, 1, 2, 5));
        assert_eq!(u.norm, -1);
        let u = fundamental_unit(399).unwrap();
        assert_eq!(u.value, qe(20, 1, 1, 399));
        assert_eq!(u.norm, 1);
        let u = fundamental_unit(13).unwrap();
        assert_eq!(u.value, qe(3, 1, 2, 13));
        let u = fundamental_unit(94).unwrap();
        assert_eq!(u.value, qe(2143295, 221064, 1, 94));
    }

    #[test]
    fn bad_radicands() {
        assert!(fundamental_unit(1).is_err());
        assert!(fundamental_unit(12).is_err());
        assert!(class_number(-5, 100).is_err());
    }

    #[test]
    fn arith_examples() {
        let e = qe(1, 1, 1, 2);
        assert_eq!(&e * &e.conj(), QuadElem::from_int(-1, 2));
        assert_eq!(qe(1, 1, 2, 5).norm(), -BigRational::one());
        let x = qe(3, 7, 2, 5);
        assert_eq!(&x * &x.inv().unwrap(), QuadElem::from_int(1, 5));
        assert!(QuadElem::from_int(0, 5).inv().is_err());
        match quad_arith(&x, None, QuadOp::Conj).unwrap() {
            QuadValue::Elem(c) => assert_eq!(c, qe(3, -7, 2, 5)),
            _ => panic!(),
        }
        assert!(quad_arith(&x, Some(&qe(1, 1, 1, 2)), QuadOp::Add).is_err());
    }

    #[test]
    fn square_examples() {
        assert_eq!(square_in_quad(&qe(3, 2, 1, 2)), Some(qe(1, 1, 1, 2)));
        assert_eq!(square_in_quad(&qe(1, 1, 2, 5)), None);
        assert_eq!(square_in_quad(&QuadElem::from_int(9, 7)), Some(QuadElem::from_int(3, 7)));
        // 7 = (sqrt 7)^2
        assert_eq!(square_in_quad(&QuadElem::from_int(7, 7)), Some(qe(0, 1, 1, 7)));
        assert_eq!(square_in_quad(&QuadElem::from_int(3, 7)), None);
    }

    #[test]
    fn class_number_examples() {
        let c = class_number(2, DEFAULT_DISC_BOUND).unwrap();
        assert_eq!((c.h, c.h2), (1, 1));
        let c = class_number(399, DEFAULT_DISC_BOUND).unwrap();
        // disc 1596 = 4*3*7*19: narrow 2-rank 3, wide rank 2
        let cs = class_number_with_structure(399, DEFAULT_DISC_BOUND).unwrap();
        assert_eq!(cs.structure.as_ref().unwrap().len(), 2);
        assert_eq!(c.h_narrow, 2 * c.h);
        // 2rs with r = s = 3 mod 8
        for (r, s) in [(3, 11), (3, 19), (11, 19), (3, 43), (11, 43), (19, 59)] {
            let c = class_number(2 * r * s, DEFAULT_DISC_BOUND).unwrap();
            assert_eq!(c.h2, 2, "2*{r}*{s}");
        }
        for (m, h) in [(10, 2), (15, 2), (79, 3), (82, 4), (226, 8), (229, 3)] {
            assert_eq!(class_number(m, DEFAULT_DISC_BOUND).unwrap().h, h, "h({m})");
        }
        assert!(matches!(
            class_number(10_000_019, DEFAULT_DISC_BOUND),
            Err(QuadError::DiscBound { .. })
        ));
    }
}
