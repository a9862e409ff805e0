//! Integer primitives: factorization, squarefree tests, residue symbols.

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization `n = sign * prod p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n: BigInt,
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= BigInt::from(p.pow(*e));
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn primes(&self) -> Vec<BigUint> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mut x = pow_mod(a % n, d, n);
    if x == 1 || x == n - 1 || a % n == 0 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for all `u64` (fixed witness set of Jaeschke/Sinclair).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022]
        .iter()
        .all(|&a| miller_rabin_u64(n, a))
}

fn miller_rabin_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Primality for arbitrary size. Deterministic below 3.3e24 (first 13 prime
/// bases); beyond that the extra bases make a false positive astronomically
/// unlikely but not excluded.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    const BASES: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for b in BASES {
        if (n % b).is_zero() {
            return false;
        }
    }
    BASES
        .iter()
        .all(|&b| miller_rabin_big(n, &BigUint::from(b)))
}

fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split_cofactor(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    // rho stalls on prime powers; peel exact k-th roots first
    for k in (2..=n.bits() as u32).rev() {
        let r = n.nth_root(k);
        if r.pow(k) == n {
            for _ in 0..k {
                split_cofactor(r.clone(), out);
            }
            return;
        }
    }
    let d = match n.to_u64() {
        Some(v) => BigUint::from(rho_u64(v)),
        None => rho_big(&n),
    };
    let q = &n / &d;
    split_cofactor(d, out);
    split_cofactor(q, out);
}

/// Exact prime factorization: trial division to 10^6, then rho on the cofactor.
pub fn factor(n: &BigInt) -> Factorization {
    assert!(!n.is_zero(), "factor of zero");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, factors: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = factors.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            factors.push((p, 1));
        }
    };
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            push(pb.clone(), &mut factors);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut big = Vec::new();
    split_cofactor(rest, &mut big);
    for q in big {
        push(q, &mut factors);
    }
    factors.sort();
    Factorization {
        n: n.clone(),
        sign,
        factors,
    }
}

/// Fast path for machine integers, returning `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut p = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while p * p <= n && p <= TRIAL_LIMIT {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += steps[i];
        i = (i + 1) % 8;
    }
    if n > 1 {
        let mut big = Vec::new();
        split_cofactor(BigUint::from(n), &mut big);
        let mut ps: Vec<u64> = big.iter().map(|b| b.to_u64().unwrap()).collect();
        ps.sort_unstable();
        for q in ps {
            match out.last_mut() {
                Some(last) if last.0 == q => last.1 += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    assert!(n != 0, "squarefree test of zero");
    factor_u64(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// Squarefree kernel of a positive integer (product of primes to odd powers).
pub fn squarefree_part(n: u128) -> u128 {
    assert!(n > 0);
    let mut out = 1u128;
    let mut rest = n;
    let mut p = 2u128;
    while p * p <= rest && p <= TRIAL_LIMIT as u128 {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest <= u64::MAX as u128 {
            for (q, e) in factor_u64(rest as u64) {
                if e % 2 == 1 {
                    out *= q as u128;
                }
            }
        } else {
            let f = factor(&BigInt::from(rest));
            for (q, e) in f.factors {
                if e % 2 == 1 {
                    out *= q.to_u128().unwrap();
                }
            }
        }
    }
    out
}

/// Jacobi symbol for odd positive `n`.
fn jacobi_big(a: &BigInt, n: &BigInt) -> i8 {
    debug_assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        if z > 0 {
            a >>= z;
            let r8 = (&n % 8u32).to_u8().unwrap();
            if z % 2 == 1 && (r8 == 3 || r8 == 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u8() == Some(3) && (&n % 4u32).to_u8() == Some(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Full Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker_big(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.magnitude().is_one() { 1 } else { 0 };
    }
    let mut n = n.clone();
    let mut t = 1i8;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            t = -t;
        }
    }
    let z = n.trailing_zeros().unwrap_or(0);
    if z > 0 {
        if a.is_even() {
            return 0;
        }
        n >>= z;
        let r8 = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if z % 2 == 1 && (r8 == 3 || r8 == 5) {
            t = -t;
        }
    }
    if n.is_one() {
        return t;
    }
    t * jacobi_big(a, &n)
}

fn jacobi_u64(a: u64, n: u64) -> i8 {
    let (mut a, mut n) = (a % n, n);
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Full Kronecker symbol on machine integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut t = 1i8;
    let mut m = n.unsigned_abs();
    if n < 0 && a < 0 {
        t = -t;
    }
    let z = m.trailing_zeros();
    if z > 0 {
        if a % 2 == 0 {
            return 0;
        }
        m >>= z;
        let r8 = a.rem_euclid(8);
        if z % 2 == 1 && (r8 == 3 || r8 == 5) {
            t = -t;
        }
    }
    if m == 1 {
        return t;
    }
    let ar = (a as i128).rem_euclid(m as i128) as u64;
    t * jacobi_u64(ar, m)
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        0
    } else {
        jacobi_u64(r, p)
    }
}

/// Quartic residue symbol `(a/p)_4 = a^((p-1)/4) mod p`.
pub fn quartic_symbol(a: i64, p: u64) -> Result<i8, ArithError> {
    if p % 4 != 1 || !is_prime_u64(p) {
        return Err(ArithError::QuarticModulus(p));
    }
    if legendre(a, p) != 1 {
        return Err(ArithError::QuarticNonResidue { a, p });
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    let v = pow_mod(r, (p - 1) / 4, p);
    if v == 1 {
        Ok(1)
    } else if v == p - 1 {
        Ok(-1)
    } else {
        unreachable!("a^((p-1)/4) must be +-1 for a quadratic residue")
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square_u128(n: u128) -> Option<u128> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

pub fn v2(n: &BigInt) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

/// Integer square root of a nonnegative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}
