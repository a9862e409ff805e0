use biquad_iwasawa::arith::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn euler(a: i64, p: u64) -> i8 {
    let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

#[test]
fn legendre_matches_euler_and_reciprocity() {
    let ps: Vec<u64> = primes_below(600).into_iter().filter(|&p| p > 2).collect();
    for &p in &ps {
        let sign = |n: u64| if n % 4 == 1 { 1 } else { -1 };
        assert_eq!(legendre(-1, p), sign(p));
        assert_eq!(legendre(2, p), if p % 8 == 1 || p % 8 == 7 { 1 } else { -1 });
        for &q in &ps {
            assert_eq!(legendre(q as i64, p), euler(q as i64, p));
            if p != q {
                let expect = if p % 4 == 3 && q % 4 == 3 { -1 } else { 1 };
                assert_eq!(legendre(p as i64, q) * legendre(q as i64, p), expect, "({p}, {q})");
            }
        }
    }
}

#[test]
fn quartic_symbol_by_brute_force() {
    for p in primes_below(500).into_iter().filter(|p| p % 4 == 1) {
        let fourth: Vec<bool> = {
            let mut v = vec![false; p as usize];
            for x in 1..p {
                v[pow_mod(x, 4, p) as usize] = true;
            }
            v
        };
        for a in 1..p as i64 {
            if legendre(a, p) == 1 {
                let expect = if fourth[a as usize] { 1 } else { -1 };
                assert_eq!(quartic_symbol(a, p).unwrap(), expect, "({a}/{p})_4");
            } else {
                assert!(quartic_symbol(a, p).is_err());
            }
        }
    }
    assert!(quartic_symbol(2, 7).is_err());
}

#[test]
fn primes_and_factors() {
    let ps = primes_below(1000);
    assert_eq!(ps.len(), 168);
    for n in 2..5000u64 {
        assert_eq!(is_prime_u64(n), (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0), "{n}");
        let f = factor_u64(n);
        assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
    }
}

proptest! {
    #[test]
    fn kronecker_is_multiplicative(a in -2000i64..2000, b in -2000i64..2000, n in 1i64..3000) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
        prop_assert_eq!(kronecker_big(&BigInt::from(a), &BigInt::from(n)), kronecker(a, n));
    }

    #[test]
    fn perfect_square_round_trip(x in 0u64..u64::MAX, d in 1u64..1000) {
        let n = BigInt::from(x) * BigInt::from(x);
        prop_assert_eq!(is_perfect_square(&n), Some(BigInt::from(x)));
        if is_square_u128(d as u128).is_none() {
            prop_assert_eq!(is_perfect_square(&(n * d)), if x == 0 { Some(BigInt::from(0)) } else { None });
        }
    }
}
