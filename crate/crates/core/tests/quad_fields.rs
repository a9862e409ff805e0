use biquad_iwasawa::arith::{is_square_u128, is_squarefree};
use biquad_iwasawa::forms::ClassGroup;
use biquad_iwasawa::quad::*;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

/// Smallest y > 0 with x^2 - m y^2 = +-4, searched directly.
fn least_pell4(m: u64, cap: u64) -> Option<(u64, u64)> {
    (1..=cap).find_map(|y| {
        let t = m as u128 * (y as u128) * (y as u128);
        [t + 4, t.wrapping_sub(4)]
            .into_iter()
            .filter(|&v| v > 0 && v < t + 5)
            .find_map(|v| is_square_u128(v).map(|x| (x as u64, y)))
    })
}

#[test]
fn pell_identity_and_minimality() {
    let mut checked_min = 0;
    for m in 2..=2000i64 {
        if !is_squarefree(m) {
            continue;
        }
        let u = fundamental_unit(m).unwrap();
        let e = &u.value;
        let n = &e.a * &e.a - BigInt::from(m) * &e.b * &e.b;
        assert_eq!(n, BigInt::from(u.norm) * &e.den * &e.den, "m = {m}");
        assert!(e.den == BigInt::one() || e.den == BigInt::from(2));
        // as (x + y sqrt m)/2 the unit has y = 2b/den, which must be the least solution
        let y = &e.b * 2 / &e.den;
        let cap = 20_000u64;
        match least_pell4(m as u64, cap) {
            Some((_, y0)) => {
                assert_eq!(BigInt::from(y0), y, "m = {m}");
                checked_min += 1;
            }
            None => assert!(y > BigInt::from(cap), "m = {m}"),
        }
    }
    assert!(checked_min > 600, "{checked_min}");
    eprintln!("minimality checked directly for {checked_min} radicands");
}

#[test]
fn narrow_and_wide_class_numbers() {
    // fundamental discriminants up to 2e4 here; the acceptance target covers 1e5
    for m in 2..5000i64 {
        if !is_squarefree(m) {
            continue;
        }
        let f = QuadField::new(m).unwrap();
        if f.disc() >= 20_000 {
            continue;
        }
        let c = class_number(m, DEFAULT_DISC_BOUND).unwrap();
        let g = ClassGroup::new(f.disc());
        assert_eq!(g.order() as u64, c.h_narrow);
        let minus_one_trivial = g.minus_one_class() == g.identity();
        let norm = fundamental_unit(m).unwrap().norm;
        assert_eq!(minus_one_trivial, norm == -1, "m = {m}");
        assert_eq!(c.h_narrow, if norm == -1 { c.h } else { 2 * c.h });
    }
}

#[test]
fn known_class_numbers() {
    for (m, h) in [(10, 2), (15, 2), (79, 3), (82, 4), (229, 3), (399, 8), (1155, 8), (2, 1), (3, 1)] {
        assert_eq!(class_number(m, DEFAULT_DISC_BOUND).unwrap().h, h, "m = {m}");
    }
    let s = class_number_with_structure(399, DEFAULT_DISC_BOUND).unwrap();
    assert_eq!(s.h2, 8);
    assert_eq!(s.structure.unwrap().iter().product::<u64>(), 8);
}

#[test]
fn disc_bound_is_a_resource_error() {
    assert!(matches!(class_number(1_000_003, 1000), Err(biquad_iwasawa::error::QuadError::DiscBound { .. })));
}

fn elem() -> impl Strategy<Value = QuadElem> {
    let ms = (2i64..500).prop_filter("squarefree", |&m| is_squarefree(m));
    (ms, -300i64..300, -300i64..300, 1i64..6)
        .prop_map(|(m, a, b, den)| QuadElem::new(a.into(), b.into(), den.into(), m))
        .prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #[test]
    fn square_root_round_trip(x in elem()) {
        let sq = &x * &x;
        let r = square_in_quad(&sq).expect("a square has a root");
        prop_assert!(r == x || r == -&x);
        prop_assert_eq!(&r * &r, sq);
    }

    #[test]
    fn field_identities(x in elem(), y in elem()) {
        let y = QuadElem::new(y.a, y.b, y.den, x.m);
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) * &y.inv().unwrap(), x.clone());
        }
        prop_assert_eq!(x.trace(), (&x + &x.conj()).rational_part());
        prop_assert!((&x * &x.conj()).is_rational());
    }
}
