use biquad_iwasawa::arith::primes_below;
use biquad_iwasawa::local::ambiguous_rank;
use biquad_iwasawa::multiquad::*;
use biquad_iwasawa::quad::{square_in_quad, QuadElem, QuadField};
use biquad_iwasawa::units::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use biquad_iwasawa::error::MqError;
use proptest::prelude::*;

fn field(g: &[i64]) -> MultiQuadField {
    MultiQuadField::new(g).unwrap()
}

#[test]
fn divisor_constants_and_formula() {
    assert_eq!(kuroda_divisor_exp(2), 2);
    assert_eq!(kuroda_divisor_exp(3), 9);
    // h2(K_1) = q(K_1) prod h2 / 2^9 on (7, 3, 19): the class numbers of the seven
    // subfields of Q(sqrt 7, sqrt 57, sqrt 2)
    let memo = Memo::default();
    let k1 = field(&[7, 57, 2]);
    let v = kuroda_h2(&k1, &memo).unwrap();
    assert_eq!(v.v, 9);
    assert_eq!(v.q_index, 32);
    let prod: u64 = v.subfield_h2.iter().map(|&(_, h)| h).product();
    assert_eq!(v.h2 << 9, v.q_index * prod);
    let k = field(&[7, 57]);
    let v0 = kuroda_h2(&k, &memo).unwrap();
    assert_eq!((v0.v, v0.q_index), (2, 2));
}

#[test]
fn rank_oracle_bounds_kuroda_order() {
    // two independent routes: 2^rank divides h2(K), and rank 0 iff h2(K) = 1
    let memo = Memo::default();
    let ps: Vec<u64> = primes_below(80).into_iter().filter(|&p| p > 2).collect();
    let mut n = 0;
    for m in [21i64, 33, 77, 57] {
        for &p in &ps {
            if m % p as i64 == 0 {
                continue;
            }
            for d in [p as i64, 2 * p as i64] {
                let Ok(c) = ambiguous_rank(&QuadField::new(m).unwrap(), d, &memo) else { continue };
                let h = kuroda_h2(&field(&[m, d]), &memo).unwrap().h2;
                assert_eq!(h % (1 << c.rank), 0, "Q(sqrt {m}, sqrt {d})");
                assert_eq!(h == 1, c.rank == 0, "Q(sqrt {m}, sqrt {d})");
                n += 1;
            }
        }
    }
    assert!(n > 60, "{n}");
    assert_eq!(kuroda_stats().1, 0);
}

#[test]
fn unit_indices_of_known_fields() {
    let memo = Memo::default();
    for (g, q) in [(vec![2, 3], 4), (vec![2, 5], 2), (vec![7, 57], 2), (vec![3, 5, 2], 64), (vec![7, 57, 2], 32)] {
        let us = wada_unit_system(&field(&g), &memo).unwrap();
        assert_eq!(us.q_index, q, "{g:?}");
        assert_eq!(us.exponent_determinant().abs(), BigRational::new(1.into(), q.into()));
    }
}

#[test]
fn first_layer_of_families() {
    let k = field(&[21, 111]);
    assert_eq!(first_layer(&k).unwrap().degree(), 8);
    assert!(first_layer(&field(&[42, 57])).is_ok());
    assert_eq!(first_layer(&field(&[2, 7])), Err(MqError::ContainsSqrt2));
}

fn quad_elem() -> impl Strategy<Value = (i64, i64, QuadElem)> {
    let pairs = prop_oneof![Just((2i64, 3i64)), Just((5, 13)), Just((21, 35)), Just((7, 57)), Just((3, 10))];
    (pairs, -60i64..60, -60i64..60, 1i64..4).prop_filter_map("nonzero", |((a, b), x, y, den)| {
        let e = QuadElem::new(x.into(), y.into(), den.into(), a);
        (!e.is_zero()).then_some((a, b, e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn square_test_agrees_with_quadratic_route((a, b, x) in quad_elem()) {
        let k = field(&[a, b]);
        let u = k.embed_quad(&x).unwrap();
        let in_k = mq_square_test(&u);
        let bx = x.scale(&BigRational::from_integer(BigInt::from(b)));
        let expect = square_in_quad(&x).is_some() || square_in_quad(&bx).is_some();
        prop_assert_eq!(in_k.is_some(), expect);
        if let Some(r) = in_k {
            prop_assert_eq!(&r * &r, u.clone());
        }
        let squared = &u * &u;
        let r = mq_square_test(&squared).unwrap();
        prop_assert!(r == u || r == -&u);
        prop_assert_eq!(mq_square_test_numeric(&squared, 1 << 14).unwrap().is_some(), true);
    }
}
