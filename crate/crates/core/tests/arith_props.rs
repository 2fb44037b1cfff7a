mod common;

use common::ctx;
use num_bigint::BigInt;
use num_rational::BigRational;
use orbitzeta_core::arith::{d_function, galois_orbit_sum, padic_valuation, CycloValue, Val};
use proptest::prelude::*;

fn cyclo(p: i64, level: u32, coeffs: &[i64]) -> CycloValue {
    CycloValue::from_poly(&ctx(p), level, coeffs).unwrap()
}

proptest! {
    #[test]
    fn valuation_is_additive(x in -100_000i64..100_000, y in -100_000i64..100_000, p in prop::sample::select(vec![3i64, 5, 7])) {
        prop_assume!(x != 0 && y != 0);
        let c = ctx(p);
        prop_assert_eq!(padic_valuation(x * y, &c), padic_valuation(x, &c) + padic_valuation(y, &c));
        prop_assert!(padic_valuation(x + y, &c) >= padic_valuation(x, &c).min(padic_valuation(y, &c)));
    }

    #[test]
    fn d_function_divides_exactly(x in -10_000i64..10_000, y in -10_000i64..10_000, p in prop::sample::select(vec![3i64, 5])) {
        let c = ctx(p);
        let d = d_function(x, y, &c);
        if y != 0 && padic_valuation(x, &c) >= padic_valuation(y, &c) {
            prop_assert_eq!(d * BigRational::from_integer(BigInt::from(y)), BigRational::from_integer(BigInt::from(x)));
        } else {
            prop_assert_eq!(d, BigRational::from_integer(BigInt::from(0)));
        }
    }

    #[test]
    fn galois_sum_matches_conjugate_sum(p in prop::sample::select(vec![3i64, 5, 7]), level in 1u32..=3, c in -400i64..400) {
        let cx = ctx(p);
        let q = p.pow(level);
        let mut s = CycloValue::zero(&cx, level).unwrap();
        for u in 1..q {
            if u % p != 0 {
                s = &s + &CycloValue::root_power(&cx, level, u * c).unwrap();
            }
        }
        prop_assert_eq!(s.as_integer(), Some(galois_orbit_sum(level, c, &cx)));
    }

    #[test]
    fn cyclotomic_ring_axioms(
        a in prop::collection::vec(-9i64..9, 9),
        b in prop::collection::vec(-9i64..9, 9),
        c in prop::collection::vec(-9i64..9, 9),
        level in 1u32..=2,
    ) {
        let (x, y, z) = (cyclo(3, level, &a), cyclo(3, level, &b), cyclo(3, level, &c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
        prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
    }

    #[test]
    fn lifting_is_a_ring_map(a in prop::collection::vec(-9i64..9, 5), b in prop::collection::vec(-9i64..9, 5)) {
        let (x, y) = (cyclo(5, 1, &a), cyclo(5, 1, &b));
        prop_assert_eq!((&x * &y).lift_to(2), &x.lift_to(2) * &y.lift_to(2));
        prop_assert_eq!((&x + &y).lift_to(3), &x.lift_to(3) + &y.lift_to(3));
    }
}

#[test]
fn conjugation_fixes_integers() {
    let c = ctx(5);
    let seven = CycloValue::from_integer(&c, 2, 7).unwrap();
    assert_eq!(seven.conjugate(), seven);
}

#[test]
fn documented_examples() {
    assert_eq!(padic_valuation(18, &ctx(3)), Val::Finite(2));
    assert_eq!(padic_valuation(0, &ctx(5)), Val::Infinite);
    assert_eq!(padic_valuation(50, &ctx(5)), Val::Finite(2));
    let c = ctx(3);
    assert_eq!(d_function(9, 3, &c), BigRational::from_integer(3.into()));
    assert_eq!(d_function(1, 3, &c), BigRational::from_integer(0.into()));
    assert_eq!(d_function(5, 0, &c), BigRational::from_integer(0.into()));
    assert_eq!(CycloValue::root_power(&c, 1, 0).unwrap(), CycloValue::one(&c, 1).unwrap());
    assert!(cyclo(3, 1, &[1, 1, 1]).is_zero());
    assert_eq!(CycloValue::root_power(&c, 2, 9).unwrap(), CycloValue::one(&c, 2).unwrap());
    assert_eq!(galois_orbit_sum(1, 0, &c), 2);
    assert_eq!(galois_orbit_sum(1, 1, &c), -1);
    assert_eq!(galois_orbit_sum(2, 3, &c), -3);
}
