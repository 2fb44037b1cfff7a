mod common;

use common::{ctx, rebase, unimodular_pair};
use orbitzeta_core::coadjoint::adjoint_action_matrix;
use orbitzeta_core::liealg::standard::{abelian, heisenberg, scaled_sl2};
use orbitzeta_core::liealg::LieAlgebraSpec;
use orbitzeta_core::oracle::{
    bch_degree_needed, conjugacy_class_count, kirillov_verify, BchLaw, FiniteQuotientGroup, BCH_DEGREE,
};
use orbitzeta_core::{Error, Limits};
use proptest::prelude::*;
use rand::SeedableRng;

fn rebased(p: i64, s: u32, seed: u64) -> LieAlgebraSpec {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (t, inv) = unimodular_pair(&mut rng, 3, 6);
    rebase(&scaled_sl2(ctx(p), s), &t, &inv)
}

fn setting() -> impl Strategy<Value = (i64, u32, u32)> {
    prop::sample::select(vec![(3i64, 1u32, 3u32), (3, 2, 5), (5, 1, 4), (7, 1, 3)])
}

fn elem() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..100_000, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn law_is_associative((p, s, k) in setting(), seed in 0u64..200, x in elem(), y in elem(), z in elem()) {
        let law = BchLaw::new(&rebased(p, s, seed), k).unwrap();
        let left = law.multiply(&law.multiply(&x, &y), &z);
        let right = law.multiply(&x, &law.multiply(&y, &z));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_and_identity((p, s, k) in setting(), seed in 0u64..200, x in elem()) {
        let law = BchLaw::new(&rebased(p, s, seed), k).unwrap();
        let q = law.modulus();
        let xr: Vec<i64> = x.iter().map(|v| v.rem_euclid(q)).collect();
        prop_assert_eq!(law.multiply(&x, &law.inverse(&x)), vec![0; 3]);
        prop_assert_eq!(law.multiply(&x, &[0, 0, 0]), xr.clone());
        prop_assert_eq!(law.multiply(&[0, 0, 0], &x), xr);
    }

    #[test]
    fn conjugation_is_exp_ad((p, s, k) in setting(), seed in 0u64..200, g in elem(), x in elem()) {
        let spec = rebased(p, s, seed);
        let law = BchLaw::new(&spec, k).unwrap();
        let q = law.modulus();
        let xr: Vec<i64> = x.iter().map(|v| v.rem_euclid(q)).collect();
        let ad = adjoint_action_matrix(&spec, &g, k).unwrap();
        prop_assert_eq!(law.conjugate(&g, &x), ad.apply(&xr));
    }

    #[test]
    fn class_two_law_is_exact(x in elem(), y in elem(), s in 1u32..=2) {
        let spec = heisenberg(ctx(3), s);
        let k = 3;
        let law = BchLaw::new(&spec, k).unwrap();
        let q = law.modulus();
        let br = spec.bracket_mod(&x.iter().map(|v| v.rem_euclid(q)).collect::<Vec<_>>(), &y.iter().map(|v| v.rem_euclid(q)).collect::<Vec<_>>(), q);
        prop_assert_eq!(law.commutator(&x, &y), br.clone());
        // x·y = x + y + ½[x, y], with ½ the inverse of 2 modulo 3^k.
        let half = (q + 1) / 2;
        let expected: Vec<i64> = (0..3).map(|i| (x[i] + y[i] + half * br[i]).rem_euclid(q)).collect();
        prop_assert_eq!(law.multiply(&x, &y), expected);
    }

    #[test]
    fn abelian_law_is_addition(x in prop::collection::vec(0i64..1000, 2), y in prop::collection::vec(0i64..1000, 2)) {
        let law = BchLaw::new(&abelian(ctx(5), 2), 3).unwrap();
        let expected: Vec<i64> = x.iter().zip(&y).map(|(a, b)| (a + b).rem_euclid(125)).collect();
        prop_assert_eq!(law.multiply(&x, &y), expected);
    }
}

/// Class count by Burnside: `|G|^{-1} #{(g, h) : gh = hg}`.
fn classes_by_commuting_pairs(spec: &LieAlgebraSpec, k: u32) -> u64 {
    let group = FiniteQuotientGroup::new(spec, k, &Limits::default()).unwrap();
    let law = group.law();
    let order = group.order();
    let elems: Vec<Vec<i64>> = (0..order).map(|i| group.element(i)).collect();
    let mut pairs = 0u64;
    for (i, g) in elems.iter().enumerate() {
        for h in &elems[i..] {
            if law.multiply(g, h) == law.multiply(h, g) {
                pairs += if std::ptr::eq(g, h) { 1 } else { 2 };
            }
        }
    }
    assert_eq!(pairs % order, 0);
    pairs / order
}

#[test]
fn class_counts_match_burnside() {
    let limits = Limits::default();
    for (spec, k) in [
        (scaled_sl2(ctx(3), 1), 2),
        (rebased(3, 1, 4), 2),
        (scaled_sl2(ctx(3), 2), 2),
        (heisenberg(ctx(3), 1), 2),
    ] {
        assert_eq!(
            conjugacy_class_count(&spec, k, &limits).unwrap(),
            classes_by_commuting_pairs(&spec, k),
            "{}",
            spec.name()
        );
    }
}

#[test]
fn series_degree_bound() {
    assert_eq!(bch_degree_needed(1, 3, 3), 5);
    assert_eq!(bch_degree_needed(1, 3, 4), 7);
    assert!(BchLaw::new(&scaled_sl2(ctx(3), 1), 3).is_ok());
    assert_eq!(
        BchLaw::new(&scaled_sl2(ctx(3), 1), 4).unwrap_err(),
        Error::SeriesDegreeExceeded { needed: 7, level: 4, implemented: BCH_DEGREE }
    );
    assert!(BchLaw::new(&scaled_sl2(ctx(3), 2), 9).is_ok());
    assert!(BchLaw::new(&scaled_sl2(ctx(3), 2), 10).is_err());
}

#[test]
fn kirillov_checks_pass_on_small_quotients() {
    let limits = Limits::default();
    let r = kirillov_verify(&scaled_sl2(ctx(5), 1), 2, 200, 1, &limits).unwrap();
    assert!(r.all_passed(), "{r:?}");
    assert_eq!(r.orbit_count, r.class_count);
    let r = kirillov_verify(&scaled_sl2(ctx(3), 2), 3, 200, 1, &limits).unwrap();
    assert!(r.all_passed(), "{r:?}");
    assert!(matches!(
        kirillov_verify(&scaled_sl2(ctx(3), 1), 2, 10, 1, &limits),
        Err(Error::HypothesisViolation { p: 3, .. })
    ));
}
