mod common;

use std::collections::BTreeMap;

use common::{all_vectors, ctx, rebase, scan_level, unimodular_pair};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use orbitzeta_core::arith::CycloValue;
use orbitzeta_core::coadjoint::{radical_exponent, CharacterHandle};
use orbitzeta_core::liealg::standard::{scaled_sl2, sl2_swap};
use orbitzeta_core::liealg::LieAlgebraSpec;
use orbitzeta_core::matnf::IntMatrix;
use orbitzeta_core::zeta::{
    count_by_radical_at_level, count_by_radical_bounded, equivariant_count, fit_rational, lambda_exact,
    lambda_exact_with, orbit_truncation, twisted_mu_direct, twisted_mu_galois, ZetaPolynomial,
};
use orbitzeta_core::Limits;
use rand::{Rng, SeedableRng};

fn rebased(p: i64, s: u32, seed: u64) -> LieAlgebraSpec {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (t, inv) = unimodular_pair(&mut rng, 3, 6);
    rebase(&scaled_sl2(ctx(p), s), &t, &inv)
}

fn to_u64(counts: &BTreeMap<u32, BigUint>) -> BTreeMap<u32, u64> {
    counts.iter().map(|(&e, c)| (e, c.to_u64().unwrap())).collect()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `λ_i` straight from per-level scans: characters of radical exponent `2i`
/// over all levels up to `2i + m`, divided by the orbit size.
fn lambda_by_scan(spec: &LieAlgebraSpec, i_max: u32) -> Vec<u64> {
    let p = spec.p() as u64;
    let m = spec.validate().unwrap().m_l.unwrap();
    let mut out = vec![0u64; i_max as usize + 1];
    out[0] = 1;
    for k in 1..=2 * i_max + m {
        for (e, c) in scan_level(spec, k) {
            if e % 2 == 0 && e / 2 <= i_max && k <= e + m {
                out[(e / 2) as usize] += c / p.pow(e);
            }
        }
    }
    out
}

#[test]
fn residue_tree_matches_plain_scan() {
    let limits = Limits::default();
    for seed in 0..6 {
        for (p, s, k_max) in [(3i64, 1u32, 3u32), (3, 2, 3), (5, 1, 2), (7, 1, 1)] {
            let spec = rebased(p, s, seed);
            for k in 1..=k_max {
                let tree = count_by_radical_at_level(&spec, k, &limits).unwrap();
                let scan = scan_level(&spec, k);
                assert_eq!(to_u64(&tree), scan, "p={p} s={s} k={k} seed={seed}");
                let bounded = count_by_radical_bounded(&spec, k, Some(2), &limits).unwrap();
                let expected: BTreeMap<u32, u64> = scan.into_iter().filter(|&(e, _)| e <= 2).collect();
                assert_eq!(to_u64(&bounded), expected);
            }
        }
    }
}

#[test]
fn lambda_matches_scan_and_stabilizes() {
    let limits = Limits::default();
    for seed in 0..3 {
        for (p, s, i_max) in [(3i64, 1u32, 1u32), (5, 1, 0), (3, 2, 0)] {
            let spec = rebased(p, s, seed);
            let table = lambda_exact(&spec, i_max, &limits).unwrap();
            let values: Vec<u64> = table.values().iter().map(|v| v.to_u64().unwrap()).collect();
            assert_eq!(values, lambda_by_scan(&spec, i_max), "p={p} s={s}");
            let longer = lambda_exact_with(&spec, i_max, 2, &mut |k, e| {
                count_by_radical_bounded(&spec, k, Some(e), &limits)
            })
            .unwrap();
            assert_eq!(longer.values(), table.values());
        }
    }
}

#[test]
fn rational_fit_predicts_next_lambda() {
    let limits = Limits::default();
    let spec = scaled_sl2(ctx(3), 1);
    let table = lambda_exact(&spec, 6, &limits).unwrap();
    let values: Vec<BigInt> = table.values().into_iter().map(BigInt::from).collect();
    let fit = fit_rational(&values[..6], 2).unwrap();
    let series = fit.series(7);
    assert_eq!(series[6], BigRational::from_integer(values[6].clone()));
}

/// `μ_i(g)` for each `g` by summing `θ^{⟨a, g⟩}` over every primitive `a` of
/// each level as a cyclotomic integer, with radical exponents from the divisor routine.
fn twisted_by_scan(spec: &LieAlgebraSpec, gs: &[Vec<i64>], i_max: u32) -> Vec<Vec<BigRational>> {
    let c = *spec.ctx();
    let p = spec.p();
    let m = spec.validate().unwrap().m_l.unwrap();
    let mut out = vec![vec![BigRational::zero(); i_max as usize + 1]; gs.len()];
    for row in out.iter_mut() {
        row[0] = BigRational::one();
    }
    for k in 1..=2 * i_max + m {
        let q = p.pow(k);
        let mut hist = vec![vec![vec![0i64; q as usize]; i_max as usize + 1]; gs.len()];
        for a in all_vectors(spec.dim(), q) {
            if a.iter().all(|x| x % p == 0) {
                continue;
            }
            let e = radical_exponent(spec, &CharacterHandle::normalize(&a, k, &c)).unwrap();
            if e / 2 > i_max {
                continue;
            }
            for (h, g) in hist.iter_mut().zip(gs) {
                let t: i64 = a.iter().zip(g).map(|(x, y)| x * y.rem_euclid(q)).sum::<i64>().rem_euclid(q);
                h[(e / 2) as usize][t as usize] += 1;
            }
        }
        for (row, h) in out.iter_mut().zip(&hist) {
            for (i, hi) in h.iter().enumerate() {
                let v = CycloValue::from_exponent_histogram(&c, k, hi).unwrap();
                row[i] += rat(v.as_integer().expect("rational sum"));
            }
        }
    }
    for row in out.iter_mut() {
        for (i, v) in row.iter_mut().enumerate() {
            *v /= rat(p.pow(i as u32));
        }
    }
    out
}

#[test]
fn galois_route_matches_character_scan() {
    let limits = Limits::default();
    for (p, s) in [(3i64, 2u32), (5, 1)] {
        let spec = scaled_sl2(ctx(p), s);
        let gs = [vec![0, 0, 0], vec![1, 0, 0], vec![0, p, 0], vec![2, 1, p * p], vec![p, 0, p]];
        for (g, expected) in gs.iter().zip(twisted_by_scan(&spec, &gs, 1)) {
            let galois = twisted_mu_galois(&spec, g, 1, &limits).unwrap();
            for (i, v) in expected.into_iter().enumerate() {
                assert_eq!(galois.coeff(i), v, "p={p} g={g:?} i={i}");
            }
        }
    }
}

#[test]
fn direct_route_agrees_for_random_elements() {
    let limits = Limits::default();
    let spec = scaled_sl2(ctx(3), 2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let g: Vec<i64> = (0..3).map(|_| rng.gen_range(0..81)).collect();
        let direct = twisted_mu_direct(&spec, &g, 1, &limits).unwrap();
        assert_eq!(direct, twisted_mu_galois(&spec, &g, 1, &limits).unwrap(), "g={g:?}");
    }
}

#[test]
fn twisted_at_identity_is_weighted_lambda() {
    let limits = Limits::default();
    let spec = scaled_sl2(ctx(5), 1);
    let lambda = lambda_exact(&spec, 1, &limits).unwrap();
    let mu = twisted_mu_galois(&spec, &[0, 0, 0], 1, &limits).unwrap();
    for (i, l) in lambda.values().iter().enumerate() {
        assert_eq!(mu.coeff(i), rat(l.to_i64().unwrap() * 5i64.pow(i as u32)));
    }
}

#[test]
fn equivariant_classes_partition_the_truncation() {
    let limits = Limits::default();
    for p in [3i64, 5] {
        let spec = scaled_sl2(ctx(p), 1);
        let autos = [IntMatrix::identity(3), sl2_swap()];
        let classes = equivariant_count(&spec, &autos, 2, &limits).unwrap();
        let total = classes.values().fold(ZetaPolynomial::default(), |acc, x| acc.add(x));
        assert_eq!(total, orbit_truncation(&spec, 2, &limits).unwrap());
        assert!(classes.keys().all(|c| c.contains(&0)));
        // Orbit counts at levels ≤ 2 from the plain scan.
        let mut by_degree = vec![1i64, 0, 0];
        for k in 1..=2 {
            for (e, c) in scan_level(&spec, k) {
                by_degree[(e / 2) as usize] += (c / (p as u64).pow(e)) as i64;
            }
        }
        let expected = ZetaPolynomial::new(by_degree.into_iter().map(rat).collect());
        assert_eq!(total, expected);
    }
}
