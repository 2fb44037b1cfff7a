//! Finite quotients `L / p^k L` made into groups by the Baker–Campbell–Hausdorff
//! series, and an independent check of the orbit-method character formula on them.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{mod_floor, mod_inverse, val_big, CycloValue};
use crate::coadjoint::{orbit_exponent_sum, radical_exponent, CharacterHandle, CoadjointAction};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraSpec;
use crate::Limits;

/// Highest degree of the BCH series implemented.
pub const BCH_DEGREE: u32 = 6;

/// Homogeneous BCH components: for each degree `m`, pairs `(word, c_w / m)`
/// such that the component is `Σ (c_w / m) [w]` with `[w]` the left-normed
/// bracket `[…[[w_1, w_2], w_3], …, w_m]` (letters `0 = x`, `1 = y`).
type BchTable = Vec<Vec<(Vec<u8>, BigRational)>>;

fn bch_table() -> &'static BchTable {
    static TABLE: OnceLock<BchTable> = OnceLock::new();
    TABLE.get_or_init(|| build_bch_table(BCH_DEGREE as usize))
}

type FreeElement = HashMap<Vec<u8>, BigRational>;

fn free_mul(a: &FreeElement, b: &FreeElement, max_deg: usize) -> FreeElement {
    let mut out = FreeElement::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() > max_deg {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(BigRational::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `log(exp x · exp y)` in the free associative algebra, truncated at `max_deg`,
/// converted to Lie form with the Dynkin–Specht–Wever map.
fn build_bch_table(max_deg: usize) -> BchTable {
    let fact = |m: usize| -> BigInt { (1..=m).fold(BigInt::one(), |a, b| a * b) };
    let mut z = FreeElement::new();
    for a in 0..=max_deg {
        for b in 0..=(max_deg - a) {
            if a + b == 0 {
                continue;
            }
            let mut w = vec![0u8; a];
            w.extend(std::iter::repeat_n(1u8, b));
            z.insert(w, BigRational::new(BigInt::one(), fact(a) * fact(b)));
        }
    }
    let mut log = FreeElement::new();
    let mut power = z.clone();
    for m in 1..=max_deg {
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let coef = BigRational::new(BigInt::from(sign), BigInt::from(m));
        for (w, c) in &power {
            *log.entry(w.clone()).or_insert_with(BigRational::zero) += c * &coef;
        }
        power = free_mul(&power, &z, max_deg);
    }
    let mut table = vec![Vec::new(); max_deg + 1];
    let mut words: Vec<_> = log.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    words.sort();
    for (w, c) in words {
        let m = w.len();
        table[m].push((w, c / BigRational::from_integer(BigInt::from(m))));
    }
    table
}

/// `D(k)`: least `D ≥ 1` with `D·u - ⌊D/(p-1)⌋ ≥ k`. Components of degree
/// `m > D` have valuation at least `(m-1)u - ⌊(m-1)/(p-1)⌋ ≥ k`.
pub fn bch_degree_needed(u: u32, p: i64, k: u32) -> u32 {
    let mut d = 1u32;
    while (d as i64) * u as i64 - d as i64 / (p - 1) < k as i64 {
        d += 1;
    }
    d
}

/// The group law `x·y = x + y + ½[x,y] + …` on `L / p^k L`.
#[derive(Clone, Debug)]
pub struct BchLaw {
    spec: LieAlgebraSpec,
    level: u32,
    modulus: i64,
    wide: i64,
    /// Per degree: `(p-adic valuation v, unit part c)` of the common denominator,
    /// and the integer coefficients `c_w · M` reduced modulo `wide`.
    degrees: Vec<(u32, i64, Trie)>,
}

#[derive(Clone, Debug, Default)]
struct Trie {
    coeff: i64,
    children: [Option<Box<Trie>>; 2],
}

impl Trie {
    fn insert(&mut self, word: &[u8], coeff: i64) {
        match word.split_first() {
            None => self.coeff = coeff,
            Some((&l, rest)) => self.children[l as usize]
                .get_or_insert_with(Default::default)
                .insert(rest, coeff),
        }
    }
}

impl BchLaw {
    pub fn new(spec: &LieAlgebraSpec, level: u32) -> Result<Self> {
        let report = spec.validate()?;
        let u = report.require_uniform()?;
        let p = spec.p();
        spec.ctx().check_level(level)?;
        let needed = if u == u32::MAX { 1 } else { bch_degree_needed(u, p, level) };
        if needed > BCH_DEGREE {
            return Err(Error::SeriesDegreeExceeded {
                needed,
                level,
                implemented: BCH_DEGREE,
            });
        }
        let table = bch_table();
        let mut raw = Vec::new();
        let mut vmax = 0;
        for terms in table.iter().take(needed as usize + 1).skip(1) {
            let denom = terms
                .iter()
                .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
            let v = val_big(&denom, p).finite().expect("nonzero denominator");
            vmax = vmax.max(v);
            raw.push((terms, denom, v));
        }
        let wide = (0..level + vmax)
            .try_fold(1i64, |acc, _| acc.checked_mul(p).filter(|&x| x < 1i64 << 62))
            .ok_or(Error::LevelOverflow {
                level: level + vmax,
                e_max: spec.ctx().e_max(),
            })?;
        let modulus = spec.ctx().pow(level);
        let wide_big = BigInt::from(wide);
        let degrees = raw
            .into_iter()
            .map(|(terms, denom, v)| {
                let unit = &denom / num_traits::pow(BigInt::from(p), v as usize);
                let unit = i64::try_from(unit.mod_floor(&BigInt::from(modulus))).unwrap();
                let mut trie = Trie::default();
                for (w, c) in terms.iter() {
                    let int = c * BigRational::from_integer(denom.clone());
                    let int = int.to_integer().mod_floor(&wide_big);
                    trie.insert(w, i64::try_from(int).unwrap());
                }
                (v, unit, trie)
            })
            .collect();
        Ok(Self {
            spec: spec.clone(),
            level,
            modulus,
            wide,
            degrees,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.spec
    }

    pub fn multiply(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let n = self.spec.dim();
        let p = self.spec.p();
        let q = self.modulus as i128;
        let xs: Vec<i64> = x.iter().map(|&v| v.rem_euclid(self.wide)).collect();
        let ys: Vec<i64> = y.iter().map(|&v| v.rem_euclid(self.wide)).collect();
        let mut out = vec![0i128; n];
        for (deg, (v, unit, trie)) in self.degrees.iter().enumerate() {
            let mut acc = vec![0i128; n];
            let letters = [&xs, &ys];
            for l in 0..2 {
                if let Some(child) = &trie.children[l] {
                    self.accumulate(child, letters[l].clone(), &letters, 1, deg + 1, &mut acc);
                }
            }
            let pv = p.pow(*v) as i128;
            let inv = mod_inverse(*unit as i128, q);
            for (o, s) in out.iter_mut().zip(acc) {
                let s = s.rem_euclid(self.wide as i128);
                assert_eq!(s % pv, 0, "BCH component of degree {} is not p-integral", deg + 1);
                *o = (*o + (s / pv) % q * inv) % q;
            }
        }
        out.into_iter().map(|v| mod_floor(v, self.modulus)).collect()
    }

    fn accumulate(
        &self,
        node: &Trie,
        value: Vec<i64>,
        letters: &[&Vec<i64>; 2],
        depth: usize,
        target: usize,
        acc: &mut [i128],
    ) {
        if value.iter().all(|&v| v == 0) {
            return;
        }
        if depth == target {
            let w = self.wide as i128;
            for (a, &v) in acc.iter_mut().zip(&value) {
                *a = (*a + node.coeff as i128 * v as i128) % w;
            }
            return;
        }
        for l in 0..2 {
            if let Some(child) = &node.children[l] {
                let next = self.spec.bracket_mod(&value, letters[l], self.wide);
                self.accumulate(child, next, letters, depth + 1, target, acc);
            }
        }
    }

    /// The inverse of `x` is `-x`, since `x` and `-x` commute.
    pub fn inverse(&self, x: &[i64]) -> Vec<i64> {
        x.iter().map(|&v| (-v).rem_euclid(self.modulus)).collect()
    }

    /// `g·x·g^{-1}`.
    pub fn conjugate(&self, g: &[i64], x: &[i64]) -> Vec<i64> {
        self.multiply(&self.multiply(g, x), &self.inverse(g))
    }

    /// `x·y·x^{-1}·y^{-1}`.
    pub fn commutator(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let xy = self.multiply(x, y);
        let xiyi = self.multiply(&self.inverse(x), &self.inverse(y));
        self.multiply(&xy, &xiyi)
    }
}

/// `L / p^k L` as a finite group, elements indexed `0 … p^{nk} - 1`.
#[derive(Clone, Debug)]
pub struct FiniteQuotientGroup {
    law: BchLaw,
    order: u64,
}

impl FiniteQuotientGroup {
    pub fn new(spec: &LieAlgebraSpec, level: u32, limits: &Limits) -> Result<Self> {
        let law = BchLaw::new(spec, level)?;
        let order = (law.modulus as u64)
            .checked_pow(spec.dim() as u32)
            .filter(|&o| o <= limits.enumeration_cap)
            .ok_or(Error::ResourceCap {
                what: "group order",
                limit: limits.enumeration_cap,
            })?;
        Ok(Self { law, order })
    }

    pub fn law(&self) -> &BchLaw {
        &self.law
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn element(&self, mut idx: u64) -> Vec<i64> {
        let q = self.law.modulus as u64;
        (0..self.law.spec.dim())
            .map(|_| {
                let d = (idx % q) as i64;
                idx /= q;
                d
            })
            .collect()
    }

    pub fn index(&self, x: &[i64]) -> u64 {
        let q = self.law.modulus as u64;
        x.iter().rev().fold(0u64, |acc, &v| acc * q + v.rem_euclid(q as i64) as u64)
    }

    /// Number of conjugacy classes, by union-find over conjugation by the basis elements.
    pub fn conjugacy_class_count(&self) -> u64 {
        let n = self.law.spec.dim();
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0i64; n];
                e[j] = 1;
                e
            })
            .collect();
        let edges: Vec<(u64, u64)> = (0..self.order)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let x = self.element(idx);
                gens.iter()
                    .map(|g| (idx, self.index(&self.law.conjugate(g, &x))))
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut parent: Vec<u64> = (0..self.order).collect();
        fn find(parent: &mut [u64], mut x: u64) -> u64 {
            while parent[x as usize] != x {
                let up = parent[parent[x as usize] as usize];
                parent[x as usize] = up;
                x = up;
            }
            x
        }
        let mut classes = self.order;
        for (a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
                classes -= 1;
            }
        }
        classes
    }
}

/// Number of conjugacy classes of `L / p^k L` under the BCH group law.
pub fn conjugacy_class_count(spec: &LieAlgebraSpec, k: u32, limits: &Limits) -> Result<u64> {
    Ok(FiniteQuotientGroup::new(spec, k, limits)?.conjugacy_class_count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KirillovReport {
    pub level: u32,
    pub group_order: u64,
    pub orbit_count: u64,
    pub class_count: u64,
    pub checks: Vec<CheckOutcome>,
}

impl KirillovReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Groups with at most this many elements get every orthonormality pair
/// checked by literal summation over the group.
pub const FULL_ORTHONORMALITY_ORDER: u64 = 729;

/// Checks that the functions `Φ_Ω = |Ω|^{-1/2} Σ_{ω ∈ Ω} ω` on `L / p^k L` are
/// class functions, are orthonormal, have squared degrees summing to the group
/// order, and are as many as the conjugacy classes.
pub fn kirillov_verify(
    spec: &LieAlgebraSpec,
    k: u32,
    sample_pairs: usize,
    seed: u64,
    limits: &Limits,
) -> Result<KirillovReport> {
    let report = spec.validate()?;
    report.require_correspondence(spec.p())?;
    kirillov_verify_unchecked(spec, k, sample_pairs, seed, limits)
}

/// [`kirillov_verify`] without the hypotheses on `(p, u)`; used to observe
/// where the correspondence breaks down.
pub fn kirillov_verify_unchecked(
    spec: &LieAlgebraSpec,
    k: u32,
    sample_pairs: usize,
    seed: u64,
    limits: &Limits,
) -> Result<KirillovReport> {
    let report = spec.validate()?;
    let u = report.require_uniform()?;
    let ctx = *spec.ctx();
    let p = spec.p();
    let group = FiniteQuotientGroup::new(spec, k, limits)?;
    let order = group.order();
    let action = CoadjointAction::with_uniformity(spec, k, u)?;

    // Orbits of all characters of L / p^k L, lower-order ones included.
    let mut orbit_of = vec![u32::MAX; order as usize];
    let mut orbits: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut half_exps: Vec<u32> = Vec::new();
    for idx in 0..order {
        if orbit_of[idx as usize] != u32::MAX {
            continue;
        }
        let a = group.element(idx);
        let members = crate::coadjoint::orbit_members(&action, &a, limits.orbit_cap)?;
        let rad = radical_exponent(spec, &CharacterHandle::normalize(&a, k, &ctx))?;
        if (p as u64).checked_pow(rad) != Some(members.len() as u64) {
            return Err(Error::OrbitSizeMismatch {
                rep: a,
                level: k,
                found: members.len(),
                expected_exp: rad,
            });
        }
        for m in &members {
            orbit_of[group.index(m) as usize] = orbits.len() as u32;
        }
        orbits.push(members);
        half_exps.push(rad / 2);
    }
    let orbit_count = orbits.len() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = sample_pairs.max(1000);
    let mut checks = Vec::new();

    // Class functions: S_Ω(g u g^{-1}) = S_Ω(u).
    let mut failures = 0usize;
    for _ in 0..samples {
        let o = rng.gen_range(0..orbits.len());
        let x = group.element(rng.gen_range(0..order));
        let g = group.element(rng.gen_range(0..order));
        let y = group.law().conjugate(&g, &x);
        if orbit_exponent_sum(&orbits[o], k, &x, &ctx)? != orbit_exponent_sum(&orbits[o], k, &y, &ctx)? {
            failures += 1;
        }
    }
    checks.push(CheckOutcome {
        check: "class-function".into(),
        pass: failures == 0,
        detail: format!("{samples} sampled (orbit, element, conjugator) triples, {failures} failures"),
    });

    // Orthonormality: Σ_x S_Ω(x) conj(S_Ω'(x)) = δ · |G| · |Ω|.
    let (pairs_checked, failures) = if order <= FULL_ORTHONORMALITY_ORDER {
        orthonormality_full(&group, &orbits, k)?
    } else {
        orthonormality_sampled(&group, &orbits, k, samples, &mut rng)?
    };
    checks.push(CheckOutcome {
        check: "orthonormality".into(),
        pass: failures == 0,
        detail: format!(
            "{pairs_checked} {} pairs, {failures} failures",
            if order <= FULL_ORTHONORMALITY_ORDER { "(all)" } else { "sampled" }
        ),
    });

    // Σ_Ω Φ_Ω(0)^2 with Φ_Ω(0) = |Ω| / p^i.
    let zero = vec![0i64; spec.dim()];
    let mut degree_sum = BigRational::zero();
    for (members, &i) in orbits.iter().zip(&half_exps) {
        let s = orbit_exponent_sum(members, k, &zero, &ctx)?
            .as_integer()
            .ok_or_else(|| Error::Inconsistency("Φ(0) is not an integer".into()))?;
        let deg = BigRational::new(BigInt::from(s), num_traits::pow(BigInt::from(p), i as usize));
        degree_sum += &deg * &deg;
    }
    let expected = BigRational::from_integer(BigInt::from(order));
    checks.push(CheckOutcome {
        check: "degree-squares".into(),
        pass: degree_sum == expected,
        detail: format!("sum of squared degrees {degree_sum}, group order {order}"),
    });

    let class_count = group.conjugacy_class_count();
    checks.push(CheckOutcome {
        check: "orbits-vs-classes".into(),
        pass: class_count == orbit_count,
        detail: format!("{orbit_count} orbits, {class_count} conjugacy classes"),
    });
    Ok(KirillovReport {
        level: k,
        group_order: order,
        orbit_count,
        class_count,
        checks,
    })
}

/// Literal inner products over every element, for every pair of orbits.
fn orthonormality_full(group: &FiniteQuotientGroup, orbits: &[Vec<Vec<i64>>], k: u32) -> Result<(usize, usize)> {
    let ctx = *group.law().spec().ctx();
    let order = group.order();
    let values: Vec<Vec<CycloValue>> = orbits
        .par_iter()
        .map(|members| {
            (0..order)
                .map(|x| orbit_exponent_sum(members, k, &group.element(x), &ctx))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let conj: Vec<Vec<CycloValue>> = values
        .iter()
        .map(|vs| vs.iter().map(CycloValue::conjugate).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..orbits.len())
        .flat_map(|a| (0..orbits.len()).map(move |b| (a, b)))
        .collect();
    let failures = pairs
        .par_iter()
        .filter(|&&(a, b)| {
            let mut s = CycloValue::zero(&ctx, k).expect("level checked");
            for (x, y) in values[a].iter().zip(&conj[b]) {
                s = &s + &(x * y);
            }
            let expected = if a == b { order as i64 * orbits[a].len() as i64 } else { 0 };
            s.as_integer() != Some(expected)
        })
        .count();
    Ok((pairs.len(), failures))
}

/// Sampled inner products, evaluated as `Σ_{ω, ω'} Π_i G(ω_i - ω'_i)` where
/// `G(d) = Σ_{x mod p^k} θ_k^{d x}` is the character sum of one coordinate.
fn orthonormality_sampled(
    group: &FiniteQuotientGroup,
    orbits: &[Vec<Vec<i64>>],
    k: u32,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, usize)> {
    let ctx = *group.law().spec().ctx();
    let q = ctx.pow(k);
    let coordinate_sums: Vec<CycloValue> = (0..q)
        .map(|d| {
            let mut hist = vec![0i64; q as usize];
            for x in 0..q {
                hist[((d as i128 * x as i128) % q as i128) as usize] += 1;
            }
            CycloValue::from_exponent_histogram(&ctx, k, &hist)
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..samples)
        .map(|s| {
            let a = rng.gen_range(0..orbits.len());
            // Every other sample is a diagonal pair so both values of δ are exercised.
            let b = if s % 2 == 0 { a } else { rng.gen_range(0..orbits.len()) };
            (a, b)
        })
        .collect();
    let failures = pairs
        .par_iter()
        .filter(|&&(a, b)| {
            let mut diffs: HashMap<Vec<i64>, i64> = HashMap::new();
            for w in &orbits[a] {
                for v in &orbits[b] {
                    let d: Vec<i64> = w.iter().zip(v).map(|(x, y)| (x - y).rem_euclid(q)).collect();
                    *diffs.entry(d).or_default() += 1;
                }
            }
            let mut total = CycloValue::zero(&ctx, k).expect("level checked");
            for (d, count) in diffs {
                let mut prod = CycloValue::one(&ctx, k).expect("level checked");
                for &di in &d {
                    let g = &coordinate_sums[di as usize];
                    if g.is_zero() {
                        prod = CycloValue::zero(&ctx, k).expect("level checked");
                        break;
                    }
                    prod = &prod * g;
                }
                total = &total + &prod.scale(count);
            }
            let expected = if a == b { group.order() as i64 * orbits[a].len() as i64 } else { 0 };
            total.as_integer() != Some(expected)
        })
        .count();
    Ok((pairs.len(), failures))
}

/// Orbits versus classes can only be compared when both fit in memory.
pub fn fits_enumeration(spec: &LieAlgebraSpec, k: u32, limits: &Limits) -> bool {
    (spec.ctx().pow(k) as u64)
        .checked_pow(spec.dim() as u32)
        .is_some_and(|o| o <= limits.enumeration_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeContext;
    use crate::liealg::standard::*;

    fn ctx(p: i64) -> PrimeContext {
        PrimeContext::with_default_level(p).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bch_low_degrees() {
        let t = bch_table();
        assert_eq!(t[1], vec![(vec![0], q(1, 1)), (vec![1], q(1, 1))]);
        // ½[x,y] as (1/4)([x,y]) - (1/4)([y,x]) in left-normed form.
        let deg2: BigRational = t[2]
            .iter()
            .map(|(w, c)| if w == &vec![0, 1] { c.clone() } else { -c.clone() })
            .sum();
        assert_eq!(deg2, q(1, 2));
        assert!(t[6].iter().all(|(w, _)| w.len() == 6));
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(bch_degree_needed(1, 5, 2), 2);
        assert_eq!(bch_degree_needed(2, 3, 3), 2);
        assert_eq!(bch_degree_needed(1, 3, 2), 3);
        assert_eq!(bch_degree_needed(1, 3, 7), 13);
        let sl = scaled_sl2(ctx(3), 1);
        assert!(matches!(BchLaw::new(&sl, 7), Err(Error::SeriesDegreeExceeded { .. })));
    }

    #[test]
    fn identity_and_abelian() {
        let sl = scaled_sl2(ctx(5), 1);
        let law = BchLaw::new(&sl, 2).unwrap();
        assert_eq!(law.multiply(&[3, 7, 11], &[0, 0, 0]), vec![3, 7, 11]);
        let ab = abelian(ctx(3), 2);
        let law = BchLaw::new(&ab, 3).unwrap();
        assert_eq!(law.multiply(&[5, 20], &[25, 10]), vec![3, 3]);
    }

    #[test]
    fn class_counts() {
        let limits = Limits::default();
        assert_eq!(conjugacy_class_count(&abelian(ctx(3), 2), 2, &limits).unwrap(), 81);
        assert_eq!(conjugacy_class_count(&scaled_sl2(ctx(3), 1), 2, &limits).unwrap(), 105);
        assert_eq!(conjugacy_class_count(&scaled_sl2(ctx(3), 2), 2, &limits).unwrap(), 729);
    }

    #[test]
    fn kirillov_small_cases() {
        let limits = Limits::default();
        let r = kirillov_verify(&abelian(ctx(3), 2), 2, 1000, 1, &limits).unwrap();
        assert!(r.all_passed(), "{r:?}");
        let err = kirillov_verify(&scaled_sl2(ctx(3), 1), 2, 1000, 1, &limits).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation { .. }));
        let r = kirillov_verify_unchecked(&scaled_sl2(ctx(3), 1), 2, 1000, 1, &limits).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.orbit_count, 105);
    }
}
