//! Character-degree counts `λ_i`, zeta truncations in `t = p^{-s}`, twisted
//! character sums `μ_i(g)`, rational fitting, and counts split by the classes
//! of a group of outer automorphisms.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{mod_floor, val_i128, CycloValue, Val};
use crate::coadjoint::{
    classify_orbit_by_k, coadjoint_orbit, kirillov_character_value, CharacterHandle,
    CoadjointAction,
};
use crate::error::{Error, Result};
use crate::liealg::{LieAlgebraSpec, StructureReport};
use crate::matnf::IntMatrix;
use crate::Limits;

/// Number of primitive functionals at one level, keyed by radical exponent.
pub type LevelCounts = BTreeMap<u32, BigUint>;

/// A residue class `a ≡ residue (mod p^depth)` all of whose lifts to level `k`
/// share the radical exponent.
#[derive(Clone, Debug)]
pub struct ClosedNode<'a> {
    pub residue: &'a [i64],
    pub depth: u32,
    pub rad_exp: u32,
}

/// Depth-first refinement of primitive residues modulo `p^j`, `j = 1, …, k`.
///
/// Divisors of `Ψ(a)` below `p^j` are fixed by `a mod p^j`. Once as many are
/// fixed as the generic rank of `Ψ`, the remaining ones are infinite for every
/// lift, so the whole class shares `Σ_{d_i < j} (k - d_i)` and is closed.
/// With `max_exp`, classes whose fixed part already exceeds it are dropped.
struct ResidueTree<'s> {
    spec: &'s LieAlgebraSpec,
    k: u32,
    rank: usize,
    max_exp: Option<u32>,
    node_cap: u64,
    nodes: AtomicU64,
}

impl<'s> ResidueTree<'s> {
    fn new(spec: &'s LieAlgebraSpec, k: u32, max_exp: Option<u32>, limits: &Limits) -> Self {
        Self {
            spec,
            k,
            rank: spec.generic_psi_rank(),
            max_exp,
            node_cap: limits.node_cap,
            nodes: AtomicU64::new(0),
        }
    }

    fn walk<R, L, M>(&self, leaf: L, merge: M) -> Result<R>
    where
        R: Send + Default,
        L: Fn(&ClosedNode) -> R + Sync,
        M: Fn(R, R) -> R + Sync + Send,
    {
        let n = self.spec.dim();
        let p = self.spec.p();
        let top: Vec<Vec<i64>> = digit_vectors(n, p).into_iter().skip(1).collect();
        top.par_iter()
            .map(|r| self.descend(r.clone(), 1, &leaf, &merge))
            .try_reduce(R::default, |a, b| Ok(merge(a, b)))
    }

    fn descend<R, L, M>(&self, residue: Vec<i64>, depth: u32, leaf: &L, merge: &M) -> Result<R>
    where
        R: Send + Default,
        L: Fn(&ClosedNode) -> R + Sync,
        M: Fn(R, R) -> R + Sync,
    {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.node_cap {
            return Err(Error::ResourceCap {
                what: "residue tree nodes",
                limit: self.node_cap,
            });
        }
        let d = self.spec.psi_divisors(&residue);
        let fixed: Vec<u32> = d
            .iter()
            .filter_map(|v| v.finite())
            .filter(|&v| v < depth)
            .collect();
        let partial: u32 = fixed.iter().map(|&v| self.k - v).sum();
        if self.max_exp.is_some_and(|m| partial > m) {
            return Ok(R::default());
        }
        if fixed.len() == self.rank || depth == self.k {
            return Ok(leaf(&ClosedNode {
                residue: &residue,
                depth,
                rad_exp: partial,
            }));
        }
        let p = self.spec.p();
        let step = p.pow(depth);
        let mut acc = R::default();
        for t in digit_vectors(residue.len(), p) {
            let child: Vec<i64> = residue.iter().zip(&t).map(|(&r, &x)| r + step * x).collect();
            let sub = self.descend(child, depth + 1, leaf, merge)?;
            acc = merge(acc, sub);
        }
        Ok(acc)
    }
}

/// All vectors in `[0, p)^n`, the zero vector first.
fn digit_vectors(n: usize, p: i64) -> Vec<Vec<i64>> {
    let total = (p as u64).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % p as u64) as i64;
                    idx /= p as u64;
                    d
                })
                .collect()
        })
        .collect()
}

fn pow_big(p: i64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p as u64), e as usize)
}

fn merge_counts(mut a: LevelCounts, b: LevelCounts) -> LevelCounts {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Primitive `a mod p^k` counted by radical exponent, by residue-tree refinement.
pub fn count_by_radical_at_level(spec: &LieAlgebraSpec, k: u32, limits: &Limits) -> Result<LevelCounts> {
    count_by_radical_bounded(spec, k, None, limits)
}

/// As [`count_by_radical_at_level`], omitting exponents above `max_exp`.
pub fn count_by_radical_bounded(
    spec: &LieAlgebraSpec,
    k: u32,
    max_exp: Option<u32>,
    limits: &Limits,
) -> Result<LevelCounts> {
    spec.validate()?.require_uniform()?;
    spec.ctx().check_level(k)?;
    if k == 0 {
        return Ok(LevelCounts::new());
    }
    let n = spec.dim() as u32;
    let tree = ResidueTree::new(spec, k, max_exp, limits);
    let counts = tree.walk(
        |node| {
            let mut m = LevelCounts::new();
            m.insert(node.rad_exp, pow_big(spec.p(), n * (k - node.depth)));
            m
        },
        merge_counts,
    )?;
    for (&e, c) in &counts {
        if !(c % pow_big(spec.p(), e)).is_zero() {
            return Err(Error::Inconsistency(format!(
                "{c} characters of radical exponent {e} at level {k} do not split into orbits"
            )));
        }
    }
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LambdaStatus {
    Exact,
    /// Only characters of order at most `p^k` were counted.
    LowerBoundAtLevel(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaEntry {
    pub i: u32,
    pub value: BigUint,
    pub status: LambdaStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    pub p: i64,
    pub entries: Vec<LambdaEntry>,
}

impl LambdaTable {
    pub fn values(&self) -> Vec<BigUint> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }

    pub fn zeta(&self) -> ZetaPolynomial {
        ZetaPolynomial::from_integers(self.entries.iter().map(|e| BigInt::from(e.value.clone())))
    }
}

/// Exact `λ_0, …, λ_{i_max}` for a perfect uniform lattice.
///
/// Characters of degree `p^i` have order at most `p^{2i + m(L)}`, so counting
/// every level up to that bound is exhaustive.
pub fn lambda_exact(spec: &LieAlgebraSpec, i_max: u32, limits: &Limits) -> Result<LambdaTable> {
    lambda_exact_with(spec, i_max, 0, &mut |k, max_exp| {
        count_by_radical_bounded(spec, k, Some(max_exp), limits)
    })
}

/// [`lambda_exact`] with `extra_levels` levels beyond the bound and an
/// injectable per-level counter `(k, max_exp) ↦ counts`.
pub fn lambda_exact_with(
    spec: &LieAlgebraSpec,
    i_max: u32,
    extra_levels: u32,
    counts: &mut dyn FnMut(u32, u32) -> Result<LevelCounts>,
) -> Result<LambdaTable> {
    let report = spec.validate()?;
    report.require_uniform()?;
    let m = report.require_perfect()?;
    let max_exp = 2 * i_max;
    let top = max_exp + m + extra_levels;
    spec.ctx().check_level(top)?;
    let per_level = (1..=top)
        .map(|k| counts(k, max_exp).map(|c| (k, c)))
        .collect::<Result<Vec<_>>>()?;
    let entries = (0..=i_max)
        .map(|i| {
            let bound = 2 * i + m + extra_levels;
            let value = orbits_of_degree(spec.p(), i, &per_level, bound)?;
            Ok(LambdaEntry {
                i,
                value,
                status: LambdaStatus::Exact,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaTable {
        p: spec.p(),
        entries,
    })
}

/// Orbit counts at levels `≤ k_max` for any uniform lattice, labelled as lower bounds.
pub fn lambda_truncated(spec: &LieAlgebraSpec, i_max: u32, k_max: u32, limits: &Limits) -> Result<LambdaTable> {
    let per_level = (1..=k_max)
        .map(|k| count_by_radical_bounded(spec, k, Some(2 * i_max), limits).map(|c| (k, c)))
        .collect::<Result<Vec<_>>>()?;
    let entries = (0..=i_max)
        .map(|i| {
            Ok(LambdaEntry {
                i,
                value: orbits_of_degree(spec.p(), i, &per_level, k_max)?,
                status: LambdaStatus::LowerBoundAtLevel(k_max),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaTable {
        p: spec.p(),
        entries,
    })
}

fn orbits_of_degree(p: i64, i: u32, per_level: &[(u32, LevelCounts)], bound: u32) -> Result<BigUint> {
    let orbit = pow_big(p, 2 * i);
    let mut value = if i == 0 { BigUint::one() } else { BigUint::zero() };
    for (k, counts) in per_level {
        if *k > bound {
            continue;
        }
        if let Some(c) = counts.get(&(2 * i)) {
            let (q, r) = c.div_rem(&orbit);
            if !r.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "level {k}: {c} characters of degree p^{i} do not form whole orbits"
                )));
            }
            value += q;
        }
    }
    Ok(value)
}

/// A polynomial in `t = p^{-s}` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaPolynomial {
    coeffs: Vec<BigRational>,
}

impl ZetaPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(values: impl IntoIterator<Item = BigInt>) -> Self {
        Self::new(values.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the last nonzero coefficient plus one.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, i: usize, c: &BigRational) {
        if self.coeffs.len() <= i {
            self.coeffs.resize(i + 1, BigRational::zero());
        }
        self.coeffs[i] += c;
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    /// Keeps the coefficients of `t^0, …, t^{max_exp}`.
    pub fn truncate(&self, max_exp: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_exp + 1).cloned().collect())
    }
}

/// `numerator / denominator` with integer coefficients in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFit {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
    /// Coefficients matched beyond the `2L` that determine an order-`L` recurrence.
    pub validation_window: usize,
}

impl RationalFit {
    /// First `len` Taylor coefficients.
    pub fn series(&self, len: usize) -> Vec<BigRational> {
        let d0 = BigRational::from_integer(self.denominator[0].clone());
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for i in 0..len {
            let mut s = BigRational::from_integer(self.numerator.get(i).cloned().unwrap_or_default());
            for (j, d) in self.denominator.iter().enumerate().skip(1) {
                if j > i {
                    break;
                }
                s -= BigRational::from_integer(d.clone()) * &out[i - j];
            }
            out.push(s / &d0);
        }
        out
    }
}

/// Default largest denominator degree tried by [`fit_rational`].
pub const DEFAULT_MAX_DEN: usize = 6;

/// Fits `N(t)/C(t)` to a coefficient sequence via the minimal linear recurrence
/// (Berlekamp–Massey over `Q`).
pub fn fit_rational(coeffs: &[BigInt], max_den: usize) -> Result<RationalFit> {
    let needed = 2 * max_den + 2;
    if coeffs.len() < needed {
        return Err(Error::InsufficientCoefficients {
            needed,
            got: coeffs.len(),
        });
    }
    let s: Vec<BigRational> = coeffs.iter().cloned().map(BigRational::from_integer).collect();
    let (c, l) = berlekamp_massey(&s);
    if l > max_den || 2 * l + 2 > s.len() {
        return Err(Error::NoFit(max_den));
    }
    // N = C·S mod t^L.
    let num: Vec<BigRational> = (0..l)
        .map(|i| {
            (0..=i)
                .filter(|&j| j < c.len())
                .map(|j| &c[j] * &s[i - j])
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    let (numerator, denominator) = normalize_pair(&num, &c);
    let fit = RationalFit {
        numerator,
        denominator,
        validation_window: s.len() - 2 * l,
    };
    if fit.series(s.len()) != s {
        return Err(Error::Inconsistency("fitted rational function does not reproduce its input".into()));
    }
    Ok(fit)
}

/// Returns the connection polynomial `C` (with `C[0] = 1`) and the recurrence length.
fn berlekamp_massey(s: &[BigRational]) -> (Vec<BigRational>, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = BigRational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[n - i];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] -= &coef * bi;
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            last = d;
            shift = 1;
        } else {
            c = next;
            shift += 1;
        }
    }
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    (c, l)
}

/// Clears denominators, removes the common content and makes `den(0) > 0`.
fn normalize_pair(num: &[BigRational], den: &[BigRational]) -> (Vec<BigInt>, Vec<BigInt>) {
    let lcm = num
        .iter()
        .chain(den)
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scale = |v: &[BigRational]| -> Vec<BigInt> {
        v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
    };
    let mut n = scale(num);
    let mut d = scale(den);
    while n.last().is_some_and(Zero::is_zero) {
        n.pop();
    }
    let g = n.iter().chain(&d).fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if d[0].is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = g * sign;
    if !g.is_zero() {
        n.iter_mut().for_each(|x| *x = &*x / &g);
        d.iter_mut().for_each(|x| *x = &*x / &g);
    }
    (n, d)
}

/// Per-level counts of primitive `a` of each radical exponent with
/// `⟨a, g⟩ ≡ 0 (mod p^k)` (first entry) and with `⟨a, g⟩` of valuation exactly
/// `k - 1` (second entry).
pub type TwistCounts = BTreeMap<u32, (BigUint, BigUint)>;

pub fn twist_counts_at_level(
    spec: &LieAlgebraSpec,
    g: &[i64],
    k: u32,
    max_exp: u32,
    limits: &Limits,
) -> Result<TwistCounts> {
    spec.validate()?.require_uniform()?;
    spec.ctx().check_level(k)?;
    check_dim(spec, g)?;
    let p = spec.p();
    let n = spec.dim() as u32;
    let q = spec.ctx().pow(k);
    let g: Vec<i64> = g.iter().map(|&x| x.rem_euclid(q)).collect();
    let gamma = g.iter().map(|&x| val_i128(x as i128, p)).min().unwrap_or(Val::Infinite);
    let tree = ResidueTree::new(spec, k, Some(max_exp), limits);
    tree.walk(
        |node| {
            let j = node.depth;
            let r = match gamma {
                Val::Finite(gv) => (j + gv).min(k),
                Val::Infinite => k,
            };
            let t: i128 = node.residue.iter().zip(&g).map(|(&a, &b)| a as i128 * b as i128).sum();
            let t = mod_floor(t, q);
            let lifts = pow_big(p, n * (k - j));
            let mult = &lifts / pow_big(p, k - r);
            let pr = p.pow(r);
            let mut w1 = BigUint::zero();
            let mut w2 = BigUint::zero();
            if t % pr == 0 {
                w1 = mult.clone();
                if r < k {
                    w2 = &mult * BigUint::from((p - 1) as u64);
                }
            }
            if r == k && t != 0 && val_i128(t as i128, p) == Val::Finite(k - 1) {
                w2 = lifts;
            }
            let mut m = TwistCounts::new();
            m.insert(node.rad_exp, (w1, w2));
            m
        },
        |mut a, b| {
            for (e, (x, y)) in b {
                let entry = a.entry(e).or_default();
                entry.0 += x;
                entry.1 += y;
            }
            a
        },
    )
}

fn twisted_levels(spec: &LieAlgebraSpec, report: &StructureReport, i_max: u32) -> Result<u32> {
    report.require_uniform()?;
    let m = report.require_perfect()?;
    let top = 2 * i_max + m;
    spec.ctx().check_level(top)?;
    Ok(top)
}

/// `μ_i(g) = Σ_{λ(1) = p^i} λ(g)` through Galois orbit sums: a character
/// contributes `1` when it kills `g` and `-1/(p-1)` when `w(g)` has order `p`.
pub fn twisted_mu_galois(spec: &LieAlgebraSpec, g: &[i64], i_max: u32, limits: &Limits) -> Result<ZetaPolynomial> {
    let report = spec.validate()?;
    report.require_correspondence(spec.p())?;
    twisted_mu_galois_unchecked(spec, g, i_max, limits)
}

/// [`twisted_mu_galois`] without the orbit-method hypotheses on `(p, u)`;
/// the counts are still well defined.
pub fn twisted_mu_galois_unchecked(
    spec: &LieAlgebraSpec,
    g: &[i64],
    i_max: u32,
    limits: &Limits,
) -> Result<ZetaPolynomial> {
    let report = spec.validate()?;
    let top = twisted_levels(spec, &report, i_max)?;
    check_dim(spec, g)?;
    let p = spec.p();
    let mut raw = vec![BigRational::zero(); i_max as usize + 1];
    raw[0] = BigRational::one();
    let pm1 = BigRational::from_integer(BigInt::from(p - 1));
    for k in 1..=top {
        for (e, (w1, w2)) in twist_counts_at_level(spec, g, k, 2 * i_max, limits)? {
            let i = (e / 2) as usize;
            if i > i_max as usize {
                continue;
            }
            raw[i] += BigRational::from_integer(w1.into());
            raw[i] -= BigRational::from_integer(BigInt::from(w2)) / &pm1;
        }
    }
    Ok(ZetaPolynomial::new(
        raw.into_iter()
            .enumerate()
            .map(|(i, v)| v / BigRational::from_integer(num_traits::pow(BigInt::from(p), i)))
            .collect(),
    ))
}

fn check_dim(spec: &LieAlgebraSpec, g: &[i64]) -> Result<()> {
    if g.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: g.len(),
        });
    }
    Ok(())
}

/// `μ_i(g)` summed orbit by orbit from `Φ_Ω(g) = p^{-i} Σ_{ω ∈ Ω} ω(g)` in
/// cyclotomic arithmetic, then compared with [`twisted_mu_galois`].
pub fn twisted_mu_direct(spec: &LieAlgebraSpec, g: &[i64], i_max: u32, limits: &Limits) -> Result<ZetaPolynomial> {
    let report = spec.validate()?;
    report.require_correspondence(spec.p())?;
    twisted_mu_direct_unchecked(spec, g, i_max, limits)
}

/// [`twisted_mu_direct`] without the orbit-method hypotheses on `(p, u)`.
pub fn twisted_mu_direct_unchecked(
    spec: &LieAlgebraSpec,
    g: &[i64],
    i_max: u32,
    limits: &Limits,
) -> Result<ZetaPolynomial> {
    let report = spec.validate()?;
    let top = twisted_levels(spec, &report, i_max)?;
    check_dim(spec, g)?;
    let ctx = *spec.ctx();
    let p = spec.p();
    let u = report.require_uniform()?;
    let n = spec.dim() as u32;
    let mut sums: Vec<CycloValue> = (0..=i_max).map(|_| CycloValue::zero(&ctx, 0)).collect::<Result<_>>()?;
    sums[0] = CycloValue::one(&ctx, 0)?;
    for k in 1..=top {
        // Characters whose radical exponent can still be at most 2 i_max.
        let tree = ResidueTree::new(spec, k, Some(2 * i_max), limits);
        let lift_count = |node: &ClosedNode| (p as u64).pow(n * (k - node.depth));
        let total: u64 = tree.walk(|node| lift_count(node), |a, b| a + b)?;
        if total > limits.enumeration_cap {
            return Err(Error::ResourceCap {
                what: "characters enumerated for direct twisted sums",
                limit: limits.enumeration_cap,
            });
        }
        let tree = ResidueTree::new(spec, k, Some(2 * i_max), limits);
        let chars: Vec<Vec<i64>> = tree.walk(
            |node| expand_lifts(node.residue, node.depth, k, p),
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        let action = CoadjointAction::with_uniformity(spec, k, u)?;
        let mut seen: HashSet<Vec<i64>> = HashSet::with_capacity(chars.len());
        for a in chars {
            if seen.contains(&a) {
                continue;
            }
            let w = CharacterHandle::from_primitive(a, k);
            let orbit = coadjoint_orbit(spec, &action, &w, limits)?;
            let value = kirillov_character_value(&orbit, g, &ctx)?;
            let i = (orbit.size.trailing_zeros_base(p) / 2) as usize;
            if i <= i_max as usize {
                sums[i] = &sums[i] + &value.sum;
            }
            seen.extend(orbit.members.into_iter().flatten());
        }
    }
    let mut direct = Vec::with_capacity(sums.len());
    for (i, s) in sums.iter().enumerate() {
        let v = s.as_integer().ok_or(Error::IrrationalCharacterSum(i))?;
        direct.push(
            BigRational::from_integer(BigInt::from(v))
                / BigRational::from_integer(num_traits::pow(BigInt::from(p), i)),
        );
    }
    let direct = ZetaPolynomial::new(direct);
    let galois = twisted_mu_galois_unchecked(spec, g, i_max, limits)?;
    for i in 0..=i_max as usize {
        if direct.coeff(i) != galois.coeff(i) {
            return Err(Error::MismatchWithGaloisRoute {
                i,
                direct: direct.coeff(i).to_string(),
                galois: galois.coeff(i).to_string(),
            });
        }
    }
    Ok(direct)
}

trait PowerOf {
    fn trailing_zeros_base(self, p: i64) -> u32;
}

impl PowerOf for u64 {
    /// Exponent of `self` as a power of `p`; panics when it is not one.
    fn trailing_zeros_base(self, p: i64) -> u32 {
        let mut x = self;
        let mut e = 0;
        while x > 1 {
            assert_eq!(x % p as u64, 0, "{self} is not a power of {p}");
            x /= p as u64;
            e += 1;
        }
        e
    }
}

fn expand_lifts(residue: &[i64], depth: u32, k: u32, p: i64) -> Vec<Vec<i64>> {
    let mut out = vec![residue.to_vec()];
    for j in depth..k {
        let step = p.pow(j);
        out = out
            .into_iter()
            .flat_map(|r| {
                digit_vectors(r.len(), p).into_iter().map(move |t| {
                    r.iter().zip(&t).map(|(&x, &d)| x + step * d).collect::<Vec<i64>>()
                })
            })
            .collect();
    }
    out
}

/// The truncation `Σ_{orbits at levels ≤ k_max} t^{radExp/2}`, trivial character included.
pub fn orbit_truncation(spec: &LieAlgebraSpec, k_max: u32, limits: &Limits) -> Result<ZetaPolynomial> {
    let mut poly = ZetaPolynomial::default();
    poly.add_term(0, &BigRational::one());
    for k in 1..=k_max {
        for (e, c) in count_by_radical_at_level(spec, k, limits)? {
            let orbits = c / pow_big(spec.p(), e);
            poly.add_term((e / 2) as usize, &BigRational::from_integer(orbits.into()));
        }
    }
    Ok(poly)
}

/// Orbits at levels `≤ k_max` grouped by the set of automorphism indices `t`
/// with `Ω ∘ T_t = Ω`; each class carries `Σ t^{radExp/2}`.
pub fn equivariant_count(
    spec: &LieAlgebraSpec,
    automorphisms: &[IntMatrix],
    k_max: u32,
    limits: &Limits,
) -> Result<BTreeMap<BTreeSet<usize>, ZetaPolynomial>> {
    let report = spec.validate()?;
    let u = report.require_uniform()?;
    spec.ctx().check_level(k_max)?;
    for (t, m) in automorphisms.iter().enumerate() {
        if !spec.is_automorphism_mod(m, k_max.max(1)) {
            return Err(Error::NotAutomorphism(t));
        }
    }
    let n = spec.dim() as u32;
    let p = spec.p();
    let mut classes: BTreeMap<BTreeSet<usize>, ZetaPolynomial> = BTreeMap::new();
    let one = BigRational::one();
    classes
        .entry((0..automorphisms.len()).collect())
        .or_default()
        .add_term(0, &one);
    for k in 1..=k_max {
        let total = (p as u64)
            .checked_pow(n * k)
            .filter(|&t| t <= limits.enumeration_cap)
            .ok_or(Error::ResourceCap {
                what: "characters enumerated for equivariant counts",
                limit: limits.enumeration_cap,
            })?;
        let action = CoadjointAction::with_uniformity(spec, k, u)?;
        let q = spec.ctx().pow(k);
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        for idx in 0..total {
            let mut a = vec![0i64; n as usize];
            let mut t = idx;
            for x in a.iter_mut() {
                *x = (t % q as u64) as i64;
                t /= q as u64;
            }
            if a.iter().all(|&x| x % p == 0) || seen.contains(&a) {
                continue;
            }
            let orbit = coadjoint_orbit(spec, &action, &CharacterHandle::from_primitive(a, k), limits)?;
            let class = classify_orbit_by_k(spec, &orbit, automorphisms)?;
            classes
                .entry(class)
                .or_default()
                .add_term((orbit.radical_exponent / 2) as usize, &one);
            seen.extend(orbit.members.into_iter().flatten());
        }
    }
    Ok(classes)
}
