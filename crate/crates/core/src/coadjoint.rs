//! Characters of `(L, +)` at finite level, radical indices, and the coadjoint
//! action of `N = exp(L)` on them.
//!
//! A character of order `p^k` is `w = Φ_{p^k}(a): l ↦ θ_k^{⟨a, l⟩}` for a
//! functional `a` that is primitive modulo `p^k`. The group acts by
//! `(g·w)(l) = w(Ad(g)^{-1} l)`; on coordinates, `exp(e_j)` sends `a` to
//! `exp(-ad e_j)^T a`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{mod_floor, mod_inverse, val_i128, CycloValue, PrimeContext, Val};
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraSpec;
use crate::matnf::{divisor_sum_index_exponent, IntMatrix};
use crate::Limits;

/// A character `Φ_{p^k}(a)` with `a` reduced into `[0, p^k)` and primitive when `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterHandle {
    a: Vec<i64>,
    level: u32,
}

impl CharacterHandle {
    pub fn trivial(n: usize) -> Self {
        Self {
            a: vec![0; n],
            level: 0,
        }
    }

    /// Reduces `a` modulo `p^k` and strips the common power of `p`, lowering
    /// the level accordingly.
    pub fn normalize(a: &[i64], k: u32, ctx: &PrimeContext) -> Self {
        let p = ctx.p();
        let q = ctx.pow(k);
        let reduced: Vec<i64> = a.iter().map(|&x| x.rem_euclid(q)).collect();
        let v = reduced
            .iter()
            .map(|&x| val_i128(x as i128, p))
            .min()
            .unwrap_or(Val::Infinite);
        match v {
            Val::Finite(v) if v < k => {
                let d = p.pow(v);
                Self {
                    a: reduced.iter().map(|&x| x / d).collect(),
                    level: k - v,
                }
            }
            _ => Self::trivial(a.len()),
        }
    }

    /// Wraps an already primitive residue vector at level `k` without checks.
    pub(crate) fn from_primitive(a: Vec<i64>, level: u32) -> Self {
        Self { a, level }
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_trivial(&self) -> bool {
        self.level == 0
    }

    /// `⟨a, l⟩ mod p^k`.
    pub fn pairing(&self, l: &[i64], ctx: &PrimeContext) -> i64 {
        let q = ctx.pow(self.level);
        let s: i128 = self
            .a
            .iter()
            .zip(l)
            .map(|(&x, &y)| x as i128 * (y.rem_euclid(q)) as i128)
            .sum();
        mod_floor(s, q)
    }
}

/// `w(l) = θ_k^{⟨a, l⟩}`.
pub fn char_value(w: &CharacterHandle, l: &[i64], ctx: &PrimeContext) -> Result<CycloValue> {
    CycloValue::root_power(ctx, w.level, w.pairing(l, ctx))
}

/// `log_p |L : Rad(w)|`: the index of `Ψ(a)^{-1}(p^k L*)` in `L`.
pub fn radical_exponent(spec: &LieAlgebraSpec, w: &CharacterHandle) -> Result<u32> {
    if w.is_trivial() {
        return Ok(0);
    }
    let d = spec.psi_divisors(&w.a);
    let e = divisor_sum_index_exponent(&d, w.level) as u32;
    if !e.is_multiple_of(2) {
        return Err(Error::OddExponent(e));
    }
    Ok(e)
}

/// A square matrix with entries reduced modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    n: usize,
    modulus: i64,
    entries: Vec<i64>,
}

impl ModMatrix {
    pub fn identity(n: usize, modulus: i64) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % modulus;
        }
        Self { n, modulus, entries }
    }

    pub fn from_int(m: &IntMatrix, modulus: i64) -> Self {
        assert_eq!(m.rows(), m.cols());
        let q = BigInt::from(modulus);
        let entries = m
            .entries()
            .iter()
            .map(|x| {
                let r = ((x % &q) + &q) % &q;
                i64::try_from(r).expect("residue fits in i64")
            })
            .collect();
        Self {
            n: m.rows(),
            modulus,
            entries,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let n = self.n;
        let m = self.modulus as i128;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: i128 = (0..n)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128 % m)
                    .sum();
                entries[i * n + j] = (s % m) as i64;
            }
        }
        Self {
            n,
            modulus: self.modulus,
            entries,
        }
    }

    /// `M v mod modulus`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                let s: i128 = (0..self.n).map(|j| self.get(i, j) as i128 * v[j] as i128).sum();
                mod_floor(s, self.modulus)
            })
            .collect()
    }

    /// `M^T v mod modulus`.
    pub fn apply_transpose(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|j| {
                let s: i128 = (0..self.n).map(|i| self.get(i, j) as i128 * v[i] as i128).sum();
                mod_floor(s, self.modulus)
            })
            .collect()
    }

    /// Reduces to a smaller modulus dividing the current one.
    pub fn reduce(&self, modulus: i64) -> Self {
        assert_eq!(self.modulus % modulus, 0);
        Self {
            n: self.n,
            modulus,
            entries: self.entries.iter().map(|&x| x % modulus).collect(),
        }
    }
}

/// Smallest `m ≥ 1` with `m·u - ⌊(m-1)/(p-1)⌋ ≥ e`: every term of the
/// exponential series of degree `m` or more vanishes modulo `p^e`.
fn exp_truncation(u: u32, p: i64, e: u32) -> u32 {
    let mut m = 1u32;
    while (m as i64) * u as i64 - (m as i64 - 1) / (p - 1) < e as i64 {
        m += 1;
    }
    m
}

/// `exp(ad x) mod p^e` for integral `x` in a uniform lattice.
pub fn adjoint_action_matrix(spec: &LieAlgebraSpec, x: &[i64], e: u32) -> Result<ModMatrix> {
    let report = spec.validate()?;
    let u = report.require_uniform()?;
    exp_ad(spec, x, e, u)
}

pub(crate) fn exp_ad(spec: &LieAlgebraSpec, x: &[i64], e: u32, u: u32) -> Result<ModMatrix> {
    let n = spec.dim();
    let p = spec.p();
    let ctx = spec.ctx();
    ctx.check_level(e)?;
    let q = ctx.pow(e);
    if u == u32::MAX || x.iter().all(|&v| v == 0) {
        return Ok(ModMatrix::identity(n, q));
    }
    let terms = exp_truncation(u, p, e);
    // Work modulo p^{e + V} so that dividing by the p-part of m! loses nothing.
    let vmax = (0..terms).map(|m| factorial_valuation(m, p)).max().unwrap_or(0);
    let wide = checked_pow(p, e + vmax).ok_or(Error::LevelOverflow {
        level: e + vmax,
        e_max: ctx.e_max(),
    })?;
    let ad = ModMatrix::from_int(&spec.ad_matrix(x), wide);
    let mut power = ModMatrix::identity(n, wide);
    let mut sum = vec![0i128; n * n];
    let mut unit_fact: i128 = 1;
    for m in 0..terms {
        if m > 0 {
            power = power.mul(&ad);
            let mut f = m as i128;
            while f % p as i128 == 0 {
                f /= p as i128;
            }
            unit_fact = unit_fact * f % q as i128;
        }
        let v = factorial_valuation(m, p);
        let pv = p.pow(v) as i128;
        let inv = mod_inverse(unit_fact, q as i128);
        for (s, &entry) in sum.iter_mut().zip(&power.entries) {
            let entry = entry as i128;
            if entry == 0 {
                continue;
            }
            if entry % pv != 0 {
                return Err(Error::Inconsistency(format!(
                    "(ad x)^{m} not divisible by p^{v}"
                )));
            }
            *s = (*s + (entry / pv) % q as i128 * inv) % q as i128;
        }
    }
    Ok(ModMatrix {
        n,
        modulus: q,
        entries: sum.into_iter().map(|s| mod_floor(s, q)).collect(),
    })
}

fn factorial_valuation(m: u32, p: i64) -> u32 {
    let mut v = 0;
    let mut q = p as u64;
    while q <= m as u64 {
        v += m / q as u32;
        q *= p as u64;
    }
    v
}

fn checked_pow(p: i64, e: u32) -> Option<i64> {
    let mut r: i64 = 1;
    for _ in 0..e {
        r = r.checked_mul(p)?;
        if r > (1i64 << 62) {
            return None;
        }
    }
    Some(r)
}

/// Dual action of the basis generators at a fixed level: `a ↦ exp(-ad e_j)^T a`.
#[derive(Clone, Debug)]
pub struct CoadjointAction {
    level: u32,
    generators: Vec<ModMatrix>,
}

impl CoadjointAction {
    pub fn new(spec: &LieAlgebraSpec, level: u32) -> Result<Self> {
        let report = spec.validate()?;
        let u = report.require_uniform()?;
        Self::with_uniformity(spec, level, u)
    }

    pub(crate) fn with_uniformity(spec: &LieAlgebraSpec, level: u32, u: u32) -> Result<Self> {
        let n = spec.dim();
        let generators = (0..n)
            .map(|j| {
                let mut x = vec![0i64; n];
                x[j] = -1;
                exp_ad(spec, &x, level.max(1), u).map(|m| m.reduce(spec.ctx().pow(level)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { level, generators })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[ModMatrix] {
        &self.generators
    }

    /// Images of `a` under every generator.
    pub fn neighbours<'a>(&'a self, a: &'a [i64]) -> impl Iterator<Item = Vec<i64>> + 'a {
        self.generators.iter().map(move |g| g.apply_transpose(a))
    }
}

/// An `N`-orbit of characters of one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    /// Lexicographically least member.
    pub rep: CharacterHandle,
    pub size: u64,
    pub radical_exponent: u32,
    #[serde(skip)]
    pub members: Option<Vec<Vec<i64>>>,
}

/// Breadth-first closure of `a` (taken modulo `p^level`) under the generators.
pub fn orbit_members(action: &CoadjointAction, a: &[i64], cap: u64) -> Result<Vec<Vec<i64>>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = a.to_vec();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        for y in action.neighbours(&x) {
            if !seen.contains(&y) {
                if seen.len() as u64 >= cap {
                    return Err(Error::ResourceCap {
                        what: "orbit size",
                        limit: cap,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut members: Vec<Vec<i64>> = seen.into_iter().collect();
    members.sort_unstable();
    Ok(members)
}

/// The orbit of `w`, with its size checked against `p^{radical exponent}`.
pub fn coadjoint_orbit(
    spec: &LieAlgebraSpec,
    action: &CoadjointAction,
    w: &CharacterHandle,
    limits: &Limits,
) -> Result<OrbitRecord> {
    if w.is_trivial() {
        return Ok(OrbitRecord {
            rep: w.clone(),
            size: 1,
            radical_exponent: 0,
            members: Some(vec![w.a.clone()]),
        });
    }
    if action.level != w.level {
        return Err(Error::Inconsistency(format!(
            "action at level {} applied to a character of level {}",
            action.level, w.level
        )));
    }
    let members = orbit_members(action, &w.a, limits.orbit_cap)?;
    let rad = radical_exponent(spec, w)?;
    let expected = (spec.p() as u64).checked_pow(rad);
    if expected != Some(members.len() as u64) {
        return Err(Error::OrbitSizeMismatch {
            rep: w.a.clone(),
            level: w.level,
            found: members.len(),
            expected_exp: rad,
        });
    }
    Ok(OrbitRecord {
        rep: CharacterHandle::from_primitive(members[0].clone(), w.level),
        size: members.len() as u64,
        radical_exponent: rad,
        members: Some(members),
    })
}

/// `p^{-i} · sum`, with `|Ω| = p^{2i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KirillovValue {
    pub sum: CycloValue,
    pub denom_exp: u32,
}

/// `Φ_Ω(u) = |Ω|^{-1/2} Σ_{ω ∈ Ω} ω(u)`.
pub fn kirillov_character_value(
    orbit: &OrbitRecord,
    u: &[i64],
    ctx: &PrimeContext,
) -> Result<KirillovValue> {
    let members = orbit
        .members
        .as_ref()
        .ok_or_else(|| Error::Inconsistency("orbit members were not materialized".into()))?;
    let level = orbit.rep.level;
    let sum = orbit_exponent_sum(members, level, u, ctx)?;
    Ok(KirillovValue {
        sum,
        denom_exp: orbit.radical_exponent / 2,
    })
}

/// `Σ_{ω} θ_level^{⟨ω, u⟩}` via an exponent histogram.
pub(crate) fn orbit_exponent_sum(
    members: &[Vec<i64>],
    level: u32,
    u: &[i64],
    ctx: &PrimeContext,
) -> Result<CycloValue> {
    let q = ctx.pow(level);
    let mut hist = vec![0i64; q as usize];
    for m in members {
        let s: i128 = m.iter().zip(u).map(|(&x, &y)| x as i128 * y as i128).sum();
        hist[mod_floor(s, q) as usize] += 1;
    }
    CycloValue::from_exponent_histogram(ctx, level, &hist)
}

/// Indices `t` (0-based) such that `a ∘ T_t` lies in the orbit of `w`.
///
/// The matrices act on coordinates by `a ↦ T^T a`, since `(a∘T)(e_j) = a(T e_j)`.
pub fn classify_orbit_by_k(
    spec: &LieAlgebraSpec,
    orbit: &OrbitRecord,
    automorphisms: &[IntMatrix],
) -> Result<BTreeSet<usize>> {
    let level = orbit.rep.level;
    let q = spec.ctx().pow(level);
    let members = orbit
        .members
        .as_ref()
        .ok_or_else(|| Error::Inconsistency("orbit members were not materialized".into()))?;
    let mut out = BTreeSet::new();
    for (t, m) in automorphisms.iter().enumerate() {
        if !spec.is_automorphism_mod(m, level.max(1)) {
            return Err(Error::NotAutomorphism(t));
        }
        let image = ModMatrix::from_int(m, q).apply_transpose(&orbit.rep.a);
        if members.binary_search(&image).is_ok() {
            out.insert(t);
        }
    }
    Ok(out)
}

/// Canonical representative of the orbit containing `a` at the action's level.
pub fn canonical_rep(action: &CoadjointAction, a: &[i64], cap: u64) -> Result<Vec<i64>> {
    Ok(orbit_members(action, a, cap)?.swap_remove(0))
}
