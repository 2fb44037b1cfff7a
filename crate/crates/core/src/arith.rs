//! Exact scalar arithmetic: p-adic valuations, the `D` division function and
//! the cyclotomic rings `Z[θ_m]` with `θ_m` a primitive `p^m`-th root of unity.
//!
//! `θ_m` is the class of `x` in `Z[x] / Φ_{p^m}(x)`. Values are stored in the
//! power basis `1, θ_m, …, θ_m^{φ(p^m)-1}`, which is a Z-basis, so equality of
//! canonical coefficient vectors is equality of algebraic integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Residues are kept below this bound so that products fit comfortably in `i128`.
pub const MAX_MODULUS: i64 = 1 << 40;

/// The working prime together with the deepest level `p^e_max` any computation may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: i64,
    e_max: u32,
}

impl PrimeContext {
    pub fn new(p: i64, e_max: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let limit = Self::level_limit(p);
        if e_max == 0 || e_max > limit {
            return Err(Error::LevelOverflow {
                level: e_max,
                e_max: limit,
            });
        }
        Ok(Self { p, e_max })
    }

    /// Context with the deepest level whose modulus stays below [`MAX_MODULUS`].
    pub fn with_default_level(p: i64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Self::new(p, Self::level_limit(p))
    }

    fn level_limit(p: i64) -> u32 {
        let mut e = 0;
        let mut q: i64 = 1;
        while q <= MAX_MODULUS / p {
            q *= p;
            e += 1;
        }
        e
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn e_max(&self) -> u32 {
        self.e_max
    }

    pub fn check_level(&self, level: u32) -> Result<()> {
        if level > self.e_max {
            Err(Error::LevelOverflow {
                level,
                e_max: self.e_max,
            })
        } else {
            Ok(())
        }
    }

    /// `p^k`; panics past `e_max`, callers validate levels first.
    pub fn pow(&self, k: u32) -> i64 {
        assert!(k <= self.e_max, "level {k} beyond e_max {}", self.e_max);
        self.p.pow(k)
    }
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A p-adic valuation: a natural number, or `Infinite` for zero.
///
/// The derived order puts every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(u32),
    Infinite,
}

impl Val {
    pub const ZERO: Val = Val::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Val::Infinite)
    }

    /// `self - other` for finite `other <= self`; infinite minus finite stays infinite.
    pub fn checked_sub(self, other: Val) -> Option<Val> {
        match (self, other) {
            (Val::Infinite, Val::Finite(_)) => Some(Val::Infinite),
            (Val::Finite(a), Val::Finite(b)) if a >= b => Some(Val::Finite(a - b)),
            _ => None,
        }
    }

    /// Display form with valuations at or past `cap` shown as `>=cap`.
    pub fn display_capped(self, cap: u32) -> String {
        match self {
            Val::Finite(v) if v < cap => v.to_string(),
            _ => format!(">={cap}"),
        }
    }
}

impl Add for Val {
    type Output = Val;

    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinite,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Val {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Val::Finite(v) => s.serialize_u32(*v),
            Val::Infinite => s.serialize_str("inf"),
        }
    }
}

pub fn padic_valuation(x: i64, ctx: &PrimeContext) -> Val {
    val_i128(x as i128, ctx.p)
}

pub fn val_i128(mut x: i128, p: i64) -> Val {
    if x == 0 {
        return Val::Infinite;
    }
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Val::Finite(v)
}

pub fn val_big(x: &BigInt, p: i64) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Val::Finite(v);
        }
        x = q;
        v += 1;
    }
}

/// `D(x, y) = x / y` when `|x| <= |y|` and `y != 0`, and `0` otherwise.
///
/// The quotient is a p-adic integer but not necessarily a rational integer
/// (`D(1, 2)` at `p = 3` is `1/2`), so it is returned as a p-integral rational.
pub fn d_function(x: i64, y: i64, ctx: &PrimeContext) -> BigRational {
    if y == 0 || padic_valuation(x, ctx) < padic_valuation(y, ctx) {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(x), BigInt::from(y))
}

pub(crate) fn mod_floor(x: i128, m: i64) -> i64 {
    x.rem_euclid(m as i128) as i64
}

/// Inverse of `a` modulo `m`; `a` must be a unit.
pub(crate) fn mod_inverse(a: i128, m: i128) -> i128 {
    let g = a.rem_euclid(m).extended_gcd(&m);
    assert_eq!(g.gcd, 1, "{a} is not invertible modulo {m}");
    g.x.rem_euclid(m)
}

/// `φ(p^m)`, the degree of the `p^m`-th cyclotomic polynomial (1 for `m = 0`).
pub fn totient_prime_power(p: i64, m: u32) -> usize {
    if m == 0 {
        1
    } else {
        ((p - 1) * p.pow(m - 1)) as usize
    }
}

/// An element of `Z[θ_m]` in canonical power-basis form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloValue {
    p: i64,
    level: u32,
    coeffs: Vec<i64>,
}

impl CycloValue {
    pub fn zero(ctx: &PrimeContext, level: u32) -> Result<Self> {
        ctx.check_level(level)?;
        Ok(Self::zero_raw(ctx.p, level))
    }

    fn zero_raw(p: i64, level: u32) -> Self {
        Self {
            p,
            level,
            coeffs: vec![0; totient_prime_power(p, level)],
        }
    }

    pub fn from_integer(ctx: &PrimeContext, level: u32, c: i64) -> Result<Self> {
        let mut v = Self::zero(ctx, level)?;
        v.coeffs[0] = c;
        Ok(v)
    }

    pub fn one(ctx: &PrimeContext, level: u32) -> Result<Self> {
        Self::from_integer(ctx, level, 1)
    }

    /// `θ_m^e` for any integer exponent.
    pub fn root_power(ctx: &PrimeContext, level: u32, exponent: i64) -> Result<Self> {
        ctx.check_level(level)?;
        let order = ctx.p.pow(level);
        let mut hist = vec![0i64; order as usize];
        hist[exponent.rem_euclid(order) as usize] = 1;
        Ok(Self::from_histogram_raw(ctx.p, level, &hist))
    }

    /// Reduces an arbitrary integer polynomial in `θ_m` (coefficients in
    /// ascending degree) to canonical form.
    pub fn from_poly(ctx: &PrimeContext, level: u32, poly: &[i64]) -> Result<Self> {
        ctx.check_level(level)?;
        let order = ctx.p.pow(level) as usize;
        let mut hist = vec![0i64; order];
        for (e, &c) in poly.iter().enumerate() {
            hist[e % order] += c;
        }
        Ok(Self::from_histogram_raw(ctx.p, level, &hist))
    }

    /// `Σ_e hist[e] θ_m^e` where `hist` is indexed by exponents modulo `p^m`.
    pub fn from_exponent_histogram(ctx: &PrimeContext, level: u32, hist: &[i64]) -> Result<Self> {
        ctx.check_level(level)?;
        let order = ctx.p.pow(level) as usize;
        if hist.len() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                got: hist.len(),
            });
        }
        Ok(Self::from_histogram_raw(ctx.p, level, hist))
    }

    fn from_histogram_raw(p: i64, level: u32, hist: &[i64]) -> Self {
        let phi = totient_prime_power(p, level);
        let mut coeffs = hist[..phi].to_vec();
        if level > 0 {
            // θ^{φ + r} = -Σ_{j < p-1} θ^{r + j p^{m-1}} for r < p^{m-1}.
            let step = p.pow(level - 1) as usize;
            for (r, &c) in hist[phi..].iter().enumerate() {
                if c != 0 {
                    for j in 0..(p as usize - 1) {
                        coeffs[r + j * step] -= c;
                    }
                }
            }
        }
        Self { p, level, coeffs }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer value when the element lies in `Z`.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses the value in `Z[θ_M]`, `M >= m`, via `θ_m = θ_M^{p^{M-m}}`.
    pub fn lift_to(&self, level: u32) -> Self {
        match level.cmp(&self.level) {
            Ordering::Equal => self.clone(),
            Ordering::Less => panic!("cannot lower level {} to {level}", self.level),
            Ordering::Greater => {
                let stride = self.p.pow(level - self.level) as usize;
                let mut out = Self::zero_raw(self.p, level);
                for (e, &c) in self.coeffs.iter().enumerate() {
                    out.coeffs[e * stride] = c;
                }
                out
            }
        }
    }

    /// Complex conjugation `θ ↦ θ^{-1}`.
    pub fn conjugate(&self) -> Self {
        let order = self.p.pow(self.level) as usize;
        let mut hist = vec![0i64; order];
        for (e, &c) in self.coeffs.iter().enumerate() {
            hist[(order - e) % order] += c;
        }
        Self::from_histogram_raw(self.p, self.level, &hist)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            p: self.p,
            level: self.level,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.p, other.p, "cyclotomic values over different primes");
        let level = self.level.max(other.level);
        (self.lift_to(level), other.lift_to(level))
    }
}

impl Add for &CycloValue {
    type Output = CycloValue;

    fn add(self, rhs: &CycloValue) -> CycloValue {
        let (mut a, b) = self.aligned(rhs);
        a.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x += y);
        a
    }
}

impl Sub for &CycloValue {
    type Output = CycloValue;

    fn sub(self, rhs: &CycloValue) -> CycloValue {
        let (mut a, b) = self.aligned(rhs);
        a.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x -= y);
        a
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;

    fn neg(self) -> CycloValue {
        self.scale(-1)
    }
}

impl Mul for &CycloValue {
    type Output = CycloValue;

    fn mul(self, rhs: &CycloValue) -> CycloValue {
        let (a, b) = self.aligned(rhs);
        let order = a.p.pow(a.level) as usize;
        let mut hist = vec![0i64; order];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    hist[(i + j) % order] += x * y;
                }
            }
        }
        CycloValue::from_histogram_raw(a.p, a.level, &hist)
    }
}

/// Sum of `σ(θ_m^c)` over `Gal(Q(θ_m)/Q)`: the Ramanujan-type sum
/// `(p-1)p^{m-1}` when `p^m | c`, `-p^{m-1}` when `v_p(c) = m - 1`, and `0` otherwise.
pub fn galois_orbit_sum(level: u32, c: i64, ctx: &PrimeContext) -> i64 {
    assert!(level >= 1, "Galois orbit sums need level >= 1");
    let p = ctx.p;
    let order = p.pow(level);
    let c = c.rem_euclid(order);
    if c == 0 {
        return (p - 1) * p.pow(level - 1);
    }
    match padic_valuation(c, ctx) {
        Val::Finite(v) if v + 1 == level => -p.pow(level - 1),
        _ => 0,
    }
}
