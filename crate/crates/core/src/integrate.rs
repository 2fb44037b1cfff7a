//! Lattice-sum evaluation of the p-adic integrals over
//! `W = (L* ∖ pL*) × (pZ_p ∖ {0})` that express the zeta function, and the
//! Haar-measure bookkeeping behind them.
//!
//! A cell is `(a mod p^e, v(z) = j)` with `a` primitive and `1 ≤ j ≤ e`. Its
//! measure is `p^{-ne} · (1 - 1/p) p^{-j}`; the integrand
//! `|z|^{-(n+1)} |α(a, z)|^s` becomes the monomial `p^{(n+1)j} t^{α}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{mod_floor, val_i128, Val};
use crate::coadjoint::CharacterHandle;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebraSpec;
use crate::matnf::{
    divisor_sum_index_exponent, minor_valuation_profile, three_case_index_exponent, DivisorProfile,
};
use crate::zeta::ZetaPolynomial;
use crate::Limits;

/// The cone `W_j` containing a cell and the valuation of `α(a, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeIndex {
    pub cone: usize,
    pub alpha_val: u64,
}

/// Selects the cone by the ratio inequalities on `h_i` and checks the
/// exponent against `Σ max(z_val - d_i, 0)`.
pub fn cone_and_alpha(profile: &DivisorProfile, z_val: u32) -> ConeIndex {
    let (cone, alpha_val) = three_case_index_exponent(&profile.h_vals, z_val);
    let by_divisors = divisor_sum_index_exponent(&profile.d_vals, z_val);
    assert_eq!(
        alpha_val, by_divisors,
        "cone exponent disagrees with divisor sum for {profile:?} at z_val = {z_val}"
    );
    ConeIndex { cone, alpha_val }
}

/// Haar measure of `{(a, z) ∈ W : Φ_z(a) = w}` from a count of level-`e`
/// cells, with `a`-residues and `z`-residues modulo `p^e` counted separately.
///
/// The box is `a ≡ a_w (mod p^k)`, `v(z) = k`, where `o(w) = p^k`; it is a
/// union of residue classes only when `k < e`.
pub fn measure_of_character_box(spec: &LieAlgebraSpec, w: &CharacterHandle, e: u32) -> Result<BigRational> {
    let k = w.level();
    if k == 0 {
        return Ok(BigRational::zero());
    }
    if k >= e {
        return Err(Error::BoxTooDeep { order: k, level: e });
    }
    spec.ctx().check_level(e)?;
    let p = spec.p();
    let n = spec.dim() as u32;
    let q_e = spec.ctx().pow(e);
    let q_k = spec.ctx().pow(k);
    // a-residues modulo p^e reducing to a_w: count them coordinate by coordinate.
    let mut a_cells = BigInt::one();
    for &x in w.a() {
        let per_coord = (0..q_e).filter(|&y| y % q_k == x).count();
        a_cells *= BigInt::from(per_coord);
    }
    let z_cells = (0..q_e)
        .filter(|&z| val_i128(z as i128, p) == Val::Finite(k))
        .count();
    let count = a_cells * BigInt::from(z_cells);
    let total = num_traits::pow(BigInt::from(p), (e * (n + 1)) as usize);
    Ok(BigRational::new(count, total))
}

/// `(p - 1) p^{-1} p^{-k(n+1)}` for a character of order `p^k`.
pub fn box_measure_formula(p: i64, n: usize, k: u32) -> BigRational {
    BigRational::new(
        BigInt::from(p - 1),
        num_traits::pow(BigInt::from(p), 1 + k as usize * (n + 1)),
    )
}

/// Which part of `W` is integrated over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    None,
    /// `a(g) ≡ 0 (mod z)`.
    W1(Vec<i64>),
    /// `p·a(g) ≡ 0 (mod z)` but not `a(g) ≡ 0 (mod z)`.
    W2MinusW1(Vec<i64>),
}

impl Restriction {
    fn admits(&self, a: &[i64], j: u32, p: i64) -> bool {
        let pairing = |g: &[i64]| -> Val {
            let q = p.pow(j);
            let s: i128 = a.iter().zip(g).map(|(&x, &y)| x as i128 * y as i128).sum();
            val_i128(mod_floor(s, q) as i128, p).min(Val::Finite(j))
        };
        match self {
            Restriction::None => true,
            Restriction::W1(g) => pairing(g) >= Val::Finite(j),
            Restriction::W2MinusW1(g) => {
                let v = pairing(g);
                v == Val::Finite(j - 1)
            }
        }
    }
}

/// A lattice integral as a polynomial in `t`, where `t^m` collects cells with
/// `|L : Rad| = p^m` (characters of degree `p^{m/2}`), together with the largest
/// exponent whose coefficient is complete at this level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIntegral {
    pub poly: ZetaPolynomial,
    pub certified_max_exponent: Option<u32>,
}

/// `p (p-1)^{-1} Σ_cells μ(cell) · p^{(n+1) v(z)} · t^{log_p |α(a, z)|^{-1}}`.
///
/// Coefficients of `t^m` with `m + m(L) ≤ e` are complete: deeper cells only
/// contribute to higher powers.
pub fn lattice_integral_zeta(
    spec: &LieAlgebraSpec,
    e: u32,
    restriction: &Restriction,
    limits: &Limits,
) -> Result<LatticeIntegral> {
    if e == 0 {
        return Err(Error::LevelOverflow { level: 0, e_max: spec.ctx().e_max() });
    }
    spec.ctx().check_level(e)?;
    if let Restriction::W1(g) | Restriction::W2MinusW1(g) = restriction {
        if g.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                got: g.len(),
            });
        }
    }
    let report = spec.validate()?;
    let p = spec.p();
    let n = spec.dim();
    let q = spec.ctx().pow(e) as u64;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= limits.enumeration_cap)
        .ok_or(Error::ResourceCap {
            what: "lattice cells",
            limit: limits.enumeration_cap,
        })?;
    // Each cell contributes p^{nj - ne} t^α once the prefactor p/(p-1) cancels the shell weight.
    let per_cell: Vec<(u64, u32)> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut a = vec![0i64; n];
            let mut t = idx;
            for x in a.iter_mut() {
                *x = (t % q) as i64;
                t /= q;
            }
            if a.iter().all(|&x| x % p == 0) {
                return Vec::new();
            }
            let profile = profile_of_psi(spec, &a);
            (1..=e)
                .filter(|&j| restriction.admits(&a, j, p))
                .map(|j| (cone_and_alpha(&profile, j).alpha_val, j))
                .collect()
        })
        .flatten()
        .collect();
    let mut poly = ZetaPolynomial::default();
    let denom = num_traits::pow(BigInt::from(p), n * e as usize);
    for (alpha, j) in per_cell {
        let weight = BigRational::new(num_traits::pow(BigInt::from(p), n * j as usize), denom.clone());
        poly.add_term(alpha as usize, &weight);
    }
    let certified_max_exponent = report.m_l.and_then(|m| e.checked_sub(m));
    Ok(LatticeIntegral {
        poly,
        certified_max_exponent,
    })
}

/// Divisor profile of `Ψ(a)` from minors when feasible, otherwise by reduction.
pub fn profile_of_psi(spec: &LieAlgebraSpec, a: &[i64]) -> DivisorProfile {
    let psi = spec.psi_matrix(a);
    match minor_valuation_profile(&psi, spec.p()) {
        Some(h) => DivisorProfile::from_minor_valuations(h),
        None => DivisorProfile::of(&psi, spec.p()),
    }
}
