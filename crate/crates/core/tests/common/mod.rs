//! Brute-force reference implementations shared by the integration tests.
//! Nothing here reuses the library's fast paths beyond the structure constants.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use orbitzeta_core::arith::{PrimeContext, Val};
use orbitzeta_core::liealg::LieAlgebraSpec;

pub fn ctx(p: i64) -> PrimeContext {
    PrimeContext::with_default_level(p).unwrap()
}

pub fn val(x: &BigInt, p: i64) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let mut x = x.abs();
    let pb = BigInt::from(p);
    let mut v = 0;
    while (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    Val::Finite(v)
}

/// Every vector in `[0, q)^n`.
pub fn all_vectors(n: usize, q: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = (idx % q as u64) as i64;
                idx /= q as u64;
                d
            })
            .collect()
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut s = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

/// Least valuation over all `i × i` minors, by explicit subset enumeration.
pub fn minor_profile(m: &[Vec<BigInt>], p: i64) -> Vec<Val> {
    let n = m.len();
    let mut out = vec![Val::ZERO];
    for size in 1..=n {
        let subsets: Vec<Vec<usize>> = (0u32..(1 << n))
            .filter(|s| s.count_ones() as usize == size)
            .map(|s| (0..n).filter(|i| s & (1 << i) != 0).collect())
            .collect();
        let mut best = Val::Infinite;
        for rows in &subsets {
            for cols in &subsets {
                let sub: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                best = best.min(val(&det(&sub), p));
            }
        }
        out.push(best);
    }
    out
}

/// Size of the subgroup of `(Z/p^z)^n` generated by the columns of `m`.
/// `|M : φ^{-1}(p^z M)|` equals the size of the image of `φ` modulo `p^z`.
pub fn image_size_mod(m: &[Vec<i64>], p: i64, z: u32) -> u64 {
    let n = m.len();
    let q = p.pow(z);
    let mut seen = std::collections::HashSet::new();
    let mut frontier = vec![vec![0i64; n]];
    seen.insert(vec![0i64; n]);
    while let Some(v) = frontier.pop() {
        for c in 0..m[0].len() {
            let w: Vec<i64> = (0..n).map(|r| (v[r] + m[r][c]).rem_euclid(q)).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen.len() as u64
}

/// Gram matrix of `a([e_i, e_j])` computed from the structure constants.
pub fn gram(spec: &LieAlgebraSpec, a: &[i64]) -> Vec<Vec<BigInt>> {
    let n = spec.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|s| BigInt::from(a[s]) * spec.constant(i, j, s)).sum())
                .collect()
        })
        .collect()
}

/// Radical exponent of `a` at level `k` via the minor profile and the
/// three-case cone formula, nothing else.
pub fn radical_by_minors(spec: &LieAlgebraSpec, a: &[i64], k: u32) -> u32 {
    let h = minor_profile(&gram(spec, a), spec.p());
    let n = h.len() - 1;
    let ratio = |i: usize| match (h[i - 1], h[i]) {
        (Val::Finite(x), Val::Finite(y)) => Val::Finite(y - x),
        _ => Val::Infinite,
    };
    let z = Val::Finite(k);
    let mut cone = 0;
    if z < h[1] {
        cone = 0;
    }
    for i in 1..n {
        if ratio(i) <= z && z < ratio(i + 1) {
            cone = i;
        }
    }
    if ratio(n) <= z {
        cone = n;
    }
    cone as u32 * k - h[cone].finite().unwrap()
}

/// Plain scan of all primitive `a mod p^k`, keyed by radical exponent.
pub fn scan_level(spec: &LieAlgebraSpec, k: u32) -> BTreeMap<u32, u64> {
    let p = spec.p();
    let mut out = BTreeMap::new();
    for a in all_vectors(spec.dim(), p.pow(k)) {
        if a.iter().all(|&x| x % p == 0) {
            continue;
        }
        *out.entry(radical_by_minors(spec, &a, k)).or_insert(0u64) += 1;
    }
    out
}

/// A unimodular matrix and its inverse, built from `steps` elementary row
/// operations with small multipliers.
pub fn unimodular_pair<R: rand::Rng>(rng: &mut R, n: usize, steps: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id = |n: usize| -> Vec<Vec<i64>> { (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect() };
    let mut t = id(n);
    let mut inv = id(n);
    if n < 2 {
        return (t, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rng.gen_range(-2..=2i64);
        // T ← E T adds c·row j to row i; T^{-1} ← T^{-1} E^{-1} subtracts c·column i from column j.
        for col in 0..n {
            t[i][col] += c * t[j][col];
        }
        for row in inv.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    (t, inv)
}

/// The same algebra in the basis `f_i = Σ_r t[r][i] e_r`.
pub fn rebase(spec: &LieAlgebraSpec, t: &[Vec<i64>], inv: &[Vec<i64>]) -> LieAlgebraSpec {
    let n = spec.dim();
    let mut c = vec![vec![vec![0i64; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut in_e = vec![0i64; n];
            for a in 0..n {
                for b in 0..n {
                    let w = t[a][i] * t[b][j];
                    if w != 0 {
                        for (s, x) in in_e.iter_mut().enumerate() {
                            *x += w * spec.constant(a, b, s);
                        }
                    }
                }
            }
            for k in 0..n {
                c[i][j][k] = (0..n).map(|s| inv[k][s] * in_e[s]).sum();
            }
        }
    }
    LieAlgebraSpec::from_constants(format!("{}-rebased", spec.name()), *spec.ctx(), n, c).unwrap()
}
