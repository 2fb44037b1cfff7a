//! Lie lattices over `Z_p` given by integer structure constants, their
//! validation, and the linear maps `ad x` and `Ψ(a)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{padic_valuation, val_i128, PrimeContext, Val};
use crate::error::{Error, Result};
use crate::matnf::{divisor_valuations_small, IntMatrix};

/// A rank-`n` Lie lattice `L` with basis `e_0, …, e_{n-1}` and
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    name: String,
    ctx: PrimeContext,
    n: usize,
    c: Vec<i64>,
}

/// Uniformity level, perfectness and `m(L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Largest `u` with `[L, L] ⊆ p^u L` (infinite for abelian `L`).
    pub uniformity: Val,
    pub perfect: bool,
    /// Least `m` with `p^m L ⊆ [L, L]`, when `[L, L]` is open.
    pub m_l: Option<u32>,
}

impl StructureReport {
    /// Level `u ≥ 1`, needed by every orbit and radical computation.
    pub fn require_uniform(&self) -> Result<u32> {
        match self.uniformity {
            Val::Finite(0) => Err(Error::NotUniform),
            Val::Finite(u) => Ok(u),
            Val::Infinite => Ok(u32::MAX),
        }
    }

    pub fn require_perfect(&self) -> Result<u32> {
        self.m_l.ok_or(Error::NotPerfect)
    }

    /// Hypotheses of the orbit-method correspondence: `u ≥ 1` for `p ≥ 5`,
    /// `u ≥ 2` for `p = 3`.
    pub fn require_correspondence(&self, p: i64) -> Result<()> {
        let needed = if p == 3 { 2 } else { 1 };
        if self.uniformity < Val::Finite(needed) {
            return Err(Error::HypothesisViolation {
                p,
                u: self.uniformity.to_string(),
            });
        }
        Ok(())
    }
}

impl LieAlgebraSpec {
    /// Builds a spec from a full `n × n × n` table, indexed `c[i][j][k]`.
    pub fn from_constants(
        name: impl Into<String>,
        ctx: PrimeContext,
        n: usize,
        c: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let mut flat = Vec::with_capacity(n * n * n);
        check_len(n, c.len())?;
        for row in &c {
            check_len(n, row.len())?;
            for v in row {
                check_len(n, v.len())?;
                flat.extend_from_slice(v);
            }
        }
        Ok(Self {
            name: name.into(),
            ctx,
            n,
            c: flat,
        })
    }

    /// Builds a spec from the brackets `[e_i, e_j]` with `i < j`; the others
    /// follow from antisymmetry.
    pub fn from_brackets(
        name: impl Into<String>,
        ctx: PrimeContext,
        n: usize,
        brackets: &[(usize, usize, Vec<i64>)],
    ) -> Result<Self> {
        let mut c = vec![0i64; n * n * n];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            check_len(n, v.len())?;
            for (k, &x) in v.iter().enumerate() {
                c[(i * n + j) * n + k] = x;
                c[(j * n + i) * n + k] = -x;
            }
        }
        Ok(Self {
            name: name.into(),
            ctx,
            n,
            c,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> i64 {
        self.ctx.p()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> i64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// The brackets `[e_i, e_j]` for `i < j`, skipping zero ones.
    pub fn brackets(&self) -> Vec<(usize, usize, Vec<i64>)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let v: Vec<i64> = (0..n).map(|k| self.constant(i, j, k)).collect();
                if v.iter().any(|&x| x != 0) {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Exact bracket of integer coordinate vectors.
    pub fn bracket(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0i128; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 || i == j {
                    continue;
                }
                let xy = x[i] * y[j];
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c[base + k];
                    if c != 0 {
                        *o += xy * c as i128;
                    }
                }
            }
        }
        out
    }

    /// Bracket with every coordinate reduced into `[0, modulus)`.
    pub fn bracket_mod(&self, x: &[i64], y: &[i64], modulus: i64) -> Vec<i64> {
        let n = self.n;
        let m = modulus as i128;
        let mut out = vec![0i128; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 || i == j {
                    continue;
                }
                let xy = (x[i] as i128 * y[j] as i128) % m;
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c[base + k];
                    if c != 0 {
                        *o = (*o + xy * c as i128) % m;
                    }
                }
            }
        }
        out.into_iter().map(|v| v.rem_euclid(m) as i64).collect()
    }

    /// Matrix of `ad x`: column `j` is `[x, e_j]`.
    pub fn ad_matrix(&self, x: &[i64]) -> IntMatrix {
        let n = self.n;
        let mut m = IntMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let mut s = BigInt::zero();
                for (i, &xi) in x.iter().enumerate() {
                    let c = self.constant(i, j, k);
                    if xi != 0 && c != 0 {
                        s += BigInt::from(xi) * c;
                    }
                }
                m.set(k, j, s);
            }
        }
        m
    }

    /// Gram matrix of `B_a(l, k) = a([l, k])`: entry `(i, j)` is `Σ_s a_s c[i][j][s]`.
    /// Read as a map `L → L*` this is `Ψ(a)`.
    pub fn psi_matrix(&self, a: &[i64]) -> IntMatrix {
        let n = self.n;
        let mut m = IntMatrix::zeros(n, n);
        for (idx, v) in self.psi_entries(a).into_iter().enumerate() {
            m.set(idx / n, idx % n, BigInt::from(v));
        }
        m
    }

    fn psi_entries(&self, a: &[i64]) -> Vec<i128> {
        let n = self.n;
        let mut out = vec![0i128; n * n];
        for i in 0..n {
            for j in 0..n {
                let base = (i * n + j) * n;
                out[i * n + j] = (0..n)
                    .map(|s| a[s] as i128 * self.c[base + s] as i128)
                    .sum();
            }
        }
        out
    }

    /// Elementary divisor valuations of `Ψ(a)`, nondecreasing.
    pub fn psi_divisors(&self, a: &[i64]) -> Vec<Val> {
        let entries = self.psi_entries(a);
        match entries
            .iter()
            .map(|&x| i64::try_from(x).ok())
            .collect::<Option<Vec<i64>>>()
        {
            Some(small) => divisor_valuations_small(self.n, self.n, &small, self.p()),
            None => crate::matnf::elementary_divisor_valuations(&self.psi_matrix_wide(&entries), self.p()),
        }
    }

    fn psi_matrix_wide(&self, entries: &[i128]) -> IntMatrix {
        IntMatrix::new(
            self.n,
            self.n,
            entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    /// The `n × n(n-1)/2` matrix whose columns are `[e_i, e_j]`, `i < j`.
    pub fn bracket_span_matrix(&self) -> IntMatrix {
        let n = self.n;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let mut m = IntMatrix::zeros(n, pairs.len());
        for (col, &(i, j)) in pairs.iter().enumerate() {
            for k in 0..n {
                m.set(k, col, BigInt::from(self.constant(i, j, k)));
            }
        }
        m
    }

    /// Checks antisymmetry and the Jacobi identity exactly, then computes the
    /// uniformity level and `m(L)`.
    pub fn validate(&self) -> Result<StructureReport> {
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if self.constant(i, j, k) != -self.constant(j, i, k) {
                        return Err(Error::AntisymmetryViolation { i, j, k });
                    }
                }
            }
        }
        let basis = |i: usize| -> Vec<i128> {
            let mut v = vec![0i128; n];
            v[i] = 1;
            v
        };
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (ei, ej, ek) = (basis(i), basis(j), basis(k));
                    let t1 = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let t2 = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let t3 = self.bracket(&ek, &self.bracket(&ei, &ej));
                    if (0..n).any(|s| t1[s] + t2[s] + t3[s] != 0) {
                        return Err(Error::JacobiViolation { i, j, k });
                    }
                }
            }
        }
        let uniformity = self
            .c
            .iter()
            .map(|&x| padic_valuation(x, &self.ctx))
            .min()
            .unwrap_or(Val::Infinite);
        let m_l = if n == 0 {
            Some(0)
        } else {
            let d = crate::matnf::elementary_divisor_valuations(&self.bracket_span_matrix(), self.p());
            if d.len() < n || d.iter().any(|v| v.is_infinite()) {
                None
            } else {
                d.iter().filter_map(|v| v.finite()).max()
            }
        };
        Ok(StructureReport {
            uniformity,
            perfect: m_l.is_some(),
            m_l,
        })
    }

    /// Rank of `Ψ(a)` for generic `a`.
    ///
    /// Each `r × r` minor of `Ψ(a)` has degree at most `r ≤ n` in every
    /// coordinate of `a`, so a nonzero minor cannot vanish on the whole grid
    /// `{0, …, n}^n`; the maximum rank over that grid is the generic rank.
    pub fn generic_psi_rank(&self) -> usize {
        let n = self.n;
        let ceiling = n - n % 2;
        let mut best = 0;
        let total = (n as u64 + 1).pow(n as u32);
        // Visit points with many nonzero coordinates first; the maximum is usually hit at once.
        for idx in (0..total).rev() {
            let mut a = vec![0i64; n];
            let mut t = idx;
            for x in a.iter_mut() {
                *x = (t % (n as u64 + 1)) as i64;
                t /= n as u64 + 1;
            }
            let rank = self.psi_divisors(&a).iter().filter(|d| !d.is_infinite()).count();
            best = best.max(rank);
            if best == ceiling {
                break;
            }
        }
        best
    }

    /// Checks that `T` (columns are the images of the basis vectors) preserves
    /// the bracket modulo `p^level` and is invertible modulo `p`.
    pub fn is_automorphism_mod(&self, t: &IntMatrix, level: u32) -> bool {
        let n = self.n;
        if t.rows() != n || t.cols() != n {
            return false;
        }
        let q = self.ctx.pow(level) as i128;
        let col = |j: usize| -> Vec<i128> {
            (0..n)
                .map(|i| i128::try_from(t.get(i, j)).expect("automorphism entries fit in i128") % q)
                .collect()
        };
        let cols: Vec<Vec<i128>> = (0..n).map(col).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = self.bracket(&cols[i], &cols[j]);
                let mut rhs = vec![0i128; n];
                for k in 0..n {
                    let c = self.constant(i, j, k) as i128;
                    if c != 0 {
                        for (r, x) in rhs.iter_mut().zip(&cols[k]) {
                            *r += c * x;
                        }
                    }
                }
                if lhs.iter().zip(&rhs).any(|(a, b)| (a - b).rem_euclid(q) != 0) {
                    return false;
                }
            }
        }
        let entries: Vec<BigInt> = t.entries().to_vec();
        let d = crate::matnf::elementary_divisor_valuations(&IntMatrix::new(n, n, entries), self.p());
        d.iter().all(|v| *v == Val::ZERO)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Valuation of the gcd of a coordinate vector.
pub fn content_valuation(v: &[i64], p: i64) -> Val {
    v.iter().map(|&x| val_i128(x as i128, p)).min().unwrap_or(Val::Infinite)
}

/// Small algebras used throughout the tests and examples.
pub mod standard {
    use super::*;

    /// `sl_2` scaled by `p^s` in the basis `(e, h, f)`:
    /// `[h, e] = 2p^s e`, `[h, f] = -2p^s f`, `[e, f] = p^s h`.
    pub fn scaled_sl2(ctx: PrimeContext, s: u32) -> LieAlgebraSpec {
        let q = ctx.pow(s);
        let name = if s == 1 {
            format!("sl2-scaled-p{}", ctx.p())
        } else {
            format!("sl2-scaled{s}-p{}", ctx.p())
        };
        LieAlgebraSpec::from_brackets(
            name,
            ctx,
            3,
            &[
                (0, 1, vec![-2 * q, 0, 0]),
                (0, 2, vec![0, q, 0]),
                (1, 2, vec![0, 0, -2 * q]),
            ],
        )
        .expect("well-formed brackets")
    }

    /// The swap `e ↔ f`, `h ↦ -h` of `sl_2`.
    pub fn sl2_swap() -> IntMatrix {
        IntMatrix::from_rows(&[vec![0, 0, 1], vec![0, -1, 0], vec![1, 0, 0]])
    }

    /// Heisenberg lattice `[x, y] = p^s z`; nilpotent, hence not perfect.
    pub fn heisenberg(ctx: PrimeContext, s: u32) -> LieAlgebraSpec {
        let q = ctx.pow(s);
        LieAlgebraSpec::from_brackets(format!("heisenberg-p{}", ctx.p()), ctx, 3, &[(0, 1, vec![0, 0, q])])
            .expect("well-formed brackets")
    }

    pub fn abelian(ctx: PrimeContext, n: usize) -> LieAlgebraSpec {
        LieAlgebraSpec::from_brackets(format!("abelian{n}-p{}", ctx.p()), ctx, n, &[])
            .expect("well-formed brackets")
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    fn ctx(p: i64) -> PrimeContext {
        PrimeContext::with_default_level(p).unwrap()
    }

    #[test]
    fn structure_reports() {
        let ab = abelian(ctx(3), 3).validate().unwrap();
        assert_eq!(ab.uniformity, Val::Infinite);
        assert!(!ab.perfect);
        let sl = scaled_sl2(ctx(5), 1).validate().unwrap();
        assert_eq!(sl, StructureReport { uniformity: Val::Finite(1), perfect: true, m_l: Some(1) });
        let sl2 = scaled_sl2(ctx(3), 2).validate().unwrap();
        assert_eq!(sl2.m_l, Some(2));
        assert_eq!(sl2.uniformity, Val::Finite(2));
        let heis = heisenberg(ctx(3), 1).validate().unwrap();
        assert!(!heis.perfect);
    }

    #[test]
    fn antisymmetry_and_jacobi_failures() {
        let n = 2;
        let mut c = vec![vec![vec![0; n]; n]; n];
        c[0][1] = vec![3, 0];
        c[1][0] = vec![0, 3];
        let bad = LieAlgebraSpec::from_constants("bad", ctx(3), n, c).unwrap();
        assert!(matches!(bad.validate(), Err(Error::AntisymmetryViolation { .. })));

        // [e0,e1] = e1, [e0,e2] = e0, [e1,e2] = 0 fails Jacobi on (0,1,2).
        let jac = LieAlgebraSpec::from_brackets(
            "jac",
            ctx(3),
            3,
            &[(0, 1, vec![0, 1, 0]), (0, 2, vec![1, 0, 0])],
        )
        .unwrap();
        assert_eq!(jac.validate(), Err(Error::JacobiViolation { i: 0, j: 1, k: 2 }));
    }

    #[test]
    fn ad_and_psi_examples() {
        let sl = scaled_sl2(ctx(5), 1);
        assert_eq!(sl.ad_matrix(&[0, 0, 0]), IntMatrix::zeros(3, 3));
        assert_eq!(sl.ad_matrix(&[0, 1, 0]), IntMatrix::diag(&[10, 0, -10]));
        let sl3 = scaled_sl2(ctx(3), 1);
        assert_eq!(
            sl3.psi_matrix(&[1, 0, 0]),
            IntMatrix::from_rows(&[vec![0, -6, 0], vec![6, 0, 0], vec![0, 0, 0]])
        );
        assert_eq!(abelian(ctx(3), 3).psi_matrix(&[1, 2, 3]), IntMatrix::zeros(3, 3));
        assert_eq!(sl3.psi_divisors(&[1, 0, 0]), vec![Val::Finite(1), Val::Finite(1), Val::Infinite]);
    }

    #[test]
    fn generic_rank() {
        assert_eq!(scaled_sl2(ctx(3), 1).generic_psi_rank(), 2);
        assert_eq!(abelian(ctx(3), 4).generic_psi_rank(), 0);
        assert_eq!(heisenberg(ctx(3), 1).generic_psi_rank(), 2);
    }

    #[test]
    fn swap_is_automorphism() {
        let sl = scaled_sl2(ctx(3), 1);
        assert!(sl.is_automorphism_mod(&sl2_swap(), 5));
        assert!(sl.is_automorphism_mod(&IntMatrix::identity(3), 5));
        assert!(!sl.is_automorphism_mod(&IntMatrix::diag(&[1, 1, 2]), 2));
    }

    #[test]
    fn correspondence_hypotheses() {
        let r = scaled_sl2(ctx(3), 1).validate().unwrap();
        assert!(matches!(r.require_correspondence(3), Err(Error::HypothesisViolation { .. })));
        let r = scaled_sl2(ctx(3), 2).validate().unwrap();
        assert!(r.require_correspondence(3).is_ok());
        let r = scaled_sl2(ctx(5), 1).validate().unwrap();
        assert!(r.require_correspondence(5).is_ok());
    }
}
