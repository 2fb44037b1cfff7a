//! Integer matrices over `Z_p`: minor valuation profiles `h_i`, elementary
//! divisor valuations, and the index of `φ^{-1}(z M)` in `M`.
//!
//! Two independent routes produce divisor valuations:
//! - minors: `h_i` is the least valuation of an `i × i` minor, and the divisor
//!   valuations are the successive differences `h_i - h_{i-1}`;
//! - reduction: row elimination over `Z_(p)` with a pivot of least valuation.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

use crate::arith::{val_big, val_i128, Val};

/// Largest dimension for which minors are expanded exhaustively.
pub const MINOR_EXPANSION_MAX_DIM: usize = 8;

/// A dense integer matrix with exact entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self::new(r, c, entries)
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn diag(values: &[i64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * n + i] = BigInt::from(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|x| x * k).collect(),
        )
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| *self.get(i, j) == -self.get(j, i)))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Valuations of the minor maxima and of the elementary divisors of a matrix.
///
/// `h_vals[0] = 0`; `d_vals` is nondecreasing and `d_vals[i] = h_vals[i+1] - h_vals[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorProfile {
    pub h_vals: Vec<Val>,
    pub d_vals: Vec<Val>,
}

impl DivisorProfile {
    /// Profile from the reduction route; `h_vals` are the partial sums.
    pub fn of(a: &IntMatrix, p: i64) -> Self {
        Self::from_divisors(elementary_divisor_valuations(a, p))
    }

    pub fn from_divisors(d_vals: Vec<Val>) -> Self {
        let mut h_vals = Vec::with_capacity(d_vals.len() + 1);
        h_vals.push(Val::ZERO);
        for (i, &d) in d_vals.iter().enumerate() {
            h_vals.push(h_vals[i] + d);
        }
        Self { h_vals, d_vals }
    }

    pub fn from_minor_valuations(h_vals: Vec<Val>) -> Self {
        let d_vals = divisors_from_minor_ratios(&h_vals);
        Self { h_vals, d_vals }
    }

    pub fn dim(&self) -> usize {
        self.d_vals.len()
    }

    /// Rank over `Q_p`: the number of finite divisors.
    pub fn rank(&self) -> usize {
        self.d_vals.iter().filter(|d| !d.is_infinite()).count()
    }
}

/// `h_i` valuations: the least valuation over all `i × i` minors (all row and
/// column subsets of size `i`). Returns `None` past [`MINOR_EXPANSION_MAX_DIM`].
pub fn minor_valuation_profile(a: &IntMatrix, p: i64) -> Option<Vec<Val>> {
    assert_eq!(a.rows, a.cols, "minor profiles are defined for square matrices");
    let n = a.rows;
    if n > MINOR_EXPANSION_MAX_DIM {
        return None;
    }
    let mut h_vals = vec![Val::ZERO];
    // Minors keyed by (row mask, column mask), built by expanding along the last row.
    let mut prev: HashMap<(u32, u32), BigInt> = HashMap::new();
    prev.insert((0, 0), BigInt::one());
    for size in 1..=n {
        let mut next = HashMap::new();
        let mut best = Val::Infinite;
        for rows in subsets(n, size) {
            let last = 31 - rows.leading_zeros() as usize;
            let rest_rows = rows & !(1 << last);
            for cols in subsets(n, size) {
                let mut det = BigInt::zero();
                for (pos, c) in bits(cols).enumerate() {
                    let entry = a.get(last, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let sub = &prev[&(rest_rows, cols & !(1 << c))];
                    if sub.is_zero() {
                        continue;
                    }
                    let term = entry * sub;
                    if (size - 1 + pos) % 2 == 0 {
                        det += term;
                    } else {
                        det -= term;
                    }
                }
                best = best.min(val_big(&det, p));
                next.insert((rows, cols), det);
            }
        }
        h_vals.push(best);
        prev = next;
    }
    Some(h_vals)
}

fn subsets(n: usize, size: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |m| m.count_ones() as usize == size)
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Divisor valuations as ratios of consecutive minor maxima; once a ratio is
/// infinite every later one is too.
pub fn divisors_from_minor_ratios(h_vals: &[Val]) -> Vec<Val> {
    h_vals
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Val::Finite(a), Val::Finite(b)) => {
                assert!(b >= a, "minor valuations decreased: {h_vals:?}");
                Val::Finite(b - a)
            }
            _ => Val::Infinite,
        })
        .collect()
}

/// Elementary divisor valuations (nondecreasing) of a possibly rectangular
/// matrix; the result has `min(rows, cols)` entries.
pub fn elementary_divisor_valuations(a: &IntMatrix, p: i64) -> Vec<Val> {
    let mut work = a.entries.clone();
    reduce_divisors(&mut work, a.rows, a.cols, p).expect("BigInt arithmetic cannot overflow")
}

/// Same as [`elementary_divisor_valuations`] for small entries, trying `i128`
/// first and falling back to big integers on overflow.
pub(crate) fn divisor_valuations_small(rows: usize, cols: usize, entries: &[i64], p: i64) -> Vec<Val> {
    let mut work: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    if let Some(v) = reduce_divisors(&mut work, rows, cols, p) {
        return v;
    }
    elementary_divisor_valuations(&IntMatrix::from_i64(rows, cols, entries), p)
}

trait ReduceScalar:
    Clone + Integer + Signed + CheckedMul + CheckedSub + fmt::Debug
{
    fn valuation(&self, p: i64) -> Val;
    fn from_i64(x: i64) -> Self;
}

impl ReduceScalar for i128 {
    fn valuation(&self, p: i64) -> Val {
        val_i128(*self, p)
    }
    fn from_i64(x: i64) -> Self {
        x as i128
    }
}

impl ReduceScalar for BigInt {
    fn valuation(&self, p: i64) -> Val {
        val_big(self, p)
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
}

/// Row reduction over `Z_(p)`: pick a pivot of least valuation `v`, scale the
/// other rows by the pivot's unit part and subtract multiples of the pivot row.
/// The first column is cleared and the first row is then divisible by the pivot,
/// so the pivot splits off as a divisor. `None` signals overflow.
fn reduce_divisors<T: ReduceScalar>(m: &mut [T], rows: usize, cols: usize, p: i64) -> Option<Vec<Val>> {
    let size = rows.min(cols);
    let mut out = Vec::with_capacity(size);
    let pp = T::from_i64(p);
    for step in 0..size {
        let mut pivot: Option<(usize, usize, u32)> = None;
        'search: for i in step..rows {
            for j in step..cols {
                if let Val::Finite(v) = m[i * cols + j].valuation(p) {
                    if pivot.is_none_or(|(_, _, best)| v < best) {
                        pivot = Some((i, j, v));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((pi, pj, v)) = pivot else {
            break;
        };
        if pi != step {
            for j in 0..cols {
                m.swap(pi * cols + j, step * cols + j);
            }
        }
        if pj != step {
            for i in 0..rows {
                m.swap(i * cols + pj, i * cols + step);
            }
        }
        let mut pv = T::one();
        for _ in 0..v {
            pv = pv * pp.clone();
        }
        let unit = m[step * cols + step].clone() / pv.clone();
        for i in (step + 1)..rows {
            let x = m[i * cols + step].clone();
            if x.is_zero() {
                continue;
            }
            let q = x / pv.clone();
            for j in step..cols {
                let lhs = m[i * cols + j].checked_mul(&unit)?;
                let rhs = m[step * cols + j].checked_mul(&q)?;
                m[i * cols + j] = lhs.checked_sub(&rhs)?;
            }
            strip_unit_content(&mut m[i * cols + step + 1..(i + 1) * cols], p);
        }
        out.push(Val::Finite(v));
    }
    out.resize(size, Val::Infinite);
    Some(out)
}

/// Divides a row by the prime-to-p part of its content.
fn strip_unit_content<T: ReduceScalar>(row: &mut [T], p: i64) {
    let mut g = T::zero();
    for x in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    let pp = T::from_i64(p);
    while (g.clone() % pp.clone()).is_zero() {
        g = g / pp.clone();
    }
    if !g.is_one() {
        for x in row.iter_mut() {
            *x = x.clone() / g.clone();
        }
    }
}

/// Index exponent by the three-case formula on minor valuations.
///
/// Returns the selected cone `k` (the number of divisors with valuation at most
/// `z_val`) and `k·z_val - h_k`.
pub fn three_case_index_exponent(h_vals: &[Val], z_val: u32) -> (usize, u64) {
    let n = h_vals.len() - 1;
    let ratio = |k: usize| -> Val {
        match (h_vals[k - 1], h_vals[k]) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(b - a),
            _ => Val::Infinite,
        }
    };
    let z = Val::Finite(z_val);
    let mut selected = Vec::new();
    if z < h_vals[1] {
        selected.push(0);
    }
    for k in 1..n {
        if ratio(k) <= z && z < ratio(k + 1) {
            selected.push(k);
        }
    }
    if n >= 1 && ratio(n) <= z {
        selected.push(n);
    }
    assert_eq!(
        selected.len(),
        1,
        "cone selection is not unique for h = {h_vals:?}, z = {z_val}"
    );
    let k = selected[0];
    let h_k = h_vals[k].finite().expect("selected cone has a finite minor");
    (k, k as u64 * z_val as u64 - h_k as u64)
}

/// Index exponent as `Σ_i max(z_val - d_i, 0)`.
pub fn divisor_sum_index_exponent(d_vals: &[Val], z_val: u32) -> u64 {
    d_vals
        .iter()
        .map(|d| match d {
            Val::Finite(d) if *d < z_val => (z_val - d) as u64,
            _ => 0,
        })
        .sum()
}

/// `log_p |M : φ^{-1}(p^{z_val} M)|`, computed by both routes and checked.
pub fn quotient_index_exponent(profile: &DivisorProfile, z_val: u32) -> u64 {
    let (_, by_cones) = three_case_index_exponent(&profile.h_vals, z_val);
    let by_divisors = divisor_sum_index_exponent(&profile.d_vals, z_val);
    assert_eq!(
        by_cones, by_divisors,
        "index routes disagree for {profile:?} at z_val = {z_val}"
    );
    by_cones
}
