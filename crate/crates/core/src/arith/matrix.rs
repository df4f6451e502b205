use std::fmt;

use serde::{Deserialize, Serialize};

use super::gf2::{self, BitVec};
use crate::error::{Error, Result};

pub const MIN_PRECISION: u32 = 4;
pub const MAX_PRECISION: u32 = 60;

pub(crate) fn check_precision(k: u32) -> Result<()> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&k) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "2-adic precision must lie in [{MIN_PRECISION}, {MAX_PRECISION}] (got {k})"
        )))
    }
}

#[inline]
pub(crate) fn mask(k: u32) -> u64 {
    (1u64 << k) - 1
}

/// Canonical representative of a signed integer in `[0, 2^k)`.
#[inline]
pub fn reduce_signed(x: i64, k: u32) -> u64 {
    (x as u64) & mask(k)
}

/// Signed representative in `(-2^(k-1), 2^(k-1)]`, handy for display.
pub fn centered(x: u64, k: u32) -> i64 {
    let m = 1u64 << k;
    if x > m / 2 {
        x as i64 - m as i64
    } else {
        x as i64
    }
}

/// Inverse of an odd residue modulo `2^64` (hence modulo every `2^k`).
pub fn inverse_odd(u: u64) -> u64 {
    debug_assert!(u & 1 == 1);
    // u*u ≡ 1 mod 8; each Newton step doubles the number of correct bits.
    let mut inv = u;
    for _ in 0..5 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(inv)));
    }
    inv
}

/// 2-adic valuation of an element of `Z/2^k`; zero has valuation infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn of(x: u64, k: u32) -> Self {
        let x = x & mask(k);
        if x == 0 {
            Valuation::Infinite
        } else {
            Valuation::Finite(x.trailing_zeros())
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Square matrix over `Z/2^k`, entries stored canonically in `[0, 2^k)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    n: usize,
    k: u32,
    entries: Vec<u64>,
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ResidueMatrix(n={}, k={}) [", self.n, self.k)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl ResidueMatrix {
    pub fn zeros(n: usize, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("matrix dimension must be positive"));
        }
        check_precision(k)?;
        Ok(ResidueMatrix {
            n,
            k,
            entries: vec![0; n * n],
        })
    }

    pub fn identity(n: usize, k: u32) -> Result<Self> {
        let mut m = Self::zeros(n, k)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major signed entries, reducing them mod `2^k`.
    pub fn from_signed(n: usize, k: u32, entries: &[i64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut m = Self::zeros(n, k)?;
        for (dst, &src) in m.entries.iter_mut().zip(entries) {
            *dst = reduce_signed(src, k);
        }
        Ok(m)
    }

    pub fn from_rows(k: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix rows must all have length n"));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_signed(n, k, &flat)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(k: u32, columns: &[Vec<u64>]) -> Result<Self> {
        let n = columns.len();
        let mut m = Self::zeros(n, k)?;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::domain("column length must equal n"));
            }
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// Block-diagonal matrix; all blocks must share the precision `k`.
    pub fn block_diag(k: u32, blocks: &[ResidueMatrix]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zeros(n, k)?;
        let mut off = 0;
        for b in blocks {
            if b.k != k {
                return Err(Error::domain("block precisions differ"));
            }
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.entries[i * self.n + j] = x & mask(self.k);
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.n).map(<[u64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.n == other.n && self.k == other.k,
            "shape mismatch: ({}, {}) vs ({}, {})",
            self.n,
            self.k,
            other.n,
            other.k
        );
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let n = self.n;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j].wrapping_add(a.wrapping_mul(other.get(l, j)));
                }
            }
        }
        let m = mask(self.k);
        out.iter_mut().for_each(|x| *x &= m);
        ResidueMatrix {
            n,
            k: self.k,
            entries: out,
        }
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let m = mask(self.k);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .fold(0u64, |acc, j| acc.wrapping_add(self.get(i, j).wrapping_mul(v[j])))
                    & m
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let m = mask(self.k);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.wrapping_add(*b) & m)
            .collect();
        ResidueMatrix {
            n: self.n,
            k: self.k,
            entries,
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c as u64;
        let m = mask(self.k);
        ResidueMatrix {
            n: self.n,
            k: self.k,
            entries: self.entries.iter().map(|a| a.wrapping_mul(c) & m).collect(),
        }
    }

    /// `self + c·I`.
    pub fn add_scalar(&self, c: i64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            let x = out.get(i, i).wrapping_add(c as u64);
            out.set(i, i, x);
        }
        out
    }

    /// Reduction mod 2, one bit-row per matrix row.
    pub fn mod2_rows(&self) -> Vec<BitVec> {
        (0..self.n)
            .map(|i| BitVec::from_bits((0..self.n).map(|j| self.get(i, j) & 1 == 1)))
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        rank_mod2(self) == self.n
    }

    /// Inverse over `Z/2^k`, or `None` when the matrix is singular mod 2.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let k = self.k;
        let mut a = self.clone();
        let mut inv = Self::identity(n, k).expect("shape already validated");
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col) & 1 == 1)?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let u = inverse_odd(a.get(col, col));
            a.scale_row(col, u);
            inv.scale_row(col, u);
            for r in 0..n {
                if r != col {
                    let f = a.get(r, col);
                    if f != 0 {
                        let neg = f.wrapping_neg();
                        a.add_row_multiple(r, col, neg);
                        inv.add_row_multiple(r, col, neg);
                    }
                }
            }
        }
        Some(inv)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.entries.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.n {
            let x = self.get(r, j).wrapping_mul(c);
            self.set(r, j, x);
        }
    }

    /// row[dst] += c·row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: u64) {
        for j in 0..self.n {
            let x = self.get(dst, j).wrapping_add(c.wrapping_mul(self.get(src, j)));
            self.set(dst, j, x);
        }
    }

    /// col[dst] += c·col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: u64) {
        for i in 0..self.n {
            let x = self.get(i, dst).wrapping_add(c.wrapping_mul(self.get(i, src)));
            self.set(i, dst, x);
        }
    }
}

/// Rank over F₂ of the matrix reduced mod 2.
pub fn rank_mod2(m: &ResidueMatrix) -> usize {
    gf2::rank(&m.mod2_rows(), m.n())
}

/// Smith normal form over `Z/2^k` together with the unimodular transforms.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// `left · A · right` is diagonal with entries `2^valuations[i]` (or 0).
    pub left: ResidueMatrix,
    pub right: ResidueMatrix,
    /// Diagonal valuations in pivot order.
    pub valuations: Vec<Valuation>,
}

/// Diagonalizes `a` by unimodular row and column operations, always pivoting
/// on an entry of minimal valuation (first in row-major order).
pub fn smith_form(a: &ResidueMatrix) -> SmithForm {
    let n = a.n();
    let k = a.k();
    let mut m = a.clone();
    let mut left = ResidueMatrix::identity(n, k).expect("valid shape");
    let mut right = left.clone();
    let mut valuations = Vec::with_capacity(n);

    for t in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                let x = m.get(i, j);
                if x != 0 {
                    let v = x.trailing_zeros();
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            valuations.extend(std::iter::repeat_n(Valuation::Infinite, n - t));
            break;
        };
        m.swap_rows(t, pi);
        left.swap_rows(t, pi);
        m.swap_cols(t, pj);
        right.swap_cols(t, pj);

        let unit = inverse_odd(m.get(t, t) >> v);
        m.scale_row(t, unit);
        left.scale_row(t, unit);

        for i in t + 1..n {
            let x = m.get(i, t);
            if x != 0 {
                let f = (x >> v).wrapping_neg();
                m.add_row_multiple(i, t, f);
                left.add_row_multiple(i, t, f);
            }
        }
        for j in t + 1..n {
            let x = m.get(t, j);
            if x != 0 {
                let f = (x >> v).wrapping_neg();
                m.add_col_multiple(j, t, f);
                right.add_col_multiple(j, t, f);
            }
        }
        valuations.push(Valuation::Finite(v));
    }

    SmithForm {
        left,
        right,
        valuations,
    }
}

/// Multiset of diagonal valuations of the Smith form, sorted ascending
/// (finite valuations first, then infinities).
pub fn snf_mod2k(m: &ResidueMatrix) -> Vec<Valuation> {
    let mut v = smith_form(m).valuations;
    v.sort();
    v
}
