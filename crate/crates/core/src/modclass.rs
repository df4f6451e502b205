//! Classification of `Z₂`-free modules over `R = Z₂[ω]`, `ω² + 2ω + (1+p) = 0`,
//! for primes `p ≡ 3 (mod 4)`, working at finite precision `Z/2^k`.
//!
//! A module is given by the matrix `W` of `ω` on a `Z₂`-basis. Every such
//! module is a direct sum of indecomposables:
//!
//! * `p ≡ 3 (mod 8)`: `R^r ⊕ O^s`, where `O = Z₂[α]`, `2α = ω`;
//! * `p ≡ 7 (mod 8)`: `R^r ⊕ [R/(ω-2α₁)]^s ⊕ [R/(ω-2α₂)]^t`, where `α₁`, `α₂`
//!   are the unit and non-unit roots of `X² + X + (1+p)/4`.
//!
//! [`decompose`] reads off the multiplicities; [`split`] produces a basis in
//! which `W` becomes exactly the canonical block matrix.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::gf2::{self, BitVec, Echelon};
use crate::arith::{
    check_precision, hensel_alpha_roots, is_prime, mask, rank_mod2, smith_form, ResidueMatrix,
    Valuation,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `p ≡ 3 (mod 8)`: 2 is inert, `R^r ⊕ O^s`.
    #[serde(rename = "a")]
    A,
    /// `p ≡ 7 (mod 8)`: 2 splits, `R^r ⊕ [R/(ω-2α₁)]^s ⊕ [R/(ω-2α₂)]^t`.
    #[serde(rename = "b")]
    B,
}

impl Case {
    pub fn of_prime(p: u64) -> Option<Case> {
        match p % 8 {
            3 => Some(Case::A),
            7 => Some(Case::B),
            _ => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "a",
            Case::B => "b",
        })
    }
}

/// Multiplicities of the indecomposable summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecompInvariants {
    pub case: Case,
    pub r: usize,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<usize>,
}

impl DecompInvariants {
    pub fn case_a(r: usize, s: usize) -> Self {
        DecompInvariants {
            case: Case::A,
            r,
            s,
            t: None,
        }
    }

    pub fn case_b(r: usize, s: usize, t: usize) -> Self {
        DecompInvariants {
            case: Case::B,
            r,
            s,
            t: Some(t),
        }
    }

    /// `Z₂`-rank of the module.
    pub fn rank(&self) -> usize {
        match self.case {
            Case::A => 2 * self.r + 2 * self.s,
            Case::B => 2 * self.r + self.s + self.t.unwrap_or(0),
        }
    }

    /// Whether the module can be a 2-adic Tate module: always in case (a),
    /// and `s = t` in case (b).
    pub fn is_tate_like(&self) -> bool {
        match self.case {
            Case::A => true,
            Case::B => self.t == Some(self.s),
        }
    }
}

impl fmt::Display for DecompInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t {
            Some(t) => write!(f, "case {}: (r, s, t) = ({}, {}, {t})", self.case, self.r, self.s),
            None => write!(f, "case {}: (r, s) = ({}, {})", self.case, self.r, self.s),
        }
    }
}

/// A `Z/2^k`-truncated module over `R`: the prime `p` and the matrix of `ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAdicModule {
    p: u64,
    w: ResidueMatrix,
}

/// JSON document describing a module: `entries` is row-major, length `n²`,
/// and may hold signed values (they are reduced mod `2^k` on load).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub entries: Vec<i64>,
}

impl TwoAdicModule {
    /// Unchecked constructor; use [`validate`] before classifying.
    pub fn new(p: u64, w: ResidueMatrix) -> Self {
        TwoAdicModule { p, w }
    }

    pub fn from_document(doc: &ModuleDocument) -> Result<Self> {
        let w = ResidueMatrix::from_signed(doc.n, doc.k, &doc.entries)?;
        Ok(TwoAdicModule { p: doc.p, w })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModuleDocument = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("malformed module document: {e}")))?;
        Self::from_document(&doc)
    }

    pub fn to_document(&self) -> ModuleDocument {
        ModuleDocument {
            p: self.p,
            k: self.k(),
            n: self.n(),
            entries: self.w.entries().iter().map(|&x| x as i64).collect(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.w.k()
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.w
    }

    pub fn case(&self) -> Option<Case> {
        Case::of_prime(self.p)
    }

    /// `W² + 2W + (1+p)·I` mod `2^k`.
    fn minimal_polynomial_residue(&self) -> ResidueMatrix {
        self.w
            .mul(&self.w)
            .add(&self.w.scale(2))
            .add_scalar((self.p as i64).wrapping_add(1))
    }
}

/// Outcome of [`validate`]: the first violated condition, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    diagnostic: Option<String>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.diagnostic.is_none()
    }

    pub fn diagnostic(&self) -> Option<&str> {
        self.diagnostic.as_deref()
    }

    fn into_result(self) -> Result<()> {
        match self.diagnostic {
            None => Ok(()),
            Some(d) => Err(Error::InvalidModule(d)),
        }
    }
}

pub fn validate(m: &TwoAdicModule) -> Validation {
    let fail = |msg: String| Validation {
        diagnostic: Some(msg),
    };
    if check_precision(m.k()).is_err() {
        return fail(format!("precision k = {} is outside [4, 60]", m.k()));
    }
    if !is_prime(m.p) {
        return fail(format!("p = {} is not prime", m.p));
    }
    if m.p % 4 != 3 {
        return fail(format!("p = {} is not congruent to 3 mod 4", m.p));
    }
    if m.case() == Some(Case::A) && m.n() % 2 == 1 {
        return fail(format!(
            "dimension n = {} must be even when p ≡ 3 mod 8",
            m.n()
        ));
    }
    let residue = m.minimal_polynomial_residue();
    if let Some(pos) = residue.entries().iter().position(|&x| x != 0) {
        let (i, j) = (pos / m.n(), pos % m.n());
        return fail(format!(
            "W^2 + 2W + (1+p)I is nonzero mod 2^{} (entry ({i}, {j}) = {})",
            m.k(),
            residue.get(i, j)
        ));
    }
    Validation { diagnostic: None }
}

fn companion_block(p: u64, k: u32) -> ResidueMatrix {
    let p = p as i64;
    ResidueMatrix::from_rows(k, &[vec![0, -(1 + p)], vec![1, -2]]).expect("valid precision")
}

/// Action of `ω` on `O = <1, α>`: `ω·1 = 2α`, `ω·α = -2α - (p+1)/2`.
fn maximal_order_block(p: u64, k: u32) -> ResidueMatrix {
    let half = ((p + 1) / 2) as i64;
    ResidueMatrix::from_rows(k, &[vec![0, -half], vec![2, -2]]).expect("valid precision")
}

/// `(2α₁, 2α₂)` mod `2^k`.
fn doubled_roots(p: u64, k: u32) -> Result<(u64, u64)> {
    let roots = hensel_alpha_roots(p, k)?;
    let m = mask(k);
    Ok(((roots.alpha1 << 1) & m, (roots.alpha2 << 1) & m))
}

fn scalar_block(x: u64, k: u32) -> ResidueMatrix {
    ResidueMatrix::from_signed(1, k, &[x as i64]).expect("valid precision")
}

/// Block-diagonal canonical module: companion blocks first, then the
/// `O` (case a) or `2α₁` blocks, then the `2α₂` blocks.
pub fn canonical_module(
    p: u64,
    k: u32,
    r: usize,
    s: usize,
    t: Option<usize>,
) -> Result<TwoAdicModule> {
    check_precision(k)?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut blocks = vec![companion_block(p, k); r];
    match (Case::of_prime(p), t) {
        (Some(Case::A), None) => {
            blocks.extend(std::iter::repeat_n(maximal_order_block(p, k), s));
        }
        (Some(Case::B), Some(t)) => {
            let (lambda1, lambda2) = doubled_roots(p, k)?;
            blocks.extend(std::iter::repeat_n(scalar_block(lambda1, k), s));
            blocks.extend(std::iter::repeat_n(scalar_block(lambda2, k), t));
        }
        (Some(Case::A), Some(_)) => {
            return Err(Error::domain(format!(
                "p = {p} ≡ 3 mod 8 takes invariants (r, s) without t"
            )))
        }
        (Some(Case::B), None) => {
            return Err(Error::domain(format!(
                "p = {p} ≡ 7 mod 8 takes invariants (r, s, t)"
            )))
        }
        (None, _) => {
            return Err(Error::domain(format!(
                "p = {p} is not congruent to 3 mod 4"
            )))
        }
    }
    if blocks.is_empty() {
        return Err(Error::domain("canonical module must have positive rank"));
    }
    Ok(TwoAdicModule::new(p, ResidueMatrix::block_diag(k, &blocks)?))
}

pub fn canonical_from(p: u64, k: u32, inv: &DecompInvariants) -> Result<TwoAdicModule> {
    canonical_module(p, k, inv.r, inv.s, inv.t)
}

/// Reads the invariants of a valid module.
pub fn decompose(m: &TwoAdicModule) -> Result<DecompInvariants> {
    validate(m).into_result()?;
    let n = m.n();
    let k = m.k();
    let rank = rank_mod2(m.matrix());
    let precision_err = |detail: String| {
        Error::Precision(format!(
            "{detail}; the matrix satisfies the minimal polynomial only approximately or k = {k} is too small"
        ))
    };

    match m.case().expect("validated") {
        Case::A => {
            // dim M/(2,ω)M = n - rank = r + 2s, and r + s = n/2
            let r = rank;
            if 2 * r > n {
                return Err(Error::Invariant(format!("rank {r} exceeds n/2")));
            }
            // Elementary divisors of W: R contributes {1, 4·unit}, O contributes {2, 2}.
            let vals = smith_form(m.matrix()).valuations;
            let count = |v: u32| vals.iter().filter(|&&x| x == Valuation::Finite(v)).count();
            let s = n / 2 - r;
            if count(0) != r || count(2) != r || count(1) != 2 * s {
                return Err(precision_err(format!(
                    "elementary divisors of W {vals:?} do not match R^{r} + O^{s}"
                )));
            }
            Ok(DecompInvariants::case_a(r, s))
        }
        Case::B => {
            let (lambda1, _) = doubled_roots(m.p, k)?;
            let vals = smith_form(&m.matrix().add_scalar(-(lambda1 as i64))).valuations;
            let mut zeros = 0;
            let mut ones = 0;
            let mut infinite = 0;
            for v in &vals {
                match v {
                    Valuation::Finite(0) => zeros += 1,
                    Valuation::Finite(1) => ones += 1,
                    Valuation::Infinite => infinite += 1,
                    Valuation::Finite(_) => {
                        return Err(precision_err(format!(
                            "elementary divisors of W - 2α₁ include valuation {v}"
                        )))
                    }
                }
            }
            if infinite < zeros {
                return Err(precision_err(format!(
                    "kernel of W - 2α₁ has rank {infinite} < r = {zeros}"
                )));
            }
            let inv = DecompInvariants::case_b(zeros, infinite - zeros, ones);
            if inv.rank() != n {
                return Err(Error::Invariant(format!(
                    "invariants {inv} do not add up to n = {n}"
                )));
            }
            if rank != zeros {
                return Err(Error::Invariant(format!(
                    "rank of W mod 2 is {rank} but the Smith form gives r = {zeros}"
                )));
            }
            Ok(inv)
        }
    }
}

/// Pseudorandom unimodular matrix and its inverse, built from elementary
/// operations; deterministic in `seed`.
pub fn random_unimodular(n: usize, k: u32, seed: u64) -> Result<(ResidueMatrix, ResidueMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = ResidueMatrix::identity(n, k)?;
    let mut u_inv = u.clone();
    let modulus = 1u64 << k;
    for _ in 0..3 * n * n + 2 {
        match rng.random_range(0..8u32) {
            0 if n > 1 => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                u.swap_rows(i, j);
                u_inv.swap_cols(i, j);
            }
            1 => {
                let i = rng.random_range(0..n);
                let c = rng.random_range(0..modulus) | 1;
                u.scale_row(i, c);
                // columns of the inverse scale by c⁻¹
                let ci = crate::arith::inverse_odd(c);
                for r in 0..n {
                    let x = u_inv.get(r, i).wrapping_mul(ci);
                    u_inv.set(r, i, x);
                }
            }
            _ if n > 1 => {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c = rng.random_range(0..modulus);
                // E = I + c·e_ij on the left, E⁻¹ = I - c·e_ij on the right
                u.add_row_multiple(i, j, c);
                u_inv.add_col_multiple(j, i, c.wrapping_neg());
            }
            _ => {}
        }
    }
    debug_assert_eq!(u.mul(&u_inv), ResidueMatrix::identity(n, k)?);
    Ok((u, u_inv))
}

/// `U⁻¹ W U` for an invertible `U`.
pub fn conjugate_by(m: &TwoAdicModule, u: &ResidueMatrix) -> Result<TwoAdicModule> {
    let u_inv = u
        .inverse()
        .ok_or_else(|| Error::domain("conjugating matrix is not invertible mod 2"))?;
    Ok(TwoAdicModule::new(m.p, u_inv.mul(&m.w).mul(u)))
}

/// `U⁻¹ W U` for a pseudorandom unimodular `U` determined by `seed`.
pub fn random_conjugate(m: &TwoAdicModule, seed: u64) -> Result<TwoAdicModule> {
    let (u, u_inv) = random_unimodular(m.n(), m.k(), seed)?;
    Ok(TwoAdicModule::new(m.p, u_inv.mul(&m.w).mul(&u)))
}

/// A splitting basis: the columns of `basis` are the new basis vectors, and
/// `basis⁻¹ · W · basis` equals the canonical module of `invariants`.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub basis: ResidueMatrix,
    pub invariants: DecompInvariants,
}

pub fn split(m: &TwoAdicModule) -> Result<Splitting> {
    let invariants = decompose(m)?;
    let columns = match invariants.case {
        Case::A => split_inert(m, &invariants)?,
        Case::B => split_split(m, &invariants)?,
    };
    let basis = ResidueMatrix::from_columns(m.k(), &columns)?;
    let inverse = basis
        .inverse()
        .ok_or_else(|| Error::Invariant("splitting basis is singular mod 2".into()))?;
    let canonical = canonical_from(m.p, m.k(), &invariants)?;
    if inverse.mul(m.matrix()).mul(&basis) != *canonical.matrix() {
        return Err(Error::Precision(
            "splitting basis does not conjugate W to the canonical form".into(),
        ));
    }
    Ok(Splitting { basis, invariants })
}

fn lift(v: &BitVec) -> Vec<u64> {
    v.to_residues()
}

fn halve(v: &[u64]) -> Vec<u64> {
    v.iter().map(|x| x >> 1).collect()
}

/// Lifts of a basis of a complement of `span` in `F₂^n`.
fn complement(span: &Echelon, n: usize) -> Vec<BitVec> {
    let mut e = span.clone();
    (0..n)
        .map(|i| BitVec::unit(n, i))
        .filter(|v| e.insert(v))
        .collect()
}

/// Case (a): peel off copies of `O` spanned by `x` and `ωx/2`, where `x` is
/// killed by `ω` mod 2 but not in `ωM + 2M`; the rest is free.
fn split_inert(m: &TwoAdicModule, inv: &DecompInvariants) -> Result<Vec<Vec<u64>>> {
    let n = m.n();
    let k = m.k();
    let w = m.matrix();
    let mk = mask(k);
    let w2 = w.mod2_rows();
    let kernel = gf2::kernel(&w2, n);

    let mut image = Echelon::new(n);
    for j in 0..n {
        image.insert(&BitVec::from_residues(&w.column(j)));
    }
    let mut span = image.clone();
    let half_p1 = (m.p + 1) / 2;
    let mut maximal_blocks: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();

    for kv in &kernel {
        if maximal_blocks.len() == inv.s {
            break;
        }
        if span.contains(kv) {
            continue;
        }
        let x = lift(kv);
        let wx = w.mul_vec(&x);
        debug_assert!(wx.iter().all(|v| v & 1 == 0));
        let mut y = halve(&wx);
        if !span.insert(kv) || !span.insert(&BitVec::from_residues(&y)) {
            return Err(Error::Invariant(
                "x and ωx/2 are dependent modulo ωM + 2M".into(),
            ));
        }
        // ω·y + 2y + (p+1)/2·x vanishes mod 2^(k-1); clear the top bit by
        // moving y within y + 2^(k-1)M.
        let wy = w.mul_vec(&y);
        let err: Vec<u64> = (0..n)
            .map(|i| {
                wy[i]
                    .wrapping_add(y[i].wrapping_mul(2))
                    .wrapping_add(x[i].wrapping_mul(half_p1))
                    & mk
            })
            .collect();
        if err.iter().any(|e| e & (mk >> 1) != 0) {
            return Err(Error::Precision(
                "ωx/2 fails the O-relation below the top bit".into(),
            ));
        }
        let top = BitVec::from_bits(err.iter().map(|e| e >> (k - 1) & 1 == 1));
        let fix = gf2::solve(&w2, n, &top).ok_or_else(|| {
            Error::Precision("cannot lift ωx/2 to an exact O-basis at this precision".into())
        })?;
        for (yi, fi) in y.iter_mut().zip(fix.to_residues()) {
            *yi = (*yi + (fi << (k - 1))) & mk;
        }
        maximal_blocks.push((x, y));
    }
    if maximal_blocks.len() != inv.s {
        return Err(Error::Invariant(format!(
            "found {} copies of O, expected {}",
            maximal_blocks.len(),
            inv.s
        )));
    }

    let mut kernel_span = Echelon::new(n);
    for kv in &kernel {
        kernel_span.insert(kv);
    }
    let mut columns = Vec::with_capacity(n);
    for z in complement(&kernel_span, n) {
        let z = lift(&z);
        let wz = w.mul_vec(&z);
        columns.push(z);
        columns.push(wz);
    }
    if columns.len() != 2 * inv.r {
        return Err(Error::Invariant(format!(
            "free part has rank {} but r = {}",
            columns.len() / 2,
            inv.r
        )));
    }
    for (x, y) in maximal_blocks {
        columns.push(x);
        columns.push(y);
    }
    Ok(columns)
}

/// Exact kernel vectors of `a` mod `2^k`: the columns of the right Smith
/// transform at zero pivots.
fn exact_kernel(a: &ResidueMatrix) -> Vec<Vec<u64>> {
    let sf = smith_form(a);
    sf.valuations
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == Valuation::Infinite)
        .map(|(j, _)| sf.right.column(j))
        .collect()
}

/// Case (b): `M₁ = ker(ω - 2α₁)`, `M₂ = ker(ω - 2α₂)`. Lifts of a basis of
/// `M/(M₁+M₂)` generate the free part `F₀`; then complete `(ω-2α₂)F₀` to a
/// basis of `M₁` and `(ω-2α₁)F₀` to a basis of `M₂`.
fn split_split(m: &TwoAdicModule, inv: &DecompInvariants) -> Result<Vec<Vec<u64>>> {
    let n = m.n();
    let k = m.k();
    let w = m.matrix();
    let (lambda1, lambda2) = doubled_roots(m.p, k)?;
    let ker1 = exact_kernel(&w.add_scalar(-(lambda1 as i64)));
    let ker2 = exact_kernel(&w.add_scalar(-(lambda2 as i64)));
    let t = inv.t.unwrap_or(0);
    if ker1.len() != inv.r + inv.s || ker2.len() != inv.r + t {
        return Err(Error::Precision(format!(
            "eigenspace ranks ({}, {}) do not match {inv}",
            ker1.len(),
            ker2.len()
        )));
    }

    let mut sum = Echelon::new(n);
    for v in ker1.iter().chain(&ker2) {
        sum.insert(&BitVec::from_residues(v));
    }
    let free_generators: Vec<Vec<u64>> = complement(&sum, n).iter().map(lift).collect();
    if free_generators.len() != inv.r {
        return Err(Error::Invariant(format!(
            "M/(M1+M2) has dimension {} but r = {}",
            free_generators.len(),
            inv.r
        )));
    }
    let free_images: Vec<Vec<u64>> = free_generators.iter().map(|z| w.mul_vec(z)).collect();

    let extend = |kernel: &[Vec<u64>], want: usize| -> Result<Vec<Vec<u64>>> {
        let mut e = Echelon::new(n);
        for v in &free_images {
            e.insert(&BitVec::from_residues(v));
        }
        let picked: Vec<Vec<u64>> = kernel
            .iter()
            .filter(|v| e.insert(&BitVec::from_residues(v)))
            .cloned()
            .collect();
        if picked.len() != want {
            return Err(Error::Invariant(format!(
                "eigenspace complement has rank {} but expected {want}",
                picked.len()
            )));
        }
        Ok(picked)
    };
    let first = extend(&ker1, inv.s)?;
    let second = extend(&ker2, t)?;

    let mut columns = Vec::with_capacity(n);
    for (z, wz) in free_generators.into_iter().zip(free_images) {
        columns.push(z);
        columns.push(wz);
    }
    columns.extend(first);
    columns.extend(second);
    Ok(columns)
}
