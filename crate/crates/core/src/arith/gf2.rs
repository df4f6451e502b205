//! Dense linear algebra over F₂ on packed bit vectors.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parities of a residue vector.
    pub fn from_residues(xs: &[u64]) -> Self {
        Self::from_bits(xs.iter().map(|x| x & 1 == 1))
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        let bit = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc + (a & b).count_ones())
            % 2
            == 1
    }

    /// Lifts to residues in `{0, 1}`.
    pub fn to_residues(&self) -> Vec<u64> {
        (0..self.len).map(|i| self.get(i) as u64).collect()
    }
}

/// Incrementally maintained echelon basis of a subspace of F₂^dim.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    rows: Vec<(usize, BitVec)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (pivot, row) in &self.rows {
            if r.get(*pivot) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns false (and leaves the span unchanged) if it was
    /// already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.dim);
        let r = self.reduce(v);
        let Some(pivot) = r.first_one() else {
            return false;
        };
        // rows stay reduced at every pivot column, so one pass in reduce() suffices
        for (_, row) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&r);
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

/// Rank of the matrix with the given rows.
pub fn rank(rows: &[BitVec], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    rows.iter().filter(|r| e.insert(r)).count()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [BitVec], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn kernel(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = BitVec::unit(ncols, free);
        for (row, &pc) in a.iter().zip(&pivots) {
            if row.get(free) {
                x.set(pc, true);
            }
        }
        basis.push(x);
    }
    basis
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(rows: &[BitVec], ncols: usize, b: &BitVec) -> Option<BitVec> {
    // augmented matrix with b as an extra column
    let mut aug: Vec<BitVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = BitVec::zeros(ncols + 1);
            for c in 0..ncols {
                v.set(c, r.get(c));
            }
            v.set(ncols, b.get(i));
            v
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = BitVec::zeros(ncols);
    for (row, &pc) in aug.iter().zip(&pivots) {
        x.set(pc, row.get(ncols));
    }
    Some(x)
}

/// `A x` for `A` given by rows.
pub fn apply(rows: &[BitVec], x: &BitVec) -> BitVec {
    BitVec::from_bits(rows.iter().map(|r| r.dot(x)))
}
