//! Binary symbol arithmetic and GF(2) matrix operations.
//!
//! Sparse matrices store, per row, the sorted column indices holding a one.
//! Dense elimination (rank, solving) converts to a bit-packed form first.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A fixed-length chunk of payload bytes. All symbols of one codeword share
/// the same length; a zero-length symbol is allowed for structure-only runs
/// where only the equation system matters.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Symbol {
    payload: Vec<u8>,
}

impl Symbol {
    pub fn new(payload: Vec<u8>) -> Self {
        Self { payload }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            payload: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payload.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.payload
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.payload
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gf2Error {
    LengthMismatch { dst: usize, src: usize },
    DimensionMismatch,
}

impl fmt::Display for Gf2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gf2Error::LengthMismatch { dst, src } => {
                write!(f, "symbol length mismatch: dst {dst} vs src {src}")
            }
            Gf2Error::DimensionMismatch => write!(f, "matrix/vector dimension mismatch"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Gf2Error {}

/// dst ^= src, bytewise.
pub fn xor_into(dst: &mut Symbol, src: &Symbol) -> Result<(), Gf2Error> {
    if dst.payload.len() != src.payload.len() {
        return Err(Gf2Error::LengthMismatch {
            dst: dst.payload.len(),
            src: src.payload.len(),
        });
    }
    for (d, s) in dst.payload.iter_mut().zip(src.payload.iter()) {
        *d ^= s;
    }
    Ok(())
}

/// Sparse binary matrix: per-row sorted sets of column indices holding 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBinMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl SparseBinMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    /// Builds from per-row index lists; indices are sorted and deduplicated
    /// (a duplicated index cancels over GF(2)).
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Self {
        let n_rows = rows.len();
        let mut m = Self {
            n_rows,
            n_cols,
            rows,
        };
        for row in &mut m.rows {
            row.sort_unstable();
            // cancel duplicate pairs
            let mut out: Vec<usize> = Vec::with_capacity(row.len());
            for &c in row.iter() {
                debug_assert!(c < n_cols);
                if out.last() == Some(&c) {
                    out.pop();
                } else {
                    out.push(c);
                }
            }
            *row = out;
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            rows: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.rows[i].len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n_cols];
        for (i, row) in self.rows.iter().enumerate() {
            for &j in row {
                rows[j].push(i);
            }
        }
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    /// GF(2) rank via bit-packed Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        BitMatrix::from_sparse(self).rank_in_place()
    }

    /// Multiplies the matrix by a vector of symbols: out_i = XOR of x_j over
    /// the ones in row i.
    pub fn mul_symbols(&self, x: &[Symbol]) -> Result<Vec<Symbol>, Gf2Error> {
        if x.len() != self.n_cols {
            return Err(Gf2Error::DimensionMismatch);
        }
        let len = x.first().map(Symbol::len).unwrap_or(0);
        let mut out = Vec::with_capacity(self.n_rows);
        for row in &self.rows {
            let mut acc = Symbol::zeros(len);
            for &j in row {
                xor_into(&mut acc, &x[j])?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Dense bit-packed GF(2) matrix, 64 columns per word.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        let words_per_row = n_cols.div_ceil(64);
        Self {
            n_rows,
            n_cols,
            words_per_row,
            words: vec![0; n_rows * words_per_row],
        }
    }

    pub fn from_sparse(m: &SparseBinMatrix) -> Self {
        let mut b = Self::zero(m.n_rows(), m.n_cols());
        for i in 0..m.n_rows() {
            for &j in m.row(i) {
                b.set(i, j, true);
            }
        }
        b
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = i * self.words_per_row + j / 64;
        let bit = 1u64 << (j % 64);
        if v {
            self.words[w] |= bit;
        } else {
            self.words[w] &= !bit;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        let w = i * self.words_per_row + j / 64;
        (self.words[w] >> (j % 64)) & 1 == 1
    }

    fn row_range(&self, i: usize) -> core::ops::Range<usize> {
        let s = i * self.words_per_row;
        s..s + self.words_per_row
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = (self.row_range(src), self.row_range(dst));
        for k in 0..self.words_per_row {
            let v = self.words[a.start + k];
            self.words[b.start + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.words
                .swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    /// Destructive row reduction; returns the rank.
    pub fn rank_in_place(&mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.n_cols {
            if rank == self.n_rows {
                break;
            }
            let pivot = (rank..self.n_rows).find(|&i| self.get(i, col));
            let Some(pivot) = pivot else { continue };
            self.swap_rows(rank, pivot);
            for i in 0..self.n_rows {
                if i != rank && self.get(i, col) {
                    self.xor_row_into(rank, i);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Outcome of solving a GF(2) linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(Vec<Symbol>),
    Singular,
}

/// Solves A x = b over GF(2) with symbol-valued right-hand sides using dense
/// Gaussian elimination. A may be square or overdetermined; `Unique` is
/// returned iff the column rank equals `n_cols` and the system is consistent.
pub fn dense_solve(a: &SparseBinMatrix, b: &[Symbol]) -> Result<SolveOutcome, Gf2Error> {
    if b.len() != a.n_rows() || a.n_rows() < a.n_cols() {
        return Err(Gf2Error::DimensionMismatch);
    }
    let mut m = BitMatrix::from_sparse(a);
    let mut rhs: Vec<Symbol> = b.to_vec();
    let n = a.n_cols();
    let mut pivot_row_of_col = vec![usize::MAX; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m.n_rows()).find(|&i| m.get(i, col)) else {
            return Ok(SolveOutcome::Singular);
        };
        m.swap_rows(rank, p);
        rhs.swap(rank, p);
        for i in 0..m.n_rows() {
            if i != rank && m.get(i, col) {
                m.xor_row_into(rank, i);
                let (src, dst) = if rank < i {
                    let (lo, hi) = rhs.split_at_mut(i);
                    (&lo[rank], &mut hi[0])
                } else {
                    let (lo, hi) = rhs.split_at_mut(rank);
                    (&hi[0], &mut lo[i])
                };
                xor_into(dst, src)?;
            }
        }
        pivot_row_of_col[col] = rank;
        rank += 1;
    }
    // Consistency of the leftover (zero) rows.
    let len = rhs.first().map(Symbol::len).unwrap_or(0);
    let zero = Symbol::zeros(len);
    for r in rank..m.n_rows() {
        if rhs[r] != zero {
            return Ok(SolveOutcome::Singular);
        }
    }
    let mut x = Vec::with_capacity(n);
    for col in 0..n {
        x.push(rhs[pivot_row_of_col[col]].clone());
    }
    Ok(SolveOutcome::Unique(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sym(bytes: &[u8]) -> Symbol {
        Symbol::new(bytes.to_vec())
    }

    #[test]
    fn xor_truth_table() {
        let mut a = sym(&[0x00]);
        xor_into(&mut a, &sym(&[0xAB])).unwrap();
        assert_eq!(a, sym(&[0xAB]));
        xor_into(&mut a, &sym(&[0xAB])).unwrap();
        assert_eq!(a, sym(&[0x00]));
        let mut b = sym(&[0b0101]);
        xor_into(&mut b, &sym(&[0b0011])).unwrap();
        assert_eq!(b, sym(&[0b0110]));
    }

    #[test]
    fn xor_length_mismatch() {
        let mut a = sym(&[0, 1]);
        assert!(xor_into(&mut a, &sym(&[1])).is_err());
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(SparseBinMatrix::identity(4).rank(), 4);
        assert_eq!(SparseBinMatrix::zero(3, 5).rank(), 0);
    }

    /// Plain dense elimination over a bool matrix, independent of BitMatrix.
    fn rank_oracle(m: &SparseBinMatrix) -> usize {
        let mut a: Vec<Vec<bool>> = (0..m.n_rows())
            .map(|i| (0..m.n_cols()).map(|j| m.get(i, j)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.n_cols() {
            if let Some(p) = (rank..a.len()).find(|&i| a[i][col]) {
                a.swap(rank, p);
                for i in 0..a.len() {
                    if i != rank && a[i][col] {
                        let src = a[rank].clone();
                        for (x, y) in a[i].iter_mut().zip(src) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn random_matrix(rng: &mut StdRng, n_rows: usize, n_cols: usize, density: f64) -> SparseBinMatrix {
        let rows = (0..n_rows)
            .map(|_| (0..n_cols).filter(|_| rng.gen_bool(density)).collect())
            .collect();
        SparseBinMatrix::from_rows(n_cols, rows)
    }

    #[test]
    fn rank_matches_dense_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 10, 10, 0.4);
            assert_eq!(m.rank(), rank_oracle(&m));
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 8, 13, 0.3);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let a = SparseBinMatrix::identity(3);
        let b = vec![sym(&[1]), sym(&[2]), sym(&[3])];
        match dense_solve(&a, &b).unwrap() {
            SolveOutcome::Unique(x) => assert_eq!(x, b),
            SolveOutcome::Singular => panic!("identity must be solvable"),
        }
    }

    #[test]
    fn solve_rank_deficient_is_singular() {
        let a = SparseBinMatrix::from_rows(2, vec![vec![0, 1], vec![0, 1]]);
        let b = vec![sym(&[1]), sym(&[2])];
        assert_eq!(dense_solve(&a, &b).unwrap(), SolveOutcome::Singular);
    }

    #[test]
    fn solve_matches_exhaustive_oracle() {
        // 8x8 full-rank instances with L=1: compare against brute force over
        // all 2^8 candidate bit-vectors per payload bit.
        let mut rng = StdRng::seed_from_u64(23);
        let mut solved = 0;
        while solved < 5 {
            let a = random_matrix(&mut rng, 8, 8, 0.5);
            if a.rank() < 8 {
                continue;
            }
            let x_true: Vec<Symbol> = (0..8).map(|_| sym(&[rng.gen::<u8>() & 1])).collect();
            let b = a.mul_symbols(&x_true).unwrap();
            let SolveOutcome::Unique(x) = dense_solve(&a, &b).unwrap() else {
                panic!("full-rank system must be solvable");
            };
            // brute force over all 2^8 assignments of the low bit
            let mut found = None;
            for cand in 0u32..256 {
                let xs: Vec<Symbol> = (0..8).map(|i| sym(&[((cand >> i) & 1) as u8])).collect();
                if a.mul_symbols(&xs).unwrap() == b {
                    assert!(found.is_none(), "solution must be unique");
                    found = Some(xs);
                }
            }
            assert_eq!(x, found.expect("oracle must find a solution"));
            solved += 1;
        }
    }

    #[test]
    fn solve_result_remultiplies_to_rhs() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..30 {
            let a = random_matrix(&mut rng, 9, 6, 0.4);
            let x_true: Vec<Symbol> = (0..6).map(|_| sym(&[rng.gen()])).collect();
            let b = a.mul_symbols(&x_true).unwrap();
            if let SolveOutcome::Unique(x) = dense_solve(&a, &b).unwrap() {
                assert_eq!(a.mul_symbols(&x).unwrap(), b);
            }
        }
    }
}
