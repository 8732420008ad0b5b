//! Outer (precode) block codes for Raptor: systematic Hamming construction,
//! generic parity-check-defined codes, and weight enumerators.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf2::SparseBinMatrix;
use crate::math::binomial_i128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterError {
    InvalidParameter(&'static str),
    /// Weight enumerator requested for a code with k > 20 and no closed
    /// form available.
    EnumeratorUnsupported,
}

impl fmt::Display for OuterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterError::InvalidParameter(w) => write!(f, "invalid parameter: {w}"),
            OuterError::EnumeratorUnsupported => {
                write!(f, "weight enumerator unsupported for this code (k > 20, no closed form)")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OuterError {}

/// A systematic (h, k) binary block code: the first k intermediate symbols
/// are the inputs, the last h-k are parities.
#[derive(Clone, Debug)]
pub struct OuterCode {
    pub h: usize,
    pub k: usize,
    /// (h-k) x h parity-check matrix.
    pub parity_check: SparseBinMatrix,
    /// For parity j (0-based): the input indices it sums. Present only for
    /// systematic constructions where encoding is required.
    parity_inputs: Option<Vec<Vec<usize>>>,
    /// A_l for l = 0..=h, if known.
    weight_enumerator: Option<Vec<u128>>,
}

impl OuterCode {
    /// Builds a code from an arbitrary parity-check matrix. Encoding is
    /// available only if the matrix is in systematic form, i.e. parity row
    /// j involves column k+j and no other parity column.
    pub fn from_parity_check(parity_check: SparseBinMatrix) -> Result<Self, OuterError> {
        let h = parity_check.n_cols();
        let r = parity_check.n_rows();
        if r >= h {
            return Err(OuterError::InvalidParameter("parity rows must be < h"));
        }
        let k = h - r;
        let mut parity_inputs = Some(Vec::with_capacity(r));
        for j in 0..r {
            let row = parity_check.row(j);
            let parity_cols: Vec<usize> = row.iter().copied().filter(|&c| c >= k).collect();
            if parity_cols == [k + j] {
                if let Some(pi) = parity_inputs.as_mut() {
                    pi.push(row.iter().copied().filter(|&c| c < k).collect());
                }
            } else {
                parity_inputs = None;
            }
        }
        Ok(Self {
            h,
            k,
            parity_check,
            parity_inputs,
            weight_enumerator: None,
        })
    }

    pub fn with_weight_enumerator(mut self, a: Vec<u128>) -> Self {
        debug_assert_eq!(a.len(), self.h + 1);
        self.weight_enumerator = Some(a);
        self
    }

    pub fn can_encode(&self) -> bool {
        self.parity_inputs.is_some()
    }

    /// Systematic encoding: intermediates = [input | parities].
    /// Returns the h neighbor lists over input indices (parity j as XOR of
    /// inputs); callers apply it to symbols.
    pub fn parity_input_sets(&self) -> Option<&[Vec<usize>]> {
        self.parity_inputs.as_deref()
    }

    pub fn weight_enumerator_if_known(&self) -> Option<&[u128]> {
        self.weight_enumerator.as_deref()
    }
}

/// Systematic (2^r - 1, 2^r - 1 - r) Hamming code. The columns of the
/// parity-check matrix are all nonzero r-bit patterns: the weight >= 2
/// patterns (in increasing numeric order) form the data columns, the unit
/// vectors the parity columns.
pub fn hamming_outer(r: usize) -> Result<OuterCode, OuterError> {
    if r < 2 || r > 16 {
        return Err(OuterError::InvalidParameter("hamming r must be in 2..=16"));
    }
    let h = (1usize << r) - 1;
    let k = h - r;
    let data_patterns: Vec<u32> = (1..=h as u32)
        .filter(|p| p.count_ones() >= 2)
        .collect();
    debug_assert_eq!(data_patterns.len(), k);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); r];
    for (col, &pat) in data_patterns.iter().enumerate() {
        for bit in 0..r {
            if (pat >> bit) & 1 == 1 {
                rows[bit].push(col);
            }
        }
    }
    for (bit, row) in rows.iter_mut().enumerate() {
        row.push(k + bit);
    }
    let parity_check = SparseBinMatrix::from_rows(h, rows);
    let mut code = OuterCode::from_parity_check(parity_check)?;
    code.weight_enumerator = Some(hamming_weight_enumerator(r));
    Ok(code)
}

/// Hamming weight enumerator via the MacWilliams transform of the dual
/// (simplex) code: W(x, y) = 2^-r [ (x+y)^n + (2^r - 1)(x+y)^(n-w)(x-y)^w ]
/// with w = 2^(r-1).
pub fn hamming_weight_enumerator(r: usize) -> Vec<u128> {
    let n = (1usize << r) - 1;
    let w = 1usize << (r - 1);
    let mut a = vec![0i128; n + 1];
    // (x+y)^n contributes C(n, l) to the y^l coefficient
    for l in 0..=n {
        a[l] += binomial_i128(n as u32, l as u32);
    }
    // (x+y)^(n-w) (x-y)^w contributes sum_j C(n-w, l-j) C(w, j) (-1)^j
    let mult = (1i128 << r) - 1;
    for l in 0..=n {
        let mut term = 0i128;
        for j in 0..=l.min(w) {
            let c = binomial_i128((n - w) as u32, (l - j) as u32) * binomial_i128(w as u32, j as u32);
            if j % 2 == 0 {
                term += c;
            } else {
                term -= c;
            }
        }
        a[l] += mult * term;
    }
    a.into_iter()
        .map(|v| {
            debug_assert!(v >= 0 && v % (1i128 << r) == 0);
            (v >> r) as u128
        })
        .collect()
}

/// Exact weight enumerator by exhaustive enumeration over all 2^k
/// codewords. Only allowed for k <= 20.
pub fn weight_enumerator_exhaustive(code: &OuterCode) -> Result<Vec<u128>, OuterError> {
    if code.k > 20 {
        return Err(OuterError::EnumeratorUnsupported);
    }
    let Some(parity_inputs) = code.parity_input_sets() else {
        return Err(OuterError::InvalidParameter("code is not systematic"));
    };
    let k = code.k;
    // generator rows as bitmasks over h positions (h <= 2^20 + ... keep u128
    // for h <= 128; fall back to Vec<u64> for larger h)
    let words = code.h.div_ceil(64);
    let mut gen_rows: Vec<Vec<u64>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = vec![0u64; words];
        row[i / 64] |= 1 << (i % 64);
        for (j, inputs) in parity_inputs.iter().enumerate() {
            if inputs.contains(&i) {
                let pos = k + j;
                row[pos / 64] |= 1 << (pos % 64);
            }
        }
        gen_rows.push(row);
    }
    let mut a = vec![0u128; code.h + 1];
    // Gray-code walk over all 2^k messages
    let mut acc = vec![0u64; words];
    a[0] += 1;
    let total = 1u64 << k;
    let mut prev_gray = 0u64;
    for i in 1..total {
        let gray = i ^ (i >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        prev_gray = gray;
        for (w, g) in acc.iter_mut().zip(&gen_rows[flipped]) {
            *w ^= g;
        }
        let weight: u32 = acc.iter().map(|w| w.count_ones()).sum();
        a[weight as usize] += 1;
    }
    Ok(a)
}

/// Weight enumerator: returns the stored/closed-form enumerator if present,
/// otherwise falls back to exhaustive enumeration (k <= 20).
pub fn weight_enumerator(code: &OuterCode) -> Result<Vec<u128>, OuterError> {
    if let Some(a) = code.weight_enumerator_if_known() {
        return Ok(a.to_vec());
    }
    weight_enumerator_exhaustive(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_7_4_enumerator() {
        let code = hamming_outer(3).unwrap();
        assert_eq!(code.h, 7);
        assert_eq!(code.k, 4);
        assert_eq!(code.parity_check.n_rows(), 3);
        let a = weight_enumerator(&code).unwrap();
        assert_eq!(a, vec![1, 0, 0, 7, 7, 0, 0, 1]);
        // cross-check against brute force
        let ex = weight_enumerator_exhaustive(&code).unwrap();
        assert_eq!(a, ex);
    }

    #[test]
    fn hamming_15_11_macwilliams_matches_exhaustive() {
        let code = hamming_outer(4).unwrap();
        let mac = hamming_weight_enumerator(4);
        let ex = weight_enumerator_exhaustive(&code).unwrap();
        assert_eq!(mac, ex);
    }

    #[test]
    fn hamming_63_57_properties() {
        let code = hamming_outer(6).unwrap();
        assert_eq!((code.h, code.k), (63, 57));
        let a = weight_enumerator(&code).unwrap();
        assert_eq!(a[0], 1);
        assert_eq!(a[1], 0);
        assert_eq!(a[2], 0, "minimum distance 3");
        assert!(a[3] > 0);
        let total: u128 = a.iter().sum();
        assert_eq!(total, 1u128 << 57);
    }

    #[test]
    fn parity_check_annihilates_generator() {
        for r in [3usize, 4, 6] {
            let code = hamming_outer(r).unwrap();
            let parity_inputs = code.parity_input_sets().unwrap();
            // codeword for unit input e_i must satisfy every check
            for i in 0..code.k {
                let mut cw = alloc::vec![false; code.h];
                cw[i] = true;
                for (j, inputs) in parity_inputs.iter().enumerate() {
                    cw[code.k + j] = inputs.contains(&i);
                }
                for row in 0..code.parity_check.n_rows() {
                    let parity = code
                        .parity_check
                        .row(row)
                        .iter()
                        .filter(|&&c| cw[c])
                        .count();
                    assert_eq!(parity % 2, 0, "r={r} input {i} check {row}");
                }
            }
        }
    }

    #[test]
    fn non_systematic_matrix_cannot_encode() {
        // parity row touching two parity columns
        let m = SparseBinMatrix::from_rows(4, vec![vec![0, 2, 3], vec![1, 2, 3]]);
        let code = OuterCode::from_parity_check(m).unwrap();
        assert!(!code.can_encode());
    }

    #[test]
    fn enumerator_unsupported_beyond_k20_without_closed_form() {
        // systematic parity check with k = 25: single parity over all inputs
        let rows = vec![(0..25).chain([25]).collect::<Vec<_>>()];
        let code = OuterCode::from_parity_check(SparseBinMatrix::from_rows(26, rows)).unwrap();
        assert_eq!(
            weight_enumerator(&code).unwrap_err(),
            OuterError::EnumeratorUnsupported
        );
    }
}
