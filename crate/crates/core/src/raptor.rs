//! Raptor codes: systematic outer block code concatenated with an inner LT
//! code over the h intermediate symbols. ML decoding runs the inactivation
//! decoder on the constraint system [H_P^T | G0]^T v^T = [0 | y]^T.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::gf2::{xor_into, Symbol};
use crate::inactivation::{decode, DecodeOutcome};
use crate::lt::{encode, Codeword, LtConfig, LtError, ReceivedSystem};
use crate::outer::OuterCode;

#[derive(Clone, Debug)]
pub struct RaptorConfig {
    pub outer: OuterCode,
    /// Inner LT configuration; `lt.k` must equal `outer.h` (the LT code
    /// operates on the intermediate symbols).
    pub lt: LtConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RaptorError {
    MismatchedDimensions { lt_k: usize, outer_h: usize },
    NonSystematicOuter,
    Lt(LtError),
}

impl fmt::Display for RaptorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RaptorError::MismatchedDimensions { lt_k, outer_h } => {
                write!(f, "LT k = {lt_k} must equal outer h = {outer_h}")
            }
            RaptorError::NonSystematicOuter => {
                write!(f, "outer code is not systematic; cannot encode")
            }
            RaptorError::Lt(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RaptorError {}

impl From<LtError> for RaptorError {
    fn from(e: LtError) -> Self {
        RaptorError::Lt(e)
    }
}

impl RaptorConfig {
    pub fn new(outer: OuterCode, lt: LtConfig) -> Result<Self, RaptorError> {
        if lt.k != outer.h {
            return Err(RaptorError::MismatchedDimensions {
                lt_k: lt.k,
                outer_h: outer.h,
            });
        }
        Ok(Self { outer, lt })
    }
}

/// Systematic outer encoding: intermediates = [input | parities].
pub fn outer_encode(outer: &OuterCode, input: &[Symbol]) -> Result<Vec<Symbol>, RaptorError> {
    let Some(parity_inputs) = outer.parity_input_sets() else {
        return Err(RaptorError::NonSystematicOuter);
    };
    debug_assert_eq!(input.len(), outer.k);
    let len = input.first().map(Symbol::len).unwrap_or(0);
    let mut v: Vec<Symbol> = input.to_vec();
    for inputs in parity_inputs {
        let mut p = Symbol::zeros(len);
        for &i in inputs {
            xor_into(&mut p, &input[i]).expect("uniform symbol length");
        }
        v.push(p);
    }
    Ok(v)
}

/// Full Raptor encoding: outer encode then LT encode over the h
/// intermediates.
pub fn raptor_encode(
    config: &RaptorConfig,
    input: &[Symbol],
    n: usize,
) -> Result<Codeword, RaptorError> {
    let v = outer_encode(&config.outer, input)?;
    Ok(encode(&config.lt, &v, n)?)
}

/// Builds the receiver-side constraint system M^T v^T = [0 | y]^T: the h-k
/// parity rows (zero payloads) placed before the m received rows.
pub fn constraint_system(outer: &OuterCode, received: &ReceivedSystem) -> ReceivedSystem {
    debug_assert_eq!(received.k, outer.h);
    let len = received.payloads.first().map(Symbol::len).unwrap_or(0);
    let r = outer.parity_check.n_rows();
    let mut rows = Vec::with_capacity(r + received.m());
    let mut payloads = Vec::with_capacity(r + received.m());
    for j in 0..r {
        rows.push(outer.parity_check.row(j).to_vec());
        payloads.push(Symbol::zeros(len));
    }
    for j in 0..received.m() {
        rows.push(received.g0_t.row(j).to_vec());
        payloads.push(received.payloads[j].clone());
    }
    ReceivedSystem::from_rows(outer.h, rows, payloads)
}

/// Outcome of Raptor ML decoding: the decoder report over the intermediate
/// system plus the extracted systematic inputs on success.
#[derive(Clone, Debug)]
pub struct RaptorDecodeOutcome {
    pub outcome: DecodeOutcome,
    pub input: Option<Vec<Symbol>>,
}

/// ML decoding via inactivation on the (m + h - k) x h constraint system.
/// Success iff rank(M) = h; the inactivation count is reported either way.
pub fn raptor_decode<R: Rng + ?Sized>(
    received: &ReceivedSystem,
    outer: &OuterCode,
    rng: &mut R,
) -> RaptorDecodeOutcome {
    let sys = constraint_system(outer, received);
    let outcome = decode(&sys, rng, false);
    let input = outcome
        .symbols
        .as_ref()
        .map(|v| v[..outer.k].to_vec());
    RaptorDecodeOutcome { outcome, input }
}

/// Structure-only Raptor trial: builds the constraint system from the given
/// LT rows and returns (success, inactivations).
pub fn raptor_decode_structure<R: Rng + ?Sized>(
    outer: &OuterCode,
    lt_rows: Vec<Vec<usize>>,
    rng: &mut R,
) -> (bool, usize) {
    let m = lt_rows.len();
    let received = ReceivedSystem::from_rows(outer.h, lt_rows, vec![Symbol::zeros(0); m]);
    let sys = constraint_system(outer, &received);
    crate::inactivation::decode_structure(&sys, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::r10_distribution;
    use crate::gf2::SparseBinMatrix;
    use crate::lt::receive;
    use crate::outer::hamming_outer;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sym(b: u8) -> Symbol {
        Symbol::new(alloc::vec![b])
    }

    #[test]
    fn intermediates_satisfy_parity_checks() {
        let outer = hamming_outer(3).unwrap();
        let input: Vec<Symbol> = (0..4).map(|i| sym(i as u8 * 5 + 1)).collect();
        let v = outer_encode(&outer, &input).unwrap();
        assert_eq!(v.len(), 7);
        let h_v = outer.parity_check.mul_symbols(&v).unwrap();
        for s in h_v {
            assert_eq!(s, Symbol::zeros(1));
        }
    }

    #[test]
    fn round_trip_with_enough_symbols() {
        let outer = hamming_outer(3).unwrap();
        let lt = LtConfig {
            k: 7,
            dist: r10_distribution(),
            seed: 2,
        };
        let config = RaptorConfig::new(outer, lt).unwrap();
        let input: Vec<Symbol> = (0..4).map(|i| sym((i * 31 + 7) as u8)).collect();
        for seed in 0..20u64 {
            let mut cfg = config.clone();
            cfg.lt.seed = seed;
            let cw = raptor_encode(&cfg, &input, 20).unwrap();
            let idx: Vec<usize> = (0..20).collect();
            let received = receive(&idx, &cw).unwrap();
            let mut rng = cfg.lt.decoder_rng();
            let out = raptor_decode(&received, &cfg.outer, &mut rng);
            if out.outcome.report.success {
                assert_eq!(out.input.unwrap(), input);
                // recovered intermediates satisfy the parity constraints
                let v = out.outcome.symbols.unwrap();
                for s in cfg.outer.parity_check.mul_symbols(&v).unwrap() {
                    assert_eq!(s, Symbol::zeros(1));
                }
                return;
            }
        }
        panic!("no successful decode in 20 seeds");
    }

    #[test]
    fn success_iff_constraint_matrix_full_rank() {
        let outer = hamming_outer(3).unwrap();
        let mut rng = StdRng::seed_from_u64(300);
        for _ in 0..100 {
            let m = rng.gen_range(1..10usize);
            let rows: Vec<Vec<usize>> = (0..m)
                .map(|_| {
                    let d = rng.gen_range(1..=3usize);
                    let mut r: Vec<usize> = (0..7).collect();
                    for i in 0..d {
                        let j = rng.gen_range(i..7);
                        r.swap(i, j);
                    }
                    r[..d].to_vec()
                })
                .collect();
            // rank oracle on the stacked matrix
            let mut all = Vec::new();
            for j in 0..outer.parity_check.n_rows() {
                all.push(outer.parity_check.row(j).to_vec());
            }
            all.extend(rows.iter().cloned());
            let full_rank = SparseBinMatrix::from_rows(7, all).rank() == 7;
            let (ok, _t) =
                raptor_decode_structure(&outer, rows, &mut StdRng::seed_from_u64(rng.gen()));
            assert_eq!(ok, full_rank);
        }
    }

    #[test]
    fn no_received_symbols_cannot_succeed() {
        let outer = hamming_outer(3).unwrap();
        // parity rows alone have rank h-k < h
        let (ok, _) = raptor_decode_structure(&outer, Vec::new(), &mut StdRng::seed_from_u64(1));
        assert!(!ok);
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let outer = hamming_outer(3).unwrap();
        let lt = LtConfig {
            k: 6,
            dist: r10_distribution(),
            seed: 0,
        };
        assert!(RaptorConfig::new(outer, lt).is_err());
    }
}
