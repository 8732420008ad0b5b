//! LT encoding and construction of the receiver-side equation system.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::degree::DegreeDistribution;
use crate::gf2::{xor_into, SparseBinMatrix, Symbol};
use crate::rng::{derive_seed, prng_from_seed, Prng};

/// Stream ids hung off the master seed, so the code structure is fixed while
/// decoder randomness can vary independently.
pub const STREAM_ENCODER: u64 = 0;
pub const STREAM_DECODER: u64 = 1;

#[derive(Clone, Debug)]
pub struct LtConfig {
    pub k: usize,
    pub dist: DegreeDistribution,
    pub seed: u64,
}

impl LtConfig {
    pub fn encoder_rng(&self) -> Prng {
        prng_from_seed(derive_seed(self.seed, STREAM_ENCODER))
    }

    pub fn decoder_rng(&self) -> Prng {
        prng_from_seed(derive_seed(self.seed, STREAM_DECODER))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtError {
    InputLengthMismatch { expected: usize, got: usize },
    EmptySelection,
    IndexOutOfRange(usize),
    DuplicateIndex(usize),
}

impl fmt::Display for LtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LtError::InputLengthMismatch { expected, got } => {
                write!(f, "expected {expected} input symbols, got {got}")
            }
            LtError::EmptySelection => write!(f, "received-symbol selection is empty"),
            LtError::IndexOutOfRange(i) => write!(f, "output index {i} out of range"),
            LtError::DuplicateIndex(i) => write!(f, "output index {i} selected twice"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LtError {}

/// Output of one encoder run: payloads plus the neighbor set of every output
/// symbol (column j of the LT generator matrix).
#[derive(Clone, Debug)]
pub struct Codeword {
    pub k: usize,
    pub symbols: Vec<Symbol>,
    pub columns: Vec<Vec<usize>>,
}

/// Samples one generator column: degree d from the distribution (capped at
/// k), then d distinct inputs by partial Fisher-Yates. Returns sorted
/// indices.
pub fn sample_column<R: Rng + ?Sized>(
    k: usize,
    dist: &DegreeDistribution,
    rng: &mut R,
) -> Vec<usize> {
    let d = dist.sample(rng).min(k);
    let mut pool: Vec<usize> = (0..k).collect();
    for i in 0..d {
        let j = rng.gen_range(i..k);
        pool.swap(i, j);
    }
    let mut picked: Vec<usize> = pool[..d].to_vec();
    picked.sort_unstable();
    picked
}

/// Generates `n` output symbols from `input`. Fully determined by the
/// config seed.
pub fn encode(config: &LtConfig, input: &[Symbol], n: usize) -> Result<Codeword, LtError> {
    if input.len() != config.k {
        return Err(LtError::InputLengthMismatch {
            expected: config.k,
            got: input.len(),
        });
    }
    let structure = encode_structure(config, n);
    let len = input.first().map(Symbol::len).unwrap_or(0);
    let mut symbols = Vec::with_capacity(n);
    for col in &structure {
        let mut acc = Symbol::zeros(len);
        for &i in col {
            xor_into(&mut acc, &input[i]).expect("uniform symbol length");
        }
        symbols.push(acc);
    }
    Ok(Codeword {
        k: config.k,
        symbols,
        columns: structure,
    })
}

/// Structure-only variant: just the generator columns, no payloads.
pub fn encode_structure(config: &LtConfig, n: usize) -> Vec<Vec<usize>> {
    let mut rng = config.encoder_rng();
    (0..n)
        .map(|_| sample_column(config.k, &config.dist, &mut rng))
        .collect()
}

/// The receiver-side system G0^T v^T = y^T: one row per collected output
/// symbol.
#[derive(Clone, Debug)]
pub struct ReceivedSystem {
    pub k: usize,
    pub g0_t: SparseBinMatrix,
    pub payloads: Vec<Symbol>,
}

impl ReceivedSystem {
    pub fn m(&self) -> usize {
        self.g0_t.n_rows()
    }

    /// Assembles a system directly from rows (neighbor sets) and payloads.
    pub fn from_rows(k: usize, rows: Vec<Vec<usize>>, payloads: Vec<Symbol>) -> Self {
        debug_assert_eq!(rows.len(), payloads.len());
        Self {
            k,
            g0_t: SparseBinMatrix::from_rows(k, rows),
            payloads,
        }
    }
}

/// Selects the non-erased output symbols by index and builds the received
/// system; row j of g0_t is the transposed generator column of the j-th
/// selected symbol.
pub fn receive(indices: &[usize], codeword: &Codeword) -> Result<ReceivedSystem, LtError> {
    if indices.is_empty() {
        return Err(LtError::EmptySelection);
    }
    let mut seen = alloc::collections::BTreeSet::new();
    let mut rows = Vec::with_capacity(indices.len());
    let mut payloads = Vec::with_capacity(indices.len());
    for &i in indices {
        if i >= codeword.columns.len() {
            return Err(LtError::IndexOutOfRange(i));
        }
        if !seen.insert(i) {
            return Err(LtError::DuplicateIndex(i));
        }
        rows.push(codeword.columns[i].clone());
        payloads.push(codeword.symbols[i].clone());
    }
    Ok(ReceivedSystem::from_rows(codeword.k, rows, payloads))
}

/// "Collect exactly m" channel: samples m fresh output symbols. This is the
/// mode all the analyses condition on.
pub fn receive_exactly_m(config: &LtConfig, input: &[Symbol], m: usize) -> Result<ReceivedSystem, LtError> {
    let cw = encode(config, input, m)?;
    let indices: Vec<usize> = (0..m).collect();
    receive(&indices, &cw)
}

/// Structure-only "collect exactly m" system (empty payloads).
pub fn receive_structure(config: &LtConfig, m: usize) -> ReceivedSystem {
    let rows = encode_structure(config, m);
    let payloads = alloc::vec![Symbol::zeros(0); m];
    ReceivedSystem::from_rows(config.k, rows, payloads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::r10_distribution;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn sym(b: u8) -> Symbol {
        Symbol::new(alloc::vec![b])
    }

    #[test]
    fn k1_degree1_reproduces_input() {
        let config = LtConfig {
            k: 1,
            dist: DegreeDistribution::point_mass(1),
            seed: 5,
        };
        let cw = encode(&config, &[sym(0x7E)], 8).unwrap();
        for s in &cw.symbols {
            assert_eq!(*s, sym(0x7E));
        }
    }

    #[test]
    fn payloads_are_xor_of_column_neighbors() {
        let config = LtConfig {
            k: 20,
            dist: r10_distribution(),
            seed: 99,
        };
        let input: Vec<Symbol> = (0..20).map(|i| sym(i as u8 * 3 + 1)).collect();
        let cw = encode(&config, &input, 50).unwrap();
        for (col, s) in cw.columns.iter().zip(&cw.symbols) {
            let expect = col.iter().fold(0u8, |acc, &i| acc ^ input[i].as_bytes()[0]);
            assert_eq!(s.as_bytes()[0], expect);
            // distinct neighbors, in range
            assert!(col.windows(2).all(|w| w[0] < w[1]));
            assert!(!col.is_empty() && *col.last().unwrap() < 20);
        }
    }

    #[test]
    fn encoding_is_deterministic() {
        let config = LtConfig {
            k: 40,
            dist: r10_distribution(),
            seed: 1234,
        };
        let input: Vec<Symbol> = (0..40).map(|i| sym(i as u8)).collect();
        let a = encode(&config, &input, 100).unwrap();
        let b = encode(&config, &input, 100).unwrap();
        assert_eq!(a.columns, b.columns);
        assert_eq!(a.symbols, b.symbols);
    }

    #[test]
    fn column_weight_histogram_tracks_distribution() {
        let config = LtConfig {
            k: 1000,
            dist: r10_distribution(),
            seed: 7,
        };
        let n = 100_000;
        let cols = encode_structure(&config, n);
        let mut counts = alloc::collections::BTreeMap::new();
        for c in &cols {
            *counts.entry(c.len()).or_insert(0usize) += 1;
        }
        for &(d, p) in config.dist.entries() {
            let obs = *counts.get(&d).unwrap_or(&0) as f64;
            let mean = n as f64 * p;
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((obs - mean).abs() <= 3.0 * sigma, "degree {d}");
        }
    }

    #[test]
    fn receive_full_and_split_selections() {
        let config = LtConfig {
            k: 10,
            dist: r10_distribution(),
            seed: 3,
        };
        let input: Vec<Symbol> = (0..10).map(|i| sym(i as u8)).collect();
        let cw = encode(&config, &input, 30).unwrap();
        let all: Vec<usize> = (0..30).collect();
        let sys = receive(&all, &cw).unwrap();
        assert_eq!(sys.m(), 30);
        for (j, col) in cw.columns.iter().enumerate() {
            assert_eq!(sys.g0_t.row(j), col.as_slice());
        }
        // disjoint halves partition the rows
        let lo = receive(&all[..15], &cw).unwrap();
        let hi = receive(&all[15..], &cw).unwrap();
        assert_eq!(lo.m() + hi.m(), 30);

        assert!(receive(&[], &cw).is_err());
        assert!(receive(&[30], &cw).is_err());
        assert!(receive(&[1, 1], &cw).is_err());
    }

    #[test]
    fn erasure_channel_survivor_count_within_3_sigma() {
        let mut rng = StdRng::seed_from_u64(17);
        let n = 100_000usize;
        let eps = 0.3;
        let survivors = (0..n).filter(|_| rng.gen::<f64>() >= eps).count() as f64;
        let mean = n as f64 * (1.0 - eps);
        let sigma = (n as f64 * eps * (1.0 - eps)).sqrt();
        assert!((survivors - mean).abs() <= 3.0 * sigma);
    }

    #[test]
    fn row_weights_bounded_by_k_and_dmax() {
        let config = LtConfig {
            k: 5,
            dist: r10_distribution(),
            seed: 11,
        };
        for col in encode_structure(&config, 500) {
            assert!(!col.is_empty());
            assert!(col.len() <= 5);
        }
    }
}
