//! File formats: degree-distribution text files, sparse parity-check
//! matrices, outer-code specs and the encoded-symbol container.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fountain_core::degree::{
    lrfc_distribution, r10_distribution, robust_soliton, robust_soliton_with_mean,
    DegreeDistribution,
};
use fountain_core::gf2::{SparseBinMatrix, Symbol};
use fountain_core::outer::{hamming_outer, OuterCode};

/// Distribution text format: one `degree probability` pair per line,
/// `#`-prefixed comments. Sums within 1e-6 of one are normalized.
pub fn parse_distribution(text: &str) -> Result<DegreeDistribution> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let d: usize = it
            .next()
            .unwrap()
            .parse()
            .with_context(|| format!("line {}: bad degree", lineno + 1))?;
        let p: f64 = it
            .next()
            .ok_or_else(|| anyhow!("line {}: missing probability", lineno + 1))?
            .parse()
            .with_context(|| format!("line {}: bad probability", lineno + 1))?;
        if it.next().is_some() {
            bail!("line {}: trailing fields", lineno + 1);
        }
        entries.push((d, p));
    }
    DegreeDistribution::new_with_tolerance(&entries, 1e-6)
        .map_err(|e| anyhow!("invalid distribution: {e}"))
}

pub fn read_distribution(path: &Path) -> Result<DegreeDistribution> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_distribution(&text)
}

pub fn distribution_to_text(dist: &DegreeDistribution) -> String {
    let mut out = String::from("# degree probability\n");
    for &(d, p) in dist.entries() {
        out.push_str(&format!("{d} {p:.12e}\n"));
    }
    out
}

pub fn write_distribution(path: &Path, dist: &DegreeDistribution) -> Result<()> {
    fs::write(path, distribution_to_text(dist))
        .with_context(|| format!("writing {}", path.display()))
}

/// Distribution spec: a preset name or a file path.
///
/// Presets: `r10`; `rsd:<c>,<delta>` or `rsd-mean:<mean>[,<delta>]` (need k);
/// `lrfc[:<n>]` (n defaults to k). Anything else is read as a file.
pub fn resolve_distribution(spec: &str, k: Option<usize>) -> Result<DegreeDistribution> {
    let need_k = || k.ok_or_else(|| anyhow!("distribution preset '{spec}' requires --k"));
    if spec == "r10" {
        return Ok(r10_distribution());
    }
    if let Some(rest) = spec.strip_prefix("rsd-mean:") {
        let mut it = rest.split(',');
        let mean: f64 = it.next().unwrap().parse().context("rsd-mean: bad mean")?;
        let delta: f64 = it
            .next()
            .map(|s| s.parse())
            .transpose()
            .context("rsd-mean: bad delta")?
            .unwrap_or(0.01);
        let (_c, d) = robust_soliton_with_mean(need_k()?, delta, mean, 0.01)
            .map_err(|e| anyhow!("rsd-mean: {e}"))?;
        return Ok(d);
    }
    if let Some(rest) = spec.strip_prefix("rsd:") {
        let mut it = rest.split(',');
        let c: f64 = it.next().unwrap().parse().context("rsd: bad c")?;
        let delta: f64 = it
            .next()
            .ok_or_else(|| anyhow!("rsd:<c>,<delta> requires both parameters"))?
            .parse()
            .context("rsd: bad delta")?;
        return robust_soliton(need_k()?, c, delta).map_err(|e| anyhow!("rsd: {e}"));
    }
    if spec == "rsd" {
        return robust_soliton(need_k()?, 0.1, 0.5).map_err(|e| anyhow!("rsd: {e}"));
    }
    if spec == "lrfc" {
        return lrfc_distribution(need_k()?).map_err(|e| anyhow!("lrfc: {e}"));
    }
    if let Some(rest) = spec.strip_prefix("lrfc:") {
        let n: usize = rest.parse().context("lrfc: bad n")?;
        return lrfc_distribution(n).map_err(|e| anyhow!("lrfc: {e}"));
    }
    read_distribution(Path::new(spec))
}

/// Sparse binary matrix text format: `row: col col col` per line, `#`
/// comments. Column count is inferred from the largest index unless
/// `min_cols` raises it.
pub fn parse_sparse_matrix(text: &str, min_cols: usize) -> Result<SparseBinMatrix> {
    let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut n_cols = min_cols;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| anyhow!("line {}: expected 'row: col col ...'", lineno + 1))?;
        let r: usize = head
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad row index", lineno + 1))?;
        let mut cols = Vec::new();
        for tok in tail.split_whitespace() {
            let c: usize = tok
                .parse()
                .with_context(|| format!("line {}: bad column index", lineno + 1))?;
            n_cols = n_cols.max(c + 1);
            cols.push(c);
        }
        rows.push((r, cols));
    }
    let n_rows = rows.iter().map(|&(r, _)| r + 1).max().unwrap_or(0);
    let mut by_row = vec![Vec::new(); n_rows];
    for (r, cols) in rows {
        if !by_row[r].is_empty() {
            bail!("row {r} appears twice");
        }
        by_row[r] = cols;
    }
    Ok(SparseBinMatrix::from_rows(n_cols, by_row))
}

/// Outer-code spec: `hamming:<r>` or `file:<path>` (parity-check matrix in
/// the sparse text format).
pub fn resolve_outer(spec: &str) -> Result<OuterCode> {
    if let Some(r) = spec.strip_prefix("hamming:") {
        let r: usize = r.parse().context("hamming: bad r")?;
        return hamming_outer(r).map_err(|e| anyhow!("hamming: {e}"));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let m = parse_sparse_matrix(&text, 0)?;
        return OuterCode::from_parity_check(m).map_err(|e| anyhow!("outer: {e}"));
    }
    bail!("outer spec must be hamming:<r> or file:<path>, got '{spec}'")
}

const MAGIC: &[u8; 4] = b"FCW1";

/// Encoded-symbol container: header (k, symbol length, seed, original byte
/// length, embedded distribution) plus `(index, payload)` records. Records
/// may be a subset of the generated symbols (erasures drop records).
#[derive(Clone, Debug)]
pub struct EncodedFile {
    pub k: u32,
    pub symbol_len: u32,
    pub seed: u64,
    pub orig_len: u64,
    pub dist_text: String,
    pub records: Vec<(u32, Vec<u8>)>,
}

impl EncodedFile {
    pub fn distribution(&self) -> Result<DegreeDistribution> {
        parse_distribution(&self.dist_text)
    }

    pub fn payload_symbols(&self) -> Vec<Symbol> {
        self.records
            .iter()
            .map(|(_, p)| Symbol::new(p.clone()))
            .collect()
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&self.k.to_le_bytes())?;
        w.write_all(&self.symbol_len.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&self.orig_len.to_le_bytes())?;
        let dist = self.dist_text.as_bytes();
        w.write_all(&(dist.len() as u32).to_le_bytes())?;
        w.write_all(dist)?;
        w.write_all(&(self.records.len() as u32).to_le_bytes())?;
        for (idx, payload) in &self.records {
            anyhow::ensure!(payload.len() == self.symbol_len as usize, "payload length");
            w.write_all(&idx.to_le_bytes())?;
            w.write_all(payload)?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        anyhow::ensure!(&magic == MAGIC, "not an encoded-symbol file");
        let mut u32buf = [0u8; 4];
        let mut u64buf = [0u8; 8];
        r.read_exact(&mut u32buf)?;
        let k = u32::from_le_bytes(u32buf);
        r.read_exact(&mut u32buf)?;
        let symbol_len = u32::from_le_bytes(u32buf);
        r.read_exact(&mut u64buf)?;
        let seed = u64::from_le_bytes(u64buf);
        r.read_exact(&mut u64buf)?;
        let orig_len = u64::from_le_bytes(u64buf);
        r.read_exact(&mut u32buf)?;
        let dist_len = u32::from_le_bytes(u32buf) as usize;
        let mut dist_bytes = vec![0u8; dist_len];
        r.read_exact(&mut dist_bytes)?;
        let dist_text = String::from_utf8(dist_bytes).context("distribution header")?;
        r.read_exact(&mut u32buf)?;
        let n = u32::from_le_bytes(u32buf) as usize;
        let mut records = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut u32buf)?;
            let idx = u32::from_le_bytes(u32buf);
            let mut payload = vec![0u8; symbol_len as usize];
            r.read_exact(&mut payload)?;
            records.push((idx, payload));
        }
        Ok(Self {
            k,
            symbol_len,
            seed,
            orig_len,
            dist_text,
            records,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        self.write_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut f = std::io::BufReader::new(
            fs::File::open(path).with_context(|| format!("opening {}", path.display()))?,
        );
        Self::read_from(&mut f)
    }
}

/// Splits a byte buffer into k symbols of `symbol_len` bytes, zero-padding
/// the tail.
pub fn bytes_to_symbols(data: &[u8], symbol_len: usize) -> Vec<Symbol> {
    assert!(symbol_len > 0);
    let k = data.len().div_ceil(symbol_len).max(1);
    (0..k)
        .map(|i| {
            let start = i * symbol_len;
            let mut buf = vec![0u8; symbol_len];
            if start < data.len() {
                let end = (start + symbol_len).min(data.len());
                buf[..end - start].copy_from_slice(&data[start..end]);
            }
            Symbol::new(buf)
        })
        .collect()
}

/// Inverse of `bytes_to_symbols`: concatenates and truncates to `orig_len`.
pub fn symbols_to_bytes(symbols: &[Symbol], orig_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(orig_len);
    for s in symbols {
        out.extend_from_slice(s.as_bytes());
    }
    out.truncate(orig_len);
    out
}

/// Parses a grid spec: either `a,b,c` or `start:end[:step]` (inclusive).
pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        anyhow::ensure!(
            parts.len() == 2 || parts.len() == 3,
            "grid must be start:end[:step]"
        );
        let start: usize = parts[0].parse().context("grid start")?;
        let end: usize = parts[1].parse().context("grid end")?;
        let step: usize = if parts.len() == 3 {
            parts[2].parse().context("grid step")?
        } else {
            1
        };
        anyhow::ensure!(step > 0 && end >= start, "empty grid");
        return Ok((start..=end).step_by(step).collect());
    }
    spec.split(',')
        .map(|t| t.trim().parse().map_err(|e| anyhow!("grid entry: {e}")))
        .collect()
}
