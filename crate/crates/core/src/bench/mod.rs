//! Benchmark harness: text loading and generation, structure builds, timed
//! query batches and CSV records.
//!
//! Every run first checks the structure against an oracle; a wrong answer
//! aborts the run with [`Error::Verification`] before anything is timed.

mod container;
mod synth;

pub use container::{AnyBitVector, AnyWaveletTree, Container, Structure, CONTAINER_MAGIC, CONTAINER_VERSION};
pub use synth::{
    count_runs, gen_queries, gen_synthetic_text, SyntheticKind, SyntheticSpec, ALPHABET_BASE,
    DEFAULT_ALPHABET_SIZE, DEFAULT_BASE_SEGMENT,
};

use std::fs::File;
use std::hint::black_box;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank_select::{Backend, RankSelect};
use crate::text_index::{plcp_bitvector, plcp_query, SaLcpBundle, Text};
use crate::wavelet::{Shape, WaveletTree};
use crate::{HybParams, HybVector, PlainBitVector};

pub const MAX_INPUT_BYTES: usize = 64 << 20;
pub const DEFAULT_QUERIES: usize = 100_000;
pub const MIN_VERIFIED_QUERIES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Hyb,
    Plain,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Hyb => "hyb",
            BackendKind::Plain => "plain",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Plcp,
    BwtSelect,
}

impl StructureKind {
    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Plcp => "plcp",
            StructureKind::BwtSelect => "bwt-select",
        }
    }
}

pub fn shape_name(shape: Shape) -> &'static str {
    match shape {
        Shape::Huffman => "huff",
        Shape::Balanced => "blcd",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TextSource {
    File(PathBuf),
    Synthetic(SyntheticSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub source: TextSource,
    pub structure: StructureKind,
    pub backend: BackendKind,
    pub superblock_blocks: usize,
    pub shape: Shape,
    pub queries: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Longer inputs are truncated to this many bytes.
    pub max_input_bytes: usize,
}

impl BenchConfig {
    pub fn new(source: TextSource, structure: StructureKind) -> Self {
        Self {
            source,
            structure,
            backend: BackendKind::Hyb,
            superblock_blocks: HybParams::default().superblock_blocks(),
            shape: Shape::Huffman,
            queries: DEFAULT_QUERIES,
            seed: 0,
            output: None,
            max_input_bytes: MAX_INPUT_BYTES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.queries == 0 {
            return Err(Error::InvalidParams("query count must be at least 1".into()));
        }
        if self.max_input_bytes == 0 {
            return Err(Error::InvalidParams("input cap must be at least 1 byte".into()));
        }
        HybParams::new(self.superblock_blocks)?;
        Ok(())
    }

    fn hyb_params(&self) -> Result<HybParams> {
        HybParams::new(self.superblock_blocks)
    }
}

/// One CSV row. All columns except `build_ms` and `avg_query_ns` are
/// deterministic for a fixed configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub text: String,
    pub structure: String,
    pub n: usize,
    pub backend: String,
    pub b_s: Option<usize>,
    pub shape: Option<String>,
    pub queries: usize,
    pub build_ms: f64,
    pub avg_query_ns: Option<f64>,
    pub size_bytes: usize,
    pub relative_size: f64,
    pub checksum: u64,
}

impl BenchRecord {
    fn new(config: &BenchConfig, text: &str, n: usize, build_ms: f64, size_bytes: usize) -> Self {
        Self {
            text: text.to_string(),
            structure: config.structure.name().to_string(),
            n,
            backend: config.backend.name().to_string(),
            b_s: (config.backend == BackendKind::Hyb).then_some(config.superblock_blocks),
            shape: (config.structure == StructureKind::BwtSelect).then(|| shape_name(config.shape).to_string()),
            queries: 0,
            build_ms,
            avg_query_ns: None,
            size_bytes,
            relative_size: size_bytes as f64 / n as f64,
            checksum: 0,
        }
    }
}

/// Text plus its suffix-array products.
pub struct Prepared {
    pub name: String,
    pub text: Text,
    pub bundle: SaLcpBundle,
}

/// Reads at most `cap` bytes of a file.
pub fn read_capped(path: &Path, cap: usize) -> Result<Vec<u8>> {
    let file = File::open(path)?;
    let total = file.metadata()?.len();
    let mut bytes = Vec::new();
    file.take(cap as u64).read_to_end(&mut bytes)?;
    if total > cap as u64 {
        log::warn!("{} holds {total} bytes; using the first {cap}", path.display());
    }
    Ok(bytes)
}

pub fn load_text(config: &BenchConfig) -> Result<(String, Vec<u8>)> {
    match &config.source {
        TextSource::File(path) => {
            let name = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            Ok((name, read_capped(path, config.max_input_bytes)?))
        }
        TextSource::Synthetic(spec) => {
            let mut bytes = gen_synthetic_text(spec)?;
            bytes.truncate(config.max_input_bytes);
            Ok((spec.name(), bytes))
        }
    }
}

pub fn prepare(config: &BenchConfig) -> Result<Prepared> {
    config.validate()?;
    let (name, bytes) = load_text(config)?;
    let text = Text::new(bytes)?;
    let started = Instant::now();
    let bundle = SaLcpBundle::build(&text);
    log::info!("{name}: suffix arrays for n = {} in {:.1} ms", text.len(), ms(started));
    Ok(Prepared { name, text, bundle })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn mix(sum: u64, v: usize) -> u64 {
    sum.wrapping_mul(0x100_0000_01b3).wrapping_add(v as u64)
}

/// Builds the configured structure over a prepared text.
pub fn build_structure(config: &BenchConfig, prep: &Prepared) -> Result<(Container, BenchRecord)> {
    let started = Instant::now();
    let structure = match (config.structure, config.backend) {
        (StructureKind::Plcp, BackendKind::Hyb) => {
            let bits = plcp_bitvector(&prep.bundle.plcp)?;
            Structure::Plcp(AnyBitVector::Hyb(<HybVector as Backend>::build(&bits, &config.hyb_params()?)?))
        }
        (StructureKind::Plcp, BackendKind::Plain) => {
            let bits = plcp_bitvector(&prep.bundle.plcp)?;
            Structure::Plcp(AnyBitVector::Plain(PlainBitVector::new(bits)))
        }
        (StructureKind::BwtSelect, BackendKind::Hyb) => Structure::BwtSelect(AnyWaveletTree::Hyb(
            WaveletTree::build(&prep.bundle.bwt, config.shape, &config.hyb_params()?)?,
        )),
        (StructureKind::BwtSelect, BackendKind::Plain) => Structure::BwtSelect(AnyWaveletTree::Plain(
            WaveletTree::build(&prep.bundle.bwt, config.shape, &())?,
        )),
    };
    let build_ms = ms(started);
    let container = Container {
        text_len: prep.text.len(),
        structure,
    };
    let size = match &container.structure {
        Structure::Plcp(AnyBitVector::Hyb(b)) => b.size_in_bytes(),
        Structure::Plcp(AnyBitVector::Plain(b)) => b.size_in_bytes(),
        Structure::BwtSelect(AnyWaveletTree::Hyb(w)) => w.size_in_bytes(),
        Structure::BwtSelect(AnyWaveletTree::Plain(w)) => w.size_in_bytes(),
    };
    let record = BenchRecord::new(config, &prep.name, prep.text.len(), build_ms, size);
    Ok((container, record))
}

/// Timed queries plus extra ones so that at least `MIN_VERIFIED_QUERIES` are checked.
fn verification_queries(seed: u64, bound: usize, timed: &[usize]) -> Vec<usize> {
    let mut qs = timed.to_vec();
    let extra = MIN_VERIFIED_QUERIES.saturating_sub(timed.len());
    qs.extend(gen_queries(seed ^ 0x9e37_79b9_7f4a_7c15, bound, extra));
    qs
}

fn finish_record(mut record: BenchRecord, queries: usize, elapsed_ns: f64, checksum: u64) -> BenchRecord {
    record.queries = queries;
    record.avg_query_ns = Some(elapsed_ns / queries as f64);
    record.checksum = checksum;
    record
}

/// PLCP query benchmark: `plcp[j] = select1(B, j) - 2j` on random `j`.
pub fn bench_plcp(config: &BenchConfig) -> Result<BenchRecord> {
    let config = BenchConfig {
        structure: StructureKind::Plcp,
        ..config.clone()
    };
    let prep = prepare(&config)?;
    bench_plcp_prepared(&config, &prep)
}

pub fn bench_plcp_prepared(config: &BenchConfig, prep: &Prepared) -> Result<BenchRecord> {
    let (container, record) = build_structure(config, prep)?;
    match container.structure {
        Structure::Plcp(AnyBitVector::Hyb(b)) => time_plcp(config, prep, &b, record),
        Structure::Plcp(AnyBitVector::Plain(b)) => time_plcp(config, prep, &b, record),
        Structure::BwtSelect(_) => Err(Error::InvalidParams("configuration is not a PLCP benchmark".into())),
    }
}

fn time_plcp<B: RankSelect>(config: &BenchConfig, prep: &Prepared, bv: &B, record: BenchRecord) -> Result<BenchRecord> {
    let n = prep.text.len();
    let plcp = &prep.bundle.plcp;
    let queries = gen_queries(config.seed, n, config.queries);
    for j in verification_queries(config.seed, n, &queries) {
        let got = plcp_query(bv, j)?;
        if got != plcp[j - 1] {
            return Err(Error::Verification(format!(
                "PLCP query {j} returned {got}, oracle says {}",
                plcp[j - 1]
            )));
        }
    }
    let expected = queries.iter().fold(0, |s, &j| mix(s, plcp[j - 1]));

    let started = Instant::now();
    let mut sum = 0u64;
    for &j in &queries {
        sum = mix(sum, plcp_query(bv, black_box(j))?);
    }
    let elapsed = started.elapsed().as_nanos() as f64;
    let sum = black_box(sum);
    if sum != expected {
        return Err(Error::Verification("timed PLCP checksum differs from the oracle".into()));
    }
    Ok(finish_record(record, queries.len(), elapsed, sum))
}

/// BWT select benchmark: `select_c(BWT, j)` for `(c, j)` pairs that exist.
pub fn bench_bwt_select(config: &BenchConfig) -> Result<BenchRecord> {
    let config = BenchConfig {
        structure: StructureKind::BwtSelect,
        ..config.clone()
    };
    let prep = prepare(&config)?;
    bench_bwt_select_prepared(&config, &prep)
}

pub fn bench_bwt_select_prepared(config: &BenchConfig, prep: &Prepared) -> Result<BenchRecord> {
    let (container, record) = build_structure(config, prep)?;
    match container.structure {
        Structure::BwtSelect(AnyWaveletTree::Hyb(w)) => time_bwt_select(config, prep, &w, record),
        Structure::BwtSelect(AnyWaveletTree::Plain(w)) => time_bwt_select(config, prep, &w, record),
        Structure::Plcp(_) => Err(Error::InvalidParams("configuration is not a BWT select benchmark".into())),
    }
}

/// Query pairs `(symbol, j)` drawn by picking a random position and taking
/// the occurrence it holds, together with that position as the expected answer.
pub fn bwt_select_queries(bwt: &[u8], seed: u64, count: usize) -> Vec<(u8, usize, usize)> {
    let mut seen = [0usize; 256];
    let occurrence: Vec<usize> = bwt
        .iter()
        .map(|&c| {
            seen[c as usize] += 1;
            seen[c as usize]
        })
        .collect();
    gen_queries(seed, bwt.len(), count)
        .into_iter()
        .map(|p| (bwt[p - 1], occurrence[p - 1], p))
        .collect()
}

fn time_bwt_select<B: Backend>(
    config: &BenchConfig,
    prep: &Prepared,
    wt: &WaveletTree<B>,
    record: BenchRecord,
) -> Result<BenchRecord> {
    let bwt = &prep.bundle.bwt;
    let timed = bwt_select_queries(bwt, config.seed, config.queries);
    let extra = MIN_VERIFIED_QUERIES.saturating_sub(timed.len());
    let check = bwt_select_queries(bwt, config.seed ^ 0x9e37_79b9_7f4a_7c15, extra);
    for &(c, j, p) in timed.iter().chain(&check) {
        let got = wt.select(c, j)?;
        if got != p {
            return Err(Error::Verification(format!(
                "select({c}, {j}) returned {got}, oracle says {p}"
            )));
        }
    }
    let expected = timed.iter().fold(0, |s, &(_, _, p)| mix(s, p));
    let pairs: Vec<(u8, usize)> = timed.iter().map(|&(c, j, _)| (c, j)).collect();

    let started = Instant::now();
    let mut sum = 0u64;
    for &(c, j) in &pairs {
        sum = mix(sum, wt.select(black_box(c), black_box(j))?);
    }
    let elapsed = started.elapsed().as_nanos() as f64;
    let sum = black_box(sum);
    if sum != expected {
        return Err(Error::Verification("timed BWT select checksum differs from the oracle".into()));
    }
    Ok(finish_record(record, pairs.len(), elapsed, sum))
}

/// Writes records as CSV with a header row.
pub fn write_csv<W: Write>(out: W, records: &[BenchRecord], header: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(header).from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Appends records to a CSV file, writing the header only if the file is new or empty.
pub fn append_csv(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    write_csv(file, records, fresh)
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let records = r.deserialize().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(records)
}
