use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// First symbol of generated alphabets; generated text never holds the sentinel.
pub const ALPHABET_BASE: u8 = b'A';
pub const DEFAULT_ALPHABET_SIZE: u8 = 4;
pub const DEFAULT_BASE_SEGMENT: usize = 64 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyntheticKind {
    /// I.i.d. uniform symbols.
    Random,
    /// Copies of one random base segment with per-copy point mutations.
    Repetitive,
}

impl SyntheticKind {
    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::Random => "random",
            SyntheticKind::Repetitive => "repetitive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub size: usize,
    pub seed: u64,
    pub mutation_rate: f64,
    /// Symbols are `ALPHABET_BASE .. ALPHABET_BASE + alphabet_size`.
    pub alphabet_size: u8,
    pub base_segment: usize,
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind, size: usize, seed: u64) -> Self {
        Self {
            kind,
            size,
            seed,
            mutation_rate: 0.0,
            alphabet_size: DEFAULT_ALPHABET_SIZE,
            base_segment: DEFAULT_BASE_SEGMENT,
        }
    }

    pub fn with_mutation_rate(mut self, rate: f64) -> Self {
        self.mutation_rate = rate;
        self
    }

    pub fn with_alphabet_size(mut self, sigma: u8) -> Self {
        self.alphabet_size = sigma;
        self
    }

    pub fn with_base_segment(mut self, len: usize) -> Self {
        self.base_segment = len;
        self
    }

    pub fn name(&self) -> String {
        format!("synthetic-{}-{}-s{}", self.kind.name(), self.size, self.seed)
    }

    fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::InvalidParams("synthetic size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidParams(format!(
                "mutation rate {} is not in [0, 1]",
                self.mutation_rate
            )));
        }
        if self.alphabet_size == 0 || self.alphabet_size as usize + ALPHABET_BASE as usize > 256 {
            return Err(Error::InvalidParams(format!(
                "alphabet size {} does not fit above {ALPHABET_BASE}",
                self.alphabet_size
            )));
        }
        if self.base_segment == 0 {
            return Err(Error::InvalidParams("base segment must be nonempty".into()));
        }
        Ok(())
    }
}

/// Generates the raw text bytes (without sentinel). Deterministic under the seed.
pub fn gen_synthetic_text(spec: &SyntheticSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sigma = spec.alphabet_size;
    let symbol = |rng: &mut ChaCha8Rng| ALPHABET_BASE + rng.random_range(0..sigma);
    match spec.kind {
        SyntheticKind::Random => Ok((0..spec.size).map(|_| symbol(&mut rng)).collect()),
        SyntheticKind::Repetitive => {
            let base: Vec<u8> = (0..spec.base_segment.min(spec.size)).map(|_| symbol(&mut rng)).collect();
            let mut out = Vec::with_capacity(spec.size);
            out.extend_from_slice(&base);
            while out.len() < spec.size {
                let take = base.len().min(spec.size - out.len());
                for &c in &base[..take] {
                    let mut c = c;
                    if spec.mutation_rate > 0.0 && sigma > 1 && rng.random_bool(spec.mutation_rate) {
                        let shift = rng.random_range(1..sigma) as usize;
                        c = ALPHABET_BASE + (((c - ALPHABET_BASE) as usize + shift) % sigma as usize) as u8;
                    }
                    out.push(c);
                }
            }
            Ok(out)
        }
    }
}

/// `count` uniform integers in `1..=bound`, deterministic under the seed.
pub fn gen_queries(seed: u64, bound: usize, count: usize) -> Vec<usize> {
    assert!(bound >= 1, "query bound must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random_range(1..=bound)).collect()
}

/// Number of maximal equal-symbol runs.
pub fn count_runs(s: &[u8]) -> usize {
    if s.is_empty() {
        return 0;
    }
    1 + s.windows(2).filter(|w| w[0] != w[1]).count()
}
