//! Uncompressed bitvector with sampled rank and position-sampled select.

use crate::bits::{low_mask, select_in_word, PackedBits, WORD_BITS};
use crate::error::{check_pos, Error, Result};
use crate::rank_select::{Backend, RankSelect};
use crate::serial::{self, ByteReader};

/// Bits covered by one rank sample.
pub const RANK_SAMPLE_BITS: usize = 512;
/// Occurrences between two select hints.
pub const SELECT_HINT_PERIOD: usize = 8192;

const WORDS_PER_SAMPLE: usize = RANK_SAMPLE_BITS / WORD_BITS;

/// Plain bitvector: the packed bits plus
/// - `rank_samples[k]`: ones in the first `512 * (k + 1)` bits (clamped to `n`),
/// - `select_hints[c][h]`: 512-bit block holding the `(8192 * h + 1)`-th `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainBitVector {
    bits: PackedBits,
    rank_samples: Vec<u64>,
    select_hints: [Vec<u64>; 2],
}

impl PlainBitVector {
    pub fn new(bits: PackedBits) -> Self {
        let nblocks = bits.len().div_ceil(RANK_SAMPLE_BITS);
        let mut rank_samples = Vec::with_capacity(nblocks);
        let mut select_hints = [Vec::new(), Vec::new()];
        let mut ones = 0usize;
        let mut next = [1usize, 1usize];
        for b in 0..nblocks {
            let start = b * WORDS_PER_SAMPLE;
            let end = (start + WORDS_PER_SAMPLE).min(bits.words().len());
            ones += bits.words()[start..end]
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum::<usize>();
            let covered = ((b + 1) * RANK_SAMPLE_BITS).min(bits.len());
            let cum = [covered - ones, ones];
            for c in 0..2 {
                while next[c] <= cum[c] {
                    select_hints[c].push(b as u64);
                    next[c] += SELECT_HINT_PERIOD;
                }
            }
            rank_samples.push(ones as u64);
        }
        Self {
            bits,
            rank_samples,
            select_hints,
        }
    }

    pub fn bits(&self) -> &PackedBits {
        &self.bits
    }

    pub fn rank_samples(&self) -> &[u64] {
        &self.rank_samples
    }

    pub fn select_hints(&self, bit: bool) -> &[u64] {
        &self.select_hints[bit as usize]
    }

    /// Support overhead in bits beyond the raw bit array.
    pub fn overhead_bits(&self) -> usize {
        64 * (self.rank_samples.len() + self.select_hints[0].len() + self.select_hints[1].len())
    }

    #[inline]
    fn ones_before_block(&self, b: usize) -> usize {
        if b == 0 {
            0
        } else {
            self.rank_samples[b - 1] as usize
        }
    }

    #[inline]
    fn count_before_block(&self, bit: bool, b: usize) -> usize {
        let ones = self.ones_before_block(b);
        if bit {
            ones
        } else {
            b * RANK_SAMPLE_BITS - ones
        }
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        let b = (i - 1) / RANK_SAMPLE_BITS;
        let last = (i - 1) / WORD_BITS;
        let words = self.bits.words();
        let mut r = self.ones_before_block(b);
        for w in &words[b * WORDS_PER_SAMPLE..last] {
            r += w.count_ones() as usize;
        }
        r + (words[last] & low_mask((i - 1) % WORD_BITS + 1)).count_ones() as usize
    }
}

impl RankSelect for PlainBitVector {
    fn len(&self) -> usize {
        self.bits.len()
    }

    fn count(&self, bit: bool) -> usize {
        let ones = self.rank_samples.last().copied().unwrap_or(0) as usize;
        if bit {
            ones
        } else {
            self.bits.len() - ones
        }
    }

    fn access(&self, i: usize) -> Result<bool> {
        self.bits.get(i)
    }

    fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        check_pos(i, 0, self.bits.len())?;
        let ones = self.rank1(i);
        Ok(if bit { ones } else { i - ones })
    }

    fn select(&self, bit: bool, j: usize) -> Result<usize> {
        let total = self.count(bit);
        if j == 0 || j > total {
            return Err(Error::OccurrenceOutOfRange {
                symbol: bit as u32,
                index: j,
                count: total,
            });
        }
        let hints = &self.select_hints[bit as usize];
        let h = (j - 1) / SELECT_HINT_PERIOD;
        let mut lo = hints[h] as usize;
        let mut hi = hints
            .get(h + 1)
            .map_or(self.rank_samples.len() - 1, |&x| x as usize);
        // last block whose preceding count is < j
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.count_before_block(bit, mid) < j {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut residual = j - self.count_before_block(bit, lo);
        let words = self.bits.words();
        let mut wi = lo * WORDS_PER_SAMPLE;
        loop {
            let w = if bit { words[wi] } else { !words[wi] };
            let c = w.count_ones() as usize;
            if c >= residual {
                return Ok(wi * WORD_BITS + select_in_word(w, residual as u32) as usize);
            }
            residual -= c;
            wi += 1;
        }
    }

    fn size_in_bytes(&self) -> usize {
        self.bits.serialized_len()
            + serial::words_len(self.rank_samples.len())
            + serial::words_len(self.select_hints[1].len())
            + serial::words_len(self.select_hints[0].len())
    }
}

impl Backend for PlainBitVector {
    type Config = ();
    const NAME: &'static str = "plain";

    fn build(bits: &PackedBits, _config: &()) -> Result<Self> {
        Ok(Self::new(bits.clone()))
    }

    /// Layout: bits (length u64, word array), rank samples, select-1 hints,
    /// select-0 hints; every array is a u64 count followed by u64 words.
    fn write(&self, out: &mut Vec<u8>) {
        self.bits.write(out);
        serial::put_words(out, &self.rank_samples);
        serial::put_words(out, &self.select_hints[1]);
        serial::put_words(out, &self.select_hints[0]);
    }

    fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let bits = PackedBits::read(r)?;
        let rank_samples = r.words()?;
        let hints1 = r.words()?;
        let hints0 = r.words()?;
        let v = Self {
            bits,
            rank_samples,
            select_hints: [hints0, hints1],
        };
        // Support arrays are cheap to recompute; reject anything inconsistent.
        if v != Self::new(v.bits.clone()) {
            return Err(Error::Corrupt("plain bitvector support arrays do not match bits".into()));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn example() -> PlainBitVector {
        PlainBitVector::new(PackedBits::from_bit_str("10110"))
    }

    #[test]
    fn rank_examples() {
        let v = example();
        assert_eq!(v.rank(true, 0).unwrap(), 0);
        assert_eq!(v.rank(true, 4).unwrap(), 3);
        assert_eq!(v.rank(false, 5).unwrap(), 2);
        assert!(v.rank(true, 6).is_err());
    }

    #[test]
    fn select_examples() {
        let v = example();
        assert_eq!(v.select(true, 1).unwrap(), 1);
        assert_eq!(v.select(true, 3).unwrap(), 4);
        assert_eq!(v.select(false, 2).unwrap(), 5);
        assert!(v.select(true, 4).is_err());
        assert!(v.select(false, 0).is_err());
    }

    #[test]
    fn access_examples() {
        let v = example();
        assert!(v.access(1).unwrap());
        assert!(v.access(3).unwrap());
        assert!(!v.access(2).unwrap());
        assert!(v.access(0).is_err());
    }

    #[test]
    fn build_edge_cases() {
        let empty = PlainBitVector::new(PackedBits::default());
        assert_eq!(empty.len(), 0);
        assert!(empty.rank_samples().is_empty());
        assert_eq!(empty.rank(true, 0).unwrap(), 0);
        assert!(empty.select(true, 1).is_err());

        let ones = PlainBitVector::new(PackedBits::ones(512));
        assert_eq!(ones.rank_samples(), &[512]);
    }

    #[test]
    fn rank_samples_match_prefix_counts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let bits: Vec<bool> = (0..10_000).map(|_| rng.random_bool(0.3)).collect();
        let v = PlainBitVector::new(PackedBits::from_bools(bits.iter().copied()));
        let mut prefix = 0;
        for (k, chunk) in bits.chunks(RANK_SAMPLE_BITS).enumerate() {
            prefix += chunk.iter().filter(|&&b| b).count();
            assert_eq!(v.rank_samples()[k] as usize, prefix);
        }
    }

    #[test]
    fn overhead_within_quarter() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(18);
        for n in [4096usize, 100_000, 1 << 20] {
            let bits: PackedBits = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let v = PlainBitVector::new(bits);
            assert!(4 * v.overhead_bits() <= n, "n={n} overhead={}", v.overhead_bits());
        }
    }

    #[test]
    fn select_crosses_hint_boundaries() {
        // Sparse ones so hints span many blocks, dense zeros so hints are close.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        let bits: Vec<bool> = (0..300_000).map(|_| rng.random_bool(0.05)).collect();
        let v = PlainBitVector::new(PackedBits::from_bools(bits.iter().copied()));
        for bit in [false, true] {
            let positions: Vec<usize> = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b == bit)
                .map(|(p, _)| p + 1)
                .collect();
            for (j, &p) in positions.iter().enumerate().step_by(97) {
                assert_eq!(v.select(bit, j + 1).unwrap(), p);
            }
            assert_eq!(v.select(bit, positions.len()).unwrap(), *positions.last().unwrap());
        }
    }

    #[test]
    fn serialization_round_trip_and_tamper() {
        let bits: PackedBits = (0..5000).map(|i| i % 7 == 0).collect();
        let v = PlainBitVector::new(bits);
        let bytes = v.to_bytes();
        assert_eq!(bytes.len(), v.size_in_bytes());
        assert_eq!(PlainBitVector::from_bytes(&bytes).unwrap(), v);
        let mut bad = bytes.clone();
        let last = bad.len() - 1;
        bad[last] ^= 1;
        assert!(PlainBitVector::from_bytes(&bad).is_err());
        assert!(PlainBitVector::from_bytes(&bytes[..bytes.len() - 3]).is_err());
    }

    proptest! {
        #[test]
        fn rank_select_laws(bits in proptest::collection::vec(any::<bool>(), 0..2000)) {
            let v = PlainBitVector::new(PackedBits::from_bools(bits.iter().copied()));
            let n = bits.len();
            for i in 1..=n {
                for c in [false, true] {
                    let step = v.rank(c, i).unwrap() - v.rank(c, i - 1).unwrap();
                    prop_assert_eq!(step == 1, v.access(i).unwrap() == c);
                }
                prop_assert_eq!(v.rank(true, i).unwrap() + v.rank(false, i).unwrap(), i);
            }
            for c in [false, true] {
                for j in 1..=v.count(c) {
                    let p = v.select(c, j).unwrap();
                    prop_assert_eq!(v.rank(c, p).unwrap(), j);
                    prop_assert_eq!(v.access(p).unwrap(), c);
                }
            }
        }
    }
}
