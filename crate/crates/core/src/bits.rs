//! Packed bit storage and broadword primitives.
//!
//! Positions in the public API are 1-based: bit `i` of a vector of length `n`
//! is defined for `i` in `1..=n` and lives in word `(i - 1) / 64` at offset
//! `(i - 1) % 64`, least significant bit first.

use crate::error::{check_pos, Error, Result};
use crate::serial::{self, ByteReader};

pub const WORD_BITS: usize = 64;

/// Number of set bits in `w`.
#[inline(always)]
pub fn popcount_word(w: u64) -> u32 {
    w.count_ones()
}

const ONES_STEP_8: u64 = 0x0101_0101_0101_0101;
const MSBS_STEP_8: u64 = 0x80 * ONES_STEP_8;

/// `SELECT_IN_BYTE[r << 8 | b]` is the 0-based offset of the `(r+1)`-th set
/// bit in byte `b` (8 if absent).
static SELECT_IN_BYTE: [u8; 2048] = build_select_in_byte();

const fn build_select_in_byte() -> [u8; 2048] {
    let mut table = [8u8; 2048];
    let mut b = 0;
    while b < 256 {
        let mut seen = 0;
        let mut bit = 0;
        while bit < 8 {
            if (b >> bit) & 1 == 1 {
                table[(seen << 8) | b] = bit as u8;
                seen += 1;
            }
            bit += 1;
        }
        b += 1;
    }
    table
}

/// 1-based position of the `k`-th set bit of `w` (LSB is position 1).
///
/// Broadword byte-prefix-sum search followed by a byte lookup.
///
/// # Panics
/// Panics unless `1 <= k <= popcount_word(w)`.
#[inline]
pub fn select_in_word(w: u64, k: u32) -> u32 {
    assert!(
        k >= 1 && k <= w.count_ones(),
        "select_in_word: k={k} out of range for popcount {}",
        w.count_ones()
    );
    let k0 = (k - 1) as u64;
    let mut s = w - ((w >> 1) & 0x5555_5555_5555_5555);
    s = (s & 0x3333_3333_3333_3333) + ((s >> 2) & 0x3333_3333_3333_3333);
    s = (s + (s >> 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    let byte_sums = s.wrapping_mul(ONES_STEP_8);
    let k_step_8 = k0 * ONES_STEP_8;
    let geq_k_step_8 = ((k_step_8 | MSBS_STEP_8) - byte_sums) & MSBS_STEP_8;
    let place = geq_k_step_8.count_ones() * 8;
    let byte_rank = k0 - (((byte_sums << 8) >> place) & 0xFF);
    let byte = (w >> place) & 0xFF;
    place + SELECT_IN_BYTE[(byte | (byte_rank << 8)) as usize] as u32 + 1
}

/// Mask with the low `bits` bits set (`bits` in `0..=64`).
#[inline(always)]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A fixed-length sequence of bits packed into 64-bit words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PackedBits {
    words: Vec<u64>,
    len: usize,
}

impl PackedBits {
    /// All-zero vector of `len` bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    /// All-one vector of `len` bits.
    pub fn ones(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(WORD_BITS)];
        if let Some(last) = words.last_mut() {
            *last &= low_mask(len - (len.div_ceil(WORD_BITS) - 1) * WORD_BITS);
        }
        Self { words, len }
    }

    /// Wraps raw words; bits past `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != len.div_ceil(WORD_BITS) {
            return Err(Error::InvalidParams(format!(
                "{} words cannot hold exactly {len} bits",
                words.len()
            )));
        }
        if !len.is_multiple_of(WORD_BITS) {
            if let Some(last) = words.last_mut() {
                *last &= low_mask(len % WORD_BITS);
            }
        }
        Ok(Self { words, len })
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = Self::default();
        for b in bits {
            out.push(b);
        }
        out
    }

    /// Parses a string of `'0'`/`'1'` characters; other characters are skipped.
    pub fn from_bit_str(s: &str) -> Self {
        Self::from_bools(s.chars().filter_map(|ch| match ch {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        }))
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD_BITS] |= 1 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 1-based position `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        check_pos(i, 1, self.len)?;
        Ok(self.get_unchecked(i))
    }

    /// Bit at 1-based position `i` without a bounds check beyond the slice's own.
    #[inline(always)]
    pub fn get_unchecked(&self, i: usize) -> bool {
        let p = i - 1;
        (self.words[p / WORD_BITS] >> (p % WORD_BITS)) & 1 == 1
    }

    /// Sets the bit at 1-based position `i`.
    pub fn set(&mut self, i: usize, bit: bool) -> Result<()> {
        check_pos(i, 1, self.len)?;
        let p = i - 1;
        if bit {
            self.words[p / WORD_BITS] |= 1 << (p % WORD_BITS);
        } else {
            self.words[p / WORD_BITS] &= !(1 << (p % WORD_BITS));
        }
        Ok(())
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|&w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.get_unchecked(i))
    }

    /// Up to 64 bits starting at 0-based bit offset `start`, LSB first.
    /// Bits past the end read as zero.
    #[inline]
    pub fn get_word_at(&self, start: usize) -> u64 {
        let wi = start / WORD_BITS;
        let off = start % WORD_BITS;
        let lo = self.words.get(wi).copied().unwrap_or(0);
        if off == 0 {
            lo
        } else {
            let hi = self.words.get(wi + 1).copied().unwrap_or(0);
            (lo >> off) | (hi << (WORD_BITS - off))
        }
    }

    pub(crate) fn write(&self, out: &mut Vec<u8>) {
        serial::put_u64(out, self.len as u64);
        serial::put_words(out, &self.words);
    }

    pub(crate) fn serialized_len(&self) -> usize {
        8 + serial::words_len(self.words.len())
    }

    pub(crate) fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.len_u64()?;
        let words = r.words()?;
        if words.len() != len.div_ceil(WORD_BITS) {
            return Err(Error::Corrupt(format!(
                "{} words for a {len}-bit vector",
                words.len()
            )));
        }
        if len % WORD_BITS != 0 && words.last().is_some_and(|&w| w & !low_mask(len % WORD_BITS) != 0) {
            return Err(Error::Corrupt("bits set past the end of the vector".into()));
        }
        Ok(Self { words, len })
    }
}

impl FromIterator<bool> for PackedBits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bools(iter)
    }
}
