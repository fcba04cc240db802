//! Per-block encodings of the hybrid bitvector and the in-block queries that
//! run on them.
//!
//! A block holds at most 256 bits. Its payload is one of
//! - minority: the positions of the rarer bit, one byte each (`pos - 1`),
//! - run-length: all run endings except the last two, one byte each (`end - 1`),
//! - plain: the 256 raw bits as 32 bytes (four little-endian words).
//!
//! The kind is never stored. It is recovered from the 16-bit [`BlockHeader`]:
//! `encode_len == min(ones, blen - ones)` means minority, otherwise `32` means
//! plain, otherwise run-length. The encoder resolves cost ties so that rule is
//! always unambiguous.

use crate::bits::{low_mask, select_in_word};

/// Bits per block.
pub const BLOCK_BITS: usize = 256;
/// Payload bytes of a plain block.
pub const PLAIN_BYTES: usize = BLOCK_BITS / 8;
const BLOCK_WORDS: usize = BLOCK_BITS / 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Minority,
    RunLength,
    Plain,
}

/// Packed block header: ones (9 bits), encode length in bytes (6 bits) and
/// the special bit (top bit).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BlockHeader(u16);

impl BlockHeader {
    pub fn new(ones: usize, encode_len: usize, special: bool) -> Self {
        debug_assert!(ones <= BLOCK_BITS && encode_len <= PLAIN_BYTES);
        BlockHeader(ones as u16 | (encode_len as u16) << 9 | (special as u16) << 15)
    }

    #[inline(always)]
    pub fn from_raw(raw: u16) -> Self {
        BlockHeader(raw)
    }

    #[inline(always)]
    pub fn raw(self) -> u16 {
        self.0
    }

    #[inline(always)]
    pub fn ones(self) -> usize {
        (self.0 & 0x1FF) as usize
    }

    #[inline(always)]
    pub fn encode_len(self) -> usize {
        ((self.0 >> 9) & 0x3F) as usize
    }

    #[inline(always)]
    pub fn special(self) -> bool {
        self.0 >> 15 == 1
    }

    /// Number of `bit` values in a block of `blen` bits.
    #[inline(always)]
    pub fn count(self, bit: bool, blen: usize) -> usize {
        if bit {
            self.ones()
        } else {
            blen - self.ones()
        }
    }

    /// Encoding kind, given the block's true length.
    #[inline(always)]
    pub fn kind(self, blen: usize) -> EncodingKind {
        let len = self.encode_len();
        let ones = self.ones();
        if len == ones.min(blen - ones) {
            EncodingKind::Minority
        } else if len == PLAIN_BYTES {
            EncodingKind::Plain
        } else {
            EncodingKind::RunLength
        }
    }
}

/// The raw bits of one block, LSB first, zero past `len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockBits {
    words: [u64; BLOCK_WORDS],
    len: usize,
}

impl BlockBits {
    pub fn new(words: &[u64], len: usize) -> Self {
        assert!((1..=BLOCK_BITS).contains(&len), "block length {len} outside 1..=256");
        let mut w = [0u64; BLOCK_WORDS];
        for (k, slot) in w.iter_mut().enumerate() {
            let valid = len.saturating_sub(k * 64).min(64);
            *slot = words.get(k).copied().unwrap_or(0) & low_mask(valid);
        }
        Self { words: w, len }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut w = [0u64; BLOCK_WORDS];
        for (p, &b) in bits.iter().enumerate() {
            if b {
                w[p / 64] |= 1 << (p % 64);
            }
        }
        Self::new(&w, bits.len())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64; BLOCK_WORDS] {
        &self.words
    }

    /// Bit at 1-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        let p = i - 1;
        (self.words[p / 64] >> (p % 64)) & 1 == 1
    }

    pub fn ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Word `k` with bit `p` set iff bits `p` and `p + 1` differ (0-based,
    /// both inside the block).
    #[inline]
    fn transitions(&self, k: usize) -> u64 {
        let next = self.words.get(k + 1).copied().unwrap_or(0);
        let shifted = (self.words[k] >> 1) | (next << 63);
        let valid = (self.len - 1).saturating_sub(k * 64).min(64);
        (self.words[k] ^ shifted) & low_mask(valid)
    }

    pub fn num_runs(&self) -> usize {
        1 + (0..BLOCK_WORDS)
            .map(|k| self.transitions(k).count_ones() as usize)
            .sum::<usize>()
    }

    /// All run endings (1-based, the last one is `len`).
    pub fn run_endings(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(8);
        for k in 0..BLOCK_WORDS {
            let mut t = self.transitions(k);
            while t != 0 {
                out.push(k * 64 + t.trailing_zeros() as usize + 1);
                t &= t - 1;
            }
        }
        out.push(self.len);
        out
    }
}

/// Minority positions as bytes (`pos - 1`) and the minority bit.
///
/// When both bit values are equally frequent the ones are listed.
pub fn encode_minority(block: &BlockBits) -> (bool, Vec<u8>) {
    let mut out = Vec::new();
    let minority = encode_minority_into(block, &mut out);
    (minority, out)
}

fn encode_minority_into(block: &BlockBits, out: &mut Vec<u8>) -> bool {
    let ones = block.ones();
    let minority = ones <= block.len - ones;
    for k in 0..BLOCK_WORDS {
        let valid = block.len.saturating_sub(k * 64).min(64);
        let mut w = if minority { block.words[k] } else { !block.words[k] } & low_mask(valid);
        while w != 0 {
            out.push((k * 64 + w.trailing_zeros() as usize) as u8);
            w &= w - 1;
        }
    }
    minority
}

/// First bit of the block and all run endings but the last two, as bytes
/// (`end - 1`).
pub fn encode_run_length(block: &BlockBits) -> (bool, Vec<u8>) {
    let endings = block.run_endings();
    let keep = endings.len().saturating_sub(2);
    (
        block.get(1),
        endings[..keep].iter().map(|&e| (e - 1) as u8).collect(),
    )
}

fn encode_plain_into(block: &BlockBits, out: &mut Vec<u8>) {
    for w in block.words {
        out.extend_from_slice(&w.to_le_bytes());
    }
}

/// Picks the cheapest encoding, appends its payload to `out` and returns the
/// header. Cost ties go to minority, then plain, so the header alone
/// identifies the kind.
pub fn encode_block_into(block: &BlockBits, out: &mut Vec<u8>) -> (EncodingKind, BlockHeader) {
    let blen = block.len;
    let ones = block.ones();
    let minority_cost = ones.min(blen - ones);
    let runs = block.num_runs();
    let run_cost = if runs >= 2 { runs - 2 } else { usize::MAX };

    if minority_cost <= PLAIN_BYTES && minority_cost <= run_cost {
        let special = encode_minority_into(block, out);
        (EncodingKind::Minority, BlockHeader::new(ones, minority_cost, special))
    } else if run_cost < minority_cost && run_cost < PLAIN_BYTES {
        let endings = block.run_endings();
        out.extend(endings[..run_cost].iter().map(|&e| (e - 1) as u8));
        (EncodingKind::RunLength, BlockHeader::new(ones, run_cost, block.get(1)))
    } else {
        encode_plain_into(block, out);
        (EncodingKind::Plain, BlockHeader::new(ones, PLAIN_BYTES, false))
    }
}

/// Cheapest encoding of `block`: kind, payload and header.
pub fn choose_block_encoding(block: &BlockBits) -> (EncodingKind, Vec<u8>, BlockHeader) {
    let mut payload = Vec::new();
    let (kind, header) = encode_block_into(block, &mut payload);
    (kind, payload, header)
}

/// Select on a minority-encoded block. `payload` holds the sorted minority
/// positions minus one; the answer is 1-based.
#[inline]
pub fn minority_select(payload: &[u8], special: bool, bit: bool, q: usize) -> usize {
    if bit == special {
        return payload[q - 1] as usize + 1;
    }
    // payload[x] - x = majority bits before the (x+1)-th minority position
    let mut x = 0;
    while x < payload.len() && (payload[x] as usize) - x < q {
        x += 1;
    }
    x + q
}

#[inline(always)]
fn ending(payload: &[u8], x: usize) -> usize {
    payload[x - 1] as usize + 1
}

/// Recovers run ending `r_{m-1}` of a run-length block with `m = l + 2` runs
/// from the stored endings `r_1..r_l`, the first bit and the one count.
pub fn recover_last_run_ending(payload: &[u8], special: bool, ones: usize, blen: usize) -> usize {
    let l = payload.len();
    let m = l + 2;
    let one_run = |x: usize| (x + special as usize).is_multiple_of(2);
    let mut prev = 0;
    let mut known = 0;
    for x in 1..=l {
        let r = ending(payload, x);
        if one_run(x) {
            known += r - prev;
        }
        prev = r;
    }
    if one_run(m) {
        blen - (ones - known)
    } else {
        prev + ones - known
    }
}

/// Full run-ending list `r_1..r_m` of a run-length block.
pub fn recover_run_endings(payload: &[u8], special: bool, ones: usize, blen: usize) -> Vec<usize> {
    let mut runs: Vec<usize> = payload.iter().map(|&b| b as usize + 1).collect();
    runs.push(recover_last_run_ending(payload, special, ones, blen));
    runs.push(blen);
    runs
}

/// Select on a run-length block: pairwise walk over the stored endings, with
/// the answer in the final two runs derived from the header counts. Blocks
/// with no stored endings (at most two runs) never read the payload.
#[inline]
pub fn runlength_select(
    payload: &[u8],
    special: bool,
    ones: usize,
    blen: usize,
    bit: bool,
    q: usize,
) -> usize {
    let l = payload.len();
    if l == 0 {
        return two_run_select(special, ones, blen, bit, q);
    }
    let mut a = 0;
    let mut u = q;
    let mut x = 0;
    if bit == special {
        let take = ending(payload, 1).min(u);
        a = take;
        u -= take;
        x = 1;
    }
    // invariant: run x+1 holds (1-bit) values, run x+2 holds `bit` values
    while x + 1 < l && u > 0 {
        let start = ending(payload, x + 1);
        let take = (ending(payload, x + 2) - start).min(u);
        a = start + take;
        u -= take;
        x += 2;
    }
    if u > 0 {
        if x == l {
            // the remaining `bit` values form the final run
            let others = if bit { blen - ones } else { ones };
            a = others + q;
        } else {
            a = ending(payload, l) + u;
        }
    }
    a
}

/// Select in a block of at most two runs described only by its header.
#[inline]
pub fn two_run_select(special: bool, ones: usize, blen: usize, bit: bool, q: usize) -> usize {
    if bit == special {
        q
    } else if special {
        ones + q
    } else {
        blen - ones + q
    }
}

/// Select by walking the fully recovered run list; independent of the
/// pairwise walk and of the two-run shortcut.
pub fn runlength_select_by_runs(
    payload: &[u8],
    special: bool,
    ones: usize,
    blen: usize,
    bit: bool,
    q: usize,
) -> usize {
    let mut prev = 0;
    let mut remaining = q;
    let mut run_bit = special;
    for end in recover_run_endings(payload, special, ones, blen) {
        if run_bit == bit {
            let len = end - prev;
            if remaining <= len {
                return prev + remaining;
            }
            remaining -= len;
        }
        prev = end;
        run_bit = !run_bit;
    }
    unreachable!("run-length select past the end of the block")
}

#[inline(always)]
fn plain_word(payload: &[u8], k: usize) -> u64 {
    u64::from_le_bytes(payload[k * 8..k * 8 + 8].try_into().unwrap())
}

/// Select on a plain block via word popcounts and in-word select.
#[inline]
pub fn plain_select(payload: &[u8], bit: bool, q: usize) -> usize {
    let mut residual = q;
    for k in 0..BLOCK_WORDS {
        let raw = plain_word(payload, k);
        let w = if bit { raw } else { !raw };
        let c = w.count_ones() as usize;
        if c >= residual {
            return k * 64 + select_in_word(w, residual as u32) as usize;
        }
        residual -= c;
    }
    unreachable!("plain select past the end of the block")
}

/// Number of `bit` values among the first `i` bits of the block.
pub fn block_rank(header: BlockHeader, payload: &[u8], bit: bool, i: usize, blen: usize) -> usize {
    let ones = match header.kind(blen) {
        EncodingKind::Minority => {
            let minority_upto = payload.partition_point(|&p| (p as usize) < i);
            if header.special() {
                minority_upto
            } else {
                i - minority_upto
            }
        }
        EncodingKind::RunLength => {
            let mut prev = 0;
            let mut acc = 0;
            let mut run_bit = header.special();
            for end in recover_run_endings(payload, header.special(), header.ones(), blen) {
                if run_bit {
                    acc += end.min(i).saturating_sub(prev);
                }
                if end >= i {
                    break;
                }
                prev = end;
                run_bit = !run_bit;
            }
            acc
        }
        EncodingKind::Plain => {
            let mut acc = 0;
            let full = i / 64;
            for k in 0..full {
                acc += plain_word(payload, k).count_ones() as usize;
            }
            if !i.is_multiple_of(64) {
                acc += (plain_word(payload, full) & low_mask(i % 64)).count_ones() as usize;
            }
            acc
        }
    };
    if bit {
        ones
    } else {
        i - ones
    }
}

/// Bit at 1-based position `i` of the block.
pub fn block_access(header: BlockHeader, payload: &[u8], i: usize, blen: usize) -> bool {
    match header.kind(blen) {
        EncodingKind::Minority => {
            let hit = payload.binary_search(&((i - 1) as u8)).is_ok();
            hit == header.special()
        }
        EncodingKind::RunLength => {
            let mut run_bit = header.special();
            for x in 1..=payload.len() {
                if i <= ending(payload, x) {
                    return run_bit;
                }
                run_bit = !run_bit;
            }
            let last = recover_last_run_ending(payload, header.special(), header.ones(), blen);
            if i <= last {
                run_bit
            } else {
                !run_bit
            }
        }
        EncodingKind::Plain => {
            let p = i - 1;
            (plain_word(payload, p / 64) >> (p % 64)) & 1 == 1
        }
    }
}

/// Decodes a block back into raw bits.
pub fn decode_block(header: BlockHeader, payload: &[u8], blen: usize) -> BlockBits {
    let mut words = [0u64; BLOCK_WORDS];
    for i in 1..=blen {
        if block_access(header, payload, i, blen) {
            words[(i - 1) / 64] |= 1 << ((i - 1) % 64);
        }
    }
    BlockBits::new(&words, blen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Bits from (bit, length) runs.
    fn runs(spec: &[(bool, usize)]) -> Vec<bool> {
        spec.iter()
            .flat_map(|&(b, len)| std::iter::repeat_n(b, len))
            .collect()
    }

    fn scan_select(bits: &[bool], bit: bool, q: usize) -> usize {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b == bit)
            .nth(q - 1)
            .map(|(p, _)| p + 1)
            .unwrap()
    }

    fn example_block() -> Vec<bool> {
        runs(&[(false, 3), (true, 5), (false, 2), (true, 246)])
    }

    #[test]
    fn all_zero_block_is_minority_with_empty_payload() {
        let (kind, payload, header) = choose_block_encoding(&BlockBits::from_bools(&[false; 256]));
        assert_eq!(kind, EncodingKind::Minority);
        assert!(payload.is_empty());
        assert_eq!(header.ones(), 0);
        assert_eq!(header.encode_len(), 0);
        assert_eq!(header.kind(256), EncodingKind::Minority);
    }

    #[test]
    fn run_length_example_block() {
        let (kind, payload, header) = choose_block_encoding(&BlockBits::from_bools(&example_block()));
        assert_eq!(kind, EncodingKind::RunLength);
        assert_eq!(payload, vec![2, 7]);
        assert_eq!(header.encode_len(), 2);
        assert_eq!(header.ones(), 251);
        assert!(!header.special());
        assert_eq!(header.kind(256), EncodingKind::RunLength);
    }

    #[test]
    fn alternating_block_is_plain() {
        let bits: Vec<bool> = (0..256).map(|i| i % 2 == 1).collect();
        let block = BlockBits::from_bools(&bits);
        assert_eq!(block.num_runs(), 256);
        let (kind, payload, header) = choose_block_encoding(&block);
        assert_eq!(kind, EncodingKind::Plain);
        assert_eq!(payload.len(), 32);
        assert_eq!(header.encode_len(), 32);
        assert_eq!(header.kind(256), EncodingKind::Plain);
    }

    #[test]
    fn run_length_never_collides_with_minority_or_plain() {
        // 34 runs would cost 32 bytes: that must come out as plain.
        let mut spec = Vec::new();
        for k in 0..34 {
            spec.push((k % 2 == 1, if k < 33 { 7 } else { 256 - 7 * 33 }));
        }
        let block = BlockBits::from_bools(&runs(&spec));
        assert_eq!(block.num_runs(), 34);
        let (kind, _, h) = choose_block_encoding(&block);
        assert_eq!(kind, EncodingKind::Plain);
        assert_eq!(h.kind(256), kind);

        // 0^1 1^1 0^254: minority and run-length both cost 1 byte.
        let tie = runs(&[(false, 1), (true, 1), (false, 254)]);
        let (kind, _, h) = choose_block_encoding(&BlockBits::from_bools(&tie));
        assert_eq!(kind, EncodingKind::Minority);
        assert_eq!(h.kind(256), EncodingKind::Minority);
    }

    #[test]
    fn minority_select_examples() {
        let mut bits = vec![false; 256];
        for p in [5, 100, 200] {
            bits[p - 1] = true;
        }
        let (special, payload) = encode_minority(&BlockBits::from_bools(&bits));
        assert!(special);
        assert_eq!(payload, vec![4, 99, 199]);
        assert_eq!(minority_select(&payload, special, true, 2), 100);
        assert_eq!(minority_select(&payload, special, false, 5), 6);
        assert_eq!(minority_select(&payload, special, false, 250), 253);
    }

    #[test]
    fn runlength_select_examples() {
        let payload = [2u8, 7];
        assert_eq!(runlength_select(&payload, false, 251, 256, true, 7), 12);
        assert_eq!(runlength_select(&payload, false, 251, 256, false, 5), 10);
        assert_eq!(runlength_select(&[], true, 100, 256, false, 1), 101);
        // c equals the first bit and the answer lies past the first run
        let bits = example_block();
        let (special, payload) = encode_run_length(&BlockBits::from_bools(&bits));
        for q in 1..=5 {
            assert_eq!(runlength_select(&payload, special, 251, 256, false, q), scan_select(&bits, false, q));
        }
    }

    #[test]
    fn recover_examples() {
        assert_eq!(recover_last_run_ending(&[2, 7], false, 251, 256), 10);
        assert_eq!(recover_last_run_ending(&[], true, 100, 256), 100);
        assert_eq!(recover_last_run_ending(&[], false, 100, 256), 156);
    }

    #[test]
    fn block_rank_endpoints() {
        let bits = example_block();
        let (_, payload, header) = choose_block_encoding(&BlockBits::from_bools(&bits));
        for bit in [false, true] {
            assert_eq!(block_rank(header, &payload, bit, 0, 256), 0);
            assert_eq!(block_rank(header, &payload, bit, 256, 256), header.count(bit, 256));
        }
    }

    #[test]
    fn short_final_block() {
        let bits = runs(&[(true, 3), (false, 4)]);
        let block = BlockBits::from_bools(&bits);
        let (kind, payload, header) = choose_block_encoding(&block);
        assert_eq!(header.kind(7), kind);
        assert_eq!(decode_block(header, &payload, 7), block);
        assert_eq!(block_rank(header, &payload, false, 7, 7), 4);
    }

    fn block_strategy() -> impl Strategy<Value = Vec<bool>> {
        prop_oneof![
            proptest::collection::vec(any::<bool>(), 1..=256),
            (1usize..=256, proptest::collection::vec((any::<bool>(), 1usize..40), 1..20)).prop_map(
                |(len, spec)| {
                    let mut bits: Vec<bool> = spec
                        .iter()
                        .flat_map(|&(b, l)| std::iter::repeat_n(b, l))
                        .collect();
                    bits.resize(len, !bits.last().copied().unwrap_or(false));
                    bits
                }
            ),
            (1usize..=256, proptest::collection::vec(0usize..256, 0..12), any::<bool>()).prop_map(
                |(len, flips, base)| {
                    let mut bits = vec![base; len];
                    for f in flips {
                        bits[f % len] = !base;
                    }
                    bits
                }
            ),
        ]
    }

    proptest! {
        #[test]
        fn encode_decode_and_classify(bits in block_strategy()) {
            let block = BlockBits::from_bools(&bits);
            let (kind, payload, header) = choose_block_encoding(&block);
            prop_assert_eq!(payload.len(), header.encode_len());
            prop_assert_eq!(header.kind(bits.len()), kind);
            prop_assert_eq!(decode_block(header, &payload, bits.len()), block);
        }

        #[test]
        fn in_block_queries_match_scan(bits in block_strategy()) {
            let blen = bits.len();
            let block = BlockBits::from_bools(&bits);
            let ones = block.ones();
            let (msp, mpay) = encode_minority(&block);
            let (rsp, rpay) = encode_run_length(&block);
            let endings = block.run_endings();
            if endings.len() >= 2 {
                prop_assert_eq!(
                    recover_last_run_ending(&rpay, rsp, ones, blen),
                    endings[endings.len() - 2]
                );
            }
            for bit in [false, true] {
                let total = if bit { ones } else { blen - ones };
                for q in 1..=total {
                    let expect = scan_select(&bits, bit, q);
                    prop_assert_eq!(minority_select(&mpay, msp, bit, q), expect);
                    if endings.len() >= 2 {
                        prop_assert_eq!(runlength_select(&rpay, rsp, ones, blen, bit, q), expect);
                        prop_assert_eq!(runlength_select_by_runs(&rpay, rsp, ones, blen, bit, q), expect);
                    }
                }
            }
            let (_, payload, header) = choose_block_encoding(&block);
            let mut prefix = 0;
            for i in 0..=blen {
                if i > 0 && bits[i - 1] {
                    prefix += 1;
                }
                prop_assert_eq!(block_rank(header, &payload, true, i, blen), prefix);
                prop_assert_eq!(block_rank(header, &payload, false, i, blen), i - prefix);
            }
        }
    }
}
