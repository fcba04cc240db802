use super::encoding::{
    self, block_access, block_rank, encode_block_into, BlockBits, BlockHeader, EncodingKind,
    BLOCK_BITS,
};
use super::params::HybParams;
use super::select_index::SelectIndex;
use crate::bits::PackedBits;
use crate::error::{check_pos, Error, Result};
use crate::par::{self, Execution};
use crate::rank_select::{Backend, RankSelect};
use crate::serial::ByteReader;

const BLOCK_WORDS: usize = BLOCK_BITS / 64;
/// u16 slots taken by a superblock header inside `A_S`.
pub(crate) const SUPERBLOCK_HEADER_SLOTS: usize = 4;
const UNIFORM_FLAG: u32 = 1 << 31;

/// Cumulative context of a hyperblock.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HyperblockHeader {
    /// Ones before the hyperblock.
    pub ones_before: u64,
    /// Payload bytes of all blocks before the hyperblock.
    pub payload_offset_before: u64,
}

/// Superblock context, local to its hyperblock.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuperblockHeader {
    pub local_ones_before: u32,
    /// 31-bit local payload offset.
    pub local_payload_offset_before: u32,
    /// All valid bits of the superblock are equal.
    pub uniform: bool,
}

/// Which code path resolved a select query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SelectPath {
    /// Answered from the headers of a uniform superblock.
    UniformSuperblock,
    /// Run-length block with no stored endings, answered from its header.
    TwoRunBlock,
    Minority,
    RunLength,
    Plain,
}

/// Result of locating the superblock holding the `q`-th `c`-bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuperblockHit {
    /// 1-based superblock index.
    pub index: usize,
    /// `c`-bits before the enclosing hyperblock.
    pub hyper_rank: usize,
    /// `c`-bits before the superblock, inside the hyperblock.
    pub super_rank: usize,
    /// Absolute `A_E` offset of the superblock's first payload byte.
    pub payload_offset: usize,
    pub uniform: bool,
}

/// Result of scanning the block headers of one superblock.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockHit {
    /// 1-based global block index.
    pub index: usize,
    /// `c`-bits in the preceding blocks of the superblock.
    pub rank_sum: usize,
    /// Payload bytes of the preceding blocks of the superblock.
    pub offset_sum: usize,
    pub header: BlockHeader,
}

/// Hybrid bitvector: 256-bit blocks, each stored in whichever of the
/// minority, run-length or plain encodings is smallest, under a three-level
/// header hierarchy. Supports rank, access and select for both bit values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybVector {
    pub(crate) len: usize,
    pub(crate) params: HybParams,
    pub(crate) hyper: Vec<HyperblockHeader>,
    /// `A_S`: each superblock header (4 slots) followed by its block headers.
    pub(crate) headers: Vec<u16>,
    /// `A_E`: concatenated block payloads.
    pub(crate) payload: Vec<u8>,
    pub(crate) ones: usize,
    pub(crate) select_indexes: [Option<SelectIndex>; 2],
    pub(crate) shortcuts: bool,
}

struct SuperblockChunk {
    headers: Vec<u16>,
    payload: Vec<u8>,
    ones: usize,
    uniform: bool,
}

impl HybVector {
    pub fn build(bits: &PackedBits, params: &HybParams) -> Self {
        Self::build_with(bits, params, Execution::default())
    }

    /// Builds with an explicit execution mode for the per-superblock encoding
    /// pass and the two select indexes.
    pub fn build_with(bits: &PackedBits, params: &HybParams, exec: Execution) -> Self {
        let len = bits.len();
        let bs = params.superblock_blocks();
        let nblocks = len.div_ceil(BLOCK_BITS);
        let nsuper = nblocks.div_ceil(bs);

        let chunks = par::map_range(exec, nsuper, |s| encode_superblock(bits, s, bs));

        let blocks_per_hyper = params.hyperblock_blocks();
        let mut hyper = Vec::with_capacity(nblocks.div_ceil(blocks_per_hyper));
        let mut headers = Vec::with_capacity(nsuper * SUPERBLOCK_HEADER_SLOTS + nblocks);
        let mut payload =
            Vec::with_capacity(chunks.iter().map(|c| c.payload.len()).sum::<usize>());
        let mut ones = 0usize;
        let mut local_ones = 0usize;
        let mut local_offset = 0usize;
        for (s, chunk) in chunks.into_iter().enumerate() {
            if (s * bs).is_multiple_of(blocks_per_hyper) {
                hyper.push(HyperblockHeader {
                    ones_before: ones as u64,
                    payload_offset_before: payload.len() as u64,
                });
                local_ones = 0;
                local_offset = 0;
            }
            debug_assert!(local_offset < UNIFORM_FLAG as usize);
            push_superblock_header(
                &mut headers,
                SuperblockHeader {
                    local_ones_before: local_ones as u32,
                    local_payload_offset_before: local_offset as u32,
                    uniform: chunk.uniform,
                },
            );
            headers.extend_from_slice(&chunk.headers);
            payload.extend_from_slice(&chunk.payload);
            ones += chunk.ones;
            local_ones += chunk.ones;
            local_offset += chunk.payload.len();
        }

        let mut hv = Self {
            len,
            params: params.clone(),
            hyper,
            headers,
            payload,
            ones,
            select_indexes: [None, None],
            shortcuts: params.resolve_shortcuts(),
        };
        let (zero, one) = par::join(
            exec,
            || params.builds_select_index(false).then(|| SelectIndex::build(&hv, false)),
            || params.builds_select_index(true).then(|| SelectIndex::build(&hv, true)),
        );
        hv.select_indexes = [zero, one];
        hv
    }

    pub fn params(&self) -> &HybParams {
        &self.params
    }

    pub fn num_blocks(&self) -> usize {
        self.len.div_ceil(BLOCK_BITS)
    }

    pub fn num_superblocks(&self) -> usize {
        self.num_blocks().div_ceil(self.params.superblock_blocks())
    }

    pub fn hyperblock_headers(&self) -> &[HyperblockHeader] {
        &self.hyper
    }

    /// Concatenated block payloads (`A_E`).
    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// Raw interleaved superblock/block header array (`A_S`).
    pub fn header_slots(&self) -> &[u16] {
        &self.headers
    }

    pub fn select_index(&self, bit: bool) -> Option<&SelectIndex> {
        self.select_indexes[bit as usize].as_ref()
    }

    pub fn shortcuts_enabled(&self) -> bool {
        self.shortcuts
    }

    /// Toggles the uniform-superblock and two-run-block select shortcuts.
    pub fn set_shortcuts(&mut self, enabled: bool) {
        self.shortcuts = enabled;
    }

    #[inline(always)]
    fn stride(&self) -> usize {
        SUPERBLOCK_HEADER_SLOTS + self.params.superblock_blocks()
    }

    /// Header of 0-based superblock `s`.
    #[inline]
    pub fn superblock_header(&self, s: usize) -> SuperblockHeader {
        let base = s * self.stride();
        let h = &self.headers[base..base + SUPERBLOCK_HEADER_SLOTS];
        let rank = h[0] as u32 | (h[1] as u32) << 16;
        let off = h[2] as u32 | (h[3] as u32) << 16;
        SuperblockHeader {
            local_ones_before: rank,
            local_payload_offset_before: off & !UNIFORM_FLAG,
            uniform: off & UNIFORM_FLAG != 0,
        }
    }

    /// Header of 0-based block `k`.
    #[inline]
    pub fn block_header(&self, k: usize) -> BlockHeader {
        let bs = self.params.superblock_blocks();
        BlockHeader::from_raw(
            self.headers[(k / bs) * self.stride() + SUPERBLOCK_HEADER_SLOTS + k % bs],
        )
    }

    /// True length of 0-based block `k`.
    #[inline(always)]
    pub fn block_len(&self, k: usize) -> usize {
        (self.len - k * BLOCK_BITS).min(BLOCK_BITS)
    }

    #[inline(always)]
    fn superblock_bits(&self) -> usize {
        self.params.superblock_blocks() * BLOCK_BITS
    }

    #[inline(always)]
    fn hyper_of_superblock(&self, s: usize) -> usize {
        s * self.params.superblock_blocks() / self.params.hyperblock_blocks()
    }

    /// `(hyperblock c-rank, local superblock c-rank)` before 0-based superblock `s`.
    #[inline]
    fn ranks_before_superblock(&self, bit: bool, s: usize) -> (usize, usize) {
        let h = self.hyper_of_superblock(s);
        let hyper_ones = self.hyper[h].ones_before as usize;
        let local_ones = self.superblock_header(s).local_ones_before as usize;
        if bit {
            (hyper_ones, local_ones)
        } else {
            let hyper_start = h * self.params.hyperblock_blocks() * BLOCK_BITS;
            let local_start = s * self.superblock_bits() - hyper_start;
            (hyper_start - hyper_ones, local_start - local_ones)
        }
    }

    /// Number of `bit` values before 0-based superblock `s`.
    #[inline]
    pub fn rank_before_superblock(&self, bit: bool, s: usize) -> usize {
        let (h, l) = self.ranks_before_superblock(bit, s);
        h + l
    }

    #[inline]
    fn superblock_payload_offset(&self, s: usize) -> usize {
        self.hyper[self.hyper_of_superblock(s)].payload_offset_before as usize
            + self.superblock_header(s).local_payload_offset_before as usize
    }

    /// Locates block `k`: returns (ones before it, its payload slice).
    #[inline]
    fn locate_block(&self, k: usize) -> (usize, &[u8], BlockHeader) {
        let bs = self.params.superblock_blocks();
        let s = k / bs;
        let mut ones = self.rank_before_superblock(true, s);
        let mut off = self.superblock_payload_offset(s);
        for j in s * bs..k {
            let h = self.block_header(j);
            ones += h.ones();
            off += h.encode_len();
        }
        let h = self.block_header(k);
        (ones, &self.payload[off..off + h.encode_len()], h)
    }

    fn rank1(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        let k = (i - 1) / BLOCK_BITS;
        let (before, payload, header) = self.locate_block(k);
        before + block_rank(header, payload, true, i - k * BLOCK_BITS, self.block_len(k))
    }

    /// Step 1 of select: the superblock holding the `q`-th `bit`, found by
    /// binary search between two consecutive lookup-table entries.
    pub fn find_superblock(&self, bit: bool, q: usize) -> Result<SuperblockHit> {
        self.check_select(bit, q)?;
        let index = self.select_indexes[bit as usize].as_ref().unwrap();
        Ok(self.find_superblock_in(index, bit, q))
    }

    #[inline]
    fn find_superblock_in(&self, index: &SelectIndex, bit: bool, q: usize) -> SuperblockHit {
        let (first, last) = index.brackets(q);
        let (mut lo, mut hi) = (first - 1, last - 1);
        // max x in [lo, hi] with rank_before_superblock(x) < q
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.rank_before_superblock(bit, mid) < q {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let (hyper_rank, super_rank) = self.ranks_before_superblock(bit, lo);
        SuperblockHit {
            index: lo + 1,
            hyper_rank,
            super_rank,
            payload_offset: self.superblock_payload_offset(lo),
            uniform: self.superblock_header(lo).uniform,
        }
    }

    /// Step 3 of select: walks the block headers of 1-based superblock
    /// `superblock` until the cumulative `bit` count reaches `residual`.
    pub fn scan_block_headers(&self, bit: bool, superblock: usize, residual: usize) -> BlockHit {
        let bs = self.params.superblock_blocks();
        let first = (superblock - 1) * bs;
        let end = (first + bs).min(self.num_blocks());
        let mut rank_sum = 0;
        let mut offset_sum = 0;
        for k in first..end {
            let header = self.block_header(k);
            let c = header.count(bit, self.block_len(k));
            if rank_sum + c >= residual {
                return BlockHit {
                    index: k + 1,
                    rank_sum,
                    offset_sum,
                    header,
                };
            }
            rank_sum += c;
            offset_sum += header.encode_len();
        }
        unreachable!("superblock {superblock} holds fewer than {residual} matching bits")
    }

    fn check_select(&self, bit: bool, q: usize) -> Result<()> {
        if self.select_indexes[bit as usize].is_none() {
            return Err(Error::MissingSelectIndex(bit as u8));
        }
        let total = self.count(bit);
        if q == 0 || q > total {
            return Err(Error::OccurrenceOutOfRange {
                symbol: bit as u32,
                index: q,
                count: total,
            });
        }
        Ok(())
    }

    /// Select that also reports which code path produced the answer.
    pub fn select_traced(&self, bit: bool, q: usize) -> Result<(usize, SelectPath)> {
        self.check_select(bit, q)?;
        let index = self.select_indexes[bit as usize].as_ref().unwrap();
        Ok(self.select_in(index, bit, q))
    }

    #[inline]
    fn select_in(&self, index: &SelectIndex, bit: bool, q: usize) -> (usize, SelectPath) {
        let sb = self.find_superblock_in(index, bit, q);
        let residual = q - sb.hyper_rank - sb.super_rank;
        if self.shortcuts && sb.uniform {
            return (
                self.superblock_bits() * (sb.index - 1) + residual,
                SelectPath::UniformSuperblock,
            );
        }
        let blk = self.scan_block_headers(bit, sb.index, residual);
        let local_q = residual - blk.rank_sum;
        let k = blk.index - 1;
        let blen = self.block_len(k);
        let header = blk.header;
        let off = sb.payload_offset + blk.offset_sum;
        let payload = &self.payload[off..off + header.encode_len()];
        let (local, path) = match header.kind(blen) {
            EncodingKind::Minority => (
                encoding::minority_select(payload, header.special(), bit, local_q),
                SelectPath::Minority,
            ),
            EncodingKind::Plain => (encoding::plain_select(payload, bit, local_q), SelectPath::Plain),
            EncodingKind::RunLength if payload.is_empty() && self.shortcuts => (
                encoding::two_run_select(header.special(), header.ones(), blen, bit, local_q),
                SelectPath::TwoRunBlock,
            ),
            EncodingKind::RunLength if payload.is_empty() => (
                encoding::runlength_select_by_runs(
                    payload,
                    header.special(),
                    header.ones(),
                    blen,
                    bit,
                    local_q,
                ),
                SelectPath::RunLength,
            ),
            EncodingKind::RunLength => (
                encoding::runlength_select(
                    payload,
                    header.special(),
                    header.ones(),
                    blen,
                    bit,
                    local_q,
                ),
                SelectPath::RunLength,
            ),
        };
        (k * BLOCK_BITS + local, path)
    }
}

fn push_superblock_header(headers: &mut Vec<u16>, h: SuperblockHeader) {
    let off = h.local_payload_offset_before | if h.uniform { UNIFORM_FLAG } else { 0 };
    headers.extend_from_slice(&[
        h.local_ones_before as u16,
        (h.local_ones_before >> 16) as u16,
        off as u16,
        (off >> 16) as u16,
    ]);
}

fn encode_superblock(bits: &PackedBits, s: usize, bs: usize) -> SuperblockChunk {
    let n = bits.len();
    let first = s * bs;
    let end = (first + bs).min(n.div_ceil(BLOCK_BITS));
    let mut chunk = SuperblockChunk {
        headers: Vec::with_capacity(end - first),
        payload: Vec::new(),
        ones: 0,
        uniform: true,
    };
    for k in first..end {
        let w0 = k * BLOCK_WORDS;
        let words = &bits.words()[w0..(w0 + BLOCK_WORDS).min(bits.words().len())];
        let block = BlockBits::new(words, (n - k * BLOCK_BITS).min(BLOCK_BITS));
        let (_, header) = encode_block_into(&block, &mut chunk.payload);
        chunk.headers.push(header.raw());
        chunk.ones += header.ones();
    }
    let sb_bits = (n - first * BLOCK_BITS).min(bs * BLOCK_BITS);
    chunk.uniform = chunk.ones == 0 || chunk.ones == sb_bits;
    chunk
}

impl RankSelect for HybVector {
    fn len(&self) -> usize {
        self.len
    }

    fn count(&self, bit: bool) -> usize {
        if bit {
            self.ones
        } else {
            self.len - self.ones
        }
    }

    fn access(&self, i: usize) -> Result<bool> {
        check_pos(i, 1, self.len)?;
        let k = (i - 1) / BLOCK_BITS;
        let (_, payload, header) = self.locate_block(k);
        Ok(block_access(header, payload, i - k * BLOCK_BITS, self.block_len(k)))
    }

    fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        check_pos(i, 0, self.len)?;
        let ones = self.rank1(i);
        Ok(if bit { ones } else { i - ones })
    }

    fn select(&self, bit: bool, q: usize) -> Result<usize> {
        self.select_traced(bit, q).map(|(p, _)| p)
    }

    fn size_in_bytes(&self) -> usize {
        self.serialized_len()
    }
}

impl Backend for HybVector {
    type Config = HybParams;
    const NAME: &'static str = "hyb";

    fn build(bits: &PackedBits, config: &HybParams) -> Result<Self> {
        Ok(HybVector::build(bits, config))
    }

    fn write(&self, out: &mut Vec<u8>) {
        self.write_to(out);
    }

    fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        HybVector::read_from(r)
    }
}
