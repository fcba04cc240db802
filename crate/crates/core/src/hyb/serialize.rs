//! Byte layout of a [`HybVector`] (little-endian throughout):
//!
//! ```text
//! magic "HYBSEL01" | version u32 | n u64 | b_s u8 | flags u8 | reserved [u8; 6]
//! A_H: count u64, then (ones_before u64, payload_offset_before u64) per entry
//! A_S: superblock count u64, then per superblock an 8-byte header
//!      (local ones u32, local offset u31 | uniform << 31) and its 2-byte
//!      block headers
//! A_E: byte count u64, raw bytes
//! per present select index (bit 0 first): k_interval u64, m u64, m x u64
//! ```
//!
//! `flags` bit 0 / bit 1 mark the select index for bit 0 / bit 1 as present.
//! `reserved[0]` holds log2 of the blocks per hyperblock when it differs from
//! the default 23, and is zero otherwise. `reserved[1]` is zero and
//! `reserved[2..6]` is the CRC-32 of the preceding 24 header bytes.

use super::encoding::{BlockHeader, BLOCK_BITS, PLAIN_BYTES};
use super::params::{HybParams, HYPERBLOCK_BLOCKS};
use super::select_index::SelectIndex;
use super::vector::{HybVector, HyperblockHeader, SUPERBLOCK_HEADER_SLOTS};
use crate::error::{Error, Result};
use crate::serial::{self, ByteReader};

pub const MAGIC: &[u8; 8] = b"HYBSEL01";
pub const FORMAT_VERSION: u32 = 1;
/// Bytes before `A_H`.
pub const HEADER_LEN: usize = 8 + 4 + 8 + 1 + 1 + 6;

impl HybVector {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        self.write_to(&mut out);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        let hv = Self::read_from(&mut r)?;
        r.finish()?;
        Ok(hv)
    }

    pub(crate) fn serialized_len(&self) -> usize {
        HEADER_LEN
            + 8
            + 16 * self.hyper.len()
            + 8
            + 2 * self.headers.len()
            + 8
            + self.payload.len()
            + self
                .select_indexes
                .iter()
                .flatten()
                .map(|idx| 16 + 8 * idx.table.len())
                .sum::<usize>()
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        let start = out.len();
        out.extend_from_slice(MAGIC);
        serial::put_u32(out, FORMAT_VERSION);
        serial::put_u64(out, self.len as u64);
        serial::put_u8(out, self.params.superblock_blocks() as u8);
        let flags = self.select_indexes[0].is_some() as u8 | (self.select_indexes[1].is_some() as u8) << 1;
        serial::put_u8(out, flags);
        let mut reserved = [0u8; 6];
        if self.params.hyperblock_blocks() != HYPERBLOCK_BLOCKS {
            reserved[0] = self.params.hyperblock_blocks().trailing_zeros() as u8;
        }
        out.extend_from_slice(&reserved[..2]);
        let crc = crc32fast::hash(&out[start..]);
        serial::put_u32(out, crc);

        serial::put_u64(out, self.hyper.len() as u64);
        for h in &self.hyper {
            serial::put_u64(out, h.ones_before);
            serial::put_u64(out, h.payload_offset_before);
        }
        serial::put_u64(out, self.num_superblocks() as u64);
        for &slot in &self.headers {
            serial::put_u16(out, slot);
        }
        serial::put_u64(out, self.payload.len() as u64);
        out.extend_from_slice(&self.payload);
        for idx in self.select_indexes.iter().flatten() {
            serial::put_u64(out, idx.k_interval as u64);
            serial::put_u64(out, idx.table.len() as u64);
            for &e in &idx.table {
                serial::put_u64(out, e);
            }
        }
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let start = r.position();
        r.magic(MAGIC)?;
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let mut h = ByteReader::new(r.take(HEADER_LEN - 12)?);
        let header_crc = crc32fast::hash(&r.consumed_since(start)[..HEADER_LEN - 4]);
        let len = h.len_u64()?;
        let bs = h.u8()? as usize;
        let flags = h.u8()?;
        let reserved = h.take(2)?;
        let stored_crc = h.u32()?;
        if stored_crc != header_crc {
            return Err(Error::Corrupt(format!(
                "header checksum {stored_crc:#010x} does not match {header_crc:#010x}"
            )));
        }
        if flags & !0b11 != 0 {
            return Err(Error::Corrupt(format!("unknown flags {flags:#04x}")));
        }
        if reserved[1] != 0 {
            return Err(Error::Corrupt("reserved header byte is not zero".into()));
        }
        let mut params = HybParams::new(bs).map_err(|e| Error::Corrupt(e.to_string()))?;
        if reserved[0] != 0 {
            if reserved[0] > 23 {
                return Err(Error::Corrupt(format!("hyperblock exponent {}", reserved[0])));
            }
            params = params
                .with_hyperblock_blocks(1usize << reserved[0])
                .map_err(|e| Error::Corrupt(e.to_string()))?;
        }
        params = params.with_select_indexes(flags & 1 != 0, flags & 2 != 0);

        let nblocks = len.div_ceil(BLOCK_BITS);
        let nsuper = nblocks.div_ceil(bs);
        let nhyper = nblocks.div_ceil(params.hyperblock_blocks());

        let hcount = r.count(16)?;
        if hcount != nhyper {
            return Err(Error::Corrupt(format!("{hcount} hyperblock headers, expected {nhyper}")));
        }
        let mut hyper = Vec::with_capacity(hcount);
        for _ in 0..hcount {
            hyper.push(HyperblockHeader {
                ones_before: r.u64()?,
                payload_offset_before: r.u64()?,
            });
        }
        let scount = r.len_u64()?;
        if scount != nsuper {
            return Err(Error::Corrupt(format!("{scount} superblock headers, expected {nsuper}")));
        }
        let slots = nsuper * SUPERBLOCK_HEADER_SLOTS + nblocks;
        let raw = r.take(slots * 2)?;
        let headers: Vec<u16> = raw
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect();
        let plen = r.count(1)?;
        let payload = r.take(plen)?.to_vec();

        let mut hv = HybVector {
            len,
            shortcuts: params.resolve_shortcuts(),
            params,
            hyper,
            headers,
            payload,
            ones: 0,
            select_indexes: [None, None],
        };
        hv.ones = hv.validate_headers()?;

        for bit in [false, true] {
            if flags & (1 << bit as u8) == 0 {
                continue;
            }
            let k_interval = r.len_u64()?;
            let m = r.count(8)?;
            let table: Vec<u64> = (0..m).map(|_| r.u64()).collect::<Result<_>>()?;
            let idx = SelectIndex {
                bit,
                k_interval,
                table,
            };
            hv.validate_select_index(&idx)?;
            hv.select_indexes[bit as usize] = Some(idx);
        }
        Ok(hv)
    }

    /// Recomputes every cumulative header value from the block headers and
    /// returns the total number of ones.
    fn validate_headers(&self) -> Result<usize> {
        let bs = self.params.superblock_blocks();
        let bh = self.params.hyperblock_blocks();
        let mut ones = 0usize;
        let mut offset = 0usize;
        for s in 0..self.num_superblocks() {
            let h = s * bs / bh;
            if (s * bs).is_multiple_of(bh) {
                let hh = self.hyper[h];
                if hh.ones_before as usize != ones || hh.payload_offset_before as usize != offset {
                    return Err(Error::Corrupt(format!("hyperblock header {h} is inconsistent")));
                }
            }
            let sh = self.superblock_header(s);
            let base = self.hyper[h];
            if sh.local_ones_before as usize + base.ones_before as usize != ones
                || sh.local_payload_offset_before as usize + base.payload_offset_before as usize
                    != offset
            {
                return Err(Error::Corrupt(format!("superblock header {s} is inconsistent")));
            }
            let mut sb_ones = 0;
            let mut sb_bits = 0;
            for k in s * bs..((s + 1) * bs).min(self.num_blocks()) {
                let bh: BlockHeader = self.block_header(k);
                let blen = self.block_len(k);
                if bh.ones() > blen || bh.encode_len() > PLAIN_BYTES {
                    return Err(Error::Corrupt(format!("block header {k} is out of range")));
                }
                sb_ones += bh.ones();
                sb_bits += blen;
                offset += bh.encode_len();
            }
            if sh.uniform != (sb_ones == 0 || sb_ones == sb_bits) {
                return Err(Error::Corrupt(format!("uniform flag of superblock {s} is wrong")));
            }
            ones += sb_ones;
        }
        if offset != self.payload.len() {
            return Err(Error::Corrupt(format!(
                "block encodings cover {offset} bytes but A_E holds {}",
                self.payload.len()
            )));
        }
        Ok(ones)
    }

    fn validate_select_index(&self, idx: &SelectIndex) -> Result<()> {
        let total = crate::rank_select::RankSelect::count(self, idx.bit);
        let bad = |what: &str| Err(Error::Corrupt(format!("select index {}: {what}", idx.bit as u8)));
        if total == 0 {
            return if idx.table.is_empty() { Ok(()) } else { bad("nonempty table for absent bit") };
        }
        if idx.k_interval == 0 || idx.table.len() != total.div_ceil(idx.k_interval) + 1 {
            return bad("table length does not match sampling interval");
        }
        let nsuper = self.num_superblocks() as u64;
        if idx.table.iter().any(|&e| e == 0 || e > nsuper)
            || idx.table.windows(2).any(|w| w[0] > w[1])
            || *idx.table.last().unwrap() != nsuper
        {
            return bad("entries out of order or out of range");
        }
        Ok(())
    }
}
