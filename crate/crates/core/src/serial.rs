//! Little-endian byte cursor shared by every serializable structure.

use crate::error::{Error, Result};

pub(crate) fn put_u8(out: &mut Vec<u8>, v: u8) {
    out.push(v);
}

pub(crate) fn put_u16(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

/// Length-prefixed array of 64-bit words.
pub(crate) fn put_words(out: &mut Vec<u8>, words: &[u64]) {
    put_u64(out, words.len() as u64);
    out.reserve(words.len() * 8);
    for &w in words {
        put_u64(out, w);
    }
}

pub(crate) fn words_len(count: usize) -> usize {
    8 + 8 * count
}

/// Reads primitives from a byte slice, failing with [`Error::Truncated`]
/// instead of panicking.
pub struct ByteReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    /// Bytes read since position `start`.
    pub fn consumed_since(&self, start: usize) -> &'a [u8] {
        &self.buf[start..self.pos]
    }

    pub fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.remaining() < len {
            return Err(Error::Truncated {
                needed: len,
                available: self.remaining(),
            });
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// Reads a u64 that must fit into memory as a length or index.
    pub fn len_u64(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| Error::Corrupt(format!("length {v} does not fit usize")))
    }

    /// Reads a count and checks that `count * elem_size` bytes are actually
    /// available, so corrupt counts cannot trigger huge allocations.
    pub fn count(&mut self, elem_size: usize) -> Result<usize> {
        let count = self.len_u64()?;
        let needed = count.checked_mul(elem_size).ok_or_else(|| {
            Error::Corrupt(format!("element count {count} overflows"))
        })?;
        if needed > self.remaining() {
            return Err(Error::Truncated {
                needed,
                available: self.remaining(),
            });
        }
        Ok(count)
    }

    pub fn words(&mut self) -> Result<Vec<u64>> {
        let count = self.count(8)?;
        let bytes = self.take(count * 8)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    pub fn magic(&mut self, expected: &[u8; 8]) -> Result<()> {
        let found: [u8; 8] = self.take(8)?.try_into().unwrap();
        if &found != expected {
            return Err(Error::BadMagic {
                expected: *expected,
                found,
            });
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(Error::Corrupt(format!(
                "{} trailing bytes after structure",
                self.remaining()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reader_rejects_short_input() {
        let mut out = Vec::new();
        put_u32(&mut out, 7);
        let mut r = ByteReader::new(&out);
        assert!(matches!(r.u64(), Err(Error::Truncated { .. })));
        assert_eq!(r.u32().unwrap(), 7);
        r.finish().unwrap();
    }

    #[test]
    fn corrupt_count_does_not_allocate() {
        let mut out = Vec::new();
        put_u64(&mut out, u64::MAX / 2);
        let mut r = ByteReader::new(&out);
        assert!(r.words().is_err());
    }
}
