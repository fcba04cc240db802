use crate::error::{Error, Result};
use crate::rank_select::Backend;
use crate::serial::{self, ByteReader};
use crate::wavelet::WaveletTree;
use crate::{HybVector, PlainBitVector};

pub const CONTAINER_MAGIC: [u8; 8] = *b"HYBSELCT";
pub const CONTAINER_VERSION: u32 = 1;

/// A bitvector under either backend.
pub enum AnyBitVector {
    Hyb(HybVector),
    Plain(PlainBitVector),
}

/// A wavelet tree under either backend.
pub enum AnyWaveletTree {
    Hyb(WaveletTree<HybVector>),
    Plain(WaveletTree<PlainBitVector>),
}

pub enum Structure {
    /// PLCP bitvector of a text.
    Plcp(AnyBitVector),
    /// Wavelet tree over the BWT of a text.
    BwtSelect(AnyWaveletTree),
}

/// File format written by `build`: magic, version u32, structure tag u8
/// (0 = PLCP, 1 = BWT wavelet tree), backend tag u8 (0 = plain, 1 = hyb),
/// text length u64 (with sentinel), then the structure's own encoding.
pub struct Container {
    pub text_len: usize,
    pub structure: Structure,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&CONTAINER_MAGIC);
        serial::put_u32(&mut out, CONTAINER_VERSION);
        let (kind, backend) = self.tags();
        serial::put_u8(&mut out, kind);
        serial::put_u8(&mut out, backend);
        serial::put_u64(&mut out, self.text_len as u64);
        match &self.structure {
            Structure::Plcp(AnyBitVector::Hyb(b)) => b.write(&mut out),
            Structure::Plcp(AnyBitVector::Plain(b)) => b.write(&mut out),
            Structure::BwtSelect(AnyWaveletTree::Hyb(w)) => w.write(&mut out),
            Structure::BwtSelect(AnyWaveletTree::Plain(w)) => w.write(&mut out),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        r.magic(&CONTAINER_MAGIC)?;
        let version = r.u32()?;
        if version != CONTAINER_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                expected: CONTAINER_VERSION,
            });
        }
        let kind = r.u8()?;
        let backend = r.u8()?;
        let text_len = r.len_u64()?;
        let structure = match (kind, backend) {
            (0, 0) => Structure::Plcp(AnyBitVector::Plain(PlainBitVector::read(&mut r)?)),
            (0, 1) => Structure::Plcp(AnyBitVector::Hyb(HybVector::read(&mut r)?)),
            (1, 0) => Structure::BwtSelect(AnyWaveletTree::Plain(WaveletTree::read(&mut r)?)),
            (1, 1) => Structure::BwtSelect(AnyWaveletTree::Hyb(WaveletTree::read(&mut r)?)),
            _ => {
                return Err(Error::Corrupt(format!(
                    "unknown structure/backend tags {kind}/{backend}"
                )))
            }
        };
        r.finish()?;
        let c = Self { text_len, structure };
        let expected = match &c.structure {
            Structure::Plcp(AnyBitVector::Hyb(b)) => crate::RankSelect::len(b) / 2,
            Structure::Plcp(AnyBitVector::Plain(b)) => crate::RankSelect::len(b) / 2,
            Structure::BwtSelect(AnyWaveletTree::Hyb(w)) => w.len(),
            Structure::BwtSelect(AnyWaveletTree::Plain(w)) => w.len(),
        };
        if expected != text_len {
            return Err(Error::Corrupt(format!(
                "structure covers {expected} symbols but the header says {text_len}"
            )));
        }
        Ok(c)
    }

    fn tags(&self) -> (u8, u8) {
        match &self.structure {
            Structure::Plcp(AnyBitVector::Plain(_)) => (0, 0),
            Structure::Plcp(AnyBitVector::Hyb(_)) => (0, 1),
            Structure::BwtSelect(AnyWaveletTree::Plain(_)) => (1, 0),
            Structure::BwtSelect(AnyWaveletTree::Hyb(_)) => (1, 1),
        }
    }
}
