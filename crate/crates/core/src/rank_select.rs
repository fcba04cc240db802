//! The rank/select contract shared by every bitvector backend, plus batch
//! query helpers that fan out over [`Execution`].

use crate::bits::PackedBits;
use crate::error::Result;
use crate::par::{self, Execution};
use crate::serial::ByteReader;

/// Query interface of a static bitvector. Positions are 1-based; `rank(c, 0)`
/// is 0.
pub trait RankSelect {
    /// Number of bits.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of `bit` values, i.e. `rank(bit, len())`.
    fn count(&self, bit: bool) -> usize;

    fn access(&self, i: usize) -> Result<bool>;

    /// Number of `bit` values in positions `1..=i`.
    fn rank(&self, bit: bool, i: usize) -> Result<usize>;

    /// Position of the `j`-th `bit` value.
    fn select(&self, bit: bool, j: usize) -> Result<usize>;

    /// Exact length of the serialized form.
    fn size_in_bytes(&self) -> usize;
}

/// A bitvector that can be built from raw bits and embedded in other
/// serialized structures (such as wavelet-tree nodes).
pub trait Backend: RankSelect + Sized + Send + Sync {
    type Config: Clone + Send + Sync;

    /// Short name used in reports ("plain", "hyb").
    const NAME: &'static str;

    fn build(bits: &PackedBits, config: &Self::Config) -> Result<Self>;

    fn write(&self, out: &mut Vec<u8>);

    fn read(r: &mut ByteReader<'_>) -> Result<Self>;

    fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_in_bytes());
        self.write(&mut out);
        out
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        let v = Self::read(&mut r)?;
        r.finish()?;
        Ok(v)
    }
}

pub fn rank_batch<B: RankSelect + Sync>(
    bv: &B,
    bit: bool,
    positions: &[usize],
    exec: Execution,
) -> Result<Vec<usize>> {
    par::map(exec, positions, |&i| bv.rank(bit, i))
        .into_iter()
        .collect()
}

pub fn select_batch<B: RankSelect + Sync>(
    bv: &B,
    bit: bool,
    occurrences: &[usize],
    exec: Execution,
) -> Result<Vec<usize>> {
    par::map(exec, occurrences, |&j| bv.select(bit, j))
        .into_iter()
        .collect()
}

pub fn access_batch<B: RankSelect + Sync>(
    bv: &B,
    positions: &[usize],
    exec: Execution,
) -> Result<Vec<bool>> {
    par::map(exec, positions, |&i| bv.access(i))
        .into_iter()
        .collect()
}
