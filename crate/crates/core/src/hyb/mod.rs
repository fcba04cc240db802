//! The hybrid bitvector.
//!
//! Bits are split into 256-bit blocks, `b_s` blocks form a superblock and
//! 2^23 blocks a hyperblock. Hyperblock headers store global one counts and
//! payload offsets, superblock headers store the same values relative to
//! their hyperblock, and 16-bit block headers store the block's one count,
//! payload length and a special bit. Per-block rank and offset are not
//! stored; they are summed from the block headers of the superblock.
//!
//! Select uses one [`SelectIndex`] per bit value to bracket a binary search
//! over superblocks, scans the block headers of the hit superblock, then runs
//! an encoding-specific in-block select.

pub mod encoding;
mod params;
mod select_index;
mod serialize;
mod vector;

pub use encoding::{BlockBits, BlockHeader, EncodingKind, BLOCK_BITS};
pub use params::{
    HybParams, DEFAULT_K_PARAM, DISABLE_SHORTCUTS_ENV, HYPERBLOCK_BLOCKS, INDEX_ENTRY_BITS,
    SUPERBLOCK_BLOCKS,
};
pub use select_index::SelectIndex;
pub use serialize::{FORMAT_VERSION, HEADER_LEN, MAGIC};
pub use vector::{
    BlockHit, HybVector, HyperblockHeader, SelectPath, SuperblockHeader, SuperblockHit,
};
