//! Succinct bitvectors with rank and select: a plain baseline and the hybrid
//! bitvector, which encodes each 256-bit block as a minority list, a
//! run-length list or raw bits, whichever is smallest.
//!
//! On top of the bitvectors sit the two applications used for evaluation:
//! PLCP queries through a 2n-bit bitvector ([`text_index`]) and select on the
//! BWT through wavelet trees ([`wavelet`]). [`bench`] holds the benchmark
//! harness behind the `hybsel` command-line tool.
//!
//! All positions are 1-based and `rank(c, 0) == 0`.
//!
//! ```
//! use hybsel::{HybParams, HybVector, PackedBits, RankSelect};
//!
//! let bits = PackedBits::from_bit_str("10110");
//! let hv = HybVector::build(&bits, &HybParams::default());
//! assert_eq!(hv.rank(true, 4).unwrap(), 3);
//! assert_eq!(hv.select(false, 2).unwrap(), 5);
//! ```

pub mod bench;
pub mod bits;
mod error;
pub mod hyb;
pub mod par;
pub mod plain;
pub mod rank_select;
pub mod serial;
pub mod text_index;
pub mod wavelet;

pub use bits::{popcount_word, select_in_word, PackedBits};
pub use error::{Error, Result};
pub use hyb::{HybParams, HybVector};
pub use par::Execution;
pub use plain::PlainBitVector;
pub use rank_select::{Backend, RankSelect};
