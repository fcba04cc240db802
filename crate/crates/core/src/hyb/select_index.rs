use super::params::INDEX_ENTRY_BITS;
use super::vector::HybVector;
use crate::rank_select::RankSelect;

/// Sampled lookup table `L_s` for select on one bit value.
///
/// Entry `i` (1-based, `i < m`) is the 1-based superblock holding the
/// `(k_interval * (i - 1) + 1)`-th `c`-bit; the last entry is the total number
/// of superblocks. With `m_max = max(n / (k_param * 64), 2)` the table has at
/// most `m_max` entries, so it never exceeds `n / k_param` bits once
/// `n >= 2 * 64 * k_param`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectIndex {
    pub(crate) bit: bool,
    pub(crate) k_interval: usize,
    pub(crate) table: Vec<u64>,
}

impl SelectIndex {
    pub fn build(hv: &HybVector, bit: bool) -> Self {
        let n = hv.len();
        let total = hv.count(bit);
        if total == 0 {
            return Self {
                bit,
                k_interval: 1,
                table: Vec::new(),
            };
        }
        let m_max = (n / (hv.params().k_param() * INDEX_ENTRY_BITS)).max(2);
        let k_interval = total.div_ceil(m_max - 1);
        let m = total.div_ceil(k_interval) + 1;
        let nsuper = hv.num_superblocks();

        let mut table = Vec::with_capacity(m);
        let mut s = 0;
        for i in 1..m {
            let target = k_interval * (i - 1) + 1;
            // advance to the last superblock whose preceding count is < target
            while s + 1 < nsuper && hv.rank_before_superblock(bit, s + 1) < target {
                s += 1;
            }
            table.push(s as u64 + 1);
        }
        table.push(nsuper as u64);
        Self {
            bit,
            k_interval,
            table,
        }
    }

    pub fn bit(&self) -> bool {
        self.bit
    }

    pub fn sampling_interval(&self) -> usize {
        self.k_interval
    }

    /// Entries of `L_s` (1-based superblock indices).
    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Number of entries `m`.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Size of the table in bits (`64 * m`).
    pub fn table_bits(&self) -> usize {
        INDEX_ENTRY_BITS * self.table.len()
    }

    /// The two table entries bracketing the superblock of the `q`-th bit.
    #[inline(always)]
    pub(crate) fn brackets(&self, q: usize) -> (usize, usize) {
        let u = (q - 1) / self.k_interval;
        (self.table[u] as usize, self.table[u + 1] as usize)
    }
}
