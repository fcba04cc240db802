use crate::error::{Error, Result};

/// Blocks per hyperblock.
pub const HYPERBLOCK_BLOCKS: usize = 1 << 23;
/// Default space knob of the select lookup tables.
pub const DEFAULT_K_PARAM: usize = 128;
/// Width of a lookup-table entry in bits.
pub const INDEX_ENTRY_BITS: usize = 64;
/// Allowed blocks-per-superblock values.
pub const SUPERBLOCK_BLOCKS: [usize; 4] = [8, 16, 32, 64];

/// Set to `1` to force every select through the general path.
pub const DISABLE_SHORTCUTS_ENV: &str = "HYBSEL_DISABLE_SHORTCUTS";

pub(crate) fn shortcuts_from_env() -> bool {
    !matches!(
        std::env::var(DISABLE_SHORTCUTS_ENV).as_deref(),
        Ok("1") | Ok("true")
    )
}

/// Construction parameters of a [`HybVector`](super::HybVector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybParams {
    superblock_blocks: usize,
    hyperblock_blocks: usize,
    k_param: usize,
    select_indexes: [bool; 2],
    shortcuts: Option<bool>,
}

impl Default for HybParams {
    fn default() -> Self {
        Self {
            superblock_blocks: 16,
            hyperblock_blocks: HYPERBLOCK_BLOCKS,
            k_param: DEFAULT_K_PARAM,
            select_indexes: [true, true],
            shortcuts: None,
        }
    }
}

impl HybParams {
    /// Parameters with `superblock_blocks` blocks per superblock (8, 16, 32 or 64).
    pub fn new(superblock_blocks: usize) -> Result<Self> {
        if !SUPERBLOCK_BLOCKS.contains(&superblock_blocks) {
            return Err(Error::InvalidParams(format!(
                "blocks per superblock must be one of {SUPERBLOCK_BLOCKS:?}, got {superblock_blocks}"
            )));
        }
        Ok(Self {
            superblock_blocks,
            ..Self::default()
        })
    }

    pub fn with_k_param(mut self, k_param: usize) -> Result<Self> {
        if k_param == 0 {
            return Err(Error::InvalidParams("k_param must be at least 1".into()));
        }
        self.k_param = k_param;
        Ok(self)
    }

    /// Chooses which select indexes (for bit 0 and bit 1) are built.
    pub fn with_select_indexes(mut self, zero: bool, one: bool) -> Self {
        self.select_indexes = [zero, one];
        self
    }

    /// Forces the query shortcuts on or off. Unset, the
    /// `HYBSEL_DISABLE_SHORTCUTS` environment variable decides at build time.
    pub fn with_shortcuts(mut self, enabled: bool) -> Self {
        self.shortcuts = Some(enabled);
        self
    }

    /// Smaller hyperblocks, so multi-hyperblock layouts can be exercised on
    /// small inputs. Must be a power of two between `superblock_blocks` and
    /// 2^23.
    #[doc(hidden)]
    pub fn with_hyperblock_blocks(mut self, blocks: usize) -> Result<Self> {
        if !blocks.is_power_of_two()
            || blocks < self.superblock_blocks
            || blocks > HYPERBLOCK_BLOCKS
        {
            return Err(Error::InvalidParams(format!(
                "invalid blocks per hyperblock {blocks}"
            )));
        }
        self.hyperblock_blocks = blocks;
        Ok(self)
    }

    pub fn superblock_blocks(&self) -> usize {
        self.superblock_blocks
    }

    pub fn hyperblock_blocks(&self) -> usize {
        self.hyperblock_blocks
    }

    pub fn k_param(&self) -> usize {
        self.k_param
    }

    pub fn builds_select_index(&self, bit: bool) -> bool {
        self.select_indexes[bit as usize]
    }

    pub(crate) fn resolve_shortcuts(&self) -> bool {
        self.shortcuts.unwrap_or_else(shortcuts_from_env)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        for bs in SUPERBLOCK_BLOCKS {
            assert_eq!(HybParams::new(bs).unwrap().superblock_blocks(), bs);
        }
        assert!(HybParams::new(12).is_err());
        assert!(HybParams::new(128).is_err());
        assert!(HybParams::default().with_k_param(0).is_err());
        let p = HybParams::new(64).unwrap();
        assert!(p.clone().with_hyperblock_blocks(32).is_err());
        assert!(p.clone().with_hyperblock_blocks(96).is_err());
        assert_eq!(p.with_hyperblock_blocks(128).unwrap().hyperblock_blocks(), 128);
    }
}
