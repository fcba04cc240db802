//! Suffix array, LCP, BWT and PLCP for sentinel-terminated byte texts, and
//! the 2n-bit PLCP bitvector.
//!
//! Array values are 1-based text positions stored in 0-indexed `Vec`s:
//! `sa[0]` is the starting position of the smallest suffix.

use crate::bits::PackedBits;
use crate::error::{check_pos, Error, Result};
use crate::rank_select::RankSelect;

/// Sentinel byte; strictly smallest and present exactly once, at the end.
pub const SENTINEL: u8 = 0;

/// A byte string terminated by the sentinel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    /// Appends the sentinel unless `bytes` already ends with it. Any other
    /// `0x00` byte is rejected.
    pub fn new(mut bytes: Vec<u8>) -> Result<Self> {
        let body = if bytes.last() == Some(&SENTINEL) {
            bytes.len() - 1
        } else {
            bytes.len()
        };
        if let Some(p) = bytes[..body].iter().position(|&b| b == SENTINEL) {
            return Err(Error::InteriorSentinel(p + 1));
        }
        if body == bytes.len() {
            bytes.push(SENTINEL);
        }
        Ok(Self { bytes })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Length including the sentinel.
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Suffix array by prefix doubling with radix-sorted rank pairs.
pub fn suffix_array(text: &Text) -> Vec<usize> {
    let s = text.as_bytes();
    let n = s.len();
    // rank 0 is reserved for "past the end"
    let mut rank: Vec<usize> = s.iter().map(|&b| b as usize + 1).collect();
    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_unstable_by_key(|&i| s[i]);
    let mut max_rank = 257;
    let mut tmp = vec![0usize; n];
    let mut counts = Vec::new();
    let mut k = 1;
    loop {
        // order by the second key: suffixes running off the end come first
        let mut order = Vec::with_capacity(n);
        order.extend(n.saturating_sub(k)..n);
        order.extend(sa.iter().filter(|&&i| i >= k).map(|&i| i - k));
        // stable counting sort by the first key
        counts.clear();
        counts.resize(max_rank + 1, 0);
        for &i in &order {
            counts[rank[i]] += 1;
        }
        let mut sum = 0;
        for c in counts.iter_mut() {
            let here = *c;
            *c = sum;
            sum += here;
        }
        for &i in &order {
            sa[counts[rank[i]]] = i;
            counts[rank[i]] += 1;
        }
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] } else { 0 });
        tmp[sa[0]] = 1;
        for w in 1..n {
            tmp[sa[w]] = tmp[sa[w - 1]] + (key(sa[w]) != key(sa[w - 1])) as usize;
        }
        std::mem::swap(&mut rank, &mut tmp);
        max_rank = rank[sa[n - 1]];
        if max_rank == n {
            break;
        }
        k *= 2;
    }
    sa.into_iter().map(|i| i + 1).collect()
}

/// Inverse permutation of a suffix array (both 1-based in value).
pub fn inverse(sa: &[usize]) -> Vec<usize> {
    let mut isa = vec![0; sa.len()];
    for (i, &p) in sa.iter().enumerate() {
        isa[p - 1] = i + 1;
    }
    isa
}

/// LCP array in suffix order (Kasai et al.); `lcp[0] == 0`.
pub fn lcp_array(text: &Text, sa: &[usize]) -> Vec<usize> {
    let s = text.as_bytes();
    let n = s.len();
    let isa = inverse(sa);
    let mut lcp = vec![0; n];
    let mut h = 0usize;
    for p in 0..n {
        let r = isa[p] - 1;
        if r == 0 {
            h = 0;
            continue;
        }
        let q = sa[r - 1] - 1;
        while p + h < n && q + h < n && s[p + h] == s[q + h] {
            h += 1;
        }
        lcp[r] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Burrows–Wheeler transform: the byte preceding each sorted suffix
/// (the last byte for the suffix starting at position 1).
pub fn bwt(text: &Text, sa: &[usize]) -> Vec<u8> {
    let s = text.as_bytes();
    sa.iter()
        .map(|&p| if p == 1 { s[s.len() - 1] } else { s[p - 2] })
        .collect()
}

/// PLCP: the LCP values in text order, `plcp[j] = lcp[isa[j]]`.
pub fn plcp_array(sa: &[usize], lcp: &[usize]) -> Vec<usize> {
    let mut plcp = vec![0; sa.len()];
    for (i, &p) in sa.iter().enumerate() {
        plcp[p - 1] = lcp[i];
    }
    plcp
}

/// The 2n-bit PLCP bitvector with ones at `plcp[j] + 2j`.
pub fn plcp_bitvector(plcp: &[usize]) -> Result<PackedBits> {
    let n = plcp.len();
    let mut bits = PackedBits::zeros(2 * n);
    for (idx, &v) in plcp.iter().enumerate() {
        if idx > 0 && v + 1 < plcp[idx - 1] {
            return Err(Error::NonMonotonePlcp(idx + 1));
        }
        let pos = v + 2 * (idx + 1);
        if pos > 2 * n {
            return Err(Error::NonMonotonePlcp(idx + 1));
        }
        bits.set(pos, true)?;
    }
    Ok(bits)
}

/// `plcp[j]` recovered as `select1(B, j) - 2j`.
pub fn plcp_query<B: RankSelect + ?Sized>(bv: &B, j: usize) -> Result<usize> {
    check_pos(j, 1, bv.len() / 2)?;
    Ok(bv.select(true, j)? - 2 * j)
}

/// All text arrays needed by the two applications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaLcpBundle {
    pub sa: Vec<usize>,
    pub isa: Vec<usize>,
    pub lcp: Vec<usize>,
    pub bwt: Vec<u8>,
    pub plcp: Vec<usize>,
}

impl SaLcpBundle {
    pub fn build(text: &Text) -> Self {
        let sa = suffix_array(text);
        let isa = inverse(&sa);
        let lcp = lcp_array(text, &sa);
        let bwt = bwt(text, &sa);
        let plcp = plcp_array(&sa, &lcp);
        Self {
            sa,
            isa,
            lcp,
            bwt,
            plcp,
        }
    }
}
