//! Balanced and Huffman-shaped wavelet trees over byte strings.
//!
//! Each internal node stores a bitvector over the symbols routed through it
//! (0 = left subtree, 1 = right). The tree is generic over the bitvector
//! [`Backend`], so plain and hybrid trees share one implementation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bits::PackedBits;
use crate::error::{check_pos, Error, Result};
use crate::par::{self, Execution};
use crate::rank_select::{Backend, RankSelect};
use crate::serial::{self, ByteReader};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Fixed-width codes; each node splits its sorted symbol range in half.
    Balanced,
    /// Huffman codes of the symbol frequencies.
    Huffman,
}

impl Shape {
    fn tag(self) -> u8 {
        match self {
            Shape::Balanced => 0,
            Shape::Huffman => 1,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Shape::Balanced),
            1 => Ok(Shape::Huffman),
            t => Err(Error::Corrupt(format!("unknown wavelet tree shape {t}"))),
        }
    }
}

/// Shape of the code tree, without bitvectors.
#[derive(Clone, Debug, PartialEq, Eq)]
enum CodeTree {
    Leaf(u8),
    Internal(Box<[CodeTree; 2]>),
}

impl CodeTree {
    fn balanced(symbols: &[u8]) -> Self {
        if symbols.len() == 1 {
            return CodeTree::Leaf(symbols[0]);
        }
        let mid = symbols.len() / 2;
        CodeTree::Internal(Box::new([
            Self::balanced(&symbols[..mid]),
            Self::balanced(&symbols[mid..]),
        ]))
    }

    /// Ties are broken by the smallest symbol in each subtree; the first
    /// tree popped becomes the left child.
    fn huffman(freqs: &[usize; 256]) -> Self {
        let mut trees: Vec<Option<CodeTree>> = Vec::new();
        let mut heap = BinaryHeap::new();
        for (sym, &f) in freqs.iter().enumerate() {
            if f > 0 {
                heap.push(Reverse((f, sym as u8, trees.len())));
                trees.push(Some(CodeTree::Leaf(sym as u8)));
            }
        }
        while heap.len() > 1 {
            let Reverse((fa, sa, a)) = heap.pop().unwrap();
            let Reverse((fb, sb, b)) = heap.pop().unwrap();
            let node = CodeTree::Internal(Box::new([
                trees[a].take().unwrap(),
                trees[b].take().unwrap(),
            ]));
            heap.push(Reverse((fa + fb, sa.min(sb), trees.len())));
            trees.push(Some(node));
        }
        let Reverse((_, _, root)) = heap.pop().expect("nonempty alphabet");
        trees[root].take().unwrap()
    }

    fn collect_codes(&self, prefix: &mut Vec<bool>, codes: &mut [Option<Vec<bool>>]) {
        match self {
            CodeTree::Leaf(s) => codes[*s as usize] = Some(prefix.clone()),
            CodeTree::Internal(children) => {
                for (bit, child) in children.iter().enumerate() {
                    prefix.push(bit == 1);
                    child.collect_codes(prefix, codes);
                    prefix.pop();
                }
            }
        }
    }

    /// Rebuilds the tree from a code table; fails unless the codes form a
    /// complete prefix-free code.
    fn from_codes(codes: &[(u8, Vec<bool>)]) -> Result<Self> {
        fn go(codes: &[(u8, &[bool])]) -> Result<CodeTree> {
            match codes {
                [] => Err(Error::Corrupt("code table is not complete".into())),
                [(s, [])] => Ok(CodeTree::Leaf(*s)),
                _ => {
                    if codes.iter().any(|(_, c)| c.is_empty()) {
                        return Err(Error::Corrupt("code table is not prefix-free".into()));
                    }
                    let split = |b: bool| -> Vec<(u8, &[bool])> {
                        codes.iter().filter(|(_, c)| c[0] == b).map(|(s, c)| (*s, &c[1..])).collect()
                    };
                    Ok(CodeTree::Internal(Box::new([go(&split(false))?, go(&split(true))?])))
                }
            }
        }
        let borrowed: Vec<(u8, &[bool])> = codes.iter().map(|(s, c)| (*s, c.as_slice())).collect();
        go(&borrowed)
    }
}

enum Node<B> {
    Leaf(u8),
    Internal { bits: B, children: Box<[Node<B>; 2]> },
}

/// Wavelet tree over a byte string. Positions are 1-based.
pub struct WaveletTree<B> {
    shape: Shape,
    len: usize,
    alphabet: Vec<u8>,
    codes: Vec<Option<Vec<bool>>>,
    counts: Vec<usize>,
    root: Node<B>,
}

impl<B: Backend> WaveletTree<B> {
    pub fn build(seq: &[u8], shape: Shape, config: &B::Config) -> Result<Self> {
        Self::build_with(seq, shape, config, Execution::default())
    }

    /// Builds with an explicit execution mode; sibling subtrees are built in
    /// parallel when enabled.
    pub fn build_with(seq: &[u8], shape: Shape, config: &B::Config, exec: Execution) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut freqs = [0usize; 256];
        for &c in seq {
            freqs[c as usize] += 1;
        }
        let alphabet: Vec<u8> = (0..=255u8).filter(|&c| freqs[c as usize] > 0).collect();
        let tree = match shape {
            Shape::Balanced => CodeTree::balanced(&alphabet),
            Shape::Huffman => CodeTree::huffman(&freqs),
        };
        let mut codes = vec![None; 256];
        tree.collect_codes(&mut Vec::new(), &mut codes);
        let root = build_node::<B>(&tree, seq.to_vec(), config, exec)?;
        Ok(Self {
            shape,
            len: seq.len(),
            alphabet,
            codes,
            counts: freqs.to_vec(),
            root,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Occurring symbols in increasing order.
    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    /// Code of `symbol` (false = left), if it occurs.
    pub fn code(&self, symbol: u8) -> Option<&[bool]> {
        self.codes[symbol as usize].as_deref()
    }

    /// Occurrences of `symbol` in the whole string.
    pub fn count(&self, symbol: u8) -> usize {
        self.counts[symbol as usize]
    }

    /// Bitvector of the node reached by following `path` from the root.
    pub fn node_bits(&self, path: &[bool]) -> Option<&B> {
        let mut node = &self.root;
        for &b in path {
            match node {
                Node::Internal { children, .. } => node = &children[b as usize],
                Node::Leaf(_) => return None,
            }
        }
        match node {
            Node::Internal { bits, .. } => Some(bits),
            Node::Leaf(_) => None,
        }
    }

    /// Sum of the lengths of all node bitvectors.
    pub fn total_bits(&self) -> usize {
        fn go<B: RankSelect>(n: &Node<B>) -> usize {
            match n {
                Node::Leaf(_) => 0,
                Node::Internal { bits, children } => bits.len() + go(&children[0]) + go(&children[1]),
            }
        }
        go(&self.root)
    }

    /// Symbol at position `i`.
    pub fn access(&self, i: usize) -> Result<u8> {
        check_pos(i, 1, self.len)?;
        let mut node = &self.root;
        let mut i = i;
        loop {
            match node {
                Node::Leaf(s) => return Ok(*s),
                Node::Internal { bits, children } => {
                    let b = bits.access(i)?;
                    i = bits.rank(b, i)?;
                    node = &children[b as usize];
                }
            }
        }
    }

    /// Occurrences of `symbol` in positions `1..=i`.
    pub fn rank(&self, symbol: u8, i: usize) -> Result<usize> {
        check_pos(i, 0, self.len)?;
        let Some(code) = self.code(symbol) else {
            return Ok(0);
        };
        let mut node = &self.root;
        let mut i = i;
        for &b in code {
            let Node::Internal { bits, children } = node else {
                unreachable!("code longer than tree path")
            };
            i = bits.rank(b, i)?;
            node = &children[b as usize];
        }
        Ok(i)
    }

    /// Position of the `j`-th occurrence of `symbol`, computed leaf to root
    /// with one bitvector select per level.
    pub fn select(&self, symbol: u8, j: usize) -> Result<usize> {
        let count = self.count(symbol);
        if j == 0 || j > count {
            return Err(Error::OccurrenceOutOfRange {
                symbol: symbol as u32,
                index: j,
                count,
            });
        }
        let code = self.code(symbol).unwrap();
        fn up<B: RankSelect>(node: &Node<B>, code: &[bool], j: usize) -> Result<usize> {
            match node {
                Node::Leaf(_) => Ok(j),
                Node::Internal { bits, children } => {
                    let b = code[0];
                    let below = up(&children[b as usize], &code[1..], j)?;
                    bits.select(b, below)
                }
            }
        }
        up(&self.root, code, j)
    }

    pub fn size_in_bytes(&self) -> usize {
        fn nodes<B: RankSelect>(n: &Node<B>) -> usize {
            match n {
                Node::Leaf(_) => 0,
                Node::Internal { bits, children } => {
                    bits.size_in_bytes() + nodes(&children[0]) + nodes(&children[1])
                }
            }
        }
        let codes: usize = self
            .alphabet
            .iter()
            .map(|&s| 2 + self.code(s).unwrap().len().div_ceil(8))
            .sum();
        1 + 8 + 2 + self.alphabet.len() + codes + nodes(&self.root)
    }

    /// Layout: shape tag u8, length u64, alphabet (count u16, symbols), code
    /// table (per symbol: bit length u16, bits packed LSB first), then every
    /// internal node's backend bitvector in preorder.
    pub fn write(&self, out: &mut Vec<u8>) {
        serial::put_u8(out, self.shape.tag());
        serial::put_u64(out, self.len as u64);
        serial::put_u16(out, self.alphabet.len() as u16);
        out.extend_from_slice(&self.alphabet);
        for &s in &self.alphabet {
            let code = self.code(s).unwrap();
            serial::put_u16(out, code.len() as u16);
            for chunk in code.chunks(8) {
                out.push(chunk.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (b as u8) << k));
            }
        }
        fn nodes<B: Backend>(n: &Node<B>, out: &mut Vec<u8>) {
            if let Node::Internal { bits, children } = n {
                bits.write(out);
                nodes(&children[0], out);
                nodes(&children[1], out);
            }
        }
        nodes(&self.root, out);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_in_bytes());
        self.write(&mut out);
        out
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let shape = Shape::from_tag(r.u8()?)?;
        let len = r.len_u64()?;
        let sigma = r.u16()? as usize;
        if sigma == 0 || sigma > 256 {
            return Err(Error::Corrupt(format!("alphabet size {sigma}")));
        }
        let alphabet = r.take(sigma)?.to_vec();
        if alphabet.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Corrupt("alphabet is not strictly increasing".into()));
        }
        let mut table = Vec::with_capacity(sigma);
        for &s in &alphabet {
            let bits = r.u16()? as usize;
            let packed = r.take(bits.div_ceil(8))?;
            let code: Vec<bool> = (0..bits).map(|k| (packed[k / 8] >> (k % 8)) & 1 == 1).collect();
            table.push((s, code));
        }
        let tree = CodeTree::from_codes(&table)?;
        fn nodes<B: Backend>(t: &CodeTree, expected: usize, r: &mut ByteReader<'_>) -> Result<Node<B>> {
            match t {
                CodeTree::Leaf(s) => Ok(Node::Leaf(*s)),
                CodeTree::Internal(children) => {
                    let bits = B::read(r)?;
                    if bits.len() != expected {
                        return Err(Error::Corrupt(format!(
                            "wavelet node holds {} bits, expected {expected}",
                            bits.len()
                        )));
                    }
                    let left = nodes(&children[0], bits.count(false), r)?;
                    let right = nodes(&children[1], bits.count(true), r)?;
                    Ok(Node::Internal {
                        bits,
                        children: Box::new([left, right]),
                    })
                }
            }
        }
        let root = nodes::<B>(&tree, len, r)?;
        let mut codes = vec![None; 256];
        tree.collect_codes(&mut Vec::new(), &mut codes);
        let mut wt = Self {
            shape,
            len,
            alphabet,
            codes,
            counts: vec![0; 256],
            root,
        };
        for &s in &wt.alphabet.clone() {
            wt.counts[s as usize] = wt.rank(s, len)?;
        }
        if wt.alphabet.len() > 1 && wt.alphabet.iter().any(|&s| wt.counts[s as usize] == 0) {
            return Err(Error::Corrupt("alphabet lists a symbol that never occurs".into()));
        }
        Ok(wt)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(bytes);
        let wt = Self::read(&mut r)?;
        r.finish()?;
        Ok(wt)
    }
}

fn build_node<B: Backend>(
    tree: &CodeTree,
    seq: Vec<u8>,
    config: &B::Config,
    exec: Execution,
) -> Result<Node<B>> {
    let CodeTree::Internal(children) = tree else {
        let CodeTree::Leaf(s) = tree else { unreachable!() };
        return Ok(Node::Leaf(*s));
    };
    let mut right_symbols = [false; 256];
    mark_symbols(&children[1], &mut right_symbols);
    let routing: PackedBits = seq.iter().map(|&c| right_symbols[c as usize]).collect();
    let (left, right): (Vec<u8>, Vec<u8>) = seq.iter().partition(|&&c| !right_symbols[c as usize]);
    drop(seq);
    let bits = B::build(&routing, config)?;
    drop(routing);
    let (l, r) = par::join(
        exec,
        || build_node::<B>(&children[0], left, config, exec),
        || build_node::<B>(&children[1], right, config, exec),
    );
    Ok(Node::Internal {
        bits,
        children: Box::new([l?, r?]),
    })
}

fn mark_symbols(tree: &CodeTree, marks: &mut [bool; 256]) {
    match tree {
        CodeTree::Leaf(s) => marks[*s as usize] = true,
        CodeTree::Internal(children) => {
            mark_symbols(&children[0], marks);
            mark_symbols(&children[1], marks);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{HybParams, HybVector, PlainBitVector};
    use proptest::prelude::*;

    fn bits_of<B: RankSelect>(bv: &B) -> String {
        (1..=bv.len())
            .map(|i| if bv.access(i).unwrap() { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn balanced_example_tree() {
        let wt = WaveletTree::<PlainBitVector>::build(b"abcabac", Shape::Balanced, &()).unwrap();
        assert_eq!(bits_of(wt.node_bits(&[]).unwrap()), "0110101");
        assert_eq!(bits_of(wt.node_bits(&[true]).unwrap()), "0101");
        assert!(wt.node_bits(&[false]).is_none());
        assert_eq!(wt.access(3).unwrap(), b'c');
        assert_eq!(wt.rank(b'a', 5).unwrap(), 2);
        assert_eq!(wt.rank(b'z', 5).unwrap(), 0);
        assert_eq!(wt.rank(b'a', 0).unwrap(), 0);
        assert!(wt.rank(b'a', 8).is_err());
    }

    #[test]
    fn bwt_select_example() {
        let bwt = b"annb\0aa";
        for shape in [Shape::Balanced, Shape::Huffman] {
            let wt = WaveletTree::<HybVector>::build(bwt, shape, &HybParams::default()).unwrap();
            assert_eq!(wt.select(b'a', 2).unwrap(), 6);
            assert_eq!(wt.select(b'a', 1).unwrap(), 1);
            assert_eq!(wt.select(0, 1).unwrap(), 5);
            assert!(wt.select(b'a', 4).is_err());
            assert!(wt.select(b'x', 1).is_err());
        }
    }

    #[test]
    fn single_symbol_string() {
        let wt = WaveletTree::<PlainBitVector>::build(b"zzzz", Shape::Huffman, &()).unwrap();
        assert!(wt.node_bits(&[]).is_none());
        assert_eq!(wt.total_bits(), 0);
        assert_eq!(wt.access(4).unwrap(), b'z');
        assert_eq!(wt.rank(b'z', 3).unwrap(), 3);
        assert_eq!(wt.select(b'z', 2).unwrap(), 2);
        let back = WaveletTree::<PlainBitVector>::from_bytes(&wt.to_bytes()).unwrap();
        assert_eq!(back.select(b'z', 4).unwrap(), 4);
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(
            WaveletTree::<PlainBitVector>::build(b"", Shape::Balanced, &()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn huffman_is_deterministic_and_prefix_free() {
        let s = b"mississippi river banks";
        let a = WaveletTree::<PlainBitVector>::build(s, Shape::Huffman, &()).unwrap();
        let b = WaveletTree::<PlainBitVector>::build(s, Shape::Huffman, &()).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes());
        let codes: Vec<&[bool]> = a.alphabet().iter().map(|&c| a.code(c).unwrap()).collect();
        for (x, cx) in codes.iter().enumerate() {
            for (y, cy) in codes.iter().enumerate() {
                if x != y {
                    assert!(!cy.starts_with(cx));
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip_and_corruption() {
        let s: Vec<u8> = (0..5000u32).map(|i| b"acgtn"[(i * i % 7 % 5) as usize]).collect();
        let wt = WaveletTree::<HybVector>::build(&s, Shape::Huffman, &HybParams::default()).unwrap();
        let bytes = wt.to_bytes();
        assert_eq!(bytes.len(), wt.size_in_bytes());
        let back = WaveletTree::<HybVector>::from_bytes(&bytes).unwrap();
        for i in (1..=s.len()).step_by(37) {
            assert_eq!(back.access(i).unwrap(), s[i - 1]);
        }
        let mut bad = bytes.clone();
        bad[0] = 9;
        assert!(WaveletTree::<HybVector>::from_bytes(&bad).is_err());
        assert!(WaveletTree::<HybVector>::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    fn check_tree<B: Backend>(s: &[u8], shape: Shape, cfg: &B::Config) -> Result<WaveletTree<B>> {
        let wt = WaveletTree::<B>::build(s, shape, cfg)?;
        let mut seen = [0usize; 256];
        for (i, &c) in s.iter().enumerate() {
            seen[c as usize] += 1;
            assert_eq!(wt.access(i + 1)?, c);
            assert_eq!(wt.rank(c, i + 1)?, seen[c as usize]);
            assert_eq!(wt.select(c, seen[c as usize])?, i + 1);
            if i % 11 == 0 {
                let total: usize = wt.alphabet().iter().map(|&a| wt.rank(a, i + 1).unwrap()).sum();
                assert_eq!(total, i + 1);
            }
        }
        Ok(wt)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn queries_match_scan(s in proptest::collection::vec(prop_oneof![0u8..4, 0u8..=255], 1..600)) {
            let p = check_tree::<PlainBitVector>(&s, Shape::Balanced, &()).unwrap();
            let h = check_tree::<PlainBitVector>(&s, Shape::Huffman, &()).unwrap();
            check_tree::<HybVector>(&s, Shape::Huffman, &HybParams::new(8).unwrap()).unwrap();
            check_tree::<HybVector>(&s, Shape::Balanced, &HybParams::new(64).unwrap()).unwrap();
            prop_assert!(h.total_bits() <= p.total_bits());
            // routing re-derived from codes
            let root = p.node_bits(&[]);
            if let Some(root) = root {
                for (i, &c) in s.iter().enumerate() {
                    prop_assert_eq!(root.access(i + 1).unwrap(), p.code(c).unwrap()[0]);
                }
            }
        }
    }
}
