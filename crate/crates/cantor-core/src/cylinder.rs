//! Cylinder sets at a fixed depth, and the bit-manipulation maps that act on
//! them: odd-bit extraction, interleaving, and the binary-expansion map into
//! [0, 1].

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::rat::{half_pow, Rat};
use crate::word::Word;
use crate::CoreError;

/// A finite union of basic cylinders, stored as the exact set of depth-`depth`
/// words it contains. The word list is sorted and duplicate-free; replacing
/// every word by both of its children denotes the same subset of M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderSet {
    depth: u8,
    words: Vec<Word>,
}

impl CylinderSet {
    pub fn new(depth: u8, mut words: Vec<Word>) -> Result<CylinderSet, CoreError> {
        for w in &words {
            if w.depth() != depth {
                return Err(CoreError::DepthMismatch(depth, w.depth()));
            }
        }
        words.sort();
        words.dedup();
        Ok(CylinderSet { depth, words })
    }

    pub fn empty(depth: u8) -> CylinderSet {
        CylinderSet { depth, words: Vec::new() }
    }

    pub fn full(depth: u8) -> CylinderSet {
        CylinderSet { depth, words: Word::empty().extensions(depth).collect() }
    }

    pub fn single(w: Word) -> CylinderSet {
        CylinderSet { depth: w.depth(), words: vec![w] }
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: Word) -> bool {
        w.depth() == self.depth && self.words.binary_search(&w).is_ok()
    }

    /// Whether the basic cylinder of `w` lies inside this set; `w` must be at
    /// least as deep as the set.
    pub fn contains_extension(&self, w: Word) -> bool {
        w.depth() >= self.depth && self.contains(w.prefix(self.depth))
    }

    /// The same subset of M, re-expressed at a greater depth.
    pub fn refine(&self, depth: u8) -> Result<CylinderSet, CoreError> {
        if depth < self.depth {
            return Err(CoreError::TargetDepthTooSmall { current: self.depth, target: depth });
        }
        let mut words = Vec::with_capacity(self.words.len() << (depth - self.depth));
        for w in &self.words {
            words.extend(w.extensions(depth));
        }
        // extensions of sorted distinct prefixes arrive already sorted
        Ok(CylinderSet { depth, words })
    }

    fn at_common_depth(a: &CylinderSet, b: &CylinderSet) -> (CylinderSet, CylinderSet) {
        let d = a.depth.max(b.depth);
        (a.refine(d).unwrap(), b.refine(d).unwrap())
    }

    pub fn union(&self, other: &CylinderSet) -> CylinderSet {
        let (a, b) = Self::at_common_depth(self, other);
        let mut words = a.words;
        words.extend(b.words);
        words.sort();
        words.dedup();
        CylinderSet { depth: a.depth, words }
    }

    pub fn intersect(&self, other: &CylinderSet) -> CylinderSet {
        let (a, b) = Self::at_common_depth(self, other);
        let words = a.words.iter().copied().filter(|w| b.contains(*w)).collect();
        CylinderSet { depth: a.depth, words }
    }

    pub fn difference(&self, other: &CylinderSet) -> CylinderSet {
        let (a, b) = Self::at_common_depth(self, other);
        let words = a.words.iter().copied().filter(|w| !b.contains(*w)).collect();
        CylinderSet { depth: a.depth, words }
    }

    pub fn complement(&self) -> CylinderSet {
        let words = Word::empty()
            .extensions(self.depth)
            .filter(|w| !self.contains(*w))
            .collect();
        CylinderSet { depth: self.depth, words }
    }

    /// Preimage under odd-bit extraction, at twice the depth: M(w) pulls back
    /// to the union over all even-bit fillers u of M(interleave(u, w)).
    pub fn delta_preimage(&self) -> CylinderSet {
        let mut words = Vec::with_capacity(self.words.len() << self.depth);
        for &m in &self.words {
            for u in Word::empty().extensions(self.depth) {
                words.push(Word::interleave(u, m).unwrap());
            }
        }
        words.sort();
        CylinderSet { depth: self.depth * 2, words }
    }
}

/// A dyadic subinterval of [0, 1]: the closure of the image of a basic
/// cylinder under z -> sum 2^{-n-1} z_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: Rat,
    pub hi: Rat,
}

pub fn binary_interval(c: Word) -> Result<DyadicInterval, CoreError> {
    if c.depth() == 0 {
        return Err(CoreError::EmptyWord);
    }
    let lo = Rat::new(BigInt::from(c.rank()), BigInt::one() << c.depth());
    let hi = &lo + half_pow(c.depth() as u64);
    Ok(DyadicInterval { lo, hi })
}

/// Reassembles a single word from a finite family: output bit n is bit k of
/// component s, where (s, k) = pairing[n]. With two components and the
/// round-robin pairing this is exactly `Word::interleave`.
pub fn interleave_map(words: &[Word], pairing: &[(usize, usize)]) -> Result<Word, CoreError> {
    if words.is_empty() {
        return Err(CoreError::EmptySequence);
    }
    let d = words[0].depth();
    for w in words {
        if w.depth() != d {
            return Err(CoreError::DepthMismatch(d, w.depth()));
        }
    }
    let total = words.len() * d as usize;
    if total > Word::MAX_DEPTH as usize {
        return Err(CoreError::DimensionMismatch(
            "interleaving exceeds the supported word depth",
        ));
    }
    let mut used = vec![false; total];
    let mut bits = Vec::with_capacity(total);
    for n in 0..total {
        let &(s, k) = pairing.get(n).ok_or(CoreError::PairingIncomplete(n))?;
        if s >= words.len() || k >= d as usize {
            return Err(CoreError::PairingIncomplete(n));
        }
        let idx = s * d as usize + k;
        if used[idx] {
            // a reused source bit necessarily leaves some other bit unplaced
            return Err(CoreError::PairingIncomplete(n));
        }
        used[idx] = true;
        bits.push(words[s].bit(k as u8));
    }
    Ok(Word::from_bits(&bits))
}

/// The pairing n -> (n mod components, n div components).
pub fn round_robin_pairing(components: usize, depth: u8) -> Vec<(usize, usize)> {
    (0..components * depth as usize)
        .map(|n| (n % components, n / components))
        .collect()
}
