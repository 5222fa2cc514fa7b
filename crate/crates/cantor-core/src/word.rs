//! Finite bit words: the prefixes (z_0, ..., z_{m-1}) that index basic cylinders.

use core::fmt;
use core::fmt::Write as _;

use alloc::vec::Vec;

use crate::CoreError;

/// A bit string of length `depth`, most significant bit first. `rank` is the
/// word read as a binary numeral, so rank order and lexicographic order agree
/// and the rank doubles as the leaf index at that depth. The `Ord` derive
/// compares `(depth, rank)`, which is exactly the canonical depth-then-lex
/// enumeration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    depth: u8,
    rank: u64,
}

impl Word {
    pub const MAX_DEPTH: u8 = 63;

    pub fn new(depth: u8, rank: u64) -> Word {
        assert!(depth <= Self::MAX_DEPTH, "word depth out of range");
        assert!(rank < 1u64 << depth, "rank out of range for depth");
        Word { depth, rank }
    }

    pub fn empty() -> Word {
        Word { depth: 0, rank: 0 }
    }

    pub fn depth(self) -> u8 {
        self.depth
    }

    pub fn rank(self) -> u64 {
        self.rank
    }

    /// Bit j, counted from the front of the word.
    pub fn bit(self, j: u8) -> u8 {
        debug_assert!(j < self.depth);
        ((self.rank >> (self.depth - 1 - j)) & 1) as u8
    }

    pub fn from_bits(bits: &[u8]) -> Word {
        assert!(bits.len() <= Self::MAX_DEPTH as usize);
        let mut rank = 0u64;
        for &b in bits {
            rank = (rank << 1) | (b as u64 & 1);
        }
        Word { depth: bits.len() as u8, rank }
    }

    pub fn bits(self) -> Vec<u8> {
        (0..self.depth).map(|j| self.bit(j)).collect()
    }

    pub fn child(self, b: u8) -> Word {
        Word::new(self.depth + 1, (self.rank << 1) | (b as u64 & 1))
    }

    pub fn prefix(self, len: u8) -> Word {
        assert!(len <= self.depth);
        Word { depth: len, rank: self.rank >> (self.depth - len) }
    }

    pub fn is_prefix_of(self, w: Word) -> bool {
        self.depth <= w.depth && w.prefix(self.depth) == self
    }

    /// Bits at odd positions 1, 3, 5, ...: the word-level action of the map
    /// that sends a point to its odd-indexed subsequence.
    pub fn odd_subword(self) -> Word {
        let h = self.depth / 2;
        let mut rank = 0u64;
        for i in 0..h {
            rank = (rank << 1) | self.bit(2 * i + 1) as u64;
        }
        Word { depth: h, rank }
    }

    /// Bits at even positions 0, 2, 4, ...
    pub fn even_subword(self) -> Word {
        let h = self.depth.div_ceil(2);
        let mut rank = 0u64;
        for i in 0..h {
            rank = (rank << 1) | self.bit(2 * i) as u64;
        }
        Word { depth: h, rank }
    }

    /// Theta at the word level: even output bits from `a`, odd ones from `b`.
    /// Dropping the even bits of the result recovers `b`.
    pub fn interleave(a: Word, b: Word) -> Result<Word, CoreError> {
        if a.depth != b.depth {
            return Err(CoreError::DepthMismatch(a.depth, b.depth));
        }
        assert!(a.depth <= Self::MAX_DEPTH / 2, "interleaved word too deep");
        let mut rank = 0u64;
        for i in 0..a.depth {
            rank = (rank << 2) | ((a.bit(i) as u64) << 1) | b.bit(i) as u64;
        }
        Ok(Word { depth: a.depth * 2, rank })
    }

    /// All depth-`depth` words extending this one, in lexicographic order.
    pub fn extensions(self, depth: u8) -> impl Iterator<Item = Word> {
        assert!(depth >= self.depth && depth <= Self::MAX_DEPTH);
        let k = depth - self.depth;
        let base = self.rank << k;
        (0..1u64 << k).map(move |i| Word { depth, rank: base + i })
    }

    /// The k-th nonempty basic cylinder (k >= 1) in the canonical enumeration:
    /// depth ascending, lexicographic within a depth. Stable across runs; the
    /// metric on measures and point configurations is summed along it.
    pub fn enumerate_basis(k: u64) -> Word {
        assert!(k >= 1, "basis enumeration starts at 1");
        let mut d = 1u8;
        while k > (1u64 << (d + 1)) - 2 {
            d += 1;
        }
        Word { depth: d, rank: k - ((1u64 << d) - 2) - 1 }
    }

    /// Position of a nonempty word in the canonical enumeration; inverse of
    /// `enumerate_basis`.
    pub fn basis_index(self) -> u64 {
        assert!(self.depth >= 1);
        (1u64 << self.depth) - 1 + self.rank
    }

    /// Accepts a bit string, or "e" for the empty word.
    pub fn parse(s: &str) -> Option<Word> {
        if s == "e" {
            return Some(Word::empty());
        }
        if s.is_empty() || s.len() > Self::MAX_DEPTH as usize {
            return None;
        }
        let mut rank = 0u64;
        for c in s.chars() {
            match c {
                '0' => rank <<= 1,
                '1' => rank = (rank << 1) | 1,
                _ => return None,
            }
        }
        Some(Word { depth: s.len() as u8, rank })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            return f.write_str("e");
        }
        for j in 0..self.depth {
            f.write_char(if self.bit(j) == 1 { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
