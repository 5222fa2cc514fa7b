//! Finite point processes at depth d: an ℕ-valued measure with total mass n
//! is the same thing as a size-n multiset of depth-d leaves. Counting,
//! pushforward along total word maps, the compact metric over the canonical
//! cylinder enumeration, and the finite shadow of sequential compactness.

use alloc::vec::Vec;

use crate::cylinder::CylinderSet;
use crate::rat::{half_pow, rat_int, zero, Rat};
use crate::word::Word;
use crate::CoreError;

/// Multiset of depth-d words, kept sorted; equality is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    depth: u8,
    points: Vec<Word>,
}

impl PointConfig {
    pub fn new(depth: u8, mut points: Vec<Word>) -> Result<PointConfig, CoreError> {
        for p in &points {
            if p.depth() != depth {
                return Err(CoreError::DepthMismatch(depth, p.depth()));
            }
        }
        points.sort();
        Ok(PointConfig { depth, points })
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn points(&self) -> &[Word] {
        &self.points
    }

    pub fn total(&self) -> usize {
        self.points.len()
    }

    /// Points falling in the set, with multiplicity; additive over disjoint
    /// cylinder sets.
    pub fn count(&self, s: &CylinderSet) -> Result<usize, CoreError> {
        if s.depth() > self.depth {
            return Err(CoreError::DepthExceeded { depth: s.depth(), max: self.depth });
        }
        Ok(self.points.iter().filter(|&&p| s.contains_extension(p)).count())
    }

    fn basic_count(&self, w: Word) -> usize {
        self.points.iter().filter(|&&p| p.prefix(w.depth()) == w).count()
    }
}

/// Partial sum Σ_{k≤K} 2^{-k} |p(C_k) - q(C_k)| over the canonical cylinder
/// enumeration; a metric on depth-d configurations once K covers every basic
/// cylinder of depth ≤ d.
pub fn rho_pp(p: &PointConfig, q: &PointConfig, terms: u64) -> Result<Rat, CoreError> {
    if p.depth != q.depth {
        return Err(CoreError::DepthMismatch(p.depth, q.depth));
    }
    let mut sum = zero();
    for k in 1..=terms {
        let w = Word::enumerate_basis(k);
        if w.depth() > p.depth {
            return Err(CoreError::DepthExceeded { depth: w.depth(), max: p.depth });
        }
        let gap = p.basic_count(w).abs_diff(q.basic_count(w));
        if gap > 0 {
            sum += half_pow(k) * rat_int(gap as i64);
        }
    }
    Ok(sum)
}

/// Total map from depth-d words to depth-e words, tabulated by source rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMap {
    source_depth: u8,
    target_depth: u8,
    table: Vec<Word>,
}

impl WordMap {
    /// Builds from explicit pairs; every depth-d source must appear exactly
    /// once and all targets must share one depth.
    pub fn from_table(source_depth: u8, pairs: &[(Word, Word)]) -> Result<WordMap, CoreError> {
        let target_depth = match pairs.first() {
            Some(&(_, t)) => t.depth(),
            None if source_depth == 0 => return Err(CoreError::PartialMap(Word::empty())),
            None => return Err(CoreError::PartialMap(Word::new(source_depth, 0))),
        };
        let mut table: Vec<Option<Word>> = vec![None; 1usize << source_depth];
        for &(s, t) in pairs {
            if s.depth() != source_depth {
                return Err(CoreError::DepthMismatch(source_depth, s.depth()));
            }
            if t.depth() != target_depth {
                return Err(CoreError::DepthMismatch(target_depth, t.depth()));
            }
            if table[s.rank() as usize].is_some() {
                return Err(CoreError::DimensionMismatch("duplicate source word in map table"));
            }
            table[s.rank() as usize] = Some(t);
        }
        for (rank, slot) in table.iter().enumerate() {
            if slot.is_none() {
                return Err(CoreError::PartialMap(Word::new(source_depth, rank as u64)));
            }
        }
        Ok(WordMap {
            source_depth,
            target_depth,
            table: table.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn identity(depth: u8) -> WordMap {
        WordMap {
            source_depth: depth,
            target_depth: depth,
            table: Word::empty().extensions(depth).collect(),
        }
    }

    /// Odd-bit extraction: each source word maps to its odd subword.
    pub fn delta(source_depth: u8) -> WordMap {
        WordMap {
            source_depth,
            target_depth: source_depth / 2,
            table: Word::empty()
                .extensions(source_depth)
                .map(Word::odd_subword)
                .collect(),
        }
    }

    pub fn constant(source_depth: u8, target: Word) -> WordMap {
        WordMap {
            source_depth,
            target_depth: target.depth(),
            table: vec![target; 1usize << source_depth],
        }
    }

    pub fn source_depth(&self) -> u8 {
        self.source_depth
    }

    pub fn target_depth(&self) -> u8 {
        self.target_depth
    }

    pub fn apply(&self, w: Word) -> Word {
        debug_assert_eq!(w.depth(), self.source_depth);
        self.table[w.rank() as usize]
    }

    /// g∘f: first `f`, then `g`.
    pub fn compose(g: &WordMap, f: &WordMap) -> Result<WordMap, CoreError> {
        if f.target_depth != g.source_depth {
            return Err(CoreError::DepthMismatch(f.target_depth, g.source_depth));
        }
        Ok(WordMap {
            source_depth: f.source_depth,
            target_depth: g.target_depth,
            table: f.table.iter().map(|&t| g.apply(t)).collect(),
        })
    }
}

/// Multiset image: the pushforward measure p∘f⁻¹. Preserves the total count.
pub fn pp_pushforward(p: &PointConfig, f: &WordMap) -> Result<PointConfig, CoreError> {
    if f.source_depth != p.depth {
        return Err(CoreError::DepthMismatch(p.depth, f.source_depth));
    }
    PointConfig::new(f.target_depth, p.points.iter().map(|&w| f.apply(w)).collect())
}

/// Depth-d size-n configurations form a finite set, so every sequence has a
/// constant subsequence. Returns the indices of the most frequent value
/// (earliest first occurrence on frequency ties) and that value.
pub fn pp_extract(seq: &[PointConfig]) -> Result<(Vec<usize>, PointConfig), CoreError> {
    let Some(first) = seq.first() else {
        return Err(CoreError::EmptySequence);
    };
    for p in seq {
        if p.depth != first.depth {
            return Err(CoreError::DepthMismatch(first.depth, p.depth));
        }
        if p.total() != first.total() {
            return Err(CoreError::MixedTotals);
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for (i, p) in seq.iter().enumerate() {
        if seq[..i].contains(p) {
            continue;
        }
        let count = seq[i..].iter().filter(|&q| q == p).count();
        if best.map_or(true, |(_, c)| count > c) {
            best = Some((i, count));
        }
    }
    let (repr, _) = best.unwrap();
    let indices = (0..seq.len()).filter(|&i| seq[i] == seq[repr]).collect();
    Ok((indices, seq[repr].clone()))
}
