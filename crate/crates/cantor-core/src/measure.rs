//! Exact finite-depth measures on Cantor space: a depth-d measure is a table
//! of 2^d nonnegative rational leaf weights, one per depth-d word, which
//! determines the measure of every cylinder of depth at most d by finite
//! additivity.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Signed;

use crate::cylinder::CylinderSet;
use crate::rat::{half_pow, one, zero, Rat};
use crate::word::Word;
use crate::CoreError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicMeasure {
    depth: u8,
    leaves: Vec<Rat>,
    mass: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl DyadicMeasure {
    pub fn from_leaf_weights(
        depth: u8,
        weights: Vec<Rat>,
        declared_mass: Rat,
    ) -> Result<DyadicMeasure, CoreError> {
        if weights.len() != 1usize << depth {
            return Err(CoreError::DimensionMismatch("leaf count does not match the depth"));
        }
        for (rank, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(CoreError::NegativeWeight(Word::new(depth, rank as u64)));
            }
        }
        let actual: Rat = weights.iter().sum();
        if actual != declared_mass {
            return Err(CoreError::MassMismatch { declared: declared_mass, actual });
        }
        Ok(DyadicMeasure { depth, leaves: weights, mass: declared_mass })
    }

    /// Internal constructor for tables already known to be nonnegative.
    pub(crate) fn from_table(depth: u8, leaves: Vec<Rat>) -> DyadicMeasure {
        debug_assert_eq!(leaves.len(), 1usize << depth);
        let mass = leaves.iter().sum();
        DyadicMeasure { depth, leaves, mass }
    }

    pub fn uniform(depth: u8) -> DyadicMeasure {
        let w = half_pow(depth as u64);
        DyadicMeasure { depth, leaves: vec![w; 1 << depth], mass: one() }
    }

    pub fn point_mass(w: Word) -> DyadicMeasure {
        let mut leaves = vec![zero(); 1 << w.depth()];
        leaves[w.rank() as usize] = one();
        DyadicMeasure { depth: w.depth(), leaves, mass: one() }
    }

    pub fn zero_measure(depth: u8) -> DyadicMeasure {
        DyadicMeasure { depth, leaves: vec![zero(); 1 << depth], mass: zero() }
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn leaves(&self) -> &[Rat] {
        &self.leaves
    }

    pub fn leaf(&self, w: Word) -> &Rat {
        debug_assert_eq!(w.depth(), self.depth);
        &self.leaves[w.rank() as usize]
    }

    pub fn mass(&self) -> &Rat {
        &self.mass
    }

    pub fn is_probability(&self) -> bool {
        self.mass == one()
    }

    /// Mass of the basic cylinder of `w`, for any `w` of depth ≤ the table
    /// depth: the sum of the leaf block below `w`.
    pub fn word_mass(&self, w: Word) -> Result<Rat, CoreError> {
        if w.depth() > self.depth {
            return Err(CoreError::DepthExceeded { depth: w.depth(), max: self.depth });
        }
        let width = 1usize << (self.depth - w.depth());
        let start = (w.rank() as usize) << (self.depth - w.depth());
        Ok(self.leaves[start..start + width].iter().sum())
    }

    pub fn cylinder_mass(&self, s: &CylinderSet) -> Result<Rat, CoreError> {
        if s.depth() > self.depth {
            return Err(CoreError::DepthExceeded { depth: s.depth(), max: self.depth });
        }
        let mut total = zero();
        for &w in s.words() {
            total += self.word_mass(w)?;
        }
        Ok(total)
    }

    /// Image measure under the bit-selection map of the given parity, at
    /// depth floor(d/2): odd keeps bits 1, 3, …; even keeps bits 0, 2, ….
    /// Total mass is preserved.
    pub fn bit_marginal(&self, parity: Parity) -> Result<DyadicMeasure, CoreError> {
        if self.depth < 2 {
            return Err(CoreError::DepthTooSmall);
        }
        let h = self.depth / 2;
        let mut leaves = vec![zero(); 1 << h];
        for (rank, weight) in self.leaves.iter().enumerate() {
            let w = Word::new(self.depth, rank as u64);
            let target = match parity {
                Parity::Odd => w.odd_subword(),
                Parity::Even => w.even_subword().prefix(h),
            };
            leaves[target.rank() as usize] += weight;
        }
        Ok(DyadicMeasure::from_table(h, leaves))
    }

    /// Joint law of a pair of independent probability measures transported
    /// along bit interleaving: the leaf at interleave(u, v) weighs a(u)·b(v).
    pub fn product_interleaved(
        a: &DyadicMeasure,
        b: &DyadicMeasure,
    ) -> Result<DyadicMeasure, CoreError> {
        if a.depth != b.depth {
            return Err(CoreError::DepthMismatch(a.depth, b.depth));
        }
        if !a.is_probability() || !b.is_probability() {
            return Err(CoreError::NotProbability);
        }
        let mut leaves = vec![zero(); 1usize << (2 * a.depth)];
        for u in Word::empty().extensions(a.depth) {
            for v in Word::empty().extensions(b.depth) {
                let w = Word::interleave(u, v).unwrap();
                leaves[w.rank() as usize] = a.leaf(u) * b.leaf(v);
            }
        }
        Ok(DyadicMeasure::from_table(2 * a.depth, leaves))
    }

    /// Truncated cylinder metric: the sum over the first `terms` canonically
    /// enumerated basic cylinders of 2^{-k} times the mass difference.
    pub fn rho_distance(
        a: &DyadicMeasure,
        b: &DyadicMeasure,
        terms: u64,
    ) -> Result<Rat, CoreError> {
        if a.depth != b.depth {
            return Err(CoreError::DepthMismatch(a.depth, b.depth));
        }
        let mut total = zero();
        for k in 1..=terms {
            let c = Word::enumerate_basis(k);
            if c.depth() > a.depth {
                return Err(CoreError::DepthExceeded { depth: c.depth(), max: a.depth });
            }
            let diff = a.word_mass(c)? - b.word_mass(c)?;
            total += half_pow(k) * diff.abs();
        }
        Ok(total)
    }

    /// Restriction-to-support check: accepts the measure unchanged when it
    /// puts no mass outside `support`, otherwise reports the first excluded
    /// word carrying positive mass.
    pub fn pullback_exact(
        &self,
        support: &CylinderSet,
    ) -> Result<DyadicMeasure, CoreError> {
        if support.depth() > self.depth {
            return Err(CoreError::DepthExceeded { depth: support.depth(), max: self.depth });
        }
        for (rank, weight) in self.leaves.iter().enumerate() {
            let w = Word::new(self.depth, rank as u64);
            if !support.contains_extension(w) && weight.is_positive() {
                return Err(CoreError::NotThick { word: w, mass: weight.clone() });
            }
        }
        Ok(self.clone())
    }

    /// Best level-n approximations of a target set from inside and outside:
    /// inner sums the level-n cells contained in the target, outer the cells
    /// meeting it.
    pub fn inner_outer(
        &self,
        sub_level: u8,
        target: &CylinderSet,
    ) -> Result<(Rat, Rat), CoreError> {
        if sub_level > self.depth {
            return Err(CoreError::LevelExceeded { level: sub_level, depth: self.depth });
        }
        if target.depth() > self.depth {
            return Err(CoreError::DepthExceeded { depth: target.depth(), max: self.depth });
        }
        let d = sub_level.max(target.depth());
        let fine = target.refine(d).unwrap();
        let mut inner = zero();
        let mut outer = zero();
        for cell in Word::empty().extensions(sub_level) {
            let mut meets = false;
            let mut inside = true;
            for v in cell.extensions(d) {
                if fine.contains(v) {
                    meets = true;
                } else {
                    inside = false;
                }
            }
            if inside {
                inner += self.word_mass(cell)?;
            }
            if meets {
                outer += self.word_mass(cell)?;
            }
        }
        Ok((inner, outer))
    }
}

/// A nonempty sequence of equal-depth, equal-mass measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSeq {
    items: Vec<DyadicMeasure>,
}

impl MeasureSeq {
    pub fn new(items: Vec<DyadicMeasure>) -> Result<MeasureSeq, CoreError> {
        let first = items.first().ok_or(CoreError::EmptySequence)?;
        let (depth, mass) = (first.depth, first.mass.clone());
        for m in &items {
            if m.depth != depth {
                return Err(CoreError::DepthMismatch(depth, m.depth));
            }
            if m.mass != mass {
                return Err(CoreError::MassMismatch { declared: mass, actual: m.mass.clone() });
            }
        }
        Ok(MeasureSeq { items })
    }

    pub fn items(&self) -> &[DyadicMeasure] {
        &self.items
    }
}

/// Indices (into `values`) of the retained subsequence for one coordinate:
/// the positions of the most frequent value when any value repeats (ties to
/// the value seen first), otherwise the longest weakly monotone subsequence,
/// preferring non-decreasing and then the lexicographically smallest index
/// tuple.
fn stable_subsequence(values: &[&Rat]) -> Vec<usize> {
    let mut distinct: Vec<(&Rat, Vec<usize>)> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match distinct.iter_mut().find(|(u, _)| u == v) {
            Some((_, idx)) => idx.push(i),
            None => distinct.push((v, vec![i])),
        }
    }
    if distinct.iter().any(|(_, idx)| idx.len() > 1) {
        let best = distinct.iter().map(|(_, idx)| idx.len()).max().unwrap();
        // first-seen order breaks frequency ties
        let (_, idx) = distinct.iter().find(|(_, idx)| idx.len() == best).unwrap();
        return idx.clone();
    }
    let nondecreasing = longest_monotone(values, Ordering::Greater);
    let nonincreasing = longest_monotone(values, Ordering::Less);
    // non-decreasing wins length ties
    if nonincreasing.len() > nondecreasing.len() {
        nonincreasing
    } else {
        nondecreasing
    }
}

/// Longest subsequence avoiding the forbidden strict ordering between
/// consecutive elements (Greater forbidden = non-decreasing). Among equal
/// lengths the lexicographically smallest index tuple wins; computed by a
/// backwards DP keeping, per start index, the best tail.
fn longest_monotone(values: &[&Rat], forbidden: Ordering) -> Vec<usize> {
    let n = values.len();
    let mut best_tail: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        let mut best: Vec<usize> = Vec::new();
        for j in i + 1..n {
            if values[i].cmp(values[j]) != forbidden
                && (best_tail[j].len() > best.len()
                    || (best_tail[j].len() == best.len() && best_tail[j] < best))
            {
                best = best_tail[j].clone();
            }
        }
        let mut tail = Vec::with_capacity(best.len() + 1);
        tail.push(i);
        tail.extend_from_slice(&best);
        best_tail[i] = tail;
    }
    best_tail
        .into_iter()
        .reduce(|acc, t| {
            if t.len() > acc.len() || (t.len() == acc.len() && t < acc) {
                t
            } else {
                acc
            }
        })
        .unwrap_or_default()
}

/// Value-stabilizing extraction: walks the canonically enumerated cylinders
/// in order, repeatedly restricting the index set so that each cylinder's
/// mass sequence is constant-valued or weakly monotone along the retained
/// indices. Returns the retained indices and the final retained measure.
pub fn diagonal_extract(seq: &MeasureSeq) -> Result<(Vec<usize>, DyadicMeasure), CoreError> {
    let items = seq.items();
    let depth = items[0].depth;
    let mut kept: Vec<usize> = (0..items.len()).collect();
    let coords = if depth == 0 { 0 } else { (1u64 << (depth + 1)) - 2 };
    for k in 1..=coords {
        if kept.len() <= 1 {
            break;
        }
        let c = Word::enumerate_basis(k);
        let values: Vec<Rat> = kept
            .iter()
            .map(|&i| items[i].word_mass(c).unwrap())
            .collect();
        let refs: Vec<&Rat> = values.iter().collect();
        let chosen = stable_subsequence(&refs);
        kept = chosen.into_iter().map(|i| kept[i]).collect();
    }
    let limit = items[*kept.last().unwrap()].clone();
    Ok((kept, limit))
}
