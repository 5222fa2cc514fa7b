//! Kolmogorov extension at finite depth. A tower is a family of probability
//! measures related by the odd-bit projection; its joint extension lives on
//! the inverse-limit space and is stored per level as a table over all
//! cylinders up to the level's depth.

use alloc::vec::Vec;

use num_traits::Signed;

use crate::measure::DyadicMeasure;
use crate::rat::{zero, Rat};
use crate::word::Word;
use crate::CoreError;

/// Levels ν_0 … ν_N with depths d_n = floor(d_{n+1}/2) and ν_n equal to the
/// odd-bit image of ν_{n+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistentTower {
    levels: Vec<DyadicMeasure>,
}

impl ConsistentTower {
    pub fn levels(&self) -> &[DyadicMeasure] {
        &self.levels
    }
}

/// Odd-bit image table of a measure, at depth floor(d/2). Unlike the public
/// marginal this accepts depth < 2, because ladders bottom out at depth 0.
fn odd_image_table(m: &DyadicMeasure) -> Vec<Rat> {
    let h = m.depth() / 2;
    let mut table = vec![zero(); 1 << h];
    for (rank, weight) in m.leaves().iter().enumerate() {
        let target = Word::new(m.depth(), rank as u64).odd_subword();
        table[target.rank() as usize] += weight;
    }
    table
}

/// The mismatch witness is the word where the most excess mass arrives from
/// above: argmax(marginal − declared), ties to the lexicographically first.
fn marginal_violation(
    level: usize,
    declared: &DyadicMeasure,
    marginal: &[Rat],
) -> Option<CoreError> {
    let mut worst: Option<(Rat, u64)> = None;
    for (rank, pushed) in marginal.iter().enumerate() {
        let excess = pushed - &declared.leaves()[rank];
        if excess.is_positive() {
            match &worst {
                Some((best, _)) if *best >= excess => {}
                _ => worst = Some((excess, rank as u64)),
            }
        }
    }
    worst.map(|(_, rank)| {
        let word = Word::new(declared.depth(), rank);
        CoreError::ConsistencyViolation {
            level,
            word,
            declared: declared.leaves()[rank as usize].clone(),
            marginal: marginal[rank as usize].clone(),
        }
    })
}

pub fn check_tower_consistency(
    levels: Vec<DyadicMeasure>,
) -> Result<ConsistentTower, CoreError> {
    if levels.is_empty() {
        return Err(CoreError::EmptySequence);
    }
    if levels.iter().any(|m| !m.is_probability()) {
        return Err(CoreError::NotProbability);
    }
    for n in 0..levels.len() - 1 {
        let expected = levels[n + 1].depth() / 2;
        if levels[n].depth() != expected {
            return Err(CoreError::DepthLadderBroken {
                index: n,
                found: levels[n].depth(),
                expected,
            });
        }
        let marginal = odd_image_table(&levels[n + 1]);
        if marginal != levels[n].leaves() {
            return Err(marginal_violation(n, &levels[n], &marginal).unwrap());
        }
    }
    Ok(ConsistentTower { levels })
}

/// Per-level cylinder tables of the joint extension: entry (n, w) is the
/// joint mass of the level-n pullback of M(w), which equals ν_n(M(w)).
/// Words of depth k are stored heap-style at offset 2^k − 1 + rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTowerJoint {
    depths: Vec<u8>,
    tables: Vec<Vec<Rat>>,
}

pub fn extend_tower(t: &ConsistentTower) -> DeltaTowerJoint {
    let mut depths = Vec::with_capacity(t.levels.len());
    let mut tables = Vec::with_capacity(t.levels.len());
    for level in &t.levels {
        let d = level.depth();
        let mut table = Vec::with_capacity((1usize << (d + 1)) - 1);
        for k in 0..=d {
            for w in Word::empty().extensions(k) {
                table.push(level.word_mass(w).unwrap());
            }
        }
        depths.push(d);
        tables.push(table);
    }
    DeltaTowerJoint { depths, tables }
}

impl DeltaTowerJoint {
    pub fn level_count(&self) -> usize {
        self.depths.len()
    }

    pub fn depth(&self, level: usize) -> u8 {
        self.depths[level]
    }

    pub fn mass(&self, level: usize, w: Word) -> Result<&Rat, CoreError> {
        if level >= self.depths.len() {
            return Err(CoreError::LevelTooDeep { level: level as u8, max: (self.depths.len() - 1) as u8 });
        }
        if w.depth() > self.depths[level] {
            return Err(CoreError::DepthExceeded { depth: w.depth(), max: self.depths[level] });
        }
        Ok(&self.tables[level][(1usize << w.depth()) - 1 + w.rank() as usize])
    }

    /// Cross-level identity: the level-n mass of every word equals the sum
    /// of level-(n+1) masses over its odd-bit preimage words.
    pub fn verify_coherence(&self) -> Result<(), CoreError> {
        for n in 0..self.depths.len() - 1 {
            for k in 0..=self.depths[n] {
                for w in Word::empty().extensions(k) {
                    let mut sum = zero();
                    for u in Word::empty().extensions(k) {
                        sum += self.mass(n + 1, Word::interleave(u, w).unwrap())?;
                    }
                    if &sum != self.mass(n, w)? {
                        return Err(CoreError::ConsistencyViolation {
                            level: n,
                            word: w,
                            declared: self.mass(n, w)?.clone(),
                            marginal: sum,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// A compatible positive-mass word chain through (level, w): one word of
    /// full depth per level, consecutive levels related by odd-bit
    /// extraction, each carrying positive joint mass. Built by extending `w`
    /// to the lexicographically least positive full-depth word, then walking
    /// down by extraction and up by least positive preimage.
    pub fn witness_chain(&self, level: usize, w: Word) -> Result<Vec<Word>, CoreError> {
        if level >= self.depths.len() {
            return Err(CoreError::LevelTooDeep { level: level as u8, max: (self.depths.len() - 1) as u8 });
        }
        if w.depth() > self.depths[level] {
            return Err(CoreError::DepthExceeded { depth: w.depth(), max: self.depths[level] });
        }
        let positive = |lvl: usize, v: Word| self.mass(lvl, v).unwrap().is_positive();
        if !positive(level, w) {
            return Err(CoreError::DimensionMismatch(
                "witness chain requires a positive-mass word",
            ));
        }
        let full = w
            .extensions(self.depths[level])
            .find(|&v| positive(level, v))
            .unwrap();
        let mut chain = vec![full];
        for lvl in (0..level).rev() {
            let prev = chain[0];
            debug_assert_eq!(prev.odd_subword().depth(), self.depths[lvl]);
            chain.insert(0, prev.odd_subword());
        }
        for lvl in level + 1..self.depths.len() {
            let prev = *chain.last().unwrap();
            // the odd image of the level above sums exactly over these
            // words, so a positive one exists
            let next = Word::empty()
                .extensions(self.depths[lvl])
                .find(|&v| v.odd_subword() == prev && positive(lvl, v))
                .unwrap();
            chain.push(next);
        }
        Ok(chain)
    }
}

/// Depth-n prefix marginals μ_1 … μ_N of a single measure in the making:
/// μ_n is a probability measure of depth n and refines to μ_{n+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTower {
    marginals: Vec<DyadicMeasure>,
}

impl PrefixTower {
    pub fn new(marginals: Vec<DyadicMeasure>) -> Result<PrefixTower, CoreError> {
        if marginals.is_empty() {
            return Err(CoreError::EmptySequence);
        }
        for (i, m) in marginals.iter().enumerate() {
            if m.depth() as usize != i + 1 {
                return Err(CoreError::DepthLadderBroken {
                    index: i,
                    found: m.depth(),
                    expected: (i + 1) as u8,
                });
            }
            if !m.is_probability() {
                return Err(CoreError::NotProbability);
            }
        }
        Ok(PrefixTower { marginals })
    }

    pub fn marginals(&self) -> &[DyadicMeasure] {
        &self.marginals
    }
}

/// The unique common extension of a prefix tower, which is simply its
/// deepest level once every coarser marginal matches. Violations are
/// reported against the 1-based level numbering of the marginals.
pub fn kolmogorov_extend_prefix(t: &PrefixTower) -> Result<DyadicMeasure, CoreError> {
    for n in 0..t.marginals.len() - 1 {
        let fine = &t.marginals[n + 1];
        let mut marginal = vec![zero(); 1 << (n + 1)];
        for (rank, weight) in fine.leaves().iter().enumerate() {
            marginal[rank >> 1] += weight;
        }
        if marginal != t.marginals[n].leaves() {
            return Err(marginal_violation(n + 1, &t.marginals[n], &marginal).unwrap());
        }
    }
    Ok(t.marginals.last().unwrap().clone())
}
