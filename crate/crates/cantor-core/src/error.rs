use core::fmt;

use crate::rat::{fmt_rat, Rat};
use crate::word::Word;

/// Everything the core operations can reject.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    TargetDepthTooSmall { current: u8, target: u8 },
    DepthMismatch(u8, u8),
    EmptyWord,
    PairingIncomplete(usize),
    GroundTooLarge(usize, usize),
    EmptySubset,
    DimensionMismatch(&'static str),
    NegativeWeight(Word),
    MassMismatch { declared: Rat, actual: Rat },
    DepthExceeded { depth: u8, max: u8 },
    DepthTooSmall,
    NotProbability,
    EmptySequence,
    NotThick { word: Word, mass: Rat },
    LevelExceeded { level: u8, depth: u8 },
    DepthLadderBroken { index: usize, found: u8, expected: u8 },
    ConsistencyViolation { level: usize, word: Word, declared: Rat, marginal: Rat },
    OddDepth(u8),
    LevelTooDeep { level: u8, max: u8 },
    LevelMismatch,
    PartialMap(Word),
    MixedTotals,
    EmptyTree,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CoreError::*;
        match self {
            TargetDepthTooSmall { current, target } => {
                write!(f, "cannot refine depth {current} down to {target}")
            }
            DepthMismatch(a, b) => write!(f, "depth mismatch: {a} vs {b}"),
            EmptyWord => write!(f, "the empty word denotes all of M and has no interval"),
            PairingIncomplete(n) => write!(f, "pairing leaves output bit {n} unplaced"),
            GroundTooLarge(n, max) => {
                write!(f, "ground set of {n} points exceeds the cap of {max}")
            }
            EmptySubset => write!(f, "trace over an empty subset"),
            DimensionMismatch(msg) => write!(f, "{msg}"),
            NegativeWeight(w) => write!(f, "negative weight at leaf {w}"),
            MassMismatch { declared, actual } => write!(
                f,
                "declared mass {} but leaves sum to {}",
                fmt_rat(declared),
                fmt_rat(actual)
            ),
            DepthExceeded { depth, max } => {
                write!(f, "depth {depth} exceeds the available depth {max}")
            }
            DepthTooSmall => write!(f, "operation needs depth at least 2"),
            NotProbability => write!(f, "not a probability measure"),
            EmptySequence => write!(f, "empty sequence"),
            NotThick { word, mass } => {
                write!(f, "support misses leaf {word} carrying mass {}", fmt_rat(mass))
            }
            LevelExceeded { level, depth } => {
                write!(f, "level {level} exceeds measure depth {depth}")
            }
            DepthLadderBroken { index, found, expected } => {
                write!(f, "level {index} has depth {found}, expected {expected}")
            }
            ConsistencyViolation { level, word, declared, marginal } => write!(
                f,
                "consistency violation at level {level}: word {word} declared {} vs marginal {}",
                fmt_rat(declared),
                fmt_rat(marginal)
            ),
            OddDepth(d) => write!(f, "depth {d} is odd; a joint measure needs even depth"),
            LevelTooDeep { level, max } => {
                write!(f, "level {level} exceeds the component depth {max}")
            }
            LevelMismatch => write!(f, "kernel level or row depth mismatch"),
            PartialMap(w) => write!(f, "word map undefined at {w}"),
            MixedTotals => write!(f, "configurations with different totals cannot be mixed"),
            EmptyTree => write!(f, "empty tree"),
        }
    }
}

impl core::error::Error for CoreError {}
