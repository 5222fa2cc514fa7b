//! Text formats for the six artifact types. Parsers validate every module
//! invariant on load and report errors with 1-based line numbers; serializers
//! emit a canonical form (leaf lines in lexicographic word order, rationals
//! always `p/q`) so parse -> write -> parse is the identity byte for byte.

use std::collections::BTreeSet;
use std::fmt;

use cantor_core::cylinder::CylinderSet;
use cantor_core::kernel::FiniteKernel;
use cantor_core::measure::DyadicMeasure;
use cantor_core::point::{PointConfig, WordMap};
use cantor_core::rat::{fmt_rat, parse_rat, Rat};
use cantor_core::tower::{check_tower_consistency, ConsistentTower};
use cantor_core::tree::ClosedTree;
use cantor_core::word::Word;
use cantor_core::CoreError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> ParseError {
        ParseError { line, message: message.into() }
    }

    fn from_core(line: usize, err: CoreError) -> ParseError {
        ParseError { line, message: err.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Artifact {
    Measure(DyadicMeasure),
    Kernel(FiniteKernel),
    Tower(ConsistentTower),
    Points(PointConfig),
    Cylinders(CylinderSet),
    Tree(ClosedTree),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Measure(_) => "measure",
            Artifact::Kernel(_) => "kernel",
            Artifact::Tower(_) => "tower",
            Artifact::Points(_) => "ppconfig",
            Artifact::Cylinders(_) => "cylset",
            Artifact::Tree(_) => "tree",
        }
    }
}

/// Non-blank, non-comment lines with their 1-based positions in the raw text.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn field<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str, ParseError> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| ParseError::new(line, format!("expected `{key}=<value>`")))
}

fn parse_depth(text: &str, cap: u8, line: usize) -> Result<u8, ParseError> {
    let depth: u8 = text
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid depth `{text}`")))?;
    if depth > cap.min(Word::MAX_DEPTH) {
        return Err(ParseError::new(
            line,
            format!("depth {depth} exceeds the depth cap {}", cap.min(Word::MAX_DEPTH)),
        ));
    }
    Ok(depth)
}

fn parse_word_field(text: &str, line: usize) -> Result<Word, ParseError> {
    Word::parse(text).ok_or_else(|| ParseError::new(line, format!("invalid word `{text}`")))
}

fn parse_rat_field(text: &str, line: usize) -> Result<Rat, ParseError> {
    parse_rat(text).ok_or_else(|| ParseError::new(line, format!("invalid rational `{text}`")))
}

/// One `<word> <p>/<q>` line per leaf, each leaf exactly once in any order.
/// Returns the table in rank order, the line of each leaf, and the last line.
fn parse_leaf_table(
    lines: &[(usize, &str)],
    pos: &mut usize,
    depth: u8,
) -> Result<(Vec<Rat>, Vec<usize>, usize), ParseError> {
    let cells = 1usize << depth;
    let mut weights: Vec<Option<Rat>> = vec![None; cells];
    let mut lineno = vec![0usize; cells];
    let mut last = 0;
    for _ in 0..cells {
        let Some(&(line, text)) = lines.get(*pos) else {
            let eof = lines.last().map_or(1, |&(l, _)| l + 1);
            return Err(ParseError::new(eof, "missing leaf line"));
        };
        *pos += 1;
        let mut tokens = text.split_whitespace();
        let (Some(word), Some(value), None) = (tokens.next(), tokens.next(), tokens.next())
        else {
            return Err(ParseError::new(line, "expected `<word> <p>/<q>`"));
        };
        let w = parse_word_field(word, line)?;
        if w.depth() != depth {
            return Err(ParseError::new(
                line,
                format!("leaf word {w} does not have depth {depth}"),
            ));
        }
        let rank = w.rank() as usize;
        if weights[rank].is_some() {
            return Err(ParseError::new(line, format!("duplicate leaf word {w}")));
        }
        weights[rank] = Some(parse_rat_field(value, line)?);
        lineno[rank] = line;
        last = last.max(line);
    }
    Ok((weights.into_iter().map(Option::unwrap).collect(), lineno, last))
}

fn build_measure(
    depth: u8,
    weights: Vec<Rat>,
    mass: Rat,
    leaf_lines: &[usize],
    last_line: usize,
    header_line: usize,
) -> Result<DyadicMeasure, ParseError> {
    DyadicMeasure::from_leaf_weights(depth, weights, mass).map_err(|e| match e {
        CoreError::NegativeWeight(w) => {
            ParseError::from_core(leaf_lines[w.rank() as usize], e)
        }
        CoreError::MassMismatch { .. } => ParseError::from_core(last_line, e),
        other => ParseError::from_core(header_line, other),
    })
}

/// `measure depth=<d> mass=<p>/<q>` followed by 2^d leaf lines.
fn parse_measure_block(
    lines: &[(usize, &str)],
    pos: &mut usize,
    cap: u8,
) -> Result<DyadicMeasure, ParseError> {
    let Some(&(line, text)) = lines.get(*pos) else {
        let eof = lines.last().map_or(1, |&(l, _)| l + 1);
        return Err(ParseError::new(eof, "missing measure header"));
    };
    *pos += 1;
    let mut tokens = text.split_whitespace();
    let (Some("measure"), Some(depth_tok), Some(mass_tok), None) =
        (tokens.next(), tokens.next(), tokens.next(), tokens.next())
    else {
        return Err(ParseError::new(line, "expected `measure depth=<d> mass=<p>/<q>`"));
    };
    let depth = parse_depth(field(depth_tok, "depth", line)?, cap, line)?;
    let mass = parse_rat_field(field(mass_tok, "mass", line)?, line)?;
    let (weights, leaf_lines, last) = parse_leaf_table(lines, pos, depth)?;
    build_measure(depth, weights, mass, &leaf_lines, last, line)
}

fn expect_end(lines: &[(usize, &str)], pos: usize) -> Result<(), ParseError> {
    match lines.get(pos) {
        Some(&(line, _)) => Err(ParseError::new(line, "unexpected content after the artifact")),
        None => Ok(()),
    }
}

pub fn parse_measure(text: &str, cap: u8) -> Result<DyadicMeasure, ParseError> {
    let lines = content_lines(text);
    let mut pos = 0;
    let m = parse_measure_block(&lines, &mut pos, cap)?;
    expect_end(&lines, pos)?;
    Ok(m)
}

pub fn write_measure(m: &DyadicMeasure) -> String {
    let mut out = format!("measure depth={} mass={}\n", m.depth(), fmt_rat(m.mass()));
    for w in Word::empty().extensions(m.depth()) {
        out.push_str(&format!("{w} {}\n", fmt_rat(m.leaf(w))));
    }
    out
}

/// `cylset depth=<d>` followed by one depth-d word per line.
pub fn parse_cylset(text: &str, cap: u8) -> Result<CylinderSet, ParseError> {
    let lines = content_lines(text);
    let Some(&(line, text)) = lines.first() else {
        return Err(ParseError::new(1, "missing cylset header"));
    };
    let mut tokens = text.split_whitespace();
    let (Some("cylset"), Some(depth_tok), None) = (tokens.next(), tokens.next(), tokens.next())
    else {
        return Err(ParseError::new(line, "expected `cylset depth=<d>`"));
    };
    let depth = parse_depth(field(depth_tok, "depth", line)?, cap, line)?;
    let mut words = Vec::new();
    for &(line, text) in &lines[1..] {
        let w = parse_word_field(text, line)?;
        if w.depth() != depth {
            return Err(ParseError::new(line, format!("word {w} does not have depth {depth}")));
        }
        if words.contains(&w) {
            return Err(ParseError::new(line, format!("duplicate word {w}")));
        }
        words.push(w);
    }
    CylinderSet::new(depth, words).map_err(|e| ParseError::from_core(line, e))
}

pub fn write_cylset(s: &CylinderSet) -> String {
    let mut out = format!("cylset depth={}\n", s.depth());
    for w in s.words() {
        out.push_str(&format!("{w}\n"));
    }
    out
}

/// `ppconfig depth=<d> n=<k>` followed by k depth-d word lines, repeats
/// allowed.
pub fn parse_points(text: &str, cap: u8) -> Result<PointConfig, ParseError> {
    let lines = content_lines(text);
    let Some(&(line, text)) = lines.first() else {
        return Err(ParseError::new(1, "missing ppconfig header"));
    };
    let mut tokens = text.split_whitespace();
    let (Some("ppconfig"), Some(depth_tok), Some(n_tok), None) =
        (tokens.next(), tokens.next(), tokens.next(), tokens.next())
    else {
        return Err(ParseError::new(line, "expected `ppconfig depth=<d> n=<k>`"));
    };
    let depth = parse_depth(field(depth_tok, "depth", line)?, cap, line)?;
    let n: usize = field(n_tok, "n", line)?
        .parse()
        .map_err(|_| ParseError::new(line, "invalid point count"))?;
    let body = &lines[1..];
    if body.len() != n {
        let at = body.get(n).map_or_else(
            || lines.last().map_or(1, |&(l, _)| l + 1),
            |&(l, _)| l,
        );
        return Err(ParseError::new(at, format!("expected exactly {n} point lines")));
    }
    let mut points = Vec::with_capacity(n);
    for &(line, text) in body {
        let w = parse_word_field(text, line)?;
        if w.depth() != depth {
            return Err(ParseError::new(line, format!("point {w} does not have depth {depth}")));
        }
        points.push(w);
    }
    PointConfig::new(depth, points).map_err(|e| ParseError::from_core(line, e))
}

pub fn write_points(p: &PointConfig) -> String {
    let mut out = format!("ppconfig depth={} n={}\n", p.depth(), p.total());
    for w in p.points() {
        out.push_str(&format!("{w}\n"));
    }
    out
}

/// `kernel level=<n> depth=<d> quasi=<0|1>`, then per atom a `row <word>
/// mass=<p>/<q>` header followed by its 2^d leaf lines; atoms in any order,
/// each exactly once.
pub fn parse_kernel(text: &str, cap: u8) -> Result<FiniteKernel, ParseError> {
    let lines = content_lines(text);
    let Some(&(header_line, text)) = lines.first() else {
        return Err(ParseError::new(1, "missing kernel header"));
    };
    let mut tokens = text.split_whitespace();
    let (Some("kernel"), Some(level_tok), Some(depth_tok), Some(quasi_tok), None) = (
        tokens.next(),
        tokens.next(),
        tokens.next(),
        tokens.next(),
        tokens.next(),
    ) else {
        return Err(ParseError::new(
            header_line,
            "expected `kernel level=<n> depth=<d> quasi=<0|1>`",
        ));
    };
    let level = parse_depth(field(level_tok, "level", header_line)?, cap, header_line)?;
    let depth = parse_depth(field(depth_tok, "depth", header_line)?, cap, header_line)?;
    let quasi = match field(quasi_tok, "quasi", header_line)? {
        "0" => false,
        "1" => true,
        other => {
            return Err(ParseError::new(header_line, format!("invalid quasi flag `{other}`")))
        }
    };
    let atoms = 1usize << level;
    let mut rows: Vec<Option<DyadicMeasure>> = vec![None; atoms];
    let mut row_lines = vec![0usize; atoms];
    let mut pos = 1;
    for _ in 0..atoms {
        let Some(&(line, text)) = lines.get(pos) else {
            let eof = lines.last().map_or(1, |&(l, _)| l + 1);
            return Err(ParseError::new(eof, "missing row header"));
        };
        pos += 1;
        let mut tokens = text.split_whitespace();
        let (Some("row"), Some(word_tok), Some(mass_tok), None) =
            (tokens.next(), tokens.next(), tokens.next(), tokens.next())
        else {
            return Err(ParseError::new(line, "expected `row <word> mass=<p>/<q>`"));
        };
        let atom = parse_word_field(word_tok, line)?;
        if atom.depth() != level {
            return Err(ParseError::new(
                line,
                format!("row word {atom} does not have depth {level}"),
            ));
        }
        if rows[atom.rank() as usize].is_some() {
            return Err(ParseError::new(line, format!("duplicate row for atom {atom}")));
        }
        let mass = parse_rat_field(field(mass_tok, "mass", line)?, line)?;
        let (weights, leaf_lines, last) = parse_leaf_table(&lines, &mut pos, depth)?;
        let row = build_measure(depth, weights, mass, &leaf_lines, last, line)?;
        rows[atom.rank() as usize] = Some(row);
        row_lines[atom.rank() as usize] = line;
    }
    expect_end(&lines, pos)?;
    let rows: Vec<DyadicMeasure> = rows.into_iter().map(Option::unwrap).collect();
    // pin mass violations to the offending row before handing over
    for (i, row) in rows.iter().enumerate() {
        let ok = row.mass() == &cantor_core::rat::one()
            || (quasi && row.mass() == &cantor_core::rat::zero());
        if !ok {
            return Err(ParseError::from_core(row_lines[i], CoreError::NotProbability));
        }
    }
    FiniteKernel::new(level, rows, quasi).map_err(|e| ParseError::from_core(header_line, e))
}

pub fn write_kernel(k: &FiniteKernel) -> String {
    let mut out = format!(
        "kernel level={} depth={} quasi={}\n",
        k.level(),
        k.row_depth(),
        if k.quasi() { 1 } else { 0 }
    );
    for a in Word::empty().extensions(k.level()) {
        let row = k.row(a);
        out.push_str(&format!("row {a} mass={}\n", fmt_rat(row.mass())));
        for w in Word::empty().extensions(k.row_depth()) {
            out.push_str(&format!("{w} {}\n", fmt_rat(row.leaf(w))));
        }
    }
    out
}

/// `tower levels=<L>` followed by L embedded measure blocks; the tower's
/// consistency is part of parsing.
pub fn parse_tower(text: &str, cap: u8) -> Result<ConsistentTower, ParseError> {
    let lines = content_lines(text);
    let Some(&(header_line, text)) = lines.first() else {
        return Err(ParseError::new(1, "missing tower header"));
    };
    let mut tokens = text.split_whitespace();
    let (Some("tower"), Some(levels_tok), None) = (tokens.next(), tokens.next(), tokens.next())
    else {
        return Err(ParseError::new(header_line, "expected `tower levels=<L>`"));
    };
    let count: usize = field(levels_tok, "levels", header_line)?
        .parse()
        .map_err(|_| ParseError::new(header_line, "invalid level count"))?;
    if count == 0 {
        return Err(ParseError::new(header_line, "a tower needs at least one level"));
    }
    let mut pos = 1;
    let mut levels = Vec::with_capacity(count);
    let mut block_lines = Vec::with_capacity(count);
    for _ in 0..count {
        block_lines.push(lines.get(pos).map_or(header_line, |&(l, _)| l));
        levels.push(parse_measure_block(&lines, &mut pos, cap)?);
    }
    expect_end(&lines, pos)?;
    for (i, m) in levels.iter().enumerate() {
        if !m.is_probability() {
            return Err(ParseError::from_core(block_lines[i], CoreError::NotProbability));
        }
    }
    check_tower_consistency(levels).map_err(|e| {
        let line = match &e {
            CoreError::DepthLadderBroken { index, .. } => block_lines[*index],
            CoreError::ConsistencyViolation { level, .. } => block_lines[*level],
            _ => header_line,
        };
        ParseError::from_core(line, e)
    })
}

pub fn write_tower(t: &ConsistentTower) -> String {
    let mut out = format!("tower levels={}\n", t.levels().len());
    for level in t.levels() {
        out.push_str(&write_measure(level));
    }
    out
}

fn parse_tree_node(text: &str, line: usize) -> Result<Vec<u32>, ParseError> {
    text.split('.')
        .map(|part| {
            part.parse::<u32>()
                .map_err(|_| ParseError::new(line, format!("invalid node label `{part}`")))
        })
        .collect()
}

/// Headerless: one dot-separated node word per line (`2.1.0`); the root is
/// implicit. Prefix closure and uniform leaf depth are validated on load.
pub fn parse_tree(text: &str, cap: u8) -> Result<ClosedTree, ParseError> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return Err(ParseError::from_core(1, CoreError::EmptyTree));
    }
    let mut nodes = Vec::with_capacity(lines.len());
    for &(line, text) in &lines {
        let node = parse_tree_node(text, line)?;
        if node.len() > cap as usize {
            return Err(ParseError::new(
                line,
                format!("node length {} exceeds the depth cap {cap}", node.len()),
            ));
        }
        nodes.push((line, node));
    }
    let set: BTreeSet<&[u32]> = nodes.iter().map(|(_, n)| n.as_slice()).collect();
    let depth = nodes.iter().map(|(_, n)| n.len()).max().unwrap();
    let parents: BTreeSet<&[u32]> =
        nodes.iter().filter(|(_, n)| n.len() > 1).map(|(_, n)| &n[..n.len() - 1]).collect();
    for (line, node) in &nodes {
        if node.len() > 1 && !set.contains(&node[..node.len() - 1]) {
            return Err(ParseError::new(line.to_owned(), "node's parent is missing"));
        }
        if node.len() < depth && !parents.contains(node.as_slice()) {
            return Err(ParseError::new(
                line.to_owned(),
                "node has no child above the leaf depth",
            ));
        }
    }
    ClosedTree::new(nodes.into_iter().map(|(_, n)| n).collect(), None)
        .map_err(|e| ParseError::from_core(1, e))
}

pub fn write_tree(t: &ClosedTree) -> String {
    let mut out = String::new();
    for node in t.nodes().filter(|n| !n.is_empty()) {
        let labels: Vec<String> = node.iter().map(u32::to_string).collect();
        out.push_str(&labels.join("."));
        out.push('\n');
    }
    out
}

/// A word map table: one `<source> <target>` pair per line, covering every
/// source word of the common source depth exactly once.
pub fn parse_word_map(text: &str, cap: u8) -> Result<WordMap, ParseError> {
    let lines = content_lines(text);
    let Some(&(first_line, _)) = lines.first() else {
        return Err(ParseError::new(1, "empty word map table"));
    };
    let mut pairs = Vec::with_capacity(lines.len());
    for &(line, text) in &lines {
        let mut tokens = text.split_whitespace();
        let (Some(src), Some(dst), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(ParseError::new(line, "expected `<source> <target>`"));
        };
        let s = parse_word_field(src, line)?;
        let t = parse_word_field(dst, line)?;
        if s.depth() > cap || t.depth() > cap {
            return Err(ParseError::new(line, format!("word depth exceeds the depth cap {cap}")));
        }
        pairs.push((s, t));
    }
    WordMap::from_table(pairs[0].0.depth(), &pairs)
        .map_err(|e| ParseError::from_core(first_line, e))
}

/// Sniffs the artifact type from the first content line: a known header
/// keyword wins; otherwise a file of dot-separated numerals is a tree.
pub fn parse_artifact(text: &str, cap: u8) -> Result<Artifact, ParseError> {
    let lines = content_lines(text);
    let Some(&(line, first)) = lines.first() else {
        return Err(ParseError::new(1, "file has no content lines"));
    };
    match first.split_whitespace().next() {
        Some("measure") => parse_measure(text, cap).map(Artifact::Measure),
        Some("kernel") => parse_kernel(text, cap).map(Artifact::Kernel),
        Some("tower") => parse_tower(text, cap).map(Artifact::Tower),
        Some("ppconfig") => parse_points(text, cap).map(Artifact::Points),
        Some("cylset") => parse_cylset(text, cap).map(Artifact::Cylinders),
        _ => {
            let all_nodes = lines
                .iter()
                .all(|&(l, t)| !t.contains(char::is_whitespace) && parse_tree_node(t, l).is_ok());
            if all_nodes {
                parse_tree(text, cap).map(Artifact::Tree)
            } else {
                Err(ParseError::new(line, "unrecognized artifact header"))
            }
        }
    }
}

pub fn write_artifact(a: &Artifact) -> String {
    match a {
        Artifact::Measure(m) => write_measure(m),
        Artifact::Kernel(k) => write_kernel(k),
        Artifact::Tower(t) => write_tower(t),
        Artifact::Points(p) => write_points(p),
        Artifact::Cylinders(s) => write_cylset(s),
        Artifact::Tree(t) => write_tree(t),
    }
}
