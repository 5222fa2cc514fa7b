//! Finite measurable spaces: sigma-algebras on ground sets of at most eight
//! points, atoms, traces, products, and the classification of maps between
//! them. Sets are bitmasks over the ground set, so every operation is exact
//! and exhaustive enumeration stays cheap.

use alloc::string::String;
use alloc::vec::Vec;

use crate::CoreError;

pub const MAX_GROUND: u8 = 8;
pub const MAX_PRODUCT_GROUND: u8 = 64;

/// Products are materialized as explicit set families, so the atom count is
/// capped to keep the family below 2^16 sets.
const MAX_PRODUCT_ATOMS: usize = 16;

pub fn full_mask(ground: u8) -> u64 {
    debug_assert!(ground <= 64);
    if ground == 64 {
        u64::MAX
    } else {
        (1u64 << ground) - 1
    }
}

/// A sigma-algebra on the ground set {0, …, ground−1}, stored as the sorted
/// family of all its member sets. On a finite ground set a family closed
/// under complement and pairwise union is already a sigma-algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSigma {
    ground: u8,
    sets: Vec<u64>,
}

impl FinSigma {
    pub fn ground(&self) -> u8 {
        self.ground
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn contains_set(&self, s: u64) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn trivial(ground: u8) -> FinSigma {
        let mut sets = vec![0, full_mask(ground)];
        sets.dedup();
        FinSigma { ground, sets }
    }

    pub fn power_set(ground: u8) -> FinSigma {
        assert!(ground <= 16, "power set family too large to materialize");
        FinSigma { ground, sets: (0..=full_mask(ground)).collect() }
    }

    /// The algebra whose members are exactly the unions of the given blocks.
    /// The blocks must partition the ground set.
    pub fn from_atoms(ground: u8, atoms: &[u64]) -> FinSigma {
        debug_assert!(atoms.len() <= 16);
        debug_assert_eq!(atoms.iter().fold(0, |m, a| m | a), full_mask(ground));
        let mut sets: Vec<u64> = (0..1u32 << atoms.len())
            .map(|pick| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick >> i & 1 == 1)
                    .fold(0u64, |m, (_, a)| m | a)
            })
            .collect();
        sets.sort_unstable();
        sets.dedup();
        FinSigma { ground, sets }
    }

    /// The partition into atoms: for each point, the intersection of every
    /// member set containing it. Sorted by least element.
    pub fn atoms(&self) -> Vec<u64> {
        let mut atoms: Vec<u64> = (0..self.ground)
            .map(|x| {
                self.sets
                    .iter()
                    .filter(|s| *s >> x & 1 == 1)
                    .fold(full_mask(self.ground), |m, s| m & s)
            })
            .collect();
        atoms.sort_unstable_by_key(|a| a.trailing_zeros());
        atoms.dedup();
        atoms
    }

    /// Whether every atom is a single point.
    pub fn is_separated(&self) -> bool {
        self.atoms().iter().all(|a| a.count_ones() == 1)
    }
}

/// Smallest sigma-algebra containing the family. Two points lie in the same
/// atom iff no generator separates them, so the result is the family of all
/// unions of the membership-signature classes; the literal
/// complement/union closure is kept as an independent oracle in the tests.
pub fn sigma_generate(ground_size: u8, family: &[u64]) -> Result<FinSigma, CoreError> {
    if ground_size > MAX_GROUND {
        return Err(CoreError::GroundTooLarge(ground_size as usize, MAX_GROUND as usize));
    }
    let full = full_mask(ground_size);
    for s in family {
        if s & !full != 0 {
            return Err(CoreError::DimensionMismatch("generator outside the ground set"));
        }
    }
    let mut reps: Vec<u8> = Vec::new();
    let mut classes: Vec<u64> = Vec::new();
    for x in 0..ground_size {
        match reps
            .iter()
            .position(|&r| family.iter().all(|s| s >> x & 1 == s >> r & 1))
        {
            Some(i) => classes[i] |= 1 << x,
            None => {
                reps.push(x);
                classes.push(1 << x);
            }
        }
    }
    Ok(FinSigma::from_atoms(ground_size, &classes))
}

/// The trace { S ∩ A : S ∈ e } as a sigma-algebra on A, with the points of A
/// relabeled 0, 1, … in increasing order.
pub fn trace_sigma(e: &FinSigma, a: u64) -> Result<FinSigma, CoreError> {
    if a == 0 {
        return Err(CoreError::EmptySubset);
    }
    if a & !full_mask(e.ground) != 0 {
        return Err(CoreError::DimensionMismatch("subset outside the ground set"));
    }
    let positions: Vec<u8> = (0..e.ground).filter(|x| a >> x & 1 == 1).collect();
    let compress = |s: u64| -> u64 {
        positions
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, p)| m | (s >> p & 1) << i)
    };
    let mut sets: Vec<u64> = e.sets.iter().map(|&s| compress(s & a)).collect();
    sets.sort_unstable();
    sets.dedup();
    Ok(FinSigma { ground: positions.len() as u8, sets })
}

/// Relabels the traced generators of a family the same way `trace_sigma`
/// relabels member sets, so generate-then-trace and trace-then-generate land
/// on comparable representations.
pub fn trace_family(ground: u8, family: &[u64], a: u64) -> Vec<u64> {
    let positions: Vec<u8> = (0..ground).filter(|x| a >> x & 1 == 1).collect();
    family
        .iter()
        .map(|&s| {
            positions
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, p)| m | (s >> p & 1) << i)
        })
        .collect()
}

/// Sigma-algebra on the product ground set, with the pair (x, y) stored at
/// index x·|Y| + y. Its atoms are exactly the rectangles of operand atoms:
/// unions of such rectangles form a sigma-algebra containing all measurable
/// rectangles, and each rectangle A × B = (A × Y) ∩ (X × B) belongs to any
/// sigma-algebra containing the rectangles.
pub fn product_sigma(e: &FinSigma, f: &FinSigma) -> Result<FinSigma, CoreError> {
    let ground = e.ground as usize * f.ground as usize;
    if ground > MAX_PRODUCT_GROUND as usize {
        return Err(CoreError::GroundTooLarge(ground, MAX_PRODUCT_GROUND as usize));
    }
    let (ea, fa) = (e.atoms(), f.atoms());
    if ea.len() * fa.len() > MAX_PRODUCT_ATOMS {
        return Err(CoreError::DimensionMismatch(
            "product sigma-algebra has too many atoms to materialize",
        ));
    }
    let mut rects = Vec::with_capacity(ea.len() * fa.len());
    for a in &ea {
        for b in &fa {
            let mut rect = 0u64;
            for x in 0..e.ground {
                if a >> x & 1 == 1 {
                    for y in 0..f.ground {
                        if b >> y & 1 == 1 {
                            rect |= 1 << (x as usize * f.ground as usize + y as usize);
                        }
                    }
                }
            }
            rects.push(rect);
        }
    }
    Ok(FinSigma::from_atoms(ground as u8, &rects))
}

/// A total map between finite ground sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMap {
    domain: u8,
    codomain: u8,
    table: Vec<u8>,
}

impl FinMap {
    pub fn new(domain: u8, codomain: u8, table: Vec<u8>) -> Result<FinMap, CoreError> {
        if table.len() != domain as usize || table.iter().any(|&v| v >= codomain) {
            return Err(CoreError::DimensionMismatch("map table does not match its dimensions"));
        }
        Ok(FinMap { domain, codomain, table })
    }

    pub fn identity(n: u8) -> FinMap {
        FinMap { domain: n, codomain: n, table: (0..n).collect() }
    }

    pub fn constant(domain: u8, codomain: u8, value: u8) -> FinMap {
        debug_assert!(value < codomain);
        FinMap { domain, codomain, table: vec![value; domain as usize] }
    }

    pub fn domain(&self) -> u8 {
        self.domain
    }

    pub fn codomain(&self) -> u8 {
        self.codomain
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.table[x as usize]
    }

    pub fn preimage(&self, set: u64) -> u64 {
        (0..self.domain)
            .filter(|&x| set >> self.table[x as usize] & 1 == 1)
            .fold(0u64, |m, x| m | 1 << x)
    }

    pub fn image_set(&self, set: u64) -> u64 {
        (0..self.domain)
            .filter(|&x| set >> x & 1 == 1)
            .fold(0u64, |m, x| m | 1 << self.table[x as usize])
    }

    pub fn image(&self) -> u64 {
        self.image_set(full_mask(self.domain))
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == full_mask(self.codomain)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u64;
        for &v in &self.table {
            if seen >> v & 1 == 1 {
                return false;
            }
            seen |= 1 << v;
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measurability {
    Exact,
    MeasurableOnly,
    NotMeasurable,
}

fn check_dims(f: &FinMap, e: &FinSigma, fsig: &FinSigma) -> Result<(), CoreError> {
    if f.domain != e.ground || f.codomain != fsig.ground {
        return Err(CoreError::DimensionMismatch("map dimensions do not match the sigma-algebras"));
    }
    Ok(())
}

/// Classifies f by comparing the preimage family f^{-1}(fsig) with e:
/// contained means measurable, equal means the preimage map is onto e.
pub fn is_exactly_measurable(
    f: &FinMap,
    e: &FinSigma,
    fsig: &FinSigma,
) -> Result<Measurability, CoreError> {
    check_dims(f, e, fsig)?;
    let mut pre: Vec<u64> = fsig.sets.iter().map(|&s| f.preimage(s)).collect();
    pre.sort_unstable();
    pre.dedup();
    if !pre.iter().all(|p| e.contains_set(*p)) {
        return Ok(Measurability::NotMeasurable);
    }
    Ok(if pre == e.sets { Measurability::Exact } else { Measurability::MeasurableOnly })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomFlags {
    pub injective_on_atoms: bool,
    pub respects_atoms: bool,
}

/// Evaluates both atom conditions literally over the two atom partitions:
/// every codomain atom pulls back to nothing or a single domain atom, and
/// every domain atom pushes forward onto a codomain atom.
pub fn atom_map_checks(
    f: &FinMap,
    e: &FinSigma,
    fsig: &FinSigma,
) -> Result<AtomFlags, CoreError> {
    check_dims(f, e, fsig)?;
    let dom_atoms = e.atoms();
    let cod_atoms = fsig.atoms();
    let injective_on_atoms = cod_atoms.iter().all(|&a| {
        let p = f.preimage(a);
        p == 0 || dom_atoms.contains(&p)
    });
    let respects_atoms = dom_atoms.iter().all(|&a| cod_atoms.contains(&f.image_set(a)));
    Ok(AtomFlags { injective_on_atoms, respects_atoms })
}

/// All partitions of {0, …, n−1} as lists of block masks, via restricted
/// growth strings. Every sigma-algebra on n points arises from exactly one.
pub fn all_partitions(n: u8) -> Vec<Vec<u64>> {
    fn go(n: u8, x: u8, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if x == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] |= 1 << x;
            go(n, x + 1, blocks, out);
            blocks[i] &= !(1u64 << x);
        }
        blocks.push(1 << x);
        go(n, x + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

pub fn all_sigma_algebras(n: u8) -> Vec<FinSigma> {
    all_partitions(n)
        .iter()
        .map(|blocks| FinSigma::from_atoms(n, blocks))
        .collect()
}

pub fn all_maps(domain: u8, codomain: u8) -> Vec<FinMap> {
    let count = (codomain as u64).pow(domain as u32);
    (0..count)
        .map(|mut code| {
            let table = (0..domain)
                .map(|_| {
                    let v = (code % codomain as u64) as u8;
                    code /= codomain as u64;
                    v
                })
                .collect();
            FinMap { domain, codomain, table }
        })
        .collect()
}

/// Debug rendering of a set family for failure reports.
pub fn render_family(family: &[u64]) -> String {
    use core::fmt::Write;
    let mut s = String::from("{");
    for (i, set) in family.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{set:b}");
    }
    s.push('}');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_examples() {
        let e = sigma_generate(3, &[0b001]).unwrap();
        assert_eq!(e.sets(), [0b000, 0b001, 0b110, 0b111]);
        let e = sigma_generate(2, &[]).unwrap();
        assert_eq!(e.sets(), [0b00, 0b11]);
        let e = sigma_generate(4, &[0b0011, 0b0110]).unwrap();
        assert_eq!(e.sets().len(), 16);
        assert_eq!(e.atoms(), [1, 2, 4, 8]);
        assert_eq!(
            sigma_generate(9, &[]),
            Err(CoreError::GroundTooLarge(9, 8))
        );
        assert_eq!(
            sigma_generate(2, &[0b100]),
            Err(CoreError::DimensionMismatch("generator outside the ground set"))
        );
    }

    /// Literal closure of the family under complement and pairwise union.
    fn closure_oracle(ground: u8, family: &[u64]) -> Vec<u64> {
        let full = full_mask(ground);
        let mut sets: Vec<u64> = vec![0, full];
        sets.extend_from_slice(family);
        sets.sort_unstable();
        sets.dedup();
        loop {
            let mut next = sets.clone();
            for i in 0..sets.len() {
                next.push(full & !sets[i]);
                for j in i..sets.len() {
                    next.push(sets[i] | sets[j]);
                }
            }
            next.sort_unstable();
            next.dedup();
            if next == sets {
                return sets;
            }
            sets = next;
        }
    }

    #[test]
    fn generate_matches_literal_closure() {
        let cases: [(u8, &[u64]); 6] = [
            (3, &[0b001]),
            (4, &[0b0011, 0b0110]),
            (4, &[0b1010]),
            (4, &[0b0001, 0b0010, 0b0100]),
            (1, &[]),
            (4, &[0b1111]),
        ];
        for (n, family) in cases {
            assert_eq!(
                sigma_generate(n, family).unwrap().sets(),
                closure_oracle(n, family),
                "ground {n}"
            );
        }
    }

    #[test]
    fn atoms_examples() {
        assert_eq!(sigma_generate(3, &[0b001]).unwrap().atoms(), [0b001, 0b110]);
        assert_eq!(FinSigma::power_set(2).atoms(), [0b01, 0b10]);
        assert_eq!(sigma_generate(3, &[0b011, 0b110]).unwrap().atoms(), [1, 2, 4]);
    }

    #[test]
    fn every_member_is_a_union_of_atoms() {
        for e in all_sigma_algebras(4) {
            let atoms = e.atoms();
            for &s in e.sets() {
                let covered = atoms
                    .iter()
                    .filter(|&&a| a & s != 0)
                    .fold(0u64, |m, &a| m | a);
                assert!(atoms.iter().all(|&a| a & s == 0 || a & s == a));
                assert_eq!(covered, s);
            }
        }
    }

    #[test]
    fn trace_examples() {
        let e = sigma_generate(3, &[0b001]).unwrap();
        assert_eq!(trace_sigma(&e, 0b110).unwrap(), FinSigma::trivial(2));
        let p = FinSigma::power_set(3);
        assert_eq!(trace_sigma(&p, 0b101).unwrap(), FinSigma::power_set(2));
        let e = sigma_generate(3, &[0b011]).unwrap();
        assert_eq!(trace_sigma(&e, 0b101).unwrap(), FinSigma::power_set(2));
        assert_eq!(trace_sigma(&e, 0), Err(CoreError::EmptySubset));
    }

    #[test]
    fn measurability_examples() {
        let id = FinMap::identity(2);
        assert_eq!(
            is_exactly_measurable(&id, &FinSigma::power_set(2), &FinSigma::trivial(2)).unwrap(),
            Measurability::MeasurableOnly
        );
        let c = FinMap::constant(2, 2, 0);
        assert_eq!(
            is_exactly_measurable(&c, &FinSigma::trivial(2), &FinSigma::power_set(2)).unwrap(),
            Measurability::Exact
        );
        let f = FinMap::new(3, 2, vec![0, 0, 1]).unwrap();
        let e = sigma_generate(3, &[0b100]).unwrap();
        assert_eq!(
            is_exactly_measurable(&f, &e, &FinSigma::power_set(2)).unwrap(),
            Measurability::Exact
        );
        // a non-measurable case: identity needs every singleton upstairs
        assert_eq!(
            is_exactly_measurable(&id, &FinSigma::trivial(2), &FinSigma::power_set(2)).unwrap(),
            Measurability::NotMeasurable
        );
        assert_eq!(
            is_exactly_measurable(&id, &FinSigma::power_set(3), &FinSigma::power_set(2)),
            Err(CoreError::DimensionMismatch("map dimensions do not match the sigma-algebras"))
        );
    }

    #[test]
    fn atom_check_examples() {
        let id = FinMap::identity(2);
        let flags = atom_map_checks(&id, &FinSigma::power_set(2), &FinSigma::power_set(2)).unwrap();
        assert_eq!(flags, AtomFlags { injective_on_atoms: true, respects_atoms: true });

        let c = FinMap::constant(2, 2, 0);
        let flags = atom_map_checks(&c, &FinSigma::power_set(2), &FinSigma::power_set(2)).unwrap();
        assert_eq!(flags, AtomFlags { injective_on_atoms: false, respects_atoms: true });

        let f = FinMap::new(3, 2, vec![0, 0, 1]).unwrap();
        let e = sigma_generate(3, &[0b100]).unwrap();
        let flags = atom_map_checks(&f, &e, &FinSigma::power_set(2)).unwrap();
        assert!(flags.injective_on_atoms);
    }

    #[test]
    fn product_examples() {
        let t = product_sigma(&FinSigma::trivial(2), &FinSigma::trivial(2)).unwrap();
        assert_eq!(t, FinSigma::trivial(4));
        let p = product_sigma(&FinSigma::power_set(2), &FinSigma::power_set(2)).unwrap();
        assert_eq!(p, FinSigma::power_set(4));
        let e = sigma_generate(2, &[0b01]).unwrap();
        let f = sigma_generate(2, &[0b10]).unwrap();
        assert_eq!(product_sigma(&e, &f).unwrap(), FinSigma::power_set(4));
    }

    #[test]
    fn product_matches_rectangle_closure() {
        // independent oracle: close the set of measurable rectangles under
        // complement and pairwise union
        for e in all_sigma_algebras(3) {
            for f in all_sigma_algebras(2) {
                let mut rects = Vec::new();
                for &a in e.sets() {
                    for &b in f.sets() {
                        let mut rect = 0u64;
                        for x in 0..3u8 {
                            for y in 0..2u8 {
                                if a >> x & 1 == 1 && b >> y & 1 == 1 {
                                    rect |= 1 << (x * 2 + y);
                                }
                            }
                        }
                        rects.push(rect);
                    }
                }
                let full = full_mask(6);
                let mut sets: Vec<u64> = rects;
                sets.sort_unstable();
                sets.dedup();
                loop {
                    let mut next = sets.clone();
                    for i in 0..sets.len() {
                        next.push(full & !sets[i]);
                        for j in i..sets.len() {
                            next.push(sets[i] | sets[j]);
                        }
                    }
                    next.sort_unstable();
                    next.dedup();
                    if next == sets {
                        break;
                    }
                    sets = next;
                }
                assert_eq!(product_sigma(&e, &f).unwrap().sets(), sets);
            }
        }
    }

    #[test]
    fn product_size_limits() {
        let deep = product_sigma(&FinSigma::trivial(8), &FinSigma::trivial(8)).unwrap();
        assert_eq!(deep.ground(), 64);
        assert_eq!(
            product_sigma(&deep, &FinSigma::trivial(2)),
            Err(CoreError::GroundTooLarge(128, 64))
        );
        assert_eq!(
            product_sigma(&FinSigma::power_set(8), &FinSigma::power_set(8)),
            Err(CoreError::DimensionMismatch(
                "product sigma-algebra has too many atoms to materialize"
            ))
        );
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        assert_eq!(all_partitions(1).len(), 1);
        assert_eq!(all_partitions(2).len(), 2);
        assert_eq!(all_partitions(3).len(), 5);
        assert_eq!(all_partitions(4).len(), 15);
        // every sigma-algebra on 3 points arises from exactly one partition
        let algebras = all_sigma_algebras(3);
        for i in 0..algebras.len() {
            for j in i + 1..algebras.len() {
                assert_ne!(algebras[i], algebras[j]);
            }
        }
    }
}
