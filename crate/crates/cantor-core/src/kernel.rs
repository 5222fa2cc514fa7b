//! Probability and quasi-probability kernels at a finite level: rows indexed
//! by the atoms of the level-n cylinder algebra, each row an exact measure of
//! a common target depth. Covers disintegration of a joint measure, kernel
//! application, the fixed-point polytope, strictness, and the 0/1 refinement
//! along equal-row classes.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::cylinder::CylinderSet;
use crate::measure::{DyadicMeasure, Parity};
use crate::rat::{one, zero, Rat};
use crate::word::Word;
use crate::CoreError;

/// Rows of mass 0 or 1 over the 2^level atoms; `quasi` records whether zero
/// rows are admissible. Row measures share one target depth ≥ the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteKernel {
    level: u8,
    rows: Vec<DyadicMeasure>,
    quasi: bool,
}

impl FiniteKernel {
    pub fn new(level: u8, rows: Vec<DyadicMeasure>, quasi: bool) -> Result<FiniteKernel, CoreError> {
        if rows.len() != 1usize << level {
            return Err(CoreError::DimensionMismatch("row count does not match the level"));
        }
        let depth = rows[0].depth();
        for row in &rows {
            if row.depth() != depth {
                return Err(CoreError::DepthMismatch(depth, row.depth()));
            }
        }
        if depth < level {
            return Err(CoreError::LevelMismatch);
        }
        for row in &rows {
            let mass_ok = row.mass().is_one() || (quasi && row.mass().is_zero());
            if !mass_ok {
                return Err(CoreError::NotProbability);
            }
        }
        Ok(FiniteKernel { level, rows, quasi })
    }

    /// Row a spreads mass 1 uniformly over the leaves below atom a.
    pub fn identity(level: u8, depth: u8) -> FiniteKernel {
        let rows = Word::empty()
            .extensions(level)
            .map(|a| {
                let width = 1usize << (depth - level);
                let w = Rat::new(1.into(), (width as u64).into());
                let mut leaves = vec![zero(); 1 << depth];
                for v in a.extensions(depth) {
                    leaves[v.rank() as usize] = w.clone();
                }
                DyadicMeasure::from_table(depth, leaves)
            })
            .collect();
        FiniteKernel { level, rows, quasi: false }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn row_depth(&self) -> u8 {
        self.rows[0].depth()
    }

    pub fn quasi(&self) -> bool {
        self.quasi
    }

    pub fn rows(&self) -> &[DyadicMeasure] {
        &self.rows
    }

    pub fn row(&self, atom: Word) -> &DyadicMeasure {
        debug_assert_eq!(atom.depth(), self.level);
        &self.rows[atom.rank() as usize]
    }
}

/// Conditional second-component law given the first component's level-n atom,
/// for a joint measure on M × M carried along bit interleaving: the row of
/// atom a is μ(a × ·) / μ_1(a), with the zero row where μ_1(a) = 0.
pub fn disintegrate(mu: &DyadicMeasure, level: u8) -> Result<FiniteKernel, CoreError> {
    if mu.depth() % 2 != 0 {
        return Err(CoreError::OddDepth(mu.depth()));
    }
    let d = mu.depth() / 2;
    if level > d {
        return Err(CoreError::LevelTooDeep { level, max: d });
    }
    if !mu.is_probability() {
        return Err(CoreError::NotProbability);
    }
    let first = mu.bit_marginal(Parity::Even)?;
    let mut rows = Vec::with_capacity(1 << level);
    for a in Word::empty().extensions(level) {
        let weight = first.word_mass(a)?;
        let mut leaves = vec![zero(); 1usize << d];
        if weight.is_positive() {
            for u in a.extensions(d) {
                for v in Word::empty().extensions(d) {
                    let joint = Word::interleave(u, v).unwrap();
                    leaves[v.rank() as usize] += mu.leaf(joint);
                }
            }
            for leaf in &mut leaves {
                *leaf /= &weight;
            }
        }
        rows.push(DyadicMeasure::from_table(d, leaves));
    }
    let quasi = rows.iter().any(|r| r.mass().is_zero());
    Ok(FiniteKernel { level, rows, quasi })
}

/// (μπ)(E) = Σ_atoms μ(a) · π(a, E); total mass Σ μ(a)·rowmass(a).
pub fn apply_kernel(mu: &DyadicMeasure, k: &FiniteKernel) -> Result<DyadicMeasure, CoreError> {
    if mu.depth() != k.row_depth() {
        return Err(CoreError::LevelMismatch);
    }
    let mut leaves = vec![zero(); 1usize << k.row_depth()];
    for a in Word::empty().extensions(k.level) {
        let weight = mu.word_mass(a)?;
        if weight.is_zero() {
            continue;
        }
        for (i, leaf) in k.row(a).leaves().iter().enumerate() {
            leaves[i] += &weight * leaf;
        }
    }
    Ok(DyadicMeasure::from_table(k.row_depth(), leaves))
}

/// Disintegrations γ_1 … γ_{n_max} of one joint measure, with the base
/// marginal and, per level step, the largest row movement between a
/// positive-mass atom and its parent (a convergence diagnostic).
#[derive(Clone, Debug)]
pub struct DisintegrationTower {
    base: DyadicMeasure,
    kernels: Vec<FiniteKernel>,
    max_row_change: Vec<Rat>,
}

pub fn kernel_tower(mu: &DyadicMeasure, n_max: u8) -> Result<DisintegrationTower, CoreError> {
    let mut kernels = Vec::with_capacity(n_max as usize);
    for level in 1..=n_max {
        kernels.push(disintegrate(mu, level)?);
    }
    let base = mu.bit_marginal(Parity::Even)?;
    let full_terms = (1u64 << (base.depth() + 1)) - 2;
    let mut max_row_change = Vec::new();
    for pair in kernels.windows(2) {
        let (coarse, fine) = (&pair[0], &pair[1]);
        let mut worst = zero();
        for c in Word::empty().extensions(fine.level) {
            if base.word_mass(c)?.is_positive() {
                let d = DyadicMeasure::rho_distance(
                    coarse.row(c.prefix(coarse.level)),
                    fine.row(c),
                    full_terms,
                )?;
                worst = worst.max(d);
            }
        }
        max_row_change.push(worst);
    }
    Ok(DisintegrationTower { base, kernels, max_row_change })
}

impl DisintegrationTower {
    pub fn base(&self) -> &DyadicMeasure {
        &self.base
    }

    pub fn kernels(&self) -> &[FiniteKernel] {
        &self.kernels
    }

    pub fn max_row_change(&self) -> &[Rat] {
        &self.max_row_change
    }

    /// Martingale coherence: on every positive-mass atom, the mass-weighted
    /// average of the children's rows reproduces the parent's row exactly.
    pub fn verify_coherence(&self) -> Result<(), CoreError> {
        for pair in self.kernels.windows(2) {
            let (coarse, fine) = (&pair[0], &pair[1]);
            for a in Word::empty().extensions(coarse.level) {
                let parent_mass = self.base.word_mass(a)?;
                if !parent_mass.is_positive() {
                    continue;
                }
                let mut average = vec![zero(); 1usize << fine.row_depth()];
                for c in [a.child(0), a.child(1)] {
                    let child_mass = self.base.word_mass(c)?;
                    if child_mass.is_zero() {
                        continue;
                    }
                    let share = child_mass / &parent_mass;
                    for (i, leaf) in fine.row(c).leaves().iter().enumerate() {
                        average[i] += &share * leaf;
                    }
                }
                if average != coarse.row(a).leaves() {
                    return Err(CoreError::ConsistencyViolation {
                        level: coarse.level as usize,
                        word: a,
                        declared: coarse.row(a).mass().clone(),
                        marginal: average.iter().sum(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Gauss-Jordan elimination on an augmented system; Some(solution) only when
/// the system is consistent with every variable pivoted (a unique solution).
fn solve_unique(mut m: Vec<Vec<Rat>>, vars: usize) -> Option<Vec<Rat>> {
    let rows = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; vars];
    let mut next_row = 0;
    for col in 0..vars {
        let Some(r) = (next_row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(next_row, r);
        let inv = m[next_row][col].clone();
        for x in m[next_row].iter_mut() {
            *x /= &inv;
        }
        for r in 0..rows {
            if r != next_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..=vars {
                    let delta = &factor * &m[next_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }
    for r in 0..rows {
        if m[r][..vars].iter().all(Rat::is_zero) && !m[r][vars].is_zero() {
            return None;
        }
    }
    pivot_of_col
        .iter()
        .map(|p| p.map(|r| m[r][vars].clone()))
        .collect()
}

/// A vertex of the fixed-point polytope { x ≥ 0 : xP = x, Σx = 1 } over the
/// kernel's atoms, together with the induced row-depth measure Σ x_a·row_a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub weights: Vec<Rat>,
    pub measure: DyadicMeasure,
}

/// All vertices, by support enumeration: a support yields a vertex exactly
/// when the restricted system has a unique, strictly positive solution.
/// Sorted lexicographically by weight vector.
pub fn fixed_points(k: &FiniteKernel) -> Vec<FixedPoint> {
    let m = 1usize << k.level;
    let atoms: Vec<Word> = Word::empty().extensions(k.level).collect();
    let p: Vec<Vec<Rat>> = atoms
        .iter()
        .map(|&a| {
            atoms
                .iter()
                .map(|&b| k.row(a).word_mass(b).unwrap())
                .collect()
        })
        .collect();
    let mut vertices: Vec<FixedPoint> = Vec::new();
    // support enumeration is exponential in the atom count; intended for
    // small levels
    for support in 1u128..1 << m {
        let vars: Vec<usize> = (0..m).filter(|a| support >> a & 1 == 1).collect();
        let mut system: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
        for b in 0..m {
            let mut row: Vec<Rat> = vars
                .iter()
                .map(|&a| {
                    let mut coef = p[a][b].clone();
                    if a == b {
                        coef -= one();
                    }
                    coef
                })
                .collect();
            row.push(zero());
            system.push(row);
        }
        let mut total: Vec<Rat> = vec![one(); vars.len()];
        total.push(one());
        system.push(total);
        let Some(solution) = solve_unique(system, vars.len()) else {
            continue;
        };
        if !solution.iter().all(Rat::is_positive) {
            continue;
        }
        let mut weights = vec![zero(); m];
        let mut leaves = vec![zero(); 1usize << k.row_depth()];
        for (j, &a) in vars.iter().enumerate() {
            weights[a] = solution[j].clone();
            for (i, leaf) in k.rows[a].leaves().iter().enumerate() {
                leaves[i] += &solution[j] * leaf;
            }
        }
        let fixed = FixedPoint { weights, measure: DyadicMeasure::from_table(k.row_depth(), leaves) };
        if !vertices.iter().any(|v| v.weights == fixed.weights) {
            vertices.push(fixed);
        }
    }
    vertices.sort_by(|a, b| a.weights.cmp(&b.weights));
    vertices
}

/// The first atom, in word order, whose row carries mass outside the atom's
/// own cylinder; `outside` is that cylinder's complement at the atom depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictWitness {
    pub atom: Word,
    pub outside: CylinderSet,
    pub escape: Rat,
}

impl FiniteKernel {
    /// Strictness as support containment: every row lives inside its own
    /// atom. For E the whole space, the strictness identity
    /// π(x, E′ ∩ E) = I_{E′}(x) π(x, E) forces row x to weigh its own atom
    /// with its full mass; conversely support containment gives the identity
    /// for all E′, E by additivity, so the single containment check decides.
    pub fn strict_witness(&self) -> Option<StrictWitness> {
        for a in Word::empty().extensions(self.level) {
            let mut escape = zero();
            for (rank, weight) in self.rows[a.rank() as usize].leaves().iter().enumerate() {
                let v = Word::new(self.row_depth(), rank as u64);
                if v.prefix(self.level) != a {
                    escape += weight;
                }
            }
            if escape.is_positive() {
                return Some(StrictWitness {
                    atom: a,
                    outside: CylinderSet::single(a).complement(),
                    escape,
                });
            }
        }
        None
    }

    pub fn is_strict(&self) -> bool {
        self.strict_witness().is_none()
    }

    /// Keeps exactly the rows that behave as conditional 0/1 distributions:
    /// mass-1 rows fixed by every kernel in `others` whose equal-row class
    /// they fill. All other rows are zeroed, so the result assigns each
    /// retained atom probability 1 to its own class and 0 elsewhere.
    pub fn dynkin_refine(&self, others: &[FiniteKernel]) -> Result<FiniteKernel, CoreError> {
        for o in others {
            if o.level != self.level || o.row_depth() != self.row_depth() {
                return Err(CoreError::LevelMismatch);
            }
        }
        let atoms: Vec<Word> = Word::empty().extensions(self.level).collect();
        let fixed: Vec<bool> = atoms
            .iter()
            .map(|&a| {
                let row = self.row(a);
                row.mass().is_one()
                    && others
                        .iter()
                        .all(|o| &apply_kernel(row, o).unwrap() == row)
            })
            .collect();
        let mut rows = Vec::with_capacity(atoms.len());
        for (i, &a) in atoms.iter().enumerate() {
            if !fixed[i] {
                rows.push(DyadicMeasure::zero_measure(self.row_depth()));
                continue;
            }
            // equal rows satisfy the same fixedness conditions, so the class
            // stays inside the fixed set
            let class: Vec<Word> = atoms
                .iter()
                .copied()
                .filter(|&b| self.row(b) == self.row(a))
                .collect();
            let class_set = CylinderSet::new(self.level, class).unwrap();
            if self.row(a).cylinder_mass(&class_set)?.is_one() {
                rows.push(self.row(a).clone());
            } else {
                rows.push(DyadicMeasure::zero_measure(self.row_depth()));
            }
        }
        let quasi = rows.iter().any(|r| r.mass().is_zero());
        Ok(FiniteKernel { level: self.level, rows, quasi })
    }
}
