//! Independent oracle for sigma-algebra generation: the literal closure of a
//! family under complement and pairwise union, iterated to a fixpoint. The
//! production path goes through membership signatures instead, so the two
//! must agree on every family over small grounds.

use std::collections::BTreeSet;

use cantor_core::finite::sigma_generate;

fn literal_closure(ground: u8, family: &[u64]) -> Vec<u64> {
    let full = if ground == 64 { u64::MAX } else { (1u64 << ground) - 1 };
    let mut sets: BTreeSet<u64> = family.iter().map(|s| s & full).collect();
    sets.insert(0);
    sets.insert(full);
    loop {
        let mut fresh: BTreeSet<u64> = BTreeSet::new();
        for &a in &sets {
            if !sets.contains(&(full & !a)) {
                fresh.insert(full & !a);
            }
            for &b in &sets {
                if !sets.contains(&(a | b)) {
                    fresh.insert(a | b);
                }
            }
        }
        if fresh.is_empty() {
            return sets.into_iter().collect();
        }
        sets.extend(fresh);
    }
}

#[test]
fn generation_matches_literal_closure_exhaustively() {
    for ground in 1..=4u8 {
        let masks = 1u32 << ground;
        for fam_code in 0u32..1 << masks {
            let family: Vec<u64> =
                (0..masks).filter(|m| fam_code >> m & 1 == 1).map(u64::from).collect();
            let generated = sigma_generate(ground, &family).unwrap();
            assert_eq!(
                generated.sets(),
                literal_closure(ground, &family),
                "ground {ground}, family {family:?}"
            );
        }
    }
}

#[test]
fn closure_members_are_atom_unions() {
    let ground = 4u8;
    for fam_code in (0u32..1 << 16).step_by(97) {
        let family: Vec<u64> =
            (0u32..16).filter(|m| fam_code >> m & 1 == 1).map(u64::from).collect();
        let e = sigma_generate(ground, &family).unwrap();
        let atoms = e.atoms();
        assert_eq!(atoms.iter().fold(0, |m, a| m | a), (1u64 << ground) - 1);
        for pair in atoms.windows(2) {
            assert_eq!(pair[0] & pair[1], 0);
        }
        for &s in e.sets() {
            let cover: u64 = atoms.iter().filter(|&&a| a & s != 0).fold(0, |m, &a| m | a);
            assert_eq!(cover, s);
        }
    }
}
