//! Exhaustive verification suites for the structural theory of finite
//! measurable spaces: every sigma-algebra on small ground sets, every map
//! between them, checked against the literal statements of the exactness,
//! atom, trace, and product laws.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::finite::{
    all_maps, all_sigma_algebras, atom_map_checks, is_exactly_measurable, product_sigma,
    render_family, sigma_generate, trace_family, trace_sigma, FinMap, FinSigma, Measurability,
};

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> SuiteReport {
        SuiteReport { name, cases: 0, failures: 0, first_failure: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

const MAX_DOMAIN: u8 = 4;
const MAX_CODOMAIN: u8 = 3;

fn for_all_triples(mut visit: impl FnMut(&FinSigma, &FinSigma, &FinMap)) {
    for dn in 1..=MAX_DOMAIN {
        let domains = all_sigma_algebras(dn);
        for cn in 1..=MAX_CODOMAIN {
            let codomains = all_sigma_algebras(cn);
            let maps = all_maps(dn, cn);
            for e in &domains {
                for fsig in &codomains {
                    for f in &maps {
                        visit(e, fsig, f);
                    }
                }
            }
        }
    }
}

fn describe_triple(e: &FinSigma, fsig: &FinSigma, f: &FinMap) -> String {
    format!(
        "f{:?} : {} -> {}",
        f,
        render_family(e.sets()),
        render_family(fsig.sets())
    )
}

/// A measurable map is exact iff every E pushes forward into the trace of the
/// codomain algebra on the image and pulls back to itself.
pub fn exactness_two_sided_suite() -> SuiteReport {
    let mut report = SuiteReport::new("exactness-two-sided");
    for_all_triples(|e, fsig, f| {
        let verdict = is_exactly_measurable(f, e, fsig).unwrap();
        let image = f.image();
        let criterion = verdict != Measurability::NotMeasurable
            && e.sets().iter().all(|&set| {
                let fwd = f.image_set(set);
                fsig.sets().iter().any(|&big| big & image == fwd) && f.preimage(fwd) == set
            });
        report.record((verdict == Measurability::Exact) == criterion, || {
            describe_triple(e, fsig, f)
        });
    });
    report
}

/// Exact maps preserve unions, intersections, and disjointness of images.
pub fn exact_image_boolean_suite() -> SuiteReport {
    let mut report = SuiteReport::new("exact-image-boolean");
    for_all_triples(|e, fsig, f| {
        if is_exactly_measurable(f, e, fsig).unwrap() != Measurability::Exact {
            return;
        }
        for &s1 in e.sets() {
            for &s2 in e.sets() {
                let (i1, i2) = (f.image_set(s1), f.image_set(s2));
                let ok = f.image_set(s1 | s2) == i1 | i2
                    && f.image_set(s1 & s2) == i1 & i2
                    && (s1 & s2 != 0 || i1 & i2 == 0);
                report.record(ok, || {
                    format!("{} sets {s1:b},{s2:b}", describe_triple(e, fsig, f))
                });
            }
        }
    });
    report
}

/// On a separated domain, exactness forces injectivity.
pub fn separated_exact_injective_suite() -> SuiteReport {
    let mut report = SuiteReport::new("separated-exact-injective");
    for_all_triples(|e, fsig, f| {
        if !e.is_separated() {
            return;
        }
        if is_exactly_measurable(f, e, fsig).unwrap() != Measurability::Exact {
            return;
        }
        report.record(f.is_injective(), || describe_triple(e, fsig, f));
    });
    report
}

/// When the codomain is separated, the atoms of the domain of an exact map
/// are exactly the nonempty fibers.
pub fn atoms_are_fibers_suite() -> SuiteReport {
    let mut report = SuiteReport::new("atoms-are-fibers");
    for_all_triples(|e, fsig, f| {
        if !fsig.is_separated() {
            return;
        }
        if is_exactly_measurable(f, e, fsig).unwrap() != Measurability::Exact {
            return;
        }
        let mut fibers: Vec<u64> = (0..f.codomain())
            .filter(|&z| f.image() >> z & 1 == 1)
            .map(|z| f.preimage(1 << z))
            .collect();
        fibers.sort_unstable_by_key(|m| m.trailing_zeros());
        report.record(fibers == e.atoms(), || describe_triple(e, fsig, f));
    });
    report
}

/// Measurable maps that are injective on atoms satisfy preimage-of-image
/// identity, preserve disjointness of images, and, when surjective, respect
/// atoms.
pub fn atom_injective_consequences_suite() -> SuiteReport {
    let mut report = SuiteReport::new("atom-injective-consequences");
    for_all_triples(|e, fsig, f| {
        if is_exactly_measurable(f, e, fsig).unwrap() == Measurability::NotMeasurable {
            return;
        }
        let flags = atom_map_checks(f, e, fsig).unwrap();
        if !flags.injective_on_atoms {
            return;
        }
        let pullback_ok = e.sets().iter().all(|&s| f.preimage(f.image_set(s)) == s);
        let disjoint_ok = e.sets().iter().all(|&s1| {
            e.sets()
                .iter()
                .all(|&s2| s1 & s2 != 0 || f.image_set(s1) & f.image_set(s2) == 0)
        });
        let respects_ok = !f.is_surjective() || flags.respects_atoms;
        report.record(pullback_ok && disjoint_ok && respects_ok, || {
            describe_triple(e, fsig, f)
        });
    });
    report
}

/// Exact maps are injective on atoms.
pub fn exact_injective_on_atoms_suite() -> SuiteReport {
    let mut report = SuiteReport::new("exact-injective-on-atoms");
    for_all_triples(|e, fsig, f| {
        if is_exactly_measurable(f, e, fsig).unwrap() != Measurability::Exact {
            return;
        }
        let flags = atom_map_checks(f, e, fsig).unwrap();
        report.record(flags.injective_on_atoms, || describe_triple(e, fsig, f));
    });
    report
}

/// Generating then tracing equals tracing the generators then generating,
/// for every family of subsets of a ground set of size at most `max_ground`
/// and every nonempty trace set.
pub fn trace_generate_commute_suite(max_ground: u8) -> SuiteReport {
    let mut report = SuiteReport::new("trace-generate-commute");
    for n in 1..=max_ground {
        let subsets = 1u32 << n;
        for fam_code in 0u64..1 << subsets {
            let family: Vec<u64> = (0..subsets as u64)
                .filter(|i| fam_code >> i & 1 == 1)
                .collect();
            let generated = sigma_generate(n, &family).unwrap();
            for a in 1..1u64 << n {
                let lhs = trace_sigma(&generated, a).unwrap();
                let rhs =
                    sigma_generate(a.count_ones() as u8, &trace_family(n, &family, a)).unwrap();
                report.record(lhs == rhs, || {
                    format!("ground {n} family {} trace {a:b}", render_family(&family))
                });
            }
        }
    }
    report
}

/// The trace of a product algebra on a rectangle is the product of the
/// traces.
pub fn trace_product_commute_suite() -> SuiteReport {
    let mut report = SuiteReport::new("trace-product-commute");
    for nx in 1..=3u8 {
        for ny in 1..=3u8 {
            let lefts = all_sigma_algebras(nx);
            let rights = all_sigma_algebras(ny);
            for e in &lefts {
                for f in &rights {
                    let prod = product_sigma(e, f).unwrap();
                    for a in 1..1u64 << nx {
                        for b in 1..1u64 << ny {
                            let mut ab = 0u64;
                            for x in 0..nx {
                                for y in 0..ny {
                                    if a >> x & 1 == 1 && b >> y & 1 == 1 {
                                        ab |= 1 << (x * ny + y);
                                    }
                                }
                            }
                            let lhs = trace_sigma(&prod, ab).unwrap();
                            let rhs = product_sigma(
                                &trace_sigma(e, a).unwrap(),
                                &trace_sigma(f, b).unwrap(),
                            )
                            .unwrap();
                            report.record(lhs == rhs, || {
                                format!(
                                    "{} x {} on {a:b} x {b:b}",
                                    render_family(e.sets()),
                                    render_family(f.sets())
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

pub fn run_all() -> Vec<SuiteReport> {
    vec![
        exactness_two_sided_suite(),
        exact_image_boolean_suite(),
        separated_exact_injective_suite(),
        atoms_are_fibers_suite(),
        atom_injective_consequences_suite(),
        exact_injective_on_atoms_suite(),
        trace_generate_commute_suite(4),
        trace_product_commute_suite(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_suites_pass() {
        for report in [
            exactness_two_sided_suite(),
            exact_image_boolean_suite(),
            separated_exact_injective_suite(),
            atoms_are_fibers_suite(),
            atom_injective_consequences_suite(),
            exact_injective_on_atoms_suite(),
            trace_product_commute_suite(),
        ] {
            assert!(
                report.passed(),
                "{}: {} failures of {}, first: {:?}",
                report.name,
                report.failures,
                report.cases,
                report.first_failure
            );
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn trace_generate_commutes_on_small_grounds() {
        let report = trace_generate_commute_suite(3);
        assert!(report.passed(), "first failure: {:?}", report.first_failure);
        assert_eq!(report.cases, 4 + 48 + 1792);
    }

    #[test]
    fn suites_count_nontrivial_case_loads() {
        // the two-sided suite visits every (algebra, algebra, map) triple
        let r = exactness_two_sided_suite();
        assert_eq!(r.cases, {
            let bell = [1u64, 1, 2, 5, 15];
            let mut total = 0;
            for dn in 1..=4u64 {
                for cn in 1..=3u64 {
                    total += bell[dn as usize] * bell[cn as usize] * cn.pow(dn as u32);
                }
            }
            total
        });
    }
}
