//! Property tests over seeded random frameworks.

use std::collections::BTreeSet;

use proptest::prelude::*;

use saf::cli;
use saf::core::{core_extensions, decompose, lift};
use saf::corpus::{random_corpus, random_saf};
use saf::framework::ArgumentId;
use saf::projection::{check_preservation, forget, reach_attack};
use saf::semantics::{
    characteristic, conflict_free, extensions, grounded, SemanticsLabel,
};
use saf::Saf;

fn arb_saf(max_args: usize) -> impl Strategy<Value = Saf> {
    any::<u64>().prop_map(move |seed| random_saf(seed, max_args))
}

fn subset_from_mask(saf: &Saf, mask: u64) -> BTreeSet<ArgumentId> {
    saf.arguments()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << (i % 64)) != 0)
        .map(|(_, a)| a.clone())
        .collect()
}

fn as_set(ext: &[ArgumentId]) -> BTreeSet<ArgumentId> {
    ext.iter().cloned().collect()
}

proptest! {
    #[test]
    fn closures_are_reflexive_and_dual(saf in arb_saf(7)) {
        for x in saf.arguments() {
            prop_assert!(saf.sub_closure(x).unwrap().contains(x));
            prop_assert!(saf.reach_structural(x).unwrap().contains(x));
            for y in saf.arguments() {
                let fwd = saf.sub_closure(x).unwrap().contains(y);
                let bwd = saf.reach_structural(y).unwrap().contains(x);
                prop_assert_eq!(fwd, bwd);
            }
        }
    }

    #[test]
    fn closure_of_a_member_stays_inside_the_closure(saf in arb_saf(7)) {
        for a in saf.arguments() {
            let closure = saf.sub_closure(a).unwrap();
            for x in &closure {
                prop_assert!(saf.sub_closure(x).unwrap().is_subset(&closure));
            }
        }
    }

    #[test]
    fn validation_is_idempotent(saf in arb_saf(7)) {
        let rebuilt = Saf::new(
            saf.arguments().to_vec(),
            saf.attack_pairs().map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>(),
            saf.subarg_pairs().map(|(a, b)| (a.clone(), b.clone())).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert_eq!(&saf, &rebuilt);
    }

    #[test]
    fn characteristic_output_is_subargument_closed(saf in arb_saf(7), mask in any::<u64>()) {
        let defended = characteristic(&saf, &subset_from_mask(&saf, mask)).unwrap();
        for a in &defended {
            prop_assert!(saf.sub_closure(a).unwrap().is_subset(&defended));
        }
    }

    #[test]
    fn characteristic_is_monotone(saf in arb_saf(7), m1 in any::<u64>(), m2 in any::<u64>()) {
        let small = subset_from_mask(&saf, m1 & m2);
        let large = subset_from_mask(&saf, m1 | m2);
        let def_small = characteristic(&saf, &small).unwrap();
        let def_large = characteristic(&saf, &large).unwrap();
        prop_assert!(def_small.is_subset(&def_large));
    }

    #[test]
    fn projection_only_adds_attacks(saf in arb_saf(7)) {
        let projected = forget(&saf);
        let lifted: BTreeSet<(String, String)> = projected
            .attack_pairs()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        for (a, b) in saf.attack_pairs() {
            prop_assert!(lifted.contains(&(a.to_string(), b.to_string())));
        }
    }

    #[test]
    fn reaches_contain_their_origin(saf in arb_saf(7)) {
        let projected = forget(&saf);
        for x in saf.arguments() {
            prop_assert!(reach_attack(&projected, x).unwrap().contains(x));
        }
    }

    #[test]
    fn canonical_documents_round_trip(saf in arb_saf(7)) {
        let document = saf.canonical_document();
        let reparsed = cli::parse(&document).unwrap().to_saf().unwrap();
        prop_assert_eq!(&saf, &reparsed);
        prop_assert_eq!(reparsed.canonical_document(), document);
    }

    #[test]
    fn core_attacks_avoid_status_dependent_arguments(saf in arb_saf(7)) {
        let decomposition = decompose(&saf);
        for (a, b) in decomposition.core().attack_pairs() {
            prop_assert!(decomposition.conflict_handling().contains(a));
            prop_assert!(decomposition.conflict_handling().contains(b));
            prop_assert!(!decomposition.status_dependent().contains(a));
            prop_assert!(!decomposition.status_dependent().contains(b));
        }
    }

    #[test]
    fn lift_is_monotone_and_bounded(saf in arb_saf(7), m1 in any::<u64>(), m2 in any::<u64>()) {
        let ch: Vec<ArgumentId> = decompose(&saf).conflict_handling().iter().cloned().collect();
        let pick = |mask: u64| -> BTreeSet<ArgumentId> {
            ch.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << (i % 64)) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        };
        let small = pick(m1 & m2);
        let large = pick(m1 | m2);
        let lift_small = lift(&saf, &small).unwrap();
        let lift_large = lift(&saf, &large).unwrap();
        prop_assert!(lift_small.is_subset(&lift_large));
        let all: BTreeSet<ArgumentId> = saf.arguments().iter().cloned().collect();
        prop_assert!(lift_large.is_subset(&all));
        let full: BTreeSet<ArgumentId> = ch.iter().cloned().collect();
        prop_assert_eq!(lift(&saf, &full).unwrap(), all);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_families_are_nested(saf in arb_saf(7)) {
        let admissible = extensions(&saf, SemanticsLabel::Admissible).unwrap();
        let complete = extensions(&saf, SemanticsLabel::Complete).unwrap();
        let preferred = extensions(&saf, SemanticsLabel::Preferred).unwrap();
        let stable = extensions(&saf, SemanticsLabel::Stable).unwrap();
        for ext in complete.extensions() {
            prop_assert!(admissible.contains(&as_set(ext)));
        }
        for ext in preferred.extensions() {
            prop_assert!(complete.contains(&as_set(ext)));
        }
        for ext in stable.extensions() {
            prop_assert!(preferred.contains(&as_set(ext)));
        }
        let ground = as_set(&grounded(&saf).extensions()[0]);
        prop_assert!(complete.contains(&ground));
        for ext in complete.extensions() {
            prop_assert!(ground.is_subset(&as_set(ext)));
        }
    }

    #[test]
    fn projection_preserves_every_semantics(saf in arb_saf(6)) {
        for semantics in SemanticsLabel::ALL {
            let report = check_preservation(&saf, semantics).unwrap();
            prop_assert!(
                report.equal,
                "{} diverged on {:?}: {:?} vs {:?}",
                semantics,
                saf,
                report.saf_extensions.extensions(),
                report.dung_extensions.extensions()
            );
        }
    }

    #[test]
    fn extensions_are_conflict_free_fixpoint_families(saf in arb_saf(6)) {
        let complete = extensions(&saf, SemanticsLabel::Complete).unwrap();
        for ext in complete.extensions() {
            let set = as_set(ext);
            prop_assert!(conflict_free(&saf, &set).unwrap());
            prop_assert_eq!(characteristic(&saf, &set).unwrap(), set);
        }
    }
}

/// Adding a subargument edge between status-dependent arguments (without
/// changing any argument's conflict-handling subargument set) must not
/// change the lifted extension families.
#[test]
fn status_dependent_restructuring_preserves_core_extensions() {
    let mut exercised = 0;
    for seed in 0..600u64 {
        let saf = random_saf(seed, 6);
        let decomposition = decompose(&saf);
        let ch = decomposition.conflict_handling();
        let sd: Vec<ArgumentId> = decomposition.status_dependent().iter().cloned().collect();
        if sd.len() < 2 {
            continue;
        }
        let mut chosen = None;
        'search: for x in &sd {
            for y in &sd {
                if x == y {
                    continue;
                }
                let x_closure = saf.sub_closure(x).unwrap();
                let y_closure = saf.sub_closure(y).unwrap();
                // no cycle, and the edge must genuinely change the closure
                if x_closure.contains(y) || y_closure.contains(x) {
                    continue;
                }
                let x_core: BTreeSet<&ArgumentId> = x_closure.iter().filter(|a| ch.contains(*a)).collect();
                let y_core: BTreeSet<&ArgumentId> = y_closure.iter().filter(|a| ch.contains(*a)).collect();
                if !x_core.is_subset(&y_core) {
                    continue;
                }
                chosen = Some((x.clone(), y.clone()));
                break 'search;
            }
        }
        let Some((x, y)) = chosen else { continue };
        let mut subargs: Vec<(ArgumentId, ArgumentId)> = saf
            .subarg_pairs()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        subargs.push((x, y));
        let mutated = Saf::new(
            saf.arguments().to_vec(),
            saf.attack_pairs()
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect::<Vec<_>>(),
            subargs,
        )
        .expect("the mutation keeps attacks minimal and the relation acyclic");
        assert_ne!(saf, mutated);
        for semantics in SemanticsLabel::ALL {
            let before = core_extensions(&saf, semantics).unwrap();
            let after = core_extensions(&mutated, semantics).unwrap();
            assert!(
                before.same_extensions(&after),
                "seed {seed}: {semantics} changed after restructuring"
            );
        }
        exercised += 1;
    }
    assert!(exercised >= 20, "only {exercised} mutations exercised");
}

/// Strict subsets of a minimal justification are never justifications.
#[test]
fn minimal_justifications_are_minimal() {
    use saf::explanation::{is_justification, minimal_justifications};
    let mut checked = 0;
    for saf in random_corpus(0xB0B, 80, 6) {
        let complete = extensions(&saf, SemanticsLabel::Complete).unwrap();
        for ext in complete.extensions() {
            let set = as_set(ext);
            for a in ext {
                for witness in minimal_justifications(&saf, &set, a).unwrap() {
                    assert!(is_justification(&saf, &set, a, &witness).unwrap());
                    for drop in &witness {
                        let mut smaller = witness.clone();
                        smaller.remove(drop);
                        assert!(
                            !is_justification(&saf, &set, a, &smaller).unwrap(),
                            "dropping {drop} left a justification"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}
