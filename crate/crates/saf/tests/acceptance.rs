//! Acceptance suite: one test per criterion, each printing a pass line once
//! its assertions hold. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use saf::core::{check_core_first, core_extensions, decompose, lift};
use saf::corpus::random_corpus;
use saf::explanation::{explain, explanation_loss_witness, minimal_justifications};
use saf::framework::ArgumentId;
use saf::oracle::{oracle_dung, oracle_extensions};
use saf::projection::{
    check_preservation, dung_extensions, find_collision, forget, reach_divergence,
};
use saf::semantics::{characteristic, conflict_free, extensions, grounded, SemanticsLabel};
use saf::{ExtensionSet, Saf};

const CORPUS_SEED: u64 = 0x5afc0de;

fn fixture(name: &str) -> Saf {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    let text = std::fs::read_to_string(&path).expect("fixture exists");
    saf::cli::parse(&text)
        .expect("fixture parses")
        .to_saf()
        .expect("fixture validates")
}

fn fixtures() -> Vec<Saf> {
    vec![fixture("motivating.saf"), fixture("core_example.saf")]
}

fn id(name: &str) -> ArgumentId {
    ArgumentId::new(name).unwrap()
}

fn set(names: &[&str]) -> BTreeSet<ArgumentId> {
    names.iter().map(|n| id(n)).collect()
}

fn ext_sets(exts: &ExtensionSet) -> Vec<BTreeSet<ArgumentId>> {
    exts.extensions()
        .iter()
        .map(|e| e.iter().cloned().collect())
        .collect()
}

struct TestRng(u64);

impl TestRng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

fn subset_from_mask(saf: &Saf, mask: u64) -> BTreeSet<ArgumentId> {
    saf.arguments()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << (i % 64)) != 0)
        .map(|(_, a)| a.clone())
        .collect()
}

#[test]
fn criterion_01_motivating_example() {
    let started = Instant::now();
    let saf = fixture("motivating.saf");

    let complete = extensions(&saf, SemanticsLabel::Complete).unwrap();
    assert_eq!(
        ext_sets(&complete),
        vec![set(&[]), set(&["a"]), set(&["b1", "b2", "b3", "b4", "b5"])]
    );
    assert_eq!(ext_sets(&grounded(&saf)), vec![set(&[])]);
    let two = vec![set(&["a"]), set(&["b1", "b2", "b3", "b4", "b5"])];
    assert_eq!(
        ext_sets(&extensions(&saf, SemanticsLabel::Preferred).unwrap()),
        two
    );
    assert_eq!(
        ext_sets(&extensions(&saf, SemanticsLabel::Stable).unwrap()),
        two
    );
    for semantics in SemanticsLabel::ALL {
        let fast = extensions(&saf, semantics).unwrap();
        let reference = oracle_extensions(&saf, semantics).unwrap();
        assert!(fast.same_extensions(&reference), "{semantics} disagrees");
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("[acceptance] criterion 01 motivating example: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_core_example() {
    let saf = fixture("core_example.saf");
    let decomposition = decompose(&saf);
    assert_eq!(decomposition.conflict_handling(), &set(&["a", "b"]));
    assert_eq!(decomposition.status_dependent(), &set(&["c"]));

    let core_grounded = dung_extensions(decomposition.core(), SemanticsLabel::Grounded).unwrap();
    assert_eq!(ext_sets(&core_grounded), vec![set(&["a"])]);

    let lifted = lift(&saf, &set(&["a"])).unwrap();
    assert_eq!(lifted, set(&["a"]));
    assert_eq!(
        ext_sets(&core_extensions(&saf, SemanticsLabel::Grounded).unwrap()),
        vec![set(&["a"])]
    );
    println!("[acceptance] criterion 02 core example: PASS");
}

#[test]
fn criterion_03_forgetting_preserves_extensions() {
    let started = Instant::now();
    let corpus = random_corpus(CORPUS_SEED, 500, 7);
    let mut counterexamples = 0;
    for saf in &corpus {
        for semantics in SemanticsLabel::ALL {
            let report = check_preservation(saf, semantics).unwrap();
            if !report.equal {
                counterexamples += 1;
                eprintln!("preservation failed: {semantics} on {saf:?}");
            }
        }
    }
    assert_eq!(counterexamples, 0);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "[acceptance] criterion 03 preservation over {} instances x 5 semantics: PASS ({elapsed:?})",
        corpus.len()
    );
}

#[test]
fn criterion_04_characteristic_is_subargument_closed() {
    let mut corpus = fixtures();
    corpus.extend(random_corpus(CORPUS_SEED + 1000, 200, 6));
    let mut violations = 0;
    let mut checked = 0;
    for saf in &corpus {
        let n = saf.arg_count();
        for mask in 0..(1u64 << n) {
            let defended = characteristic(saf, &subset_from_mask(saf, mask)).unwrap();
            checked += 1;
            for a in &defended {
                if !saf.sub_closure(a).unwrap().is_subset(&defended) {
                    violations += 1;
                }
            }
        }
    }
    assert_eq!(violations, 0);
    println!(
        "[acceptance] criterion 04 subargument-closed characteristic over {checked} sets: PASS"
    );
}

#[test]
fn criterion_05_characteristic_monotonicity() {
    let mut rng = TestRng(CORPUS_SEED + 5);
    let mut checked = 0;
    for saf in fixtures() {
        for _ in 0..1000 {
            let m1 = rng.next();
            let m2 = rng.next();
            let small = subset_from_mask(&saf, m1 & m2);
            let large = subset_from_mask(&saf, m1 | m2);
            let def_small = characteristic(&saf, &small).unwrap();
            let def_large = characteristic(&saf, &large).unwrap();
            assert!(
                def_small.is_subset(&def_large),
                "monotonicity violated for {small:?} vs {large:?}"
            );
            checked += 1;
        }
    }
    println!("[acceptance] criterion 05 monotonicity over {checked} nested pairs: PASS");
}

#[test]
fn criterion_06_fixpoint_characterisation() {
    let mut corpus: Vec<Saf> = fixtures();
    corpus.extend(random_corpus(CORPUS_SEED + 1000, 200, 6));
    for saf in &corpus {
        let complete = extensions(saf, SemanticsLabel::Complete).unwrap();
        let mut fixpoints = Vec::new();
        for mask in 0..(1u64 << saf.arg_count()) {
            let candidate = subset_from_mask(saf, mask);
            if conflict_free(saf, &candidate).unwrap()
                && characteristic(saf, &candidate).unwrap() == candidate
            {
                fixpoints.push(candidate);
            }
        }
        fixpoints.sort_by(|a, b| {
            let av: Vec<&ArgumentId> = a.iter().collect();
            let bv: Vec<&ArgumentId> = b.iter().collect();
            av.cmp(&bv)
        });
        assert_eq!(ext_sets(&complete), fixpoints, "fixpoint mismatch on {saf:?}");
    }
    println!(
        "[acceptance] criterion 06 complete = conflict-free fixpoints on {} instances: PASS",
        corpus.len()
    );
}

#[test]
fn criterion_07_grounded_is_least() {
    let mut corpus: Vec<Saf> = fixtures();
    corpus.extend(random_corpus(CORPUS_SEED, 500, 7));
    for saf in &corpus {
        let ground = ext_sets(&grounded(saf)).remove(0);
        // a fixpoint of the characteristic operator
        assert_eq!(characteristic(saf, &ground).unwrap(), ground);
        // contained in every complete extension, and equal to their intersection
        let complete = ext_sets(&extensions(saf, SemanticsLabel::Complete).unwrap());
        let mut intersection: Option<BTreeSet<ArgumentId>> = None;
        for ext in &complete {
            assert!(ground.is_subset(ext), "grounded not below {ext:?}");
            intersection = Some(match intersection {
                None => ext.clone(),
                Some(acc) => acc.intersection(ext).cloned().collect(),
            });
        }
        assert_eq!(Some(ground), intersection);
    }
    println!(
        "[acceptance] criterion 07 grounded = least fixpoint = intersection of complete on {} instances: PASS",
        corpus.len()
    );
}

#[test]
fn criterion_08_projection_collision_witness() {
    let started = Instant::now();
    let witness = find_collision(3).expect("a collision exists within 3 arguments");
    assert_ne!(witness.f1(), witness.f2());
    assert_eq!(forget(witness.f1()), forget(witness.f2()));
    assert_eq!(&forget(witness.f1()), witness.projected());
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("[acceptance] criterion 08 projection collision witness: PASS ({elapsed:?})");
}

#[test]
fn criterion_09_reach_divergence() {
    let rows = reach_divergence(&fixture("motivating.saf"));
    let b3 = rows
        .iter()
        .find(|r| r.argument == id("b3"))
        .expect("b3 diverges");
    assert_eq!(b3.structural, set(&["b3", "b4", "b5"]));
    assert_eq!(b3.attack, set(&["b3"]));
    assert!(!reach_divergence(&fixture("core_example.saf")).is_empty());
    println!("[acceptance] criterion 09 reach divergence values: PASS");
}

#[test]
fn criterion_10_core_first_computation() {
    let mut corpus: Vec<Saf> = fixtures();
    corpus.extend(random_corpus(CORPUS_SEED + 2000, 200, 7));
    let mut counterexamples = 0;
    for saf in &corpus {
        let report = check_core_first(saf).unwrap();
        if !report.passed() {
            counterexamples += 1;
            eprintln!("core-first failed on {saf:?}: {report:?}");
        }
    }
    assert_eq!(counterexamples, 0);
    println!(
        "[acceptance] criterion 10 core-first on {} instances: PASS",
        corpus.len()
    );
}

#[test]
fn criterion_11_lift_monotonicity_and_least_lift() {
    for saf in fixtures() {
        let decomposition = decompose(&saf);
        let ch: Vec<ArgumentId> = decomposition.conflict_handling().iter().cloned().collect();
        assert!(ch.len() <= 6, "fixtures stay exhaustively enumerable");
        let pick = |mask: u64| -> BTreeSet<ArgumentId> {
            ch.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        };
        for c2 in 0..(1u64 << ch.len()) {
            let lift_c2 = lift(&saf, &pick(c2)).unwrap();
            // sub-masks of c2 enumerate exactly the subsets of c2
            let mut c1 = c2;
            loop {
                let lift_c1 = lift(&saf, &pick(c1)).unwrap();
                assert!(lift_c1.is_subset(&lift_c2), "lift not monotone");
                if c1 == 0 {
                    break;
                }
                c1 = (c1 - 1) & c2;
            }
        }
        // the lift of the grounded core extension is below every lifted
        // complete core extension
        let core_grounded =
            ext_sets(&dung_extensions(decomposition.core(), SemanticsLabel::Grounded).unwrap())
                .remove(0);
        let least = lift(&saf, &core_grounded).unwrap();
        let core_complete =
            dung_extensions(decomposition.core(), SemanticsLabel::Complete).unwrap();
        for ext in core_complete.extensions() {
            let lifted = lift(&saf, &ext.iter().cloned().collect()).unwrap();
            assert!(least.is_subset(&lifted), "least lift not below {ext:?}");
        }
    }
    println!("[acceptance] criterion 11 lift monotonicity and least lift: PASS");
}

#[test]
fn criterion_12_justification_existence_and_determinism() {
    for saf in fixtures() {
        let complete = extensions(&saf, SemanticsLabel::Complete).unwrap();
        for ext in complete.extensions() {
            let e: BTreeSet<ArgumentId> = ext.iter().cloned().collect();
            for a in ext {
                let found = minimal_justifications(&saf, &e, a).unwrap();
                assert!(!found.is_empty(), "no justification for {a} in {e:?}");
                let canonical = explain(&saf, SemanticsLabel::Complete, &e, a).unwrap();
                assert!(found.contains(&canonical.witness.iter().cloned().collect()));
            }
        }
    }

    // byte-identical JSON across two separate processes
    let fixture_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/motivating.saf");
    let run = || {
        let output = Command::new(env!("CARGO_BIN_EXE_saf"))
            .arg("explain")
            .arg(&fixture_path)
            .args([
                "--semantics",
                "complete",
                "--extension",
                "b1,b2,b3,b4,b5",
                "--arg",
                "b3",
                "--json",
            ])
            .output()
            .expect("binary runs");
        assert!(output.status.success());
        output.stdout
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second, "explain output is not byte-stable");
    println!("[acceptance] criterion 12 justification existence and determinism: PASS");
}

#[test]
fn criterion_13_explanation_loss_witness() {
    let started = Instant::now();
    let witness = explanation_loss_witness();
    let (f1, f2) = (witness.f1(), witness.f2());
    assert_ne!(f1, f2);
    assert_eq!(forget(f1), forget(f2));
    let shared = extensions(f1, SemanticsLabel::Complete).unwrap();
    assert!(shared.contains(witness.extension()));
    assert!(extensions(f2, SemanticsLabel::Complete)
        .unwrap()
        .contains(witness.extension()));
    let a = witness.argument();
    assert_ne!(f1.sub_closure(a).unwrap(), f2.sub_closure(a).unwrap());
    let x1 = explain(f1, SemanticsLabel::Complete, witness.extension(), a).unwrap();
    let x2 = explain(f2, SemanticsLabel::Complete, witness.extension(), a).unwrap();
    assert_ne!(x1.witness, x2.witness);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("[acceptance] criterion 13 explanation loss witness: PASS ({elapsed:?})");
}

#[test]
fn criterion_14_oracle_equivalence() {
    let started = Instant::now();
    let mut corpus: Vec<Saf> = fixtures();
    corpus.extend(random_corpus(CORPUS_SEED, 500, 7));
    for saf in &corpus {
        let projected = forget(saf);
        for semantics in SemanticsLabel::ALL {
            let fast = extensions(saf, semantics).unwrap();
            let reference = oracle_extensions(saf, semantics).unwrap();
            assert!(
                fast.same_extensions(&reference),
                "{semantics} mismatch on {saf:?}: {:?} vs {:?}",
                fast.extensions(),
                reference.extensions()
            );
            let fast_dung = dung_extensions(&projected, semantics).unwrap();
            let reference_dung = oracle_dung(&projected, semantics).unwrap();
            assert!(
                fast_dung.same_extensions(&reference_dung),
                "attack-only {semantics} mismatch on {projected:?}"
            );
        }
    }
    let elapsed = started.elapsed();
    println!(
        "[acceptance] criterion 14 oracle equivalence on {} instances x 5 semantics: PASS ({elapsed:?})",
        corpus.len()
    );
}
