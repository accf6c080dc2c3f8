//! Conflict-handling core: partitioning arguments by direct conflict
//! participation, computing extensions on the induced core framework, and
//! lifting them back to the full argument set.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::framework::{ArgumentId, DungAf, Saf};
use crate::projection::dung_extensions_bounded;
use crate::semantics::{
    extensions_bounded, grounded, ExtensionSet, InstanceTooLarge, SemanticsLabel,
    DEFAULT_ENUM_BOUND,
};

/// Partition of a framework into conflict-handling arguments (attack
/// endpoints) and status-dependent arguments (everything else), together
/// with the attack-only core induced on the former.
#[derive(Debug, Clone)]
pub struct CoreDecomposition {
    conflict_handling: BTreeSet<ArgumentId>,
    status_dependent: BTreeSet<ArgumentId>,
    core: DungAf,
}

impl CoreDecomposition {
    pub fn conflict_handling(&self) -> &BTreeSet<ArgumentId> {
        &self.conflict_handling
    }

    pub fn status_dependent(&self) -> &BTreeSet<ArgumentId> {
        &self.status_dependent
    }

    pub fn core(&self) -> &DungAf {
        &self.core
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a subset of the conflict-handling core: {}", format_args(.0))]
pub struct NotACoreSubset(pub Vec<ArgumentId>);

fn format_args(args: &[ArgumentId]) -> String {
    args.iter()
        .map(|a| a.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn ch_bits(saf: &Saf) -> BitSet {
    let n = saf.arg_count();
    let mut ch = BitSet::new(n);
    for i in 0..n {
        if !saf.attackers_bits(i).is_empty() || !saf.targets_bits(i).is_empty() {
            ch.insert(i);
        }
    }
    ch
}

/// Splits the arguments into attack participants and the rest, and restricts
/// the projected attack relation to the participants.
pub fn decompose(saf: &Saf) -> CoreDecomposition {
    let n = saf.arg_count();
    let ch = ch_bits(saf);
    let mut core_attacks = Vec::new();
    for b in 0..n {
        if !ch.contains(b) {
            continue;
        }
        for a in saf.closure_attackers_bits(b).iter() {
            if ch.contains(a) {
                core_attacks.push((saf.name_of(a).clone(), saf.name_of(b).clone()));
            }
        }
    }
    let ch_names: BTreeSet<ArgumentId> = saf.bits_to_vec(&ch).into_iter().collect();
    let sd_names: BTreeSet<ArgumentId> = saf
        .arguments()
        .iter()
        .filter(|a| !ch_names.contains(a))
        .cloned()
        .collect();
    let core = DungAf::new(ch_names.iter().cloned().collect::<Vec<_>>(), core_attacks)
        .expect("core endpoints are conflict-handling arguments");
    CoreDecomposition {
        conflict_handling: ch_names,
        status_dependent: sd_names,
        core,
    }
}

/// Status-lift of a core set: all arguments whose conflict-handling
/// subarguments are contained in it. Arguments without core subarguments
/// lift unconditionally.
pub fn lift(
    saf: &Saf,
    core_set: &BTreeSet<ArgumentId>,
) -> Result<BTreeSet<ArgumentId>, NotACoreSubset> {
    let n = saf.arg_count();
    let ch = ch_bits(saf);
    let mut chosen = BitSet::new(n);
    let mut outside = Vec::new();
    for a in core_set {
        match saf.index_of(a) {
            Ok(i) if ch.contains(i) => chosen.insert(i),
            _ => outside.push(a.clone()),
        }
    }
    if !outside.is_empty() {
        return Err(NotACoreSubset(outside));
    }
    let mut lifted = BitSet::new(n);
    for a in 0..n {
        let mut core_subs = saf.sub_bits(a).clone();
        core_subs.intersect_with(&ch);
        if core_subs.is_subset(&chosen) {
            lifted.insert(a);
        }
    }
    Ok(saf.bits_to_set(&lifted))
}

/// Extensions obtained by solving the core and lifting each result.
pub fn core_extensions(
    saf: &Saf,
    semantics: SemanticsLabel,
) -> Result<ExtensionSet, InstanceTooLarge> {
    core_extensions_bounded(saf, semantics, DEFAULT_ENUM_BOUND)
}

pub fn core_extensions_bounded(
    saf: &Saf,
    semantics: SemanticsLabel,
    bound: usize,
) -> Result<ExtensionSet, InstanceTooLarge> {
    let decomposition = decompose(saf);
    let core_exts = dung_extensions_bounded(decomposition.core(), semantics, bound)?;
    let lifted = core_exts.extensions().iter().map(|ext| {
        let core_set: BTreeSet<ArgumentId> = ext.iter().cloned().collect();
        lift(saf, &core_set).expect("core extensions are core subsets")
    });
    Ok(ExtensionSet::from_sets(semantics, saf.digest(), lifted))
}

/// Outcome of comparing direct semantics against core-then-lift computation.
#[derive(Debug, Clone)]
pub struct CoreFirstReport {
    pub complete_equal: bool,
    pub grounded_equal: bool,
    /// A complete extension present on exactly one side, when they differ.
    pub counterexample: Option<Vec<ArgumentId>>,
}

impl CoreFirstReport {
    pub fn passed(&self) -> bool {
        self.complete_equal && self.grounded_equal
    }
}

/// Verifies that complete extensions computed directly coincide with lifted
/// core complete extensions, and that the grounded extension equals the lift
/// of the core grounded extension.
pub fn check_core_first(saf: &Saf) -> Result<CoreFirstReport, InstanceTooLarge> {
    check_core_first_bounded(saf, DEFAULT_ENUM_BOUND)
}

pub fn check_core_first_bounded(
    saf: &Saf,
    bound: usize,
) -> Result<CoreFirstReport, InstanceTooLarge> {
    let direct = extensions_bounded(saf, SemanticsLabel::Complete, bound)?;
    let lifted = core_extensions_bounded(saf, SemanticsLabel::Complete, bound)?;
    let complete_equal = direct.same_extensions(&lifted);

    let grounded_direct = grounded(saf);
    let grounded_lifted = core_extensions_bounded(saf, SemanticsLabel::Grounded, bound)?;
    let grounded_equal = grounded_direct.same_extensions(&grounded_lifted);

    let counterexample = if complete_equal {
        None
    } else {
        direct.first_difference(&lifted)
    };
    Ok(CoreFirstReport {
        complete_equal,
        grounded_equal,
        counterexample,
    })
}
