//! Subargument-aware semantics: conflict, defence, the characteristic
//! operator, and extension computation.
//!
//! Grounded extensions come from fixpoint iteration and work at any size.
//! The other semantics enumerate candidate sets by increasing cardinality,
//! pruning along conflict-free prefixes, and are gated by an enumeration
//! bound.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::framework::{ArgumentId, Saf, UnknownArgument};

/// Default cap on the argument count for enumeration-based semantics.
pub const DEFAULT_ENUM_BOUND: usize = 20;

/// Hard ceiling for any enumeration bound (candidate sets are 64-bit masks).
pub const MAX_ENUM_BOUND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemanticsLabel {
    Admissible,
    Complete,
    Grounded,
    Preferred,
    Stable,
}

impl SemanticsLabel {
    pub const ALL: [SemanticsLabel; 5] = [
        SemanticsLabel::Admissible,
        SemanticsLabel::Complete,
        SemanticsLabel::Grounded,
        SemanticsLabel::Preferred,
        SemanticsLabel::Stable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsLabel::Admissible => "admissible",
            SemanticsLabel::Complete => "complete",
            SemanticsLabel::Grounded => "grounded",
            SemanticsLabel::Preferred => "preferred",
            SemanticsLabel::Stable => "stable",
        }
    }
}

impl fmt::Display for SemanticsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown semantics `{0}`: expected admissible|complete|grounded|preferred|stable")]
pub struct UnknownSemantics(String);

impl FromStr for SemanticsLabel {
    type Err = UnknownSemantics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "admissible" => Ok(SemanticsLabel::Admissible),
            "complete" => Ok(SemanticsLabel::Complete),
            "grounded" => Ok(SemanticsLabel::Grounded),
            "preferred" => Ok(SemanticsLabel::Preferred),
            "stable" => Ok(SemanticsLabel::Stable),
            other => Err(UnknownSemantics(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("instance with {arguments} arguments exceeds the enumeration bound {bound}")]
pub struct InstanceTooLarge {
    pub arguments: usize,
    pub bound: usize,
}

/// The extensions of one framework under one semantics.
///
/// Extensions are stored sorted: each extension lists its members in name
/// order, and the collection is ordered lexicographically over those lists,
/// so equal inputs always render identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    semantics: SemanticsLabel,
    extensions: Vec<Vec<ArgumentId>>,
    framework_digest: String,
}

impl ExtensionSet {
    pub(crate) fn from_sets(
        semantics: SemanticsLabel,
        framework_digest: String,
        sets: impl IntoIterator<Item = BTreeSet<ArgumentId>>,
    ) -> Self {
        let mut extensions: Vec<Vec<ArgumentId>> = sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        extensions.sort();
        extensions.dedup();
        ExtensionSet {
            semantics,
            extensions,
            framework_digest,
        }
    }

    pub fn semantics(&self) -> SemanticsLabel {
        self.semantics
    }

    pub fn framework_digest(&self) -> &str {
        &self.framework_digest
    }

    pub fn extensions(&self) -> &[Vec<ArgumentId>] {
        &self.extensions
    }

    pub fn len(&self) -> usize {
        self.extensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extensions.is_empty()
    }

    pub fn contains(&self, set: &BTreeSet<ArgumentId>) -> bool {
        let as_vec: Vec<ArgumentId> = set.iter().cloned().collect();
        self.extensions.binary_search(&as_vec).is_ok()
    }

    /// Set-of-sets equality, ignoring which framework produced each side.
    pub fn same_extensions(&self, other: &ExtensionSet) -> bool {
        self.extensions == other.extensions
    }

    /// First extension present in exactly one of the two collections.
    pub fn first_difference(&self, other: &ExtensionSet) -> Option<Vec<ArgumentId>> {
        let ours: BTreeSet<&Vec<ArgumentId>> = self.extensions.iter().collect();
        let theirs: BTreeSet<&Vec<ArgumentId>> = other.extensions.iter().collect();
        ours.symmetric_difference(&theirs).next().map(|v| (*v).clone())
    }
}

/// True when some member of `Sub*(a)` directly attacks some member of
/// `Sub*(b)`. Not symmetric; conflict-freeness quantifies over ordered pairs.
pub fn in_conflict(saf: &Saf, a: &ArgumentId, b: &ArgumentId) -> Result<bool, UnknownArgument> {
    let i = saf.index_of(a)?;
    let j = saf.index_of(b)?;
    Ok(saf.closure_targets_bits(i).intersects(saf.sub_bits(j)))
}

/// True when no two members of `set` (ordered pairs, including an argument
/// with itself) are in conflict.
pub fn conflict_free(saf: &Saf, set: &BTreeSet<ArgumentId>) -> Result<bool, UnknownArgument> {
    let bits = saf.set_to_bits(set)?;
    Ok(conflict_free_bits(saf, &bits))
}

/// True when every attack on any member of `Sub*(a)` is countered from `set`,
/// where a counterattack may hit any member of the attacker's closure.
pub fn defends(
    saf: &Saf,
    set: &BTreeSet<ArgumentId>,
    a: &ArgumentId,
) -> Result<bool, UnknownArgument> {
    let bits = saf.set_to_bits(set)?;
    let i = saf.index_of(a)?;
    let countered = countered_attackers(saf, &bits);
    Ok(saf.closure_attackers_bits(i).is_subset(&countered))
}

/// The set of arguments defended by `set`. Always subargument-closed.
pub fn characteristic(
    saf: &Saf,
    set: &BTreeSet<ArgumentId>,
) -> Result<BTreeSet<ArgumentId>, UnknownArgument> {
    let bits = saf.set_to_bits(set)?;
    Ok(saf.bits_to_set(&characteristic_bits(saf, &bits)))
}

/// The grounded extension: the least fixpoint of the characteristic
/// operator, reached by iterating from the empty set.
pub fn grounded(saf: &Saf) -> ExtensionSet {
    let fixpoint = grounded_bits(saf);
    ExtensionSet::from_sets(
        SemanticsLabel::Grounded,
        saf.digest(),
        [saf.bits_to_set(&fixpoint)],
    )
}

/// Extension computation under the default enumeration bound.
pub fn extensions(saf: &Saf, semantics: SemanticsLabel) -> Result<ExtensionSet, InstanceTooLarge> {
    extensions_bounded(saf, semantics, DEFAULT_ENUM_BOUND)
}

/// Extension computation with an explicit enumeration bound (capped at
/// [`MAX_ENUM_BOUND`]). Grounded semantics ignores the bound.
pub fn extensions_bounded(
    saf: &Saf,
    semantics: SemanticsLabel,
    bound: usize,
) -> Result<ExtensionSet, InstanceTooLarge> {
    if semantics == SemanticsLabel::Grounded {
        return Ok(grounded(saf));
    }
    let n = saf.arg_count();
    let bound = bound.min(MAX_ENUM_BOUND);
    if n > bound {
        return Err(InstanceTooLarge {
            arguments: n,
            bound,
        });
    }
    let masks = classify(saf, semantics);
    Ok(ExtensionSet::from_sets(
        semantics,
        saf.digest(),
        masks.into_iter().map(|m| mask_to_set(saf, m)),
    ))
}

pub(crate) fn conflict_free_bits(saf: &Saf, e: &BitSet) -> bool {
    let n = saf.arg_count();
    let mut attacked = BitSet::new(n);
    let mut closure = BitSet::new(n);
    for a in e.iter() {
        attacked.union_with(saf.closure_targets_bits(a));
        closure.union_with(saf.sub_bits(a));
    }
    !attacked.intersects(&closure)
}

/// Attackers neutralised by `e`: every argument whose closure is hit by a
/// direct attack launched from a member of `e`.
fn countered_attackers(saf: &Saf, e: &BitSet) -> BitSet {
    let n = saf.arg_count();
    let mut hit = BitSet::new(n);
    for c in e.iter() {
        hit.union_with(saf.targets_bits(c));
    }
    let mut countered = BitSet::new(n);
    for b in 0..n {
        if hit.intersects(saf.sub_bits(b)) {
            countered.insert(b);
        }
    }
    countered
}

pub(crate) fn characteristic_bits(saf: &Saf, e: &BitSet) -> BitSet {
    let n = saf.arg_count();
    let countered = countered_attackers(saf, e);
    let mut defended = BitSet::new(n);
    for a in 0..n {
        if saf.closure_attackers_bits(a).is_subset(&countered) {
            defended.insert(a);
        }
    }
    defended
}

pub(crate) fn grounded_bits(saf: &Saf) -> BitSet {
    let mut current = BitSet::new(saf.arg_count());
    loop {
        let next = characteristic_bits(saf, &current);
        if next == current {
            return current;
        }
        current = next;
    }
}

fn mask_to_set(saf: &Saf, mask: u64) -> BTreeSet<ArgumentId> {
    (0..saf.arg_count())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| saf.name_of(i).clone())
        .collect()
}

/// Precomputed per-argument masks for the enumeration fast path
/// (usable whenever the argument count fits in a word).
struct Masks {
    n: usize,
    sub: Vec<u64>,
    targets: Vec<u64>,
    closure_targets: Vec<u64>,
    closure_attackers: Vec<u64>,
    /// arguments conflicting with themselves
    self_conflicting: u64,
    /// symmetric conflict adjacency: either orientation of `in_conflict`
    sym_conflict: Vec<u64>,
}

impl Masks {
    fn build(saf: &Saf) -> Masks {
        let n = saf.arg_count();
        let sub: Vec<u64> = (0..n).map(|i| saf.sub_bits(i).as_u64()).collect();
        let targets: Vec<u64> = (0..n).map(|i| saf.targets_bits(i).as_u64()).collect();
        let closure_targets: Vec<u64> =
            (0..n).map(|i| saf.closure_targets_bits(i).as_u64()).collect();
        let closure_attackers: Vec<u64> =
            (0..n).map(|i| saf.closure_attackers_bits(i).as_u64()).collect();
        let mut sym_conflict = vec![0u64; n];
        let mut self_conflicting = 0u64;
        for i in 0..n {
            for j in 0..n {
                let conflict =
                    closure_targets[i] & sub[j] != 0 || closure_targets[j] & sub[i] != 0;
                if conflict {
                    sym_conflict[i] |= 1 << j;
                }
            }
            if closure_targets[i] & sub[i] != 0 {
                self_conflicting |= 1 << i;
            }
        }
        Masks {
            n,
            sub,
            targets,
            closure_targets,
            closure_attackers,
            self_conflicting,
            sym_conflict,
        }
    }

    /// All conflict-free sets, produced stratum by stratum: each level
    /// extends the previous one by a single higher-index argument, so no
    /// conflicting candidate is ever expanded.
    fn conflict_free_sets(&self) -> Vec<u64> {
        let mut all = vec![0u64];
        let mut level: Vec<(u64, usize)> = vec![(0, 0)];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &(set, start) in &level {
                for j in start..self.n {
                    let bit = 1u64 << j;
                    if self.self_conflicting & bit != 0 || self.sym_conflict[j] & set != 0 {
                        continue;
                    }
                    let extended = set | bit;
                    all.push(extended);
                    next.push((extended, j + 1));
                }
            }
            level = next;
        }
        all
    }

    fn defended_by(&self, e: u64) -> u64 {
        let mut hit = 0u64;
        let mut rest = e;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            hit |= self.targets[i];
        }
        let mut countered = 0u64;
        for b in 0..self.n {
            if hit & self.sub[b] != 0 {
                countered |= 1 << b;
            }
        }
        let mut defended = 0u64;
        for a in 0..self.n {
            if self.closure_attackers[a] & !countered == 0 {
                defended |= 1 << a;
            }
        }
        defended
    }

    /// Arguments in structure-aware conflict with `e` through an attack
    /// launched inside the closure of one of its members.
    fn covered_by(&self, e: u64) -> u64 {
        let mut attacked = 0u64;
        let mut rest = e;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            attacked |= self.closure_targets[i];
        }
        let mut covered = 0u64;
        for a in 0..self.n {
            if attacked & self.sub[a] != 0 {
                covered |= 1 << a;
            }
        }
        covered
    }
}

fn classify(saf: &Saf, semantics: SemanticsLabel) -> Vec<u64> {
    let masks = Masks::build(saf);
    let universe: u64 = if masks.n == 64 {
        u64::MAX
    } else {
        (1u64 << masks.n) - 1
    };
    let candidates = masks.conflict_free_sets();
    match semantics {
        SemanticsLabel::Admissible => candidates
            .into_iter()
            .filter(|&e| e & !masks.defended_by(e) == 0)
            .collect(),
        SemanticsLabel::Complete => candidates
            .into_iter()
            .filter(|&e| masks.defended_by(e) == e)
            .collect(),
        SemanticsLabel::Preferred => {
            let complete: Vec<u64> = candidates
                .into_iter()
                .filter(|&e| masks.defended_by(e) == e)
                .collect();
            complete
                .iter()
                .copied()
                .filter(|&e| !complete.iter().any(|&o| o != e && e & !o == 0))
                .collect()
        }
        SemanticsLabel::Stable => candidates
            .into_iter()
            .filter(|&e| {
                let covered = masks.covered_by(e);
                universe & !e & !covered == 0
            })
            .collect(),
        SemanticsLabel::Grounded => unreachable!("grounded is computed by fixpoint iteration"),
    }
}
