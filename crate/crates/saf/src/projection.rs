//! Forgetting structure: projection onto attack-only frameworks, standard
//! semantics on the projected side, reachability comparisons, and witness
//! searches for the places where projection loses information.

use std::collections::{BTreeSet, HashMap};

use crate::bitset::BitSet;
use crate::framework::{ArgumentId, DungAf, Saf, UnknownArgument};
use crate::semantics::{
    extensions_bounded, ExtensionSet, InstanceTooLarge, SemanticsLabel, DEFAULT_ENUM_BOUND,
    MAX_ENUM_BOUND,
};

/// Collapses a framework to an attack-only one: each direct attack is lifted
/// to every superargument of its target. Only the target side is lifted.
pub fn forget(saf: &Saf) -> DungAf {
    let n = saf.arg_count();
    let mut attacks = Vec::new();
    for b in 0..n {
        for a in saf.closure_attackers_bits(b).iter() {
            attacks.push((saf.name_of(a).clone(), saf.name_of(b).clone()));
        }
    }
    DungAf::new(saf.arguments().to_vec(), attacks)
        .expect("projected endpoints are declared arguments")
}

/// Standard attack-only semantics under the default enumeration bound.
pub fn dung_extensions(
    af: &DungAf,
    semantics: SemanticsLabel,
) -> Result<ExtensionSet, InstanceTooLarge> {
    dung_extensions_bounded(af, semantics, DEFAULT_ENUM_BOUND)
}

pub fn dung_extensions_bounded(
    af: &DungAf,
    semantics: SemanticsLabel,
    bound: usize,
) -> Result<ExtensionSet, InstanceTooLarge> {
    if semantics == SemanticsLabel::Grounded {
        let fixpoint = dung_grounded_bits(af);
        let set: BTreeSet<ArgumentId> = af.bits_to_vec(&fixpoint).into_iter().collect();
        return Ok(ExtensionSet::from_sets(semantics, af.digest(), [set]));
    }
    let n = af.arg_count();
    let bound = bound.min(MAX_ENUM_BOUND);
    if n > bound {
        return Err(InstanceTooLarge {
            arguments: n,
            bound,
        });
    }
    let masks = DungMasks::build(af);
    let sets = masks.classify(semantics).into_iter().map(|mask| {
        (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| af.name_of(i).clone())
            .collect::<BTreeSet<ArgumentId>>()
    });
    Ok(ExtensionSet::from_sets(semantics, af.digest(), sets))
}

fn dung_characteristic_bits(af: &DungAf, e: &BitSet) -> BitSet {
    let n = af.arg_count();
    let mut hit = BitSet::new(n);
    for c in e.iter() {
        hit.union_with(af.targets_bits(c));
    }
    let mut defended = BitSet::new(n);
    for a in 0..n {
        if af.attackers_bits(a).is_subset(&hit) {
            defended.insert(a);
        }
    }
    defended
}

fn dung_grounded_bits(af: &DungAf) -> BitSet {
    let mut current = BitSet::new(af.arg_count());
    loop {
        let next = dung_characteristic_bits(af, &current);
        if next == current {
            return current;
        }
        current = next;
    }
}

struct DungMasks {
    n: usize,
    attackers: Vec<u64>,
    targets: Vec<u64>,
    sym_conflict: Vec<u64>,
    self_attacking: u64,
}

impl DungMasks {
    fn build(af: &DungAf) -> DungMasks {
        let n = af.arg_count();
        let attackers: Vec<u64> = (0..n).map(|i| af.attackers_bits(i).as_u64()).collect();
        let targets: Vec<u64> = (0..n).map(|i| af.targets_bits(i).as_u64()).collect();
        let mut sym_conflict = vec![0u64; n];
        let mut self_attacking = 0u64;
        for i in 0..n {
            sym_conflict[i] = attackers[i] | targets[i];
            if targets[i] & (1 << i) != 0 {
                self_attacking |= 1 << i;
            }
        }
        DungMasks {
            n,
            attackers,
            targets,
            sym_conflict,
            self_attacking,
        }
    }

    fn conflict_free_sets(&self) -> Vec<u64> {
        let mut all = vec![0u64];
        let mut level: Vec<(u64, usize)> = vec![(0, 0)];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &(set, start) in &level {
                for j in start..self.n {
                    let bit = 1u64 << j;
                    if self.self_attacking & bit != 0 || self.sym_conflict[j] & set != 0 {
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
        let mut defended = 0u64;
        for a in 0..self.n {
            if self.attackers[a] & !hit == 0 {
                defended |= 1 << a;
            }
        }
        defended
    }

    fn classify(&self, semantics: SemanticsLabel) -> Vec<u64> {
        let universe: u64 = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let candidates = self.conflict_free_sets();
        match semantics {
            SemanticsLabel::Admissible => candidates
                .into_iter()
                .filter(|&e| e & !self.defended_by(e) == 0)
                .collect(),
            SemanticsLabel::Complete => candidates
                .into_iter()
                .filter(|&e| self.defended_by(e) == e)
                .collect(),
            SemanticsLabel::Preferred => {
                let complete: Vec<u64> = candidates
                    .into_iter()
                    .filter(|&e| self.defended_by(e) == e)
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
                    let mut hit = 0u64;
                    let mut rest = e;
                    while rest != 0 {
                        let i = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        hit |= self.targets[i];
                    }
                    universe & !e & !hit == 0
                })
                .collect(),
            SemanticsLabel::Grounded => unreachable!("grounded is computed by fixpoint iteration"),
        }
    }
}

/// Arguments reachable from `x` through directed attack paths of length zero
/// or more (`x` itself is always included).
pub fn reach_attack(af: &DungAf, x: &ArgumentId) -> Result<BTreeSet<ArgumentId>, UnknownArgument> {
    let start = af.index_of(x)?;
    let n = af.arg_count();
    let mut seen = BitSet::from_indices(n, [start]);
    let mut queue = vec![start];
    while let Some(u) = queue.pop() {
        for v in af.targets_bits(u).iter() {
            if !seen.contains(v) {
                seen.insert(v);
                queue.push(v);
            }
        }
    }
    Ok(af.bits_to_vec(&seen).into_iter().collect())
}

/// Side-by-side comparison of a framework's extensions with those of its
/// projection under one semantics.
#[derive(Debug, Clone)]
pub struct PreservationReport {
    pub semantics: SemanticsLabel,
    pub saf_extensions: ExtensionSet,
    pub dung_extensions: ExtensionSet,
    pub equal: bool,
    /// An extension present on exactly one side, when the sides differ.
    pub counterexample: Option<Vec<ArgumentId>>,
}

pub fn check_preservation(
    saf: &Saf,
    semantics: SemanticsLabel,
) -> Result<PreservationReport, InstanceTooLarge> {
    check_preservation_bounded(saf, semantics, DEFAULT_ENUM_BOUND)
}

pub fn check_preservation_bounded(
    saf: &Saf,
    semantics: SemanticsLabel,
    bound: usize,
) -> Result<PreservationReport, InstanceTooLarge> {
    let saf_side = extensions_bounded(saf, semantics, bound)?;
    let dung_side = dung_extensions_bounded(&forget(saf), semantics, bound)?;
    let equal = saf_side.same_extensions(&dung_side);
    let counterexample = if equal {
        None
    } else {
        saf_side.first_difference(&dung_side)
    };
    Ok(PreservationReport {
        semantics,
        saf_extensions: saf_side,
        dung_extensions: dung_side,
        equal,
        counterexample,
    })
}

/// Two distinct frameworks sharing one projection.
#[derive(Debug, Clone)]
pub struct CollisionWitness {
    f1: Saf,
    f2: Saf,
    projected: DungAf,
}

impl CollisionWitness {
    /// Builds the witness, re-verifying its defining conditions.
    pub fn try_new(f1: Saf, f2: Saf) -> Option<CollisionWitness> {
        if f1 == f2 {
            return None;
        }
        let p1 = forget(&f1);
        if p1 != forget(&f2) {
            return None;
        }
        Some(CollisionWitness {
            f1,
            f2,
            projected: p1,
        })
    }

    pub fn f1(&self) -> &Saf {
        &self.f1
    }

    pub fn f2(&self) -> &Saf {
        &self.f2
    }

    pub fn projected(&self) -> &DungAf {
        &self.projected
    }
}

pub(crate) fn canonical_names(n: usize) -> Vec<ArgumentId> {
    (1..=n)
        .map(|i| ArgumentId::new(format!("a{i}")).unwrap())
        .collect()
}

/// Decodes a bitmask over the `n * n` ordered pairs of `names` (bit `i*n + j`
/// encodes the pair from argument `i` to argument `j`).
pub(crate) fn mask_pairs(names: &[ArgumentId], mask: u64) -> Vec<(ArgumentId, ArgumentId)> {
    let n = names.len();
    (0..n * n)
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| (names[k / n].clone(), names[k % n].clone()))
        .collect()
}

/// Searches canonically-named frameworks in a fixed order (argument count,
/// then attack mask, then subargument mask) and returns the first two valid
/// ones sharing a projection.
pub fn find_collision(max_args: usize) -> Option<CollisionWitness> {
    for n in 1..=max_args {
        let names = canonical_names(n);
        let cells = n * n;
        let mut seen: HashMap<String, Saf> = HashMap::new();
        for att_mask in 0..(1u64 << cells) {
            for sub_mask in 0..(1u64 << cells) {
                let candidate = Saf::new(
                    names.clone(),
                    mask_pairs(&names, att_mask),
                    mask_pairs(&names, sub_mask),
                );
                let Ok(saf) = candidate else { continue };
                let key = forget(&saf).canonical_document();
                if let Some(first) = seen.get(&key) {
                    let witness = CollisionWitness::try_new(first.clone(), saf)
                        .expect("candidates keyed by projection always collide");
                    return Some(witness);
                }
                seen.insert(key, saf);
            }
        }
    }
    None
}

/// One argument whose structural reach and attack reach disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachDivergence {
    pub argument: ArgumentId,
    pub structural: BTreeSet<ArgumentId>,
    pub attack: BTreeSet<ArgumentId>,
}

/// Lists every argument whose superargument set differs from its attack-path
/// reach in the projected framework.
pub fn reach_divergence(saf: &Saf) -> Vec<ReachDivergence> {
    let projected = forget(saf);
    saf.arguments()
        .iter()
        .filter_map(|x| {
            let structural = saf.reach_structural(x).expect("declared argument");
            let attack = reach_attack(&projected, x).expect("projection keeps all arguments");
            (structural != attack).then(|| ReachDivergence {
                argument: x.clone(),
                structural,
                attack,
            })
        })
        .collect()
}

/// First canonically-enumerated framework on which structural and attack
/// reach diverge, together with the divergence rows.
pub fn find_reach_witness(max_args: usize) -> Option<(Saf, Vec<ReachDivergence>)> {
    for n in 1..=max_args {
        let names = canonical_names(n);
        let cells = n * n;
        for att_mask in 0..(1u64 << cells) {
            for sub_mask in 0..(1u64 << cells) {
                let candidate = Saf::new(
                    names.clone(),
                    mask_pairs(&names, att_mask),
                    mask_pairs(&names, sub_mask),
                );
                let Ok(saf) = candidate else { continue };
                let rows = reach_divergence(&saf);
                if !rows.is_empty() {
                    return Some((saf, rows));
                }
            }
        }
    }
    None
}
