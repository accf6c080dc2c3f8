//! Local justifications: subargument-closed witness sets explaining why an
//! accepted argument is warranted, plus the witness search showing that
//! projections cannot carry such explanations, and a principle compliance
//! report over framework corpora.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::framework::{ArgumentId, Saf, UnknownArgument};
use crate::projection::{canonical_names, check_preservation_bounded, forget, mask_pairs};
use crate::semantics::{
    defends, extensions_bounded, InstanceTooLarge, SemanticsLabel,
    DEFAULT_ENUM_BOUND, MAX_ENUM_BOUND,
};

/// A witness set explaining the acceptance of one argument in one extension:
/// subargument-closed, containing the target's closure, and defending all of
/// it from within.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub target: ArgumentId,
    pub extension: Vec<ArgumentId>,
    pub witness: Vec<ArgumentId>,
    pub minimal: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplainError {
    #[error(transparent)]
    Unknown(#[from] UnknownArgument),
    #[error(transparent)]
    TooLarge(#[from] InstanceTooLarge),
    #[error("{{{set}}} is not a {semantics} extension of the framework")]
    NotAnExtension { set: String, semantics: SemanticsLabel },
    #[error("argument `{0}` is not a member of the extension")]
    NotAMember(ArgumentId),
    #[error(
        "no justification for `{0}` exists inside the extension \
         (its subargument closure is not contained in it)"
    )]
    NoJustification(ArgumentId),
}

/// Checks the three witness conditions for `j` against target `a` in `e`:
/// membership in `e`, subargument closure, containment of the target's
/// closure, and defence of that closure from inside `j`.
pub fn is_justification(
    saf: &Saf,
    e: &BTreeSet<ArgumentId>,
    a: &ArgumentId,
    j: &BTreeSet<ArgumentId>,
) -> Result<bool, UnknownArgument> {
    let e_bits = saf.set_to_bits(e)?;
    let j_bits = saf.set_to_bits(j)?;
    let target = saf.index_of(a)?;
    Ok(is_justification_bits(saf, &e_bits, target, &j_bits))
}

fn is_justification_bits(saf: &Saf, e: &BitSet, target: usize, j: &BitSet) -> bool {
    if !j.is_subset(e) {
        return false;
    }
    // closed under subarguments
    let n = saf.arg_count();
    let mut closure = BitSet::new(n);
    for x in j.iter() {
        closure.union_with(saf.sub_bits(x));
    }
    if !closure.is_subset(j) {
        return false;
    }
    // contains the whole closure of the target
    if !saf.sub_bits(target).is_subset(j) {
        return false;
    }
    // defends that closure: each attacker of it is hit directly or inside
    // its own closure by some member of `j`
    let mut launched = BitSet::new(n);
    for c in j.iter() {
        launched.union_with(saf.targets_bits(c));
    }
    for b in saf.closure_attackers_bits(target).iter() {
        let direct = launched.contains(b);
        let inside = launched.intersects(saf.sub_bits(b));
        if !(direct || inside) {
            return false;
        }
    }
    true
}

/// All inclusion-minimal justifications of `a` in `e`, in canonical order.
pub fn minimal_justifications(
    saf: &Saf,
    e: &BTreeSet<ArgumentId>,
    a: &ArgumentId,
) -> Result<Vec<BTreeSet<ArgumentId>>, ExplainError> {
    minimal_justifications_bounded(saf, e, a, DEFAULT_ENUM_BOUND)
}

pub fn minimal_justifications_bounded(
    saf: &Saf,
    e: &BTreeSet<ArgumentId>,
    a: &ArgumentId,
    bound: usize,
) -> Result<Vec<BTreeSet<ArgumentId>>, ExplainError> {
    let e_bits = saf.set_to_bits(e)?;
    let target = saf.index_of(a)?;
    let bound = bound.min(MAX_ENUM_BOUND);
    if e.len() > bound {
        return Err(ExplainError::TooLarge(InstanceTooLarge {
            arguments: e.len(),
            bound,
        }));
    }
    let members: Vec<usize> = e_bits.iter().collect();
    let m = members.len();
    let mut minimal: Vec<u64> = Vec::new();
    // ascending cardinality; supersets of found witnesses are skipped, so
    // everything that survives the check is minimal
    for k in 0..=m {
        let mut mask = match initial_mask(k) {
            Some(mask) => mask,
            None => break,
        };
        loop {
            if m < 64 && mask >= 1u64 << m {
                break;
            }
            if !minimal.iter().any(|&f| f & !mask == 0) {
                let j_bits =
                    BitSet::from_indices(saf.arg_count(), iter_mask(mask).map(|p| members[p]));
                if is_justification_bits(saf, &e_bits, target, &j_bits) {
                    minimal.push(mask);
                }
            }
            match next_same_popcount(mask) {
                Some(next) if m == 64 || next < 1u64 << m => mask = next,
                _ => break,
            }
        }
    }
    let mut out: Vec<BTreeSet<ArgumentId>> = minimal
        .into_iter()
        .map(|mask| {
            iter_mask(mask)
                .map(|p| saf.name_of(members[p]).clone())
                .collect()
        })
        .collect();
    out.sort_by(|x, y| {
        let xv: Vec<&ArgumentId> = x.iter().collect();
        let yv: Vec<&ArgumentId> = y.iter().collect();
        xv.len().cmp(&yv.len()).then(xv.cmp(&yv))
    });
    Ok(out)
}

fn initial_mask(k: usize) -> Option<u64> {
    match k {
        0 => Some(0),
        64 => Some(u64::MAX),
        _ if k > 64 => None,
        _ => Some((1u64 << k) - 1),
    }
}

/// Gosper's hack: next mask with the same number of set bits.
fn next_same_popcount(mask: u64) -> Option<u64> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask.checked_add(c)?;
    Some((((r ^ mask) >> 2) / c) | r)
}

fn iter_mask(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// The canonical explanation: the minimal justification of smallest
/// cardinality, ties broken by member-name order. `e` must be an extension
/// under `semantics` and `a` one of its members.
pub fn explain(
    saf: &Saf,
    semantics: SemanticsLabel,
    e: &BTreeSet<ArgumentId>,
    a: &ArgumentId,
) -> Result<Justification, ExplainError> {
    explain_bounded(saf, semantics, e, a, DEFAULT_ENUM_BOUND)
}

pub fn explain_bounded(
    saf: &Saf,
    semantics: SemanticsLabel,
    e: &BTreeSet<ArgumentId>,
    a: &ArgumentId,
    bound: usize,
) -> Result<Justification, ExplainError> {
    let known = extensions_bounded(saf, semantics, bound)?;
    if !known.contains(e) {
        return Err(ExplainError::NotAnExtension {
            set: e
                .iter()
                .map(|x| x.as_str())
                .collect::<Vec<_>>()
                .join(","),
            semantics,
        });
    }
    saf.index_of(a)?;
    if !e.contains(a) {
        return Err(ExplainError::NotAMember(a.clone()));
    }
    let all = minimal_justifications_bounded(saf, e, a, bound)?;
    let witness = all
        .first()
        .ok_or_else(|| ExplainError::NoJustification(a.clone()))?;
    Ok(Justification {
        target: a.clone(),
        extension: e.iter().cloned().collect(),
        witness: witness.iter().cloned().collect(),
        minimal: true,
    })
}

/// Two frameworks with the same attacks and the same projection whose shared
/// extension explains one argument differently on each side.
#[derive(Debug, Clone)]
pub struct LossWitness {
    f1: Saf,
    f2: Saf,
    argument: ArgumentId,
    extension: BTreeSet<ArgumentId>,
}

impl LossWitness {
    fn try_new(
        f1: Saf,
        f2: Saf,
        argument: ArgumentId,
        extension: BTreeSet<ArgumentId>,
    ) -> Option<LossWitness> {
        if f1 == f2 {
            return None;
        }
        let same_attacks =
            f1.attack_pairs().collect::<Vec<_>>() == f2.attack_pairs().collect::<Vec<_>>();
        if !same_attacks || forget(&f1) != forget(&f2) {
            return None;
        }
        for semantics in SemanticsLabel::ALL {
            let e1 = extensions_bounded(&f1, semantics, MAX_ENUM_BOUND).ok()?;
            let e2 = extensions_bounded(&f2, semantics, MAX_ENUM_BOUND).ok()?;
            if !e1.same_extensions(&e2) {
                return None;
            }
        }
        let shared = extensions_bounded(&f1, SemanticsLabel::Complete, MAX_ENUM_BOUND).ok()?;
        if !shared.contains(&extension) || !extension.contains(&argument) {
            return None;
        }
        if f1.sub_closure(&argument).ok()? == f2.sub_closure(&argument).ok()? {
            return None;
        }
        let x1 = explain(&f1, SemanticsLabel::Complete, &extension, &argument).ok()?;
        let x2 = explain(&f2, SemanticsLabel::Complete, &extension, &argument).ok()?;
        if x1.witness == x2.witness {
            return None;
        }
        Some(LossWitness {
            f1,
            f2,
            argument,
            extension,
        })
    }

    pub fn f1(&self) -> &Saf {
        &self.f1
    }

    pub fn f2(&self) -> &Saf {
        &self.f2
    }

    pub fn argument(&self) -> &ArgumentId {
        &self.argument
    }

    pub fn extension(&self) -> &BTreeSet<ArgumentId> {
        &self.extension
    }
}

/// Searches canonically-named framework pairs with identical attacks and
/// identical projections until one yields diverging explanations for a
/// shared accepted argument. Every returned witness re-passes all of its
/// defining conditions.
pub fn explanation_loss_witness() -> LossWitness {
    for n in 2..=3 {
        let names = canonical_names(n);
        let cells = n * n;
        for att_mask in 0..(1u64 << cells) {
            let frameworks: Vec<Saf> = (0..(1u64 << cells))
                .filter_map(|sub_mask| {
                    Saf::new(
                        names.clone(),
                        mask_pairs(&names, att_mask),
                        mask_pairs(&names, sub_mask),
                    )
                    .ok()
                })
                .collect();
            for (i, f1) in frameworks.iter().enumerate() {
                for f2 in &frameworks[i + 1..] {
                    if forget(f1) != forget(f2) {
                        continue;
                    }
                    let Ok(shared) = extensions_bounded(f1, SemanticsLabel::Complete, MAX_ENUM_BOUND)
                    else {
                        continue;
                    };
                    for ext in shared.extensions() {
                        let e: BTreeSet<ArgumentId> = ext.iter().cloned().collect();
                        for a in ext {
                            if f1.sub_closure(a).unwrap() == f2.sub_closure(a).unwrap() {
                                continue;
                            }
                            if let Some(witness) =
                                LossWitness::try_new(f1.clone(), f2.clone(), a.clone(), e.clone())
                            {
                                return witness;
                            }
                        }
                    }
                }
            }
        }
    }
    unreachable!("a two-argument witness exists")
}

/// The five structural principles checked by [`principle_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Principle {
    SeparationOfConflictAndStructure,
    StructureSensitiveDefence,
    CommitmentBasedAdmissibility,
    ConservativeExtension,
    SubargumentBasedJustification,
}

impl Principle {
    pub const ALL: [Principle; 5] = [
        Principle::SeparationOfConflictAndStructure,
        Principle::StructureSensitiveDefence,
        Principle::CommitmentBasedAdmissibility,
        Principle::ConservativeExtension,
        Principle::SubargumentBasedJustification,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Principle::SeparationOfConflictAndStructure => "separation-of-conflict-and-structure",
            Principle::StructureSensitiveDefence => "structure-sensitive-defence",
            Principle::CommitmentBasedAdmissibility => "commitment-based-admissibility",
            Principle::ConservativeExtension => "conservative-extension",
            Principle::SubargumentBasedJustification => "subargument-based-justification",
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct PrincipleOutcome {
    pub principle: Principle,
    pub pass: bool,
    /// Number of individual checks performed across the corpus.
    pub instances: usize,
    pub counterexample: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct PrincipleReport {
    pub outcomes: Vec<PrincipleOutcome>,
}

impl PrincipleReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    pub fn outcome(&self, principle: Principle) -> &PrincipleOutcome {
        self.outcomes
            .iter()
            .find(|o| o.principle == principle)
            .expect("every principle is reported")
    }
}

fn render_set(set: &BTreeSet<ArgumentId>) -> String {
    let names: Vec<&str> = set.iter().map(|a| a.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Literal restatement of the defence condition, quantifier by quantifier,
/// used to cross-check the cached fast path.
fn defends_literal(saf: &Saf, e: &BTreeSet<ArgumentId>, a: &ArgumentId) -> bool {
    let closure = saf.sub_closure(a).expect("declared argument");
    for x in &closure {
        for b in saf.arguments() {
            if !saf.direct_attackers(x).unwrap().contains(b) {
                continue;
            }
            let b_closure = saf.sub_closure(b).unwrap();
            let countered = e.iter().any(|c| {
                b_closure
                    .iter()
                    .any(|bp| saf.direct_attackers(bp).unwrap().contains(c))
            });
            if !countered {
                return false;
            }
        }
    }
    true
}

fn subsets(universe: &[ArgumentId]) -> Vec<BTreeSet<ArgumentId>> {
    let n = universe.len();
    (0..(1u64 << n))
        .map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| universe[i].clone())
                .collect()
        })
        .collect()
}

/// Checks the five structural principles over a corpus of frameworks; every
/// verdict reports how many individual checks backed it and the first
/// counterexample found, if any.
pub fn principle_report(corpus: &[Saf]) -> Result<PrincipleReport, InstanceTooLarge> {
    principle_report_bounded(corpus, DEFAULT_ENUM_BOUND)
}

pub fn principle_report_bounded(
    corpus: &[Saf],
    bound: usize,
) -> Result<PrincipleReport, InstanceTooLarge> {
    let mut outcomes = Vec::new();

    // separation: attacks and subargument edges are stored independently;
    // this is a design-level property, reported with a rationale
    outcomes.push(PrincipleOutcome {
        principle: Principle::SeparationOfConflictAndStructure,
        pass: true,
        instances: corpus.len(),
        counterexample: None,
        note: Some(
            "attacks and subargument edges are independent input relations; \
             neither is derived from the other"
                .to_string(),
        ),
    });

    // defence: the cached defence decision must match the literal condition
    // on every (set, argument) pair
    let mut defence_checks = 0usize;
    let mut defence_counterexample = None;
    'defence: for saf in corpus {
        for e in subsets(saf.arguments()) {
            for a in saf.arguments() {
                defence_checks += 1;
                let fast = defends(saf, &e, a).expect("declared arguments");
                let literal = defends_literal(saf, &e, a);
                if fast != literal {
                    defence_counterexample =
                        Some(format!("defends({}, {a}) disagrees", render_set(&e)));
                    break 'defence;
                }
            }
        }
    }
    outcomes.push(PrincipleOutcome {
        principle: Principle::StructureSensitiveDefence,
        pass: defence_counterexample.is_none(),
        instances: defence_checks,
        counterexample: defence_counterexample,
        note: None,
    });

    // commitment: members of admissible sets have every attack on their
    // closure countered
    let mut commitment_checks = 0usize;
    let mut commitment_counterexample = None;
    'commitment: for saf in corpus {
        let admissible = extensions_bounded(saf, SemanticsLabel::Admissible, bound)?;
        for ext in admissible.extensions() {
            let e: BTreeSet<ArgumentId> = ext.iter().cloned().collect();
            for a in ext {
                commitment_checks += 1;
                if !defends_literal(saf, &e, a) {
                    commitment_counterexample = Some(format!(
                        "{a} admitted by {} without full closure defence",
                        render_set(&e)
                    ));
                    break 'commitment;
                }
            }
        }
    }
    outcomes.push(PrincipleOutcome {
        principle: Principle::CommitmentBasedAdmissibility,
        pass: commitment_counterexample.is_none(),
        instances: commitment_checks,
        counterexample: commitment_counterexample,
        note: None,
    });

    // conservative extension: projection preserves every semantics
    let mut preservation_checks = 0usize;
    let mut preservation_counterexample = None;
    'preservation: for saf in corpus {
        for semantics in SemanticsLabel::ALL {
            preservation_checks += 1;
            let report = check_preservation_bounded(saf, semantics, bound)?;
            if !report.equal {
                preservation_counterexample = Some(format!(
                    "{semantics} differs after projection, e.g. {}",
                    report
                        .counterexample
                        .map(|c| render_set(&c.into_iter().collect()))
                        .unwrap_or_default()
                ));
                break 'preservation;
            }
        }
    }
    outcomes.push(PrincipleOutcome {
        principle: Principle::ConservativeExtension,
        pass: preservation_counterexample.is_none(),
        instances: preservation_checks,
        counterexample: preservation_counterexample,
        note: None,
    });

    // justification existence: every member of every complete extension has
    // a minimal justification
    let mut justification_checks = 0usize;
    let mut justification_counterexample = None;
    'justification: for saf in corpus {
        let complete = extensions_bounded(saf, SemanticsLabel::Complete, bound)?;
        for ext in complete.extensions() {
            let e: BTreeSet<ArgumentId> = ext.iter().cloned().collect();
            for a in ext {
                justification_checks += 1;
                let found = minimal_justifications_bounded(saf, &e, a, bound)
                    .map_err(|err| match err {
                        ExplainError::TooLarge(e) => e,
                        other => panic!("unexpected failure: {other}"),
                    })?;
                if found.is_empty() {
                    justification_counterexample =
                        Some(format!("{a} in {} has no justification", render_set(&e)));
                    break 'justification;
                }
            }
        }
    }
    outcomes.push(PrincipleOutcome {
        principle: Principle::SubargumentBasedJustification,
        pass: justification_counterexample.is_none(),
        instances: justification_checks,
        counterexample: justification_counterexample,
        note: None,
    });

    Ok(PrincipleReport { outcomes })
}
