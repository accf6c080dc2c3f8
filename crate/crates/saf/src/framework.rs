//! Core data model: argument identifiers, attack-only frameworks, and
//! frameworks carrying an explicit subargument relation.
//!
//! Frameworks are validated once at construction and immutable afterwards;
//! every structural query reads from closure tables cached at that point, so
//! shared references can be used freely across threads.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::bitset::BitSet;

/// Symbolic argument name: a nonempty token over `[A-Za-z0-9_]`,
/// compared and ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(name: impl Into<String>) -> Result<Self, ValidationError> {
        let name = name.into();
        let ok = !name.is_empty()
            && name
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'_');
        if ok {
            Ok(ArgumentId(name))
        } else {
            Err(ValidationError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::str::FromStr for ArgumentId {
    type Err = ValidationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ArgumentId::new(s)
    }
}

/// Convenience constructor for a set of argument identifiers.
pub fn argument_set<'a, I: IntoIterator<Item = &'a str>>(
    names: I,
) -> Result<BTreeSet<ArgumentId>, ValidationError> {
    names.into_iter().map(ArgumentId::new).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("invalid argument name `{0}`: expected a nonempty token over [A-Za-z0-9_]")]
    InvalidName(String),
    #[error("unknown argument `{0}`")]
    UnknownArgument(ArgumentId),
    #[error("subargument cycle: {}", format_cycle(.0))]
    SubCycle(Vec<ArgumentId>),
    #[error(
        "attack ({attacker},{target}) is not minimal: ({attacker},{subargument}) \
         already attacks a subargument of {target}"
    )]
    NonMinimalAttack {
        attacker: ArgumentId,
        target: ArgumentId,
        subargument: ArgumentId,
    },
}

fn format_cycle(cycle: &[ArgumentId]) -> String {
    cycle
        .iter()
        .map(|a| a.as_str())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Query-time error: the named argument is not declared in the framework.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown argument `{0}`")]
pub struct UnknownArgument(pub ArgumentId);

/// Cached reflexive-transitive subargument closures.
///
/// `sub[i]` holds every argument reaching `i` through subargument edges
/// (including `i` itself); `sup[i]` holds the superarguments of `i`. The two
/// tables are dual: `x ∈ sub[a]` iff `a ∈ sup[x]`.
#[derive(Debug, Clone)]
pub(crate) struct ClosureTable {
    sub: Vec<BitSet>,
    sup: Vec<BitSet>,
}

/// Per-argument attack adjacency, plus the same adjacency lifted over
/// subargument closures.
#[derive(Debug, Clone)]
pub(crate) struct AttackIndex {
    attackers: Vec<BitSet>,
    targets: Vec<BitSet>,
    /// attackers of any member of `sub[i]`
    closure_attackers: Vec<BitSet>,
    /// targets of direct attacks launched from any member of `sub[i]`
    closure_targets: Vec<BitSet>,
}

/// An attack-only framework: a finite argument set and a binary attack
/// relation whose endpoints are all declared.
#[derive(Clone)]
pub struct DungAf {
    names: Vec<ArgumentId>,
    attacks: Vec<(u32, u32)>,
    attackers: Vec<BitSet>,
    targets: Vec<BitSet>,
}

/// A framework with both direct attacks and an acyclic subargument relation.
///
/// A pair `(a, b)` in the subargument relation means `a` is a structural
/// component of `b`. Direct attacks are required to be minimal: an attack may
/// not target an argument when the same attacker already attacks one of its
/// proper subarguments.
#[derive(Clone)]
pub struct Saf {
    names: Vec<ArgumentId>,
    attacks: Vec<(u32, u32)>,
    subargs: Vec<(u32, u32)>,
    closures: ClosureTable,
    atk: AttackIndex,
}

impl PartialEq for DungAf {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.attacks == other.attacks
    }
}
impl Eq for DungAf {}

impl PartialEq for Saf {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.attacks == other.attacks
            && self.subargs == other.subargs
    }
}
impl Eq for Saf {}

impl fmt::Debug for Saf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Saf")
            .field("arguments", &self.names)
            .field("attacks", &self.pairs_dbg(&self.attacks))
            .field("subargs", &self.pairs_dbg(&self.subargs))
            .finish()
    }
}

impl fmt::Debug for DungAf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(&str, &str)> = self
            .attacks
            .iter()
            .map(|&(u, v)| (self.names[u as usize].as_str(), self.names[v as usize].as_str()))
            .collect();
        f.debug_struct("DungAf")
            .field("arguments", &self.names)
            .field("attacks", &pairs)
            .finish()
    }
}

/// Interns a declared argument list and resolves name pairs to index pairs.
fn resolve(
    names: &[ArgumentId],
    pairs: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
) -> Result<Vec<(u32, u32)>, ValidationError> {
    let lookup = |a: &ArgumentId| {
        names
            .binary_search(a)
            .map(|i| i as u32)
            .map_err(|_| ValidationError::UnknownArgument(a.clone()))
    };
    let mut out = BTreeSet::new();
    for (a, b) in pairs {
        out.insert((lookup(&a)?, lookup(&b)?));
    }
    Ok(out.into_iter().collect())
}

/// Finds one cycle in the directed graph given by `edges`, reported as a
/// vertex sequence whose first element is repeated at the end.
fn find_cycle(n: usize, edges: &[(u32, u32)]) -> Option<Vec<u32>> {
    let mut out = vec![Vec::new(); n];
    for &(u, v) in edges {
        out[u as usize].push(v);
    }
    // 0 = unvisited, 1 = on the current path, 2 = done
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        let mut path: Vec<usize> = vec![start];
        color[start] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < out[u].len() {
                let v = out[u][*next] as usize;
                *next += 1;
                match color[v] {
                    1 => {
                        let pos = path.iter().position(|&p| p == v).unwrap();
                        let mut cycle: Vec<u32> = path[pos..].iter().map(|&p| p as u32).collect();
                        cycle.push(v as u32);
                        return Some(cycle);
                    }
                    0 => {
                        color[v] = 1;
                        stack.push((v, 0));
                        path.push(v);
                    }
                    _ => {}
                }
            } else {
                color[u] = 2;
                stack.pop();
                path.pop();
            }
        }
    }
    None
}

/// Topological DP over the acyclic subargument graph: `sub[v]` accumulates
/// the closures of everything flowing into `v`.
fn closure_table(n: usize, subargs: &[(u32, u32)]) -> ClosureTable {
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(u, v) in subargs {
        out[u as usize].push(v as usize);
        indeg[v as usize] += 1;
    }
    let mut sub: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(u) = ready.pop() {
        let flows_into = out[u].clone();
        for v in flows_into {
            let add = sub[u].clone();
            sub[v].union_with(&add);
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(v);
            }
        }
    }
    let mut sup: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    for (a, closure) in sub.iter().enumerate() {
        for x in closure.iter() {
            sup[x].insert(a);
        }
    }
    ClosureTable { sub, sup }
}

fn attack_index(n: usize, attacks: &[(u32, u32)], closures: &ClosureTable) -> AttackIndex {
    let mut attackers: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    let mut targets: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    for &(u, v) in attacks {
        attackers[v as usize].insert(u as usize);
        targets[u as usize].insert(v as usize);
    }
    let lift = |table: &[BitSet]| -> Vec<BitSet> {
        (0..n)
            .map(|a| {
                let mut acc = BitSet::new(n);
                for x in closures.sub[a].iter() {
                    acc.union_with(&table[x]);
                }
                acc
            })
            .collect()
    };
    AttackIndex {
        closure_attackers: lift(&attackers),
        closure_targets: lift(&targets),
        attackers,
        targets,
    }
}

impl Saf {
    /// Validates and builds a framework from raw declarations.
    ///
    /// Duplicate declarations are deduplicated silently; the empty framework
    /// is valid. Fails on undeclared pair endpoints, on any cycle in the
    /// subargument relation, and on non-minimal attacks.
    pub fn new(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
        subargs: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
    ) -> Result<Self, ValidationError> {
        let names: Vec<ArgumentId> = arguments.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = names.len();
        let attacks = resolve(&names, attacks)?;
        let subargs = resolve(&names, subargs)?;

        if let Some(cycle) = find_cycle(n, &subargs) {
            return Err(ValidationError::SubCycle(
                cycle.iter().map(|&i| names[i as usize].clone()).collect(),
            ));
        }

        let closures = closure_table(n, &subargs);

        // Minimality: an attack may not target `v` when the attacker already
        // attacks a proper subargument of `v`.
        for &(u, v) in &attacks {
            for w in closures.sub[v as usize].iter() {
                if w as u32 != v && attacks.binary_search(&(u, w as u32)).is_ok() {
                    return Err(ValidationError::NonMinimalAttack {
                        attacker: names[u as usize].clone(),
                        target: names[v as usize].clone(),
                        subargument: names[w].clone(),
                    });
                }
            }
        }

        let atk = attack_index(n, &attacks, &closures);
        Ok(Saf {
            names,
            attacks,
            subargs,
            closures,
            atk,
        })
    }

    /// Test-friendly constructor taking plain string tokens.
    pub fn build(
        arguments: &[&str],
        attacks: &[(&str, &str)],
        subargs: &[(&str, &str)],
    ) -> Result<Self, ValidationError> {
        let ids = |pairs: &[(&str, &str)]| -> Result<Vec<(ArgumentId, ArgumentId)>, ValidationError> {
            pairs
                .iter()
                .map(|&(a, b)| Ok((ArgumentId::new(a)?, ArgumentId::new(b)?)))
                .collect()
        };
        Saf::new(
            arguments
                .iter()
                .map(|&a| ArgumentId::new(a))
                .collect::<Result<Vec<_>, _>>()?,
            ids(attacks)?,
            ids(subargs)?,
        )
    }

    pub fn arguments(&self) -> &[ArgumentId] {
        &self.names
    }

    pub fn arg_count(&self) -> usize {
        self.names.len()
    }

    pub fn contains(&self, a: &ArgumentId) -> bool {
        self.names.binary_search(a).is_ok()
    }

    pub fn attack_pairs(&self) -> impl Iterator<Item = (&ArgumentId, &ArgumentId)> {
        self.attacks
            .iter()
            .map(|&(u, v)| (&self.names[u as usize], &self.names[v as usize]))
    }

    pub fn subarg_pairs(&self) -> impl Iterator<Item = (&ArgumentId, &ArgumentId)> {
        self.subargs
            .iter()
            .map(|&(u, v)| (&self.names[u as usize], &self.names[v as usize]))
    }

    /// `Sub*(a)`: `a` together with all of its direct and indirect
    /// subarguments.
    pub fn sub_closure(&self, a: &ArgumentId) -> Result<BTreeSet<ArgumentId>, UnknownArgument> {
        let i = self.index_of(a)?;
        Ok(self.bits_to_set(&self.closures.sub[i]))
    }

    /// All superarguments of `x` (including `x`): the arguments whose status
    /// may depend on `x` through structural dependency.
    pub fn reach_structural(
        &self,
        x: &ArgumentId,
    ) -> Result<BTreeSet<ArgumentId>, UnknownArgument> {
        let i = self.index_of(x)?;
        Ok(self.bits_to_set(&self.closures.sup[i]))
    }

    /// Arguments attacking `a` directly.
    pub fn direct_attackers(
        &self,
        a: &ArgumentId,
    ) -> Result<BTreeSet<ArgumentId>, UnknownArgument> {
        let i = self.index_of(a)?;
        Ok(self.bits_to_set(&self.atk.attackers[i]))
    }

    /// Canonical text rendering: sorted `arg`, then `att`, then `sub` facts.
    pub fn canonical_document(&self) -> String {
        let mut out = String::new();
        for a in &self.names {
            out.push_str(&format!("arg({a}).\n"));
        }
        for (a, b) in self.attack_pairs() {
            out.push_str(&format!("att({a},{b}).\n"));
        }
        for (a, b) in self.subarg_pairs() {
            out.push_str(&format!("sub({a},{b}).\n"));
        }
        out
    }

    /// Content hash of the framework (FNV-1a over the canonical document).
    pub fn digest(&self) -> String {
        format!("{:016x}", fnv1a64(self.canonical_document().as_bytes()))
    }

    pub(crate) fn index_of(&self, a: &ArgumentId) -> Result<usize, UnknownArgument> {
        self.names
            .binary_search(a)
            .map_err(|_| UnknownArgument(a.clone()))
    }

    pub(crate) fn name_of(&self, i: usize) -> &ArgumentId {
        &self.names[i]
    }

    pub(crate) fn sub_bits(&self, i: usize) -> &BitSet {
        &self.closures.sub[i]
    }

    pub(crate) fn attackers_bits(&self, i: usize) -> &BitSet {
        &self.atk.attackers[i]
    }

    pub(crate) fn targets_bits(&self, i: usize) -> &BitSet {
        &self.atk.targets[i]
    }

    pub(crate) fn closure_attackers_bits(&self, i: usize) -> &BitSet {
        &self.atk.closure_attackers[i]
    }

    pub(crate) fn closure_targets_bits(&self, i: usize) -> &BitSet {
        &self.atk.closure_targets[i]
    }

    pub(crate) fn set_to_bits(
        &self,
        set: &BTreeSet<ArgumentId>,
    ) -> Result<BitSet, UnknownArgument> {
        let mut bits = BitSet::new(self.names.len());
        for a in set {
            bits.insert(self.index_of(a)?);
        }
        Ok(bits)
    }

    pub(crate) fn bits_to_set(&self, bits: &BitSet) -> BTreeSet<ArgumentId> {
        bits.iter().map(|i| self.names[i].clone()).collect()
    }

    pub(crate) fn bits_to_vec(&self, bits: &BitSet) -> Vec<ArgumentId> {
        bits.iter().map(|i| self.names[i].clone()).collect()
    }

    fn pairs_dbg(&self, pairs: &[(u32, u32)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|&(u, v)| {
                (
                    self.names[u as usize].to_string(),
                    self.names[v as usize].to_string(),
                )
            })
            .collect()
    }
}

impl DungAf {
    /// Validates and builds an attack-only framework; duplicates are
    /// deduplicated, endpoints must be declared.
    pub fn new(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
    ) -> Result<Self, ValidationError> {
        let names: Vec<ArgumentId> = arguments.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let n = names.len();
        let attacks = resolve(&names, attacks)?;
        let mut attackers: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        let mut targets: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for &(u, v) in &attacks {
            attackers[v as usize].insert(u as usize);
            targets[u as usize].insert(v as usize);
        }
        Ok(DungAf {
            names,
            attacks,
            attackers,
            targets,
        })
    }

    pub fn build(arguments: &[&str], attacks: &[(&str, &str)]) -> Result<Self, ValidationError> {
        DungAf::new(
            arguments
                .iter()
                .map(|&a| ArgumentId::new(a))
                .collect::<Result<Vec<_>, _>>()?,
            attacks
                .iter()
                .map(|&(a, b)| Ok((ArgumentId::new(a)?, ArgumentId::new(b)?)))
                .collect::<Result<Vec<_>, ValidationError>>()?,
        )
    }

    pub fn arguments(&self) -> &[ArgumentId] {
        &self.names
    }

    pub fn arg_count(&self) -> usize {
        self.names.len()
    }

    pub fn contains(&self, a: &ArgumentId) -> bool {
        self.names.binary_search(a).is_ok()
    }

    pub fn attack_pairs(&self) -> impl Iterator<Item = (&ArgumentId, &ArgumentId)> {
        self.attacks
            .iter()
            .map(|&(u, v)| (&self.names[u as usize], &self.names[v as usize]))
    }

    /// Canonical text rendering: sorted `arg` facts then sorted `att` facts.
    pub fn canonical_document(&self) -> String {
        let mut out = String::new();
        for a in &self.names {
            out.push_str(&format!("arg({a}).\n"));
        }
        for (a, b) in self.attack_pairs() {
            out.push_str(&format!("att({a},{b}).\n"));
        }
        out
    }

    pub fn digest(&self) -> String {
        format!("{:016x}", fnv1a64(self.canonical_document().as_bytes()))
    }

    pub(crate) fn index_of(&self, a: &ArgumentId) -> Result<usize, UnknownArgument> {
        self.names
            .binary_search(a)
            .map_err(|_| UnknownArgument(a.clone()))
    }

    pub(crate) fn name_of(&self, i: usize) -> &ArgumentId {
        &self.names[i]
    }

    pub(crate) fn attackers_bits(&self, i: usize) -> &BitSet {
        &self.attackers[i]
    }

    pub(crate) fn targets_bits(&self, i: usize) -> &BitSet {
        &self.targets[i]
    }

    pub(crate) fn bits_to_vec(&self, bits: &BitSet) -> Vec<ArgumentId> {
        bits.iter().map(|i| self.names[i].clone()).collect()
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
