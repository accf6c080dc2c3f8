//! Brute-force reference solver.
//!
//! Everything here transcribes the defining conditions directly: all subsets
//! of the argument set are enumerated and classified one by one, with no
//! pruning and no shared conflict or defence code with the optimized solver
//! paths. This module exists to keep those paths honest.

use crate::framework::{ArgumentId, DungAf, Saf};
use crate::{ExtensionSet, InstanceTooLarge, SemanticsLabel};

/// Hard cap on the argument count for the exhaustive sweep.
pub const ORACLE_CAP: usize = 16;

/// Literal reflexive-transitive closure of the subargument relation,
/// recomputed from the raw edge list by iterating until nothing changes.
fn literal_closures(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut star = vec![vec![false; n]; n];
    for (i, row) in star.iter_mut().enumerate() {
        row[i] = true;
    }
    loop {
        let mut changed = false;
        for &(u, v) in edges {
            let reaching = star[u].clone();
            for (x, reaches) in reaching.into_iter().enumerate() {
                if reaches && !star[v][x] {
                    star[v][x] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return star;
        }
    }
}

struct RawSaf {
    n: usize,
    att: Vec<Vec<bool>>,
    /// `star[b][x]` says `x` belongs to the closure of `b`
    star: Vec<Vec<bool>>,
}

impl RawSaf {
    fn from(saf: &Saf) -> RawSaf {
        let names: Vec<&ArgumentId> = saf.arguments().iter().collect();
        let n = names.len();
        let index = |a: &ArgumentId| names.iter().position(|x| *x == a).unwrap();
        let mut att = vec![vec![false; n]; n];
        for (a, b) in saf.attack_pairs() {
            att[index(a)][index(b)] = true;
        }
        let edges: Vec<(usize, usize)> = saf
            .subarg_pairs()
            .map(|(a, b)| (index(a), index(b)))
            .collect();
        RawSaf {
            n,
            att,
            star: literal_closures(n, &edges),
        }
    }

    fn members(&self, mask: u32) -> Vec<usize> {
        (0..self.n).filter(|i| mask & (1 << i) != 0).collect()
    }

    /// Two arguments are in conflict when some member of the first closure
    /// directly attacks some member of the second.
    fn in_conflict(&self, a: usize, b: usize) -> bool {
        for x in 0..self.n {
            if !self.star[a][x] {
                continue;
            }
            for y in 0..self.n {
                if self.star[b][y] && self.att[x][y] {
                    return true;
                }
            }
        }
        false
    }

    fn is_conflict_free(&self, e: &[usize]) -> bool {
        for &a in e {
            for &b in e {
                if self.in_conflict(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Every attack on every member of the closure of `a` must be answered
    /// from `e` by an attack into the attacker's closure.
    fn is_defended(&self, e: &[usize], a: usize) -> bool {
        for x in 0..self.n {
            if !self.star[a][x] {
                continue;
            }
            for b in 0..self.n {
                if !self.att[b][x] {
                    continue;
                }
                let mut countered = false;
                'search: for &c in e {
                    for bp in 0..self.n {
                        if self.star[b][bp] && self.att[c][bp] {
                            countered = true;
                            break 'search;
                        }
                    }
                }
                if !countered {
                    return false;
                }
            }
        }
        true
    }

    fn defended_set(&self, e: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_defended(e, a)).collect()
    }

    /// Every argument outside `e` must be in conflict with `e` through an
    /// attack launched inside the closure of one of its members.
    fn covers_outside(&self, e: &[usize], mask: u32) -> bool {
        for a in 0..self.n {
            if mask & (1 << a) != 0 {
                continue;
            }
            let mut covered = false;
            'search: for &m in e {
                for x in 0..self.n {
                    if !self.star[m][x] {
                        continue;
                    }
                    for y in 0..self.n {
                        if self.star[a][y] && self.att[x][y] {
                            covered = true;
                            break 'search;
                        }
                    }
                }
            }
            if !covered {
                return false;
            }
        }
        true
    }
}

fn sweep(raw: &RawSaf, semantics: SemanticsLabel) -> Vec<u32> {
    let total: u64 = 1u64 << raw.n;
    let mut complete = Vec::new();
    let mut picked = Vec::new();
    for mask in 0..total {
        let mask = mask as u32;
        let e = raw.members(mask);
        if !raw.is_conflict_free(&e) {
            continue;
        }
        let defended = raw.defended_set(&e);
        let def_mask = defended.iter().fold(0u32, |m, &a| m | (1 << a));
        match semantics {
            SemanticsLabel::Admissible => {
                if mask & !def_mask == 0 {
                    picked.push(mask);
                }
            }
            SemanticsLabel::Complete | SemanticsLabel::Grounded | SemanticsLabel::Preferred => {
                if mask == def_mask {
                    complete.push(mask);
                }
            }
            SemanticsLabel::Stable => {
                if raw.covers_outside(&e, mask) {
                    picked.push(mask);
                }
            }
        }
    }
    match semantics {
        SemanticsLabel::Admissible | SemanticsLabel::Stable => picked,
        SemanticsLabel::Complete => complete,
        SemanticsLabel::Preferred => complete
            .iter()
            .copied()
            .filter(|&e| !complete.iter().any(|&o| o != e && e & !o == 0))
            .collect(),
        SemanticsLabel::Grounded => {
            let least = complete
                .iter()
                .copied()
                .find(|&c| complete.iter().all(|&o| c & !o == 0))
                .expect("a least complete extension exists");
            vec![least]
        }
    }
}

/// Exhaustive reference computation of the subargument-aware semantics.
pub fn oracle_extensions(
    saf: &Saf,
    semantics: SemanticsLabel,
) -> Result<ExtensionSet, InstanceTooLarge> {
    let n = saf.arg_count();
    if n > ORACLE_CAP {
        return Err(InstanceTooLarge {
            arguments: n,
            bound: ORACLE_CAP,
        });
    }
    let raw = RawSaf::from(saf);
    let names = saf.arguments();
    let sets = sweep(&raw, semantics).into_iter().map(|mask| {
        (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| names[i].clone())
            .collect()
    });
    Ok(ExtensionSet::from_sets(semantics, saf.digest(), sets))
}

struct RawDung {
    n: usize,
    att: Vec<Vec<bool>>,
}

impl RawDung {
    fn from(af: &DungAf) -> RawDung {
        let names: Vec<&ArgumentId> = af.arguments().iter().collect();
        let n = names.len();
        let index = |a: &ArgumentId| names.iter().position(|x| *x == a).unwrap();
        let mut att = vec![vec![false; n]; n];
        for (a, b) in af.attack_pairs() {
            att[index(a)][index(b)] = true;
        }
        RawDung { n, att }
    }

    fn members(&self, mask: u32) -> Vec<usize> {
        (0..self.n).filter(|i| mask & (1 << i) != 0).collect()
    }

    fn is_conflict_free(&self, e: &[usize]) -> bool {
        e.iter().all(|&a| e.iter().all(|&b| !self.att[a][b]))
    }

    fn is_defended(&self, e: &[usize], a: usize) -> bool {
        (0..self.n)
            .filter(|&b| self.att[b][a])
            .all(|b| e.iter().any(|&c| self.att[c][b]))
    }

    fn defended_mask(&self, e: &[usize]) -> u32 {
        (0..self.n)
            .filter(|&a| self.is_defended(e, a))
            .fold(0u32, |m, a| m | (1 << a))
    }

    fn attacks_everything_outside(&self, e: &[usize], mask: u32) -> bool {
        (0..self.n)
            .filter(|&a| mask & (1 << a) == 0)
            .all(|a| e.iter().any(|&c| self.att[c][a]))
    }
}

/// Exhaustive reference computation of the standard attack-only semantics.
pub fn oracle_dung(
    af: &DungAf,
    semantics: SemanticsLabel,
) -> Result<ExtensionSet, InstanceTooLarge> {
    let n = af.arg_count();
    if n > ORACLE_CAP {
        return Err(InstanceTooLarge {
            arguments: n,
            bound: ORACLE_CAP,
        });
    }
    let raw = RawDung::from(af);
    let total: u64 = 1u64 << n;
    let mut complete = Vec::new();
    let mut picked = Vec::new();
    for mask in 0..total {
        let mask = mask as u32;
        let e = raw.members(mask);
        if !raw.is_conflict_free(&e) {
            continue;
        }
        let def_mask = raw.defended_mask(&e);
        match semantics {
            SemanticsLabel::Admissible => {
                if mask & !def_mask == 0 {
                    picked.push(mask);
                }
            }
            SemanticsLabel::Complete | SemanticsLabel::Grounded | SemanticsLabel::Preferred => {
                if mask == def_mask {
                    complete.push(mask);
                }
            }
            SemanticsLabel::Stable => {
                if raw.attacks_everything_outside(&e, mask) {
                    picked.push(mask);
                }
            }
        }
    }
    let chosen = match semantics {
        SemanticsLabel::Admissible | SemanticsLabel::Stable => picked,
        SemanticsLabel::Complete => complete,
        SemanticsLabel::Preferred => complete
            .iter()
            .copied()
            .filter(|&e| !complete.iter().any(|&o| o != e && e & !o == 0))
            .collect(),
        SemanticsLabel::Grounded => {
            let least = complete
                .iter()
                .copied()
                .find(|&c| complete.iter().all(|&o| c & !o == 0))
                .expect("a least complete extension exists");
            vec![least]
        }
    };
    let names = af.arguments();
    Ok(ExtensionSet::from_sets(
        semantics,
        af.digest(),
        chosen.into_iter().map(|mask| {
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| names[i].clone())
                .collect()
        }),
    ))
}
