//! Deterministic random framework generation for property testing and the
//! `check` command. The generator is a self-contained splitmix so corpora
//! reproduce bit-for-bit across platforms and releases.

use crate::framework::{ArgumentId, Saf};

pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..limit` (limit must be nonzero).
    pub fn below(&mut self, limit: usize) -> usize {
        (self.next() % limit as u64) as usize
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next() % 100 < percent
    }
}

/// A random valid framework with between 1 and `max_args` arguments
/// (single-letter names, so `max_args` is capped at 26).
///
/// Subargument edges follow a random linear order, which keeps them acyclic;
/// candidate attacks are then thinned so that only the structurally most
/// specific attack of each attacker survives.
pub fn random_saf(seed: u64, max_args: usize) -> Saf {
    assert!(
        (1..=26).contains(&max_args),
        "argument names are single letters"
    );
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_args);
    let names: Vec<ArgumentId> = (0..n)
        .map(|i| ArgumentId::new(((b'a' + i as u8) as char).to_string()).unwrap())
        .collect();

    // random topological order
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.below(i + 1));
    }

    let mut subargs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.chance(25) {
                subargs.push((order[i], order[j]));
            }
        }
    }

    // closure of the generated edges, used to thin attacks below
    let mut star: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j).collect())
        .collect();
    for &v in &order {
        for &(u, w) in &subargs {
            if w == v {
                let reach: Vec<usize> = (0..n).filter(|&x| star[u][x]).collect();
                for x in reach {
                    star[v][x] = true;
                }
            }
        }
    }

    let mut candidate = vec![vec![false; n]; n];
    for row in candidate.iter_mut() {
        for cell in row.iter_mut() {
            if rng.chance(20) {
                *cell = true;
            }
        }
    }
    // keep an attack only when the attacker hits no proper subargument of
    // the target, walking targets in subargument order
    let mut kept = vec![vec![false; n]; n];
    for &v in &order {
        for u in 0..n {
            if !candidate[u][v] {
                continue;
            }
            let shadowed = (0..n).any(|w| w != v && star[v][w] && kept[u][w]);
            if !shadowed {
                kept[u][v] = true;
            }
        }
    }

    let attacks: Vec<(ArgumentId, ArgumentId)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| kept[u][v])
        .map(|(u, v)| (names[u].clone(), names[v].clone()))
        .collect();
    let subargs: Vec<(ArgumentId, ArgumentId)> = subargs
        .into_iter()
        .map(|(u, v)| (names[u].clone(), names[v].clone()))
        .collect();

    Saf::new(names, attacks, subargs).expect("generated frameworks are valid")
}

/// A seeded corpus of `count` random frameworks.
pub fn random_corpus(seed: u64, count: usize, max_args: usize) -> Vec<Saf> {
    (0..count)
        .map(|i| random_saf(seed.wrapping_add(i as u64), max_args))
        .collect()
}
