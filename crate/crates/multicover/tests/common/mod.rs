//! Shared fixtures for the integration suites: two hand-checked worked
//! instances and a seeded generator for the small-instance property corpus.

// Each test target compiles this module on its own, and none of them uses
// every fixture.
#![allow(dead_code)]

use multicover::instance::{Instance, SetRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two items, demands (2, 2): two singles per item plus two pair sets.
/// Weights are calibrated so the optimum is 6 via one cheap single of each
/// kind plus the cheap pair.
pub fn paired_singles() -> Instance {
    Instance::new(
        vec!["g1".into(), "g2".into()],
        vec![2, 2],
        vec![
            SetRecord::new(1.0, &[0]),
            SetRecord::new(8.0, &[0]),
            SetRecord::new(2.0, &[1]),
            SetRecord::new(9.0, &[1]),
            SetRecord::new(3.0, &[0, 1]),
            SetRecord::new(5.0, &[0, 1]),
        ],
    )
    .expect("fixture is well formed")
}

/// Two items, demands (3, 2): three singles on the first item, two on the
/// second, three pair sets. Optimum is 10.
pub fn skewed_demands() -> Instance {
    Instance::new(
        vec!["g1".into(), "g2".into()],
        vec![3, 2],
        vec![
            SetRecord::new(1.0, &[0]),
            SetRecord::new(3.0, &[0]),
            SetRecord::new(4.0, &[0]),
            SetRecord::new(2.0, &[1]),
            SetRecord::new(8.0, &[1]),
            SetRecord::new(4.0, &[0, 1]),
            SetRecord::new(5.0, &[0, 1]),
            SetRecord::new(6.0, &[0, 1]),
        ],
    )
    .expect("fixture is well formed")
}

/// Small randomized instances sized for exhaustive cross-checking: up to 12
/// sets over up to 4 items, integer weights in `[1, 20]`, demands at most 3
/// and clamped to capacity, so every instance is feasible.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ell = rng.random_range(1..=4usize);
    let n = rng.random_range(1..=12usize);
    let mut sets = Vec::with_capacity(n);
    for _ in 0..n {
        let mask = rng.random_range(1..(1u64 << ell));
        let weight = rng.random_range(1..=20) as f64;
        sets.push(SetRecord { items: mask, weight });
    }
    let mut capacity = vec![0u32; ell];
    for s in &sets {
        for (g, c) in capacity.iter_mut().enumerate() {
            if s.contains(g) {
                *c += 1;
            }
        }
    }
    let demands = capacity
        .iter()
        .map(|&c| rng.random_range(0..=3u32).min(c))
        .collect();
    let names = (1..=ell).map(|g| format!("g{g}")).collect();
    Instance::new(names, demands, sets).expect("generated instance is well formed")
}

/// The corpus used by the property suites.
pub fn small_corpus(count: usize) -> Vec<Instance> {
    (0..count as u64).map(small_instance).collect()
}

/// From-scratch reference greedy: recomputes every candidate's still-needed
/// count each round. Ties fall to the lighter set, then the lower index;
/// zero weights rank as infinite density.
pub fn naive_greedy(inst: &Instance) -> Vec<usize> {
    use std::cmp::Ordering;
    let ell = inst.ell();
    let mut residual: Vec<u32> = inst.demands().to_vec();
    let mut chosen = vec![false; inst.n()];
    while residual.iter().any(|&r| r > 0) {
        let mut best: Option<(f64, f64, usize)> = None;
        for t in 0..inst.n() {
            if chosen[t] {
                continue;
            }
            let value = (0..ell)
                .filter(|&g| residual[g] > 0 && inst.set(t).contains(g))
                .count() as u32;
            if value == 0 {
                continue;
            }
            let w = inst.set(t).weight;
            let ratio = value as f64 / w;
            let wins = match &best {
                None => true,
                Some((br, bw, bi)) => match ratio.total_cmp(br) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => match w.total_cmp(bw) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => t < *bi,
                    },
                },
            };
            if wins {
                best = Some((ratio, w, t));
            }
        }
        let (_, _, t) = best.expect("feasible instances never strand the greedy");
        chosen[t] = true;
        for g in 0..ell {
            if residual[g] > 0 && inst.set(t).contains(g) {
                residual[g] -= 1;
            }
        }
    }
    (0..inst.n()).filter(|&t| chosen[t]).collect()
}
