//! Instance generators and the solution-quality metric. All randomness runs
//! through a seeded ChaCha stream with a fixed draw order, so a seed pins an
//! instance bit-for-bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, Poisson};

use crate::error::{Error, Result};
use crate::instance::{coverage, Instance, SetRecord, Solution};

/// Per-item demand distributions for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandSpec {
    /// Integer uniform on `[1, 10]`.
    Random,
    /// Constant 5.
    Uniform,
    /// Normal with mean 5 and standard deviation 2, rounded, floored at 1.
    Normal,
    /// Exponential with rate 0.2 (mean 5), rounded, floored at 1.
    Exp,
    /// Poisson with mean 5, taken raw, so 0 can occur.
    Poisson,
    /// Zipf with exponent 2, truncated to `[1, 10 · ell]`.
    Zipf,
}

/// Draws one demand per item. Continuous draws round half away from zero and
/// never drop below 1; the Poisson stays raw.
pub fn sample_demands(spec: DemandSpec, ell: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let round_up = |x: f64| x.round().max(1.0) as u32;
    match spec {
        DemandSpec::Random => (0..ell).map(|_| rng.random_range(1..=10)).collect(),
        DemandSpec::Uniform => vec![5; ell],
        DemandSpec::Normal => {
            let dist = Normal::new(5.0, 2.0).expect("legal parameters");
            (0..ell).map(|_| round_up(dist.sample(&mut rng))).collect()
        }
        DemandSpec::Exp => {
            let dist = Exp::new(0.2).expect("legal rate");
            (0..ell).map(|_| round_up(dist.sample(&mut rng))).collect()
        }
        DemandSpec::Poisson => {
            let dist = Poisson::new(5.0).expect("legal mean");
            (0..ell).map(|_| dist.sample(&mut rng) as u32).collect()
        }
        DemandSpec::Zipf => {
            // Inverse CDF over the truncated support, kept explicit so the
            // draw sequence is stable.
            let max = 10 * ell;
            let mut cum = Vec::with_capacity(max);
            let mut acc = 0.0;
            for k in 1..=max {
                acc += 1.0 / (k * k) as f64;
                cum.push(acc);
            }
            let total = acc;
            (0..ell)
                .map(|_| {
                    let u = rng.random::<f64>() * total;
                    (cum.partition_point(|&c| c < u) + 1).min(max) as u32
                })
                .collect()
        }
    }
}

/// Random instance: each set contains each item with probability 0.3 (a set
/// that comes out empty is redrawn once and then kept), integer weights
/// uniform on `[1, 1000]`. Demands come from `spec` under a derived seed and
/// are clamped to item capacity, so the result is always feasible.
pub fn generate_random(n: usize, ell: usize, spec: DemandSpec, seed: u64) -> Result<Instance> {
    if ell == 0 || ell > crate::instance::MAX_ITEMS {
        // Let the constructor produce its usual universe error.
        return Instance::new(item_names(ell), vec![0; ell], Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw_mask = |rng: &mut ChaCha8Rng| {
        let mut items = 0u64;
        for g in 0..ell {
            if rng.random::<f64>() < 0.3 {
                items |= 1 << g;
            }
        }
        items
    };
    let mut sets = Vec::with_capacity(n);
    for _ in 0..n {
        let mut items = draw_mask(&mut rng);
        if items == 0 {
            items = draw_mask(&mut rng);
        }
        let weight = rng.random_range(1..=1000) as f64;
        sets.push(SetRecord { items, weight });
    }
    let raw = sample_demands(spec, ell, seed.wrapping_add(1));
    let mut capacity = vec![0u32; ell];
    for s in &sets {
        for (g, c) in capacity.iter_mut().enumerate() {
            if s.contains(g) {
                *c += 1;
            }
        }
    }
    let demands = raw.iter().zip(&capacity).map(|(&q, &c)| q.min(c)).collect();
    Instance::new(item_names(ell), demands, sets)
}

/// Nested family on which the density greedy overpays: set `i` covers the
/// first `i` items at weight `1 / (ell − i + 1)`, except the full set, which
/// costs 1.01 and is the unique optimum at unit demands.
pub fn generate_adversarial(ell: usize) -> Result<Instance> {
    if ell < 2 {
        return Err(Error::Argument(format!(
            "the adversarial family needs at least 2 items, got {ell}"
        )));
    }
    if ell > crate::instance::MAX_ITEMS {
        return Instance::new(item_names(ell), vec![0; ell], Vec::new());
    }
    let sets = (1..=ell)
        .map(|i| SetRecord {
            items: (1u64 << i) - 1,
            weight: if i == ell { 1.01 } else { 1.0 / (ell - i + 1) as f64 },
        })
        .collect();
    Instance::new(item_names(ell), vec![1; ell], sets)
}

fn item_names(ell: usize) -> Vec<String> {
    (1..=ell).map(|g| format!("g{g}")).collect()
}

/// Residual sum of squares of overcoverage: `Σ (coverage − demand)²` over
/// items. Zero exactly when every demand is met with no slack. Solutions
/// that fail to cover are rejected rather than scored.
pub fn rss(instance: &Instance, solution: &Solution) -> Result<f64> {
    let cov = coverage(instance, solution)?;
    if !cov.satisfies(instance.demands()) {
        return Err(Error::Argument(format!(
            "solution does not cover: coverage {:?} versus demands {:?}",
            cov.counts,
            instance.demands()
        )));
    }
    Ok(cov
        .counts
        .iter()
        .zip(instance.demands())
        .map(|(&c, &q)| {
            let d = c as f64 - q as f64;
            d * d
        })
        .sum())
}
