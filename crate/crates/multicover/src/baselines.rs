//! Comparison baselines: the classical density greedy and randomized LP
//! rounding. The greedy's set completion is shared with the LP-rounding
//! solvers, which fall back to it when enumeration would be too wide.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::coverage_rows;
use crate::error::{Error, Result};
use crate::instance::{validate, Instance, Solution};
use crate::lp::{solve_lp, LinearProgram, LpStatus, VarLabel};

/// Heap candidate ordered by covering density. The heap is a max-heap, so
/// "greater" means picked earlier: higher ratio, then lighter weight, then
/// lower index. A zero-weight set with any value has infinite ratio.
#[derive(Debug, Clone, Copy)]
struct Cand {
    value: u32,
    weight: f64,
    index: usize,
}

impl Cand {
    fn ratio(&self) -> f64 {
        self.value as f64 / self.weight
    }
}

impl PartialEq for Cand {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cand {}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ratio()
            .total_cmp(&other.ratio())
            .then_with(|| other.weight.total_cmp(&self.weight))
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Greedily adds unchosen sets until every demand is met, preferring the
/// highest ratio of still-needed items to weight. Entries are re-ranked
/// lazily: ratios only ever decrease as residuals shrink, so a popped entry
/// that is stale goes back with its current value and the heap order stays
/// truthful.
pub(crate) fn greedy_extend(instance: &Instance, chosen: &mut [bool]) -> Result<()> {
    let ell = instance.ell();
    let mut residual: Vec<u32> = instance.demands().to_vec();
    for (t, c) in chosen.iter().enumerate() {
        if *c {
            for (g, r) in residual.iter_mut().enumerate() {
                if instance.set(t).contains(g) {
                    *r = r.saturating_sub(1);
                }
            }
        }
    }
    let mut need: u64 = residual.iter().map(|&r| r as u64).sum();
    if need == 0 {
        return Ok(());
    }

    let value_of = |t: usize, residual: &[u32]| -> u32 {
        (0..ell)
            .filter(|&g| residual[g] > 0 && instance.set(t).contains(g))
            .count() as u32
    };

    let mut heap = BinaryHeap::new();
    for t in 0..instance.n() {
        if chosen[t] {
            continue;
        }
        let value = value_of(t, &residual);
        if value > 0 {
            heap.push(Cand { value, weight: instance.set(t).weight, index: t });
        }
    }

    while need > 0 {
        let Some(top) = heap.pop() else {
            return Err(Error::Infeasible(validate(instance)));
        };
        let current = value_of(top.index, &residual);
        if current == 0 {
            continue;
        }
        if current != top.value {
            heap.push(Cand { value: current, ..top });
            continue;
        }
        chosen[top.index] = true;
        need -= u64::from(current);
        for (g, r) in residual.iter_mut().enumerate() {
            if *r > 0 && instance.set(top.index).contains(g) {
                *r -= 1;
            }
        }
    }
    Ok(())
}

/// Density greedy from an empty selection.
pub fn solve_greedy(instance: &Instance) -> Result<Solution> {
    let report = validate(instance);
    if !report.feasible {
        return Err(Error::Infeasible(report));
    }
    let mut chosen = vec![false; instance.n()];
    greedy_extend(instance, &mut chosen)?;
    let selected = (0..instance.n()).filter(|&t| chosen[t]).collect();
    Solution::new(instance, selected, "greedy")
}

/// Randomized rounding of the per-set covering relaxation: each set enters
/// with probability `min(1, ln(n) · x_t)`, then a greedy pass repairs any
/// uncovered demand. One uniform draw per set in index order, so a seed
/// fixes the outcome.
pub fn solve_rrlp(instance: &Instance, seed: u64) -> Result<Solution> {
    let report = validate(instance);
    if !report.feasible {
        return Err(Error::Infeasible(report));
    }
    let n = instance.n();
    let var_labels: Vec<VarLabel> = (0..n).map(|set| VarLabel::SetVar { set }).collect();
    let lp = LinearProgram {
        objective: instance.sets().iter().map(|s| s.weight).collect(),
        constraints: coverage_rows(instance, &var_labels),
        bounds: vec![(0.0, 1.0); n],
        var_labels,
    };
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Lp(
                "covering relaxation reported infeasible despite the capacity check".into(),
            ));
        }
        LpStatus::GuardLimit => {
            return Err(Error::Lp(format!(
                "simplex hit its iteration guard after {} iterations",
                sol.iterations
            )));
        }
    }

    let boost = (n as f64).ln();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![false; n];
    for (t, c) in chosen.iter_mut().enumerate() {
        let u: f64 = rng.random();
        let p = (boost * sol.values[t]).min(1.0);
        if u < p {
            *c = true;
        }
    }
    greedy_extend(instance, &mut chosen)?;
    let selected = (0..n).filter(|&t| chosen[t]).collect();
    Ok(Solution::new(instance, selected, "rrlp")?.with_seed(seed))
}
