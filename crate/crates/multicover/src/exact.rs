//! Exact solvers: dynamic programming over residual demand vectors, and an
//! exhaustive enumeration oracle for small `n`.

use crate::error::{Error, Result};
use crate::instance::{validate, Instance, Solution};

/// Hard ceilings protecting against runaway allocation: the demand box and
/// the per-set choice bitsets must stay in memory.
const MAX_DP_STATES: usize = 1 << 26;
const MAX_CHOICE_BYTES: usize = 1 << 31;

/// Exhaustive search walks all `2^n` sub-families.
const MAX_BRUTEFORCE_SETS: usize = 24;

/// Dynamic program over clamped residual demands.
///
/// Axis `g` has `Q_g + 1` entries; `layer[state]` is the cheapest total weight
/// of a sub-family of the processed prefix that covers residual demand
/// `state`, with residual updates clamped at zero. Only the current layer is
/// stored. `choice_log` keeps one bit per (processed set, state) marking the
/// states where taking the set was strictly cheaper than skipping it, which
/// is enough to walk one optimal family back out. Ties prefer skip.
pub struct DpTable {
    dims: Vec<usize>,
    strides: Vec<usize>,
    layer: Vec<f64>,
    choice_log: Vec<Vec<u64>>,
    processed: usize,
}

impl DpTable {
    pub fn new(instance: &Instance) -> Result<Self> {
        let dims: Vec<usize> = instance.demands().iter().map(|&q| q as usize + 1).collect();
        let mut strides = Vec::with_capacity(dims.len());
        let mut states = 1usize;
        for &d in &dims {
            strides.push(states);
            states = states.checked_mul(d).ok_or_else(too_many_states)?;
        }
        if states > MAX_DP_STATES {
            return Err(too_many_states());
        }
        if states / 8 * instance.n().max(1) > MAX_CHOICE_BYTES {
            return Err(Error::TooLarge(format!(
                "choice log for {} sets over {states} states exceeds the memory ceiling",
                instance.n()
            )));
        }
        let mut layer = vec![f64::INFINITY; states];
        layer[0] = 0.0;
        Ok(DpTable {
            dims,
            strides,
            layer,
            choice_log: Vec::with_capacity(instance.n()),
            processed: 0,
        })
    }

    pub fn num_states(&self) -> usize {
        self.layer.len()
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    /// Optimal weight for a residual demand vector (`f64::INFINITY` if the
    /// processed prefix cannot cover it).
    pub fn value(&self, residual: &[u32]) -> f64 {
        assert_eq!(residual.len(), self.dims.len(), "residual arity mismatch");
        let mut flat = 0;
        for (g, &q) in residual.iter().enumerate() {
            assert!(
                (q as usize) < self.dims[g],
                "residual {q} out of range for axis {g}"
            );
            flat += q as usize * self.strides[g];
        }
        self.layer[flat]
    }

    /// Weight of the optimum for the full demand vector.
    pub fn optimum(&self) -> f64 {
        self.layer[self.layer.len() - 1]
    }

    /// Folds the next unprocessed set into the table: every state keeps the
    /// cheaper of skipping the set or paying its weight from the clamped
    /// decremented state.
    pub fn process_next(&mut self, instance: &Instance) {
        let t = self.processed;
        assert!(t < instance.n(), "all sets already processed");
        let set = instance.set(t);
        let w = set.weight;
        let covered: Vec<(usize, usize)> = (0..self.dims.len())
            .filter(|&g| set.contains(g))
            .map(|g| (g, self.strides[g]))
            .collect();

        let states = self.layer.len();
        let mut log = vec![0u64; states.div_ceil(64)];
        let old = &self.layer;
        let mut new = old.clone();
        let mut q = vec![0u32; self.dims.len()];
        for s in 0..states {
            // drop(s): decrement each covered axis with positive residual.
            let mut d = s;
            for &(g, stride) in &covered {
                if q[g] > 0 {
                    d -= stride;
                }
            }
            let take = w + old[d];
            if take < new[s] {
                new[s] = take;
                log[s / 64] |= 1 << (s % 64);
            }
            // Mixed-radix odometer keeps the component vector of `s + 1`.
            for (g, qg) in q.iter_mut().enumerate() {
                *qg += 1;
                if (*qg as usize) < self.dims[g] {
                    break;
                }
                *qg = 0;
            }
        }
        self.layer = new;
        self.choice_log.push(log);
        self.processed += 1;
    }

    /// Walks the choice log backwards from the full demand vector and returns
    /// the selected set indices in ascending order.
    pub fn reconstruct(&self, instance: &Instance) -> Vec<usize> {
        assert_eq!(self.processed, instance.n(), "table not fully processed");
        let mut flat = self.layer.len() - 1;
        let mut q: Vec<u32> = instance.demands().to_vec();
        let mut picked = Vec::new();
        for t in (0..self.processed).rev() {
            if self.choice_log[t][flat / 64] >> (flat % 64) & 1 == 1 {
                picked.push(t);
                for (g, qg) in q.iter_mut().enumerate() {
                    if instance.set(t).contains(g) && *qg > 0 {
                        *qg -= 1;
                        flat -= self.strides[g];
                    }
                }
            }
        }
        picked.reverse();
        picked
    }
}

fn too_many_states() -> Error {
    Error::TooLarge("demand state space exceeds the memory ceiling".into())
}

/// Exact minimum-weight cover by dynamic programming over the demand box.
/// Cost grows with `n · Π(Q_g + 1)`, so this is for small universes.
pub fn solve_dp(instance: &Instance) -> Result<Solution> {
    let report = validate(instance);
    if !report.feasible {
        return Err(Error::Infeasible(report));
    }
    let mut table = DpTable::new(instance)?;
    for _ in 0..instance.n() {
        table.process_next(instance);
    }
    let selected = table.reconstruct(instance);
    Solution::new(instance, selected, "dp")
}

/// Exact minimum-weight cover by enumerating all `2^n` sub-families.
/// Guarded at `n ≤ 24`; ties break toward the lexicographically smallest
/// selected-index list.
pub fn solve_bruteforce(instance: &Instance) -> Result<Solution> {
    let n = instance.n();
    if n > MAX_BRUTEFORCE_SETS {
        return Err(Error::TooLarge(format!(
            "{n} sets exceed the exhaustive-search limit of {MAX_BRUTEFORCE_SETS}"
        )));
    }
    let report = validate(instance);
    if !report.feasible {
        return Err(Error::Infeasible(report));
    }
    let ell = instance.ell();
    let demands = instance.demands();
    let mut counts = vec![0u32; ell];
    let mut best: Option<(f64, u64)> = None;
    for mask in 0..1u64 << n {
        let mut w = 0.0;
        let mut m = mask;
        while m != 0 {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            w += instance.set(t).weight;
        }
        if let Some((bw, bmask)) = best {
            if w > bw {
                continue;
            }
            if w == bw && !lex_smaller(mask, bmask, n) {
                continue;
            }
        }
        counts.fill(0);
        let mut m = mask;
        while m != 0 {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            let items = instance.set(t).items;
            for (g, c) in counts.iter_mut().enumerate() {
                *c += (items >> g & 1) as u32;
            }
        }
        if counts.iter().zip(demands).all(|(c, q)| c >= q) {
            best = Some((w, mask));
        }
    }
    let (_, mask) = best.expect("a feasible instance has a covering sub-family");
    let selected = (0..n).filter(|&t| mask >> t & 1 == 1).collect();
    Solution::new(instance, selected, "bf")
}

/// Lexicographic order on the ascending index lists the masks encode.
fn lex_smaller(a: u64, b: u64, n: usize) -> bool {
    let la: Vec<usize> = (0..n).filter(|&t| a >> t & 1 == 1).collect();
    let lb: Vec<usize> = (0..n).filter(|&t| b >> t & 1 == 1).collect();
    la < lb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::SetRecord;

    fn tiny() -> Instance {
        Instance::new(
            vec!["a".into()],
            vec![2],
            vec![
                SetRecord::new(4.0, &[0]),
                SetRecord::new(1.0, &[0]),
                SetRecord::new(2.0, &[0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dp_picks_two_cheapest() {
        let sol = solve_dp(&tiny()).unwrap();
        assert_eq!(sol.selected, vec![1, 2]);
        assert_eq!(sol.total_weight, 3.0);
    }

    #[test]
    fn zero_bit_never_taken() {
        let inst = Instance::new(
            vec!["a".into()],
            vec![0],
            vec![SetRecord::new(0.0, &[0])],
        )
        .unwrap();
        let sol = solve_dp(&inst).unwrap();
        assert!(sol.selected.is_empty());
        assert_eq!(sol.total_weight, 0.0);
    }

    #[test]
    fn bruteforce_tie_prefers_lexicographically_smaller_list() {
        // Two disjoint optimal pairs of equal weight: {0,3} and {1,2}.
        let inst = Instance::new(
            vec!["a".into(), "b".into()],
            vec![1, 1],
            vec![
                SetRecord::new(1.0, &[0]),
                SetRecord::new(1.0, &[0]),
                SetRecord::new(2.0, &[1]),
                SetRecord::new(2.0, &[1]),
            ],
        )
        .unwrap();
        let sol = solve_bruteforce(&inst).unwrap();
        assert_eq!(sol.selected, vec![0, 2]);
    }

    #[test]
    fn bruteforce_guard() {
        let sets = vec![SetRecord::new(1.0, &[0]); 25];
        let inst = Instance::new(vec!["a".into()], vec![1], sets).unwrap();
        assert!(matches!(
            solve_bruteforce(&inst),
            Err(Error::TooLarge(_))
        ));
    }
}
