//! LP-rounding approximation solvers. Both build a covering relaxation over
//! content-identical bucket groups, extract per-bucket fractional counts,
//! floor them, and repair the leftover fraction by enumerating small
//! per-bucket top-ups (cheapest members first). The compressed variant
//! replaces each bucket's cost curve with its sparse envelope, shrinking the
//! LP from one column per set to a few columns per bucket.

use std::collections::BTreeMap;

use crate::baselines::greedy_extend;
use crate::error::{Error, Result};
use crate::instance::{partition_buckets, validate, BucketIndex, Instance, Solution};
use crate::lp::{
    solve_lp, Constraint, LinearProgram, LpSolution, LpStatus, VarLabel,
};
use crate::piecewise::compress;

/// Rounding enumerates top-up vectors only while their count stays at or
/// under this; past it, a greedy completion takes over.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 1_000_000;

/// Fractions within this of an integer snap to it before flooring, so
/// near-integral LP output rounds like exact output.
const SNAP_TOL: f64 = 1e-9;

/// Fractional set counts per bucket, keyed by bucket content mask.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BucketFractions {
    pub per_bucket: BTreeMap<u64, f64>,
}

impl BucketFractions {
    pub fn get(&self, key: u64) -> f64 {
        self.per_bucket.get(&key).copied().unwrap_or(0.0)
    }

    /// Total fractional count across buckets.
    pub fn total(&self) -> f64 {
        self.per_bucket.values().sum()
    }
}

/// Covering relaxation with one `[0, 1]` column per set. Columns are grouped
/// by bucket in ascending key order, cheapest member first, which keeps the
/// solve deterministic under set reordering.
pub fn build_full_lp(instance: &Instance, buckets: &BucketIndex) -> LinearProgram {
    let mut objective = Vec::with_capacity(instance.n());
    let mut var_labels = Vec::with_capacity(instance.n());
    for entry in buckets.entries() {
        for (rank, &set) in entry.members().iter().enumerate() {
            objective.push(instance.set(set).weight);
            var_labels.push(VarLabel::BucketMember { bucket: entry.key(), rank, set });
        }
    }
    let constraints = coverage_rows(instance, &var_labels);
    let n = objective.len();
    LinearProgram {
        objective,
        constraints,
        bounds: vec![(0.0, 1.0); n],
        var_labels,
    }
}

/// Covering relaxation with one column per envelope piece: cost is the piece
/// slope, capacity its length. Convexity makes slopes non-decreasing within
/// a bucket, so an optimal LP fills pieces in cost order and the per-bucket
/// column sum is a faithful fractional count.
pub fn build_compressed_lp(
    instance: &Instance,
    buckets: &BucketIndex,
    epsilon: f64,
) -> Result<LinearProgram> {
    let mut objective = Vec::new();
    let mut bounds = Vec::new();
    let mut var_labels = Vec::new();
    for entry in buckets.entries() {
        let compressed = compress(entry.prefix(), epsilon)?;
        for (piece, seg) in compressed.segments.iter().enumerate() {
            objective.push(seg.slope);
            bounds.push((0.0, seg.length));
            var_labels.push(VarLabel::BucketPiece { bucket: entry.key(), piece });
        }
    }
    let constraints = coverage_rows(instance, &var_labels);
    Ok(LinearProgram { objective, constraints, bounds, var_labels })
}

/// One `≥ demand` row per item; a column participates when its bucket mask
/// contains the item.
pub(crate) fn coverage_rows(instance: &Instance, var_labels: &[VarLabel]) -> Vec<Constraint> {
    (0..instance.ell())
        .map(|g| {
            let coeffs = var_labels
                .iter()
                .enumerate()
                .filter_map(|(j, label)| {
                    let mask = match label {
                        VarLabel::BucketMember { bucket, .. } => *bucket,
                        VarLabel::BucketPiece { bucket, .. } => *bucket,
                        VarLabel::SetVar { set } => instance.set(*set).items,
                        VarLabel::Anonymous => return None,
                    };
                    (mask >> g & 1 == 1).then_some((j, 1.0))
                })
                .collect();
            Constraint { coeffs, rhs: instance.demands()[g] as f64 }
        })
        .collect()
}

/// Sums LP column values into per-bucket fractional counts using the column
/// labels, so it works on both the full and the compressed relaxation.
pub fn extract_bucket_fractions(lp: &LinearProgram, sol: &LpSolution) -> BucketFractions {
    let mut per_bucket = BTreeMap::new();
    for (label, &v) in lp.var_labels.iter().zip(&sol.values) {
        let key = match label {
            VarLabel::BucketMember { bucket, .. } => *bucket,
            VarLabel::BucketPiece { bucket, .. } => *bucket,
            VarLabel::SetVar { set: _ } | VarLabel::Anonymous => continue,
        };
        *per_bucket.entry(key).or_insert(0.0) += v;
    }
    BucketFractions { per_bucket }
}

/// Converts fractional bucket counts into an integral selection. Floors each
/// count (after snapping near-integers), pre-selects that many cheapest
/// members per bucket, then covers the lost fraction by enumerating per-bucket
/// top-ups of at most `r = ⌈total lost fraction⌉` extra sets, keeping the
/// cheapest feasible candidate. Ties keep the first candidate in counter
/// order with the smallest bucket key as the fastest digit. When the
/// candidate space exceeds `bruteforce_cap`, or no candidate covers, a
/// greedy completion over the leftover sets finishes the selection.
pub fn round_solution(
    instance: &Instance,
    buckets: &BucketIndex,
    fractions: &BucketFractions,
    bruteforce_cap: usize,
) -> Result<Vec<usize>> {
    let ell = instance.ell();
    let demands = instance.demands();

    let mut base = BTreeMap::new();
    let mut lost = 0.0f64;
    for entry in buckets.entries() {
        let x = fractions.get(entry.key());
        if x < 0.0 {
            return Err(Error::Argument(format!(
                "negative fractional count {x} for bucket {:#x}",
                entry.key()
            )));
        }
        let snapped = if (x - x.round()).abs() <= SNAP_TOL { x.round() } else { x };
        let floor = (snapped.floor() as usize).min(entry.len());
        lost += x - floor as f64;
        base.insert(entry.key(), floor);
    }
    let r = (lost - SNAP_TOL).ceil().max(0.0) as usize;

    let mut base_cov = vec![0u64; ell];
    for entry in buckets.entries() {
        let b = base[&entry.key()] as u64;
        for g in 0..ell {
            if entry.contains_item(g) {
                base_cov[g] += b;
            }
        }
    }

    // Residual buckets in ascending key order; the enumeration treats the
    // first as its fastest-varying digit.
    struct Residual<'a> {
        entry: &'a crate::instance::BucketEntry,
        base: usize,
        cap: usize,
    }
    let residuals: Vec<Residual> = if r == 0 {
        Vec::new()
    } else {
        buckets
            .entries()
            .filter_map(|entry| {
                let b = base[&entry.key()];
                let room = entry.len() - b;
                (room > 0).then_some(Residual {
                    entry,
                    base: b,
                    cap: room.min(r),
                })
            })
            .collect()
    };

    let mut candidates = 1usize;
    for rb in &residuals {
        candidates = candidates.saturating_mul(rb.cap + 1);
        if candidates > bruteforce_cap {
            break;
        }
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    if candidates <= bruteforce_cap {
        let mut y = vec![0usize; residuals.len()];
        'outer: loop {
            let feasible = (0..ell).all(|g| {
                let mut cov = base_cov[g];
                for (add, rb) in y.iter().zip(&residuals) {
                    if rb.entry.contains_item(g) {
                        cov += *add as u64;
                    }
                }
                cov >= demands[g] as u64
            });
            if feasible {
                let extra: f64 = y
                    .iter()
                    .zip(&residuals)
                    .map(|(add, rb)| {
                        rb.entry.prefix()[rb.base + add] - rb.entry.prefix()[rb.base]
                    })
                    .sum();
                if best.as_ref().is_none_or(|(w, _)| extra < *w) {
                    best = Some((extra, y.clone()));
                }
            }
            let mut i = 0;
            loop {
                if i == residuals.len() {
                    break 'outer;
                }
                y[i] += 1;
                if y[i] <= residuals[i].cap {
                    break;
                }
                y[i] = 0;
                i += 1;
            }
        }
    }

    let mut take: BTreeMap<u64, usize> = base;
    match best {
        Some((_, y)) => {
            for (add, rb) in y.iter().zip(&residuals) {
                *take.get_mut(&rb.entry.key()).unwrap() += add;
            }
        }
        None => {
            // Candidate space too large or nothing covered: greedily extend
            // the floored pre-selection.
            let mut chosen = vec![false; instance.n()];
            for entry in buckets.entries() {
                for &set in &entry.members()[..take[&entry.key()]] {
                    chosen[set] = true;
                }
            }
            greedy_extend(instance, &mut chosen)?;
            let selected: Vec<usize> =
                (0..instance.n()).filter(|&s| chosen[s]).collect();
            return Ok(selected);
        }
    }

    let mut selected = Vec::new();
    for entry in buckets.entries() {
        selected.extend_from_slice(&entry.members()[..take[&entry.key()]]);
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Factor-2 approximation: solve the per-set covering relaxation, then round
/// the bucket fractions.
pub fn solve_two_approx(instance: &Instance) -> Result<Solution> {
    solve_with_relaxation(instance, "2approx", None, DEFAULT_BRUTEFORCE_CAP)
}

/// Factor-(2 + epsilon) approximation: like `solve_two_approx` but over the
/// compressed relaxation, with the envelope built at `epsilon / 2` so the
/// compression loss and the rounding loss compose to the advertised factor.
pub fn solve_two_eps(instance: &Instance, epsilon: f64) -> Result<Solution> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Argument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    solve_with_relaxation(instance, "2eps", Some(epsilon / 2.0), DEFAULT_BRUTEFORCE_CAP)
}

fn solve_with_relaxation(
    instance: &Instance,
    algorithm: &str,
    compress_eps: Option<f64>,
    bruteforce_cap: usize,
) -> Result<Solution> {
    let report = validate(instance);
    if !report.feasible {
        return Err(Error::Infeasible(report));
    }
    let buckets = partition_buckets(instance);
    let lp = match compress_eps {
        None => build_full_lp(instance, &buckets),
        Some(eps) => build_compressed_lp(instance, &buckets, eps)?,
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
    let fractions = extract_bucket_fractions(&lp, &sol);
    let selected = round_solution(instance, &buckets, &fractions, bruteforce_cap)?;
    Solution::new(instance, selected, algorithm)
}
