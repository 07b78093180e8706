//! Self-contained linear programming for covering problems: a deterministic
//! bounded-variable primal simplex on a dense tableau, plus a KKT residual
//! report for auditing solutions. Kept behind plain data types so an external
//! solver could substitute without touching the callers.

use crate::error::{Error, Result};

/// Absolute tolerance on constraint residuals.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Reduced-cost threshold for entering-variable eligibility.
pub const OPTIMALITY_TOL: f64 = 1e-9;
/// Entries smaller than this never serve as pivots.
const PIVOT_TOL: f64 = 1e-10;
/// A simplex step this small counts as degenerate.
const DEGENERATE_STEP: f64 = 1e-12;
/// Consecutive degenerate steps before Bland's rule takes over.
const DEGENERACY_STREAK: usize = 25;

/// Tags mapping LP variables back to model entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarLabel {
    /// Per-set variable of the full covering LP: bucket key, rank within the
    /// bucket's ascending weight order, and the underlying set index.
    BucketMember { bucket: u64, rank: usize, set: usize },
    /// Per-piece variable of the compressed LP.
    BucketPiece { bucket: u64, piece: usize },
    /// Plain per-set variable.
    SetVar { set: usize },
    Anonymous,
}

/// A minimization LP in covering form: every constraint is `≥`, every
/// variable lives in a finite box `[lower, upper]` with `lower ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Per-variable costs; minimized.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// Per-variable `[lower, upper]`.
    pub bounds: Vec<(f64, f64)>,
    pub var_labels: Vec<VarLabel>,
}

/// One `≥` row as a sparse coefficient list.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n || self.var_labels.len() != n {
            return Err(Error::Argument(format!(
                "LP arity mismatch: {} costs, {} bounds, {} labels",
                n,
                self.bounds.len(),
                self.var_labels.len()
            )));
        }
        for (j, &(l, u)) in self.bounds.iter().enumerate() {
            if !(l.is_finite() && u.is_finite()) || l < 0.0 || u < l {
                return Err(Error::Argument(format!(
                    "variable {j} has bounds [{l}, {u}]; need finite 0 ≤ lower ≤ upper"
                )));
            }
        }
        for (i, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(Error::Argument(format!("constraint {i} has rhs {}", con.rhs)));
            }
            for &(j, a) in &con.coeffs {
                if j >= n || !a.is_finite() {
                    return Err(Error::Argument(format!(
                        "constraint {i} has coefficient {a} on variable {j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// The iteration cap tripped before optimality was proven. Values are the
    /// best basis reached; callers must not treat them as optimal.
    GuardLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    /// One multiplier per constraint from the final basis; non-negative at
    /// optimality for covering rows.
    pub duals: Vec<f64>,
}

const NOT_BASIC: usize = usize::MAX;

struct Tableau {
    m: usize,
    cols: usize,
    /// Current rows of the basis inverse applied to the full column set.
    rows: Vec<Vec<f64>>,
    /// Current values of the basic variables (row-aligned).
    vals: Vec<f64>,
    /// Reduced-cost row for the active phase.
    obj: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    iterations: usize,
}

enum Phase {
    Finished,
    CapHit,
    Unbounded,
}

impl Tableau {
    fn value(&self, j: usize) -> f64 {
        if self.pos[j] != NOT_BASIC {
            self.vals[self.pos[j]]
        } else if self.at_upper[j] {
            self.upper[j]
        } else {
            self.lower[j]
        }
    }

    /// Rebuilds the reduced-cost row `c − c_B · rows` for a new cost vector.
    fn reset_objective(&mut self, cost: Vec<f64>) {
        let mut obj = cost.clone();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                let row = &self.rows[i];
                for (o, r) in obj.iter_mut().zip(row) {
                    *o -= cb * r;
                }
            }
        }
        self.cost = cost;
        self.obj = obj;
    }

    fn run_phase(&mut self, cap: usize) -> Phase {
        let mut bland = false;
        let mut streak = 0usize;
        loop {
            if self.iterations >= cap {
                return Phase::CapHit;
            }
            let mut enter: Option<(usize, f64)> = None;
            let mut best = OPTIMALITY_TOL;
            for j in 0..self.cols {
                if self.pos[j] != NOT_BASIC || self.upper[j] <= self.lower[j] {
                    continue;
                }
                let d = self.obj[j];
                let (eligible, dir, score) = if self.at_upper[j] {
                    (d > OPTIMALITY_TOL, -1.0, d)
                } else {
                    (d < -OPTIMALITY_TOL, 1.0, -d)
                };
                if !eligible {
                    continue;
                }
                if bland {
                    enter = Some((j, dir));
                    break;
                }
                if score > best {
                    best = score;
                    enter = Some((j, dir));
                }
            }
            let Some((j, dir)) = enter else {
                return Phase::Finished;
            };

            // Ratio test: how far can x_j move before itself or a basic
            // variable hits a bound. Ties prefer the smallest leaving
            // variable index, which together with Bland entering gives
            // anti-cycling.
            let range = self.upper[j] - self.lower[j];
            let mut t_star = range;
            let mut leave: Option<(usize, bool)> = None;
            for i in 0..self.m {
                let alpha = self.rows[i][j] * dir;
                let b = self.basis[i];
                let (ratio, hits_upper) = if alpha > PIVOT_TOL {
                    ((self.vals[i] - self.lower[b]).max(0.0) / alpha, false)
                } else if alpha < -PIVOT_TOL {
                    if self.upper[b].is_infinite() {
                        continue;
                    }
                    ((self.upper[b] - self.vals[i]).max(0.0) / -alpha, true)
                } else {
                    continue;
                };
                let better = match leave {
                    None => ratio < t_star,
                    Some((r, _)) => {
                        ratio + 1e-15 < t_star
                            || (ratio <= t_star + 1e-15 && b < self.basis[r])
                    }
                };
                if better {
                    t_star = ratio.min(t_star);
                    leave = Some((i, hits_upper));
                }
            }

            if leave.is_none() && range.is_infinite() {
                return Phase::Unbounded;
            }
            self.iterations += 1;
            let step = if leave.is_none() { range } else { t_star };
            if step <= DEGENERATE_STEP {
                streak += 1;
                if streak >= DEGENERACY_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
                bland = false;
            }

            match leave {
                None => {
                    // Bound flip: x_j crosses its box, basis unchanged.
                    for i in 0..self.m {
                        self.vals[i] -= self.rows[i][j] * dir * range;
                    }
                    self.at_upper[j] = !self.at_upper[j];
                }
                Some((r, hits_upper)) => {
                    for i in 0..self.m {
                        self.vals[i] -= self.rows[i][j] * dir * t_star;
                    }
                    let entering_from = if self.at_upper[j] {
                        self.upper[j]
                    } else {
                        self.lower[j]
                    };
                    let leaving = self.basis[r];
                    self.pos[leaving] = NOT_BASIC;
                    self.at_upper[leaving] = hits_upper;
                    self.basis[r] = j;
                    self.pos[j] = r;
                    self.vals[r] = entering_from + dir * t_star;

                    let piv = self.rows[r][j];
                    let inv = 1.0 / piv;
                    for v in self.rows[r].iter_mut() {
                        *v *= inv;
                    }
                    for i in 0..self.m {
                        if i == r {
                            continue;
                        }
                        let f = self.rows[i][j];
                        if f != 0.0 {
                            let (head, tail) = self.rows.split_at_mut(i.max(r));
                            let (ri, rr) = if i < r {
                                (&mut head[i], &tail[0])
                            } else {
                                (&mut tail[0], &head[r])
                            };
                            for (a, b) in ri.iter_mut().zip(rr) {
                                *a -= f * b;
                            }
                        }
                    }
                    let f = self.obj[j];
                    if f != 0.0 {
                        let rr = &self.rows[r];
                        for (o, b) in self.obj.iter_mut().zip(rr) {
                            *o -= f * b;
                        }
                    }
                }
            }
        }
    }
}

/// Solves a bounded-variable covering LP. Deterministic for identical input.
/// Structural defects (bound or arity problems) are errors; infeasibility and
/// the iteration guard are reported through `LpSolution::status`.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.check()?;
    let m = lp.num_constraints();
    let ns = lp.num_vars();
    let cols = ns + 2 * m;
    let cap = 50 * (ns + m).max(1);

    let mut lower = vec![0.0; cols];
    let mut upper = vec![f64::INFINITY; cols];
    for (j, &(l, u)) in lp.bounds.iter().enumerate() {
        lower[j] = l;
        upper[j] = u;
    }

    let mut rows = Vec::with_capacity(m);
    let mut vals = vec![0.0; m];
    let mut basis = vec![0usize; m];
    for (i, con) in lp.constraints.iter().enumerate() {
        let mut dense = vec![0.0; cols];
        for &(j, a) in &con.coeffs {
            dense[j] += a;
        }
        dense[ns + i] = -1.0;
        dense[ns + m + i] = 1.0;
        let activity: f64 = con.coeffs.iter().map(|&(j, a)| a * lower[j]).sum();
        let residual = con.rhs - activity;
        if residual >= 0.0 {
            // Artificial variable carries the shortfall.
            basis[i] = ns + m + i;
            vals[i] = residual;
        } else {
            // Row already over-satisfied at lower bounds: the surplus starts
            // basic. Flip the row so its basis column is +1; the artificial
            // is never needed and stays fixed at zero.
            for v in dense.iter_mut() {
                *v = -*v;
            }
            basis[i] = ns + i;
            vals[i] = -residual;
            upper[ns + m + i] = 0.0;
        }
        rows.push(dense);
    }

    let mut pos = vec![NOT_BASIC; cols];
    for (i, &b) in basis.iter().enumerate() {
        pos[b] = i;
    }
    let mut tab = Tableau {
        m,
        cols,
        rows,
        vals,
        obj: Vec::new(),
        cost: Vec::new(),
        basis,
        pos,
        at_upper: vec![false; cols],
        lower,
        upper,
        iterations: 0,
    };

    // Phase 1: drive the artificial shortfall to zero.
    let mut phase1_cost = vec![0.0; cols];
    for c in phase1_cost.iter_mut().skip(ns + m) {
        *c = 1.0;
    }
    tab.reset_objective(phase1_cost);
    match tab.run_phase(cap) {
        Phase::Finished => {}
        Phase::CapHit | Phase::Unbounded => return Ok(extract(lp, &tab, LpStatus::GuardLimit)),
    }
    let shortfall: f64 = (ns + m..cols).map(|j| tab.value(j)).sum();
    if shortfall > FEASIBILITY_TOL {
        return Ok(extract(lp, &tab, LpStatus::Infeasible));
    }
    for a in ns + m..cols {
        tab.upper[a] = 0.0;
        if tab.pos[a] != NOT_BASIC {
            // A leftover basic artificial sits at numerical zero; snap it so
            // the phase-2 ratio tests see a clean bound.
            tab.vals[tab.pos[a]] = 0.0;
        }
    }

    // Phase 2: the real objective over the feasible basis.
    let mut phase2_cost = vec![0.0; cols];
    phase2_cost[..ns].copy_from_slice(&lp.objective);
    tab.reset_objective(phase2_cost);
    let status = match tab.run_phase(cap) {
        Phase::Finished => LpStatus::Optimal,
        Phase::CapHit | Phase::Unbounded => LpStatus::GuardLimit,
    };
    // Refresh reduced costs so the dual certificate comes from the final
    // basis rather than accumulated pivot updates.
    let cost = tab.cost.clone();
    tab.reset_objective(cost);
    Ok(extract(lp, &tab, status))
}

fn extract(lp: &LinearProgram, tab: &Tableau, status: LpStatus) -> LpSolution {
    let ns = lp.num_vars();
    let values: Vec<f64> = (0..ns).map(|j| tab.value(j)).collect();
    let objective_value = lp
        .objective
        .iter()
        .zip(&values)
        .map(|(c, x)| c * x)
        .sum();
    // The surplus column of row i is the negated i-th basis-inverse column,
    // so its reduced cost equals the dual multiplier y_i.
    let duals: Vec<f64> = (0..tab.m).map(|i| tab.obj[ns + i]).collect();
    LpSolution {
        status,
        values,
        objective_value,
        iterations: tab.iterations,
        duals,
    }
}

/// KKT residuals of a solution against its LP, computed from scratch (primal
/// feasibility, dual sign, stationarity of reduced costs versus bound status,
/// and complementary slackness).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_constraint_violation: f64,
    pub max_bound_violation: f64,
    pub max_dual_violation: f64,
    pub max_slackness_violation: f64,
    pub max_residual: f64,
}

pub fn duality_check(lp: &LinearProgram, sol: &LpSolution) -> ResidualReport {
    let n = lp.num_vars();
    let mut constraint_viol = 0.0f64;
    let mut slackness_viol = 0.0f64;
    let mut reduced = lp.objective.clone();
    for (i, con) in lp.constraints.iter().enumerate() {
        let activity: f64 = con.coeffs.iter().map(|&(j, a)| a * sol.values[j]).sum();
        constraint_viol = constraint_viol.max(con.rhs - activity);
        let y = sol.duals[i];
        slackness_viol = slackness_viol.max((y * (activity - con.rhs)).abs());
        for &(j, a) in &con.coeffs {
            reduced[j] -= y * a;
        }
    }

    let mut bound_viol = 0.0f64;
    let mut dual_viol = 0.0f64;
    for i in 0..lp.num_constraints() {
        dual_viol = dual_viol.max(-sol.duals[i]);
    }
    for j in 0..n {
        let (l, u) = lp.bounds[j];
        let x = sol.values[j];
        bound_viol = bound_viol.max(l - x).max(x - u);
        let d = reduced[j];
        let at_lower = x <= l + FEASIBILITY_TOL;
        let at_upper = x >= u - FEASIBILITY_TOL;
        let v = if at_lower && at_upper {
            0.0
        } else if at_lower {
            (-d).max(0.0)
        } else if at_upper {
            d.max(0.0)
        } else {
            d.abs()
        };
        dual_viol = dual_viol.max(v);
    }

    let max_residual = constraint_viol
        .max(bound_viol)
        .max(dual_viol)
        .max(slackness_viol)
        .max(0.0);
    ResidualReport {
        max_constraint_violation: constraint_viol.max(0.0),
        max_bound_violation: bound_viol.max(0.0),
        max_dual_violation: dual_viol.max(0.0),
        max_slackness_violation: slackness_viol,
        max_residual,
    }
}
