//! Covering relaxations end to end: shape, optimal values, certificates,
//! determinism under reordering, and degenerate inputs.

mod common;

use multicover::approx::{build_compressed_lp, build_full_lp};
use multicover::exact::solve_dp;
use multicover::instance::{partition_buckets, Instance};
use multicover::lp::{duality_check, solve_lp, Constraint, LinearProgram, LpStatus, VarLabel};

#[test]
fn worked_relaxation_has_one_column_per_set_and_value_ten() {
    let inst = common::skewed_demands();
    let buckets = partition_buckets(&inst);
    let lp = build_full_lp(&inst, &buckets);
    assert_eq!(lp.num_vars(), 8);
    assert_eq!(lp.num_constraints(), 2);

    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective_value - 10.0).abs() <= 1e-7, "got {}", sol.objective_value);
    assert_eq!(sol.duals.len(), 2);
    for &y in &sol.duals {
        assert!(y >= -1e-9, "covering rows price nonnegatively, got {y}");
    }
    assert!(duality_check(&lp, &sol).max_residual <= 1e-7);
}

#[test]
fn paired_singles_relaxation_is_integral_at_six() {
    let inst = common::paired_singles();
    let buckets = partition_buckets(&inst);
    let sol = solve_lp(&build_full_lp(&inst, &buckets)).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective_value - 6.0).abs() <= 1e-7, "got {}", sol.objective_value);
}

#[test]
fn relaxation_never_exceeds_the_exact_optimum() {
    for (i, inst) in common::small_corpus(200).into_iter().enumerate() {
        let opt = solve_dp(&inst).unwrap().total_weight;
        let buckets = partition_buckets(&inst);
        let sol = solve_lp(&build_full_lp(&inst, &buckets)).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "instance {i}");
        assert!(
            sol.objective_value <= opt + 1e-7,
            "instance {i}: relaxation {} above optimum {opt}",
            sol.objective_value
        );
    }
}

#[test]
fn certificates_hold_on_random_relaxations() {
    for (i, inst) in common::small_corpus(200).into_iter().enumerate() {
        let buckets = partition_buckets(&inst);
        let lp = build_full_lp(&inst, &buckets);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "instance {i}");
        let report = duality_check(&lp, &sol);
        assert!(
            report.max_residual <= 1e-7,
            "instance {i}: residual {} ({report:?})",
            report.max_residual
        );
    }
}

#[test]
fn set_order_does_not_change_the_value() {
    for inst in common::small_corpus(50) {
        let mut sets = inst.sets().to_vec();
        sets.reverse();
        let rev = Instance::new(inst.item_names().to_vec(), inst.demands().to_vec(), sets).unwrap();

        let a = solve_lp(&build_full_lp(&inst, &partition_buckets(&inst))).unwrap();
        let b = solve_lp(&build_full_lp(&rev, &partition_buckets(&rev))).unwrap();
        assert!(
            (a.objective_value - b.objective_value).abs() <= 1e-9,
            "{} vs {}",
            a.objective_value,
            b.objective_value
        );
    }
}

#[test]
fn thirty_identical_columns_stay_within_the_pivot_budget() {
    let sets = (0..30)
        .map(|_| multicover::instance::SetRecord::new(3.0, &[0]))
        .collect();
    let inst = Instance::new(vec!["a".into()], vec![7], sets).unwrap();
    let buckets = partition_buckets(&inst);
    let lp = build_full_lp(&inst, &buckets);
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective_value - 21.0).abs() <= 1e-7);
    assert!(duality_check(&lp, &sol).max_residual <= 1e-7);
}

#[test]
fn rows_beyond_the_bound_budget_are_infeasible() {
    let lp = LinearProgram {
        objective: vec![1.0, 1.0],
        constraints: vec![Constraint { coeffs: vec![(0, 1.0), (1, 1.0)], rhs: 3.0 }],
        bounds: vec![(0.0, 1.0); 2],
        var_labels: vec![VarLabel::Anonymous; 2],
    };
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.status, LpStatus::Infeasible);
}

#[test]
fn compressed_relaxation_meets_the_full_one_at_tiny_epsilon() {
    for (i, inst) in common::small_corpus(40).into_iter().enumerate() {
        let buckets = partition_buckets(&inst);
        let full = solve_lp(&build_full_lp(&inst, &buckets)).unwrap();
        let lp = build_compressed_lp(&inst, &buckets, 1e-9).unwrap();
        let compressed = solve_lp(&lp).unwrap();
        assert_eq!(compressed.status, LpStatus::Optimal, "instance {i}");
        assert!(
            (full.objective_value - compressed.objective_value).abs() <= 1e-6,
            "instance {i}: full {} compressed {}",
            full.objective_value,
            compressed.objective_value
        );
    }
}
