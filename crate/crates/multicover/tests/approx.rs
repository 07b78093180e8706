//! LP rounding and the two approximation pipelines: the hand-traced rounding
//! on the worked instance, the factor-2 guarantee against the exact optimum,
//! and the epsilon pipeline's collapse onto the exact pipeline.

mod common;

use std::collections::BTreeMap;

use multicover::approx::{
    round_solution, solve_two_approx, solve_two_eps, BucketFractions, DEFAULT_BRUTEFORCE_CAP,
};
use multicover::exact::solve_dp;
use multicover::instance::{coverage, partition_buckets, Solution};
use multicover::Error;

#[test]
fn worked_rounding_picks_the_weight_ten_family() {
    let inst = common::skewed_demands();
    let buckets = partition_buckets(&inst);
    let fractions = BucketFractions {
        per_bucket: BTreeMap::from([(0b01, 1.5), (0b10, 0.5), (0b11, 1.5)]),
    };
    let picked = round_solution(&inst, &buckets, &fractions, DEFAULT_BRUTEFORCE_CAP).unwrap();
    assert_eq!(picked, vec![0, 1, 3, 5]);
    let weight: f64 = picked.iter().map(|&j| inst.set(j).weight).sum();
    assert_eq!(weight, 10.0);
}

#[test]
fn rounding_tolerates_near_integral_noise() {
    let inst = common::skewed_demands();
    let buckets = partition_buckets(&inst);
    let fractions = BucketFractions {
        per_bucket: BTreeMap::from([
            (0b01, 1.5 - 5e-10),
            (0b10, 0.5 + 5e-10),
            (0b11, 1.5 + 5e-10),
        ]),
    };
    let picked = round_solution(&inst, &buckets, &fractions, DEFAULT_BRUTEFORCE_CAP).unwrap();
    assert_eq!(picked, vec![0, 1, 3, 5]);
}

#[test]
fn negative_fractions_are_rejected() {
    let inst = common::skewed_demands();
    let buckets = partition_buckets(&inst);
    let fractions = BucketFractions { per_bucket: BTreeMap::from([(0b01, -0.5)]) };
    assert!(matches!(
        round_solution(&inst, &buckets, &fractions, DEFAULT_BRUTEFORCE_CAP),
        Err(Error::Argument(_))
    ));
}

#[test]
fn empty_fractions_still_produce_a_cover() {
    let inst = common::skewed_demands();
    let buckets = partition_buckets(&inst);
    let picked =
        round_solution(&inst, &buckets, &BucketFractions::default(), DEFAULT_BRUTEFORCE_CAP)
            .unwrap();
    let sol = Solution::new(&inst, picked, "rounded").unwrap();
    assert!(coverage(&inst, &sol).unwrap().satisfies(inst.demands()));
}

#[test]
fn exhausted_candidate_budget_falls_back_to_greedy_completion() {
    for (i, inst) in common::small_corpus(100).into_iter().enumerate() {
        let buckets = partition_buckets(&inst);
        let fractions = BucketFractions {
            per_bucket: buckets.entries().map(|e| (e.key(), 0.4)).collect(),
        };
        let picked = round_solution(&inst, &buckets, &fractions, 0).unwrap();
        let sol = Solution::new(&inst, picked, "rounded").unwrap();
        assert!(
            coverage(&inst, &sol).unwrap().satisfies(inst.demands()),
            "instance {i} fallback must still cover"
        );
    }
}

#[test]
fn factor_two_holds_against_the_exact_optimum() {
    for (i, inst) in common::small_corpus(300).into_iter().enumerate() {
        let opt = solve_dp(&inst).unwrap().total_weight;
        let sol = solve_two_approx(&inst).unwrap();
        assert_eq!(sol.algorithm, "2approx");
        assert!(
            coverage(&inst, &sol).unwrap().satisfies(inst.demands()),
            "instance {i} violates coverage"
        );
        assert!(
            sol.total_weight <= 2.0 * opt + 1e-9,
            "instance {i}: {} above twice the optimum {opt}",
            sol.total_weight
        );
    }
}

#[test]
fn epsilon_pipeline_stays_within_its_stretched_factor() {
    for (i, inst) in common::small_corpus(150).into_iter().enumerate() {
        let opt = solve_dp(&inst).unwrap().total_weight;
        let sol = solve_two_eps(&inst, 0.2).unwrap();
        assert_eq!(sol.algorithm, "2eps");
        assert!(
            coverage(&inst, &sol).unwrap().satisfies(inst.demands()),
            "instance {i} violates coverage"
        );
        assert!(
            sol.total_weight <= 2.2 * opt + 1e-9,
            "instance {i}: {} above 2.2x optimum {opt}",
            sol.total_weight
        );
    }
}

#[test]
fn vanishing_epsilon_mostly_collapses_onto_the_exact_pipeline() {
    let mut equal = 0;
    let total = 100;
    for inst in common::small_corpus(total) {
        let a = solve_two_approx(&inst).unwrap();
        let b = solve_two_eps(&inst, 1e-9).unwrap();
        if (a.total_weight - b.total_weight).abs() <= 1e-9 {
            equal += 1;
        }
        assert!(coverage(&inst, &b).unwrap().satisfies(inst.demands()));
    }
    assert!(equal * 2 >= total, "only {equal} of {total} weights matched");
}

#[test]
fn epsilon_must_be_positive_and_finite() {
    let inst = common::skewed_demands();
    assert!(matches!(solve_two_eps(&inst, 0.0), Err(Error::Argument(_))));
    assert!(matches!(solve_two_eps(&inst, -1.0), Err(Error::Argument(_))));
    assert!(matches!(solve_two_eps(&inst, f64::NAN), Err(Error::Argument(_))));
}

#[test]
fn infeasible_instances_error_before_any_lp_runs() {
    let inst = multicover::instance::Instance::new(
        vec!["a".into()],
        vec![3],
        vec![multicover::instance::SetRecord::new(1.0, &[0])],
    )
    .unwrap();
    assert!(matches!(solve_two_approx(&inst), Err(Error::Infeasible(_))));
    assert!(matches!(solve_two_eps(&inst, 0.2), Err(Error::Infeasible(_))));
}
