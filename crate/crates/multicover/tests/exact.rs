//! Exact solvers: the stepwise demand-box table on the worked instance, the
//! exhaustive-search oracle, and their equivalence over a random corpus.

mod common;

use multicover::exact::{solve_bruteforce, solve_dp, DpTable};
use multicover::instance::{coverage, validate, Instance};
use multicover::Error;

/// Checks every state of a 2-axis layer against the given entries; states
/// not listed must be unreachable (infinite).
fn assert_layer(table: &DpTable, entries: &[((u32, u32), f64)], dims: (u32, u32)) {
    for x in 0..=dims.0 {
        for y in 0..=dims.1 {
            let got = table.value(&[x, y]);
            match entries.iter().find(|(s, _)| *s == (x, y)) {
                Some((_, want)) => {
                    assert_eq!(got, *want, "state ({x},{y}) after {} sets", table.processed())
                }
                None => assert!(
                    got.is_infinite(),
                    "state ({x},{y}) after {} sets should be unreachable, got {got}",
                    table.processed()
                ),
            }
        }
    }
}

#[test]
fn stepwise_table_matches_the_hand_trace() {
    let inst = common::paired_singles();
    let mut table = DpTable::new(&inst).unwrap();
    assert_eq!(table.num_states(), 9);

    assert_layer(&table, &[((0, 0), 0.0)], (2, 2));

    table.process_next(&inst);
    assert_layer(&table, &[((0, 0), 0.0), ((1, 0), 1.0)], (2, 2));

    table.process_next(&inst);
    assert_layer(
        &table,
        &[((0, 0), 0.0), ((1, 0), 1.0), ((2, 0), 9.0)],
        (2, 2),
    );

    table.process_next(&inst);
    assert_layer(
        &table,
        &[
            ((0, 0), 0.0),
            ((1, 0), 1.0),
            ((2, 0), 9.0),
            ((0, 1), 2.0),
            ((1, 1), 3.0),
            ((2, 1), 11.0),
        ],
        (2, 2),
    );

    table.process_next(&inst);
    assert_layer(
        &table,
        &[
            ((0, 0), 0.0),
            ((1, 0), 1.0),
            ((2, 0), 9.0),
            ((0, 1), 2.0),
            ((1, 1), 3.0),
            ((2, 1), 11.0),
            ((0, 2), 11.0),
            ((1, 2), 12.0),
            ((2, 2), 20.0),
        ],
        (2, 2),
    );

    let after_both_pairs = [
        ((0, 0), 0.0),
        ((1, 0), 1.0),
        ((2, 0), 4.0),
        ((0, 1), 2.0),
        ((1, 1), 3.0),
        ((2, 1), 4.0),
        ((0, 2), 5.0),
        ((1, 2), 5.0),
        ((2, 2), 6.0),
    ];
    table.process_next(&inst);
    assert_layer(&table, &after_both_pairs, (2, 2));

    // The heavier pair improves nothing.
    table.process_next(&inst);
    assert_layer(&table, &after_both_pairs, (2, 2));

    assert_eq!(table.optimum(), 6.0);
    assert_eq!(table.reconstruct(&inst), vec![0, 2, 4]);
}

#[test]
fn worked_instance_solves_to_six() {
    let inst = common::paired_singles();
    let sol = solve_dp(&inst).unwrap();
    assert_eq!(sol.total_weight, 6.0);
    assert_eq!(sol.selected, vec![0, 2, 4]);
    assert_eq!(sol.algorithm, "dp");
    assert_eq!(sol.seed, None);
}

#[test]
fn second_worked_instance_solves_to_ten() {
    let inst = common::skewed_demands();
    let sol = solve_dp(&inst).unwrap();
    assert_eq!(sol.total_weight, 10.0);
    let cov = coverage(&inst, &sol).unwrap();
    assert!(cov.satisfies(inst.demands()));
}

#[test]
fn optimum_never_worsens_as_sets_arrive() {
    let inst = common::skewed_demands();
    let mut table = DpTable::new(&inst).unwrap();
    let mut prev = f64::INFINITY;
    for _ in 0..inst.n() {
        table.process_next(&inst);
        let now = table.optimum();
        assert!(now <= prev, "extra sets can only help");
        prev = now;
    }
}

#[test]
fn zero_demands_need_no_sets() {
    let inst = Instance::new(
        vec!["a".into(), "b".into()],
        vec![0, 0],
        vec![multicover::instance::SetRecord::new(1.0, &[0])],
    )
    .unwrap();
    let sol = solve_dp(&inst).unwrap();
    assert!(sol.selected.is_empty());
    assert_eq!(sol.total_weight, 0.0);
}

#[test]
fn infeasible_demands_error_with_the_report() {
    let inst = Instance::new(
        vec!["a".into()],
        vec![2],
        vec![multicover::instance::SetRecord::new(1.0, &[0])],
    )
    .unwrap();
    match solve_dp(&inst) {
        Err(Error::Infeasible(report)) => {
            assert!(!report.feasible);
            assert_eq!(report.per_item[0].capacity, 1);
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
    assert!(matches!(solve_bruteforce(&inst), Err(Error::Infeasible(_))));
}

#[test]
fn oversized_state_spaces_are_refused_up_front() {
    let inst = Instance::new(
        (1..=4).map(|g| format!("g{g}")).collect(),
        vec![100, 100, 100, 100],
        vec![],
    )
    .unwrap();
    assert!(matches!(DpTable::new(&inst), Err(Error::TooLarge(_))));
}

#[test]
fn exhaustive_search_stops_at_its_set_limit() {
    let sets = (0..25)
        .map(|_| multicover::instance::SetRecord::new(1.0, &[0]))
        .collect();
    let inst = Instance::new(vec!["a".into()], vec![1], sets).unwrap();
    assert!(matches!(solve_bruteforce(&inst), Err(Error::TooLarge(_))));
}

#[test]
fn dp_and_exhaustive_search_agree_across_the_corpus() {
    for (i, inst) in common::small_corpus(300).into_iter().enumerate() {
        assert!(validate(&inst).feasible, "corpus instance {i} must be feasible");
        let dp = solve_dp(&inst).unwrap();
        let bf = solve_bruteforce(&inst).unwrap();
        assert_eq!(
            dp.total_weight, bf.total_weight,
            "instance {i}: dp={:?} bf={:?}",
            dp.selected, bf.selected
        );
        let cov = coverage(&inst, &dp).unwrap();
        assert!(cov.satisfies(inst.demands()), "instance {i} dp cover");
    }
}
