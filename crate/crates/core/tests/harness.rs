use jigsaw::exec::Execution;
use jigsaw::harness::{
    classify_trial, csv_string, derive_trial_seed, run_sweep, run_sweep_with, Mode, Outcome,
    SweepSpec,
};
use proptest::prelude::*;

#[test]
fn serial_and_parallel_agree() {
    let spec = SweepSpec::new(vec![2, 3, 4], vec![1, 3, 9], 12, Mode::Auto, 77);
    let a = csv_string(&run_sweep_with(&spec, Execution::Serial).unwrap()).unwrap();
    let b = csv_string(&run_sweep_with(&spec, Execution::Parallel).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, csv_string(&run_sweep(&spec).unwrap()).unwrap());
}

#[test]
fn certificate_verdicts_agree_with_exact() {
    for q in [2, 3, 5] {
        for trial in 0..30 {
            let seed = derive_trial_seed(3, 3, q, trial);
            if classify_trial(3, q, seed, Mode::Certificate, 0).unwrap() == Outcome::NonUnique {
                assert_eq!(
                    classify_trial(3, q, seed, Mode::Exact, u64::MAX).unwrap(),
                    Outcome::NonUnique
                );
            }
        }
    }
}

#[test]
fn auto_resolves_small_grids() {
    let spec = SweepSpec::new(vec![3], vec![2, 40], 20, Mode::Auto, 8);
    for row in run_sweep(&spec).unwrap() {
        assert_eq!(row.undetermined, 0);
    }
}

#[test]
fn tiny_budget_leaves_trials_undetermined() {
    let mut spec = SweepSpec::new(vec![4], vec![50], 5, Mode::Exact, 1);
    spec.node_budget = 1;
    let row = &run_sweep(&spec).unwrap()[0];
    assert_eq!(row.undetermined, 5);
}

#[test]
fn one_piece_is_unique_in_every_mode() {
    for mode in [Mode::Exact, Mode::Certificate, Mode::Auto] {
        let row = &run_sweep(&SweepSpec::new(vec![1], vec![1, 4], 3, mode, 0)).unwrap()[0];
        assert_eq!(row.unique, 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counts_add_up(n in 1usize..4, q in 1u32..6, trials in 1u64..8, seed: u64, m in 0usize..3) {
        let mode = [Mode::Exact, Mode::Certificate, Mode::Auto][m];
        let rows = run_sweep(&SweepSpec::new(vec![n], vec![q], trials, mode, seed)).unwrap();
        prop_assert_eq!(rows.len(), 1);
        let r = &rows[0];
        prop_assert_eq!(r.unique + r.nonunique + r.undetermined, trials);
        if mode == Mode::Certificate {
            prop_assert!(n == 1 || r.unique == 0);
        }
    }
}
