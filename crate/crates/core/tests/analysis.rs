use splitsim_core::analysis::{
    ball_bounds_check, box_average_check, certified_regime, compute_green, greedy_paths_from_boundary,
    odometer_laplacian_check, regime_scan, scan_point, superharmonicity_check, theory_constants, Regime, ScanOutcome,
};
use splitsim_core::engine::dense::run_dense_parallel;
use splitsim_core::engine::{run, EvolutionState, RunBudget, SplittingOrder};
use splitsim_core::numeric::{int, rat, Rational};

fn stable(d: usize, n: i64, h: Rational) -> EvolutionState {
    let st = EvolutionState::init_point(d, int(n), h, SplittingOrder::Parallel).unwrap();
    run(st, RunBudget::steps(1_000_000)).stabilized().expect("robust run stabilizes")
}

#[test]
fn planar_negative_background_diagnostics() {
    let small = stable(2, 100, int(-1));
    assert!(odometer_laplacian_check(&small).unwrap().holds());

    let s = stable(2, 1000, int(-1));
    assert!(odometer_laplacian_check(&s).unwrap().holds());
    let paths = greedy_paths_from_boundary(&s).unwrap();
    assert!(!paths.is_empty());
    assert!(paths.iter().all(|p| p.holds()));
    let b = box_average_check(&s, 2).unwrap();
    assert!(b.checked > 0 && b.holds());

    let green = compute_green(2, s.radius() as i32 + 12, 1e-10, 1_000_000).unwrap();
    let sh = superharmonicity_check(&s, &green).unwrap();
    assert!(sh.holds(), "{sh:?}");
    assert!(sh.max_deviation < 1e-5, "{sh:?}");

    // the exact run and the floating-point runner agree on T
    let dense = run_dense_parallel(2, 1000.0, -1.0, 8, u64::MAX);
    assert_eq!(&dense.toppled_region(), s.toppled());
}

#[test]
fn spatial_superharmonicity() {
    let s = stable(3, 60, int(-1));
    let green = compute_green(3, s.radius() as i32 + 10, 1e-10, 1_000_000).unwrap();
    let sh = superharmonicity_check(&s, &green).unwrap();
    assert!(sh.holds(), "{sh:?}");
}

#[test]
fn one_dimensional_examples() {
    let s = stable(1, 60, rat(-1, 2));
    assert!(box_average_check(&s, 1).unwrap().holds());
    let s = stable(1, 100, int(-1));
    let b = ball_bounds_check(s.toppled(), &int(100), &int(-1), 1, &rat(1, 20)).unwrap();
    assert_eq!(b.r, 50.0);
    assert_eq!(b.c1 * b.r, 25.0);
    // B_{25 - c2} ⊆ T
    assert!((b.inner_sq as f64).sqrt() >= 25.0 - b.c2_obs - 1e-12);
}

#[test]
fn constants_up_to_ten_dimensions() {
    for d in 2..=10 {
        let c = theory_constants(d);
        assert!(c.satisfies_definition());
        let bound = int(1) - rat(3, 4 * d as i64 + 2);
        assert!(c.c_prime <= bound);
        assert_eq!(c.c_prime == bound, d == 2, "d = {d}");
    }
}

#[test]
fn scan_examples() {
    let rows = regime_scan(2, &[rat(2, 5)], &[int(10)], &[SplittingOrder::Parallel], RunBudget::steps(10_000)).unwrap();
    assert_eq!(rows[0].outcome, ScanOutcome::Stabilized);
    assert!(rows[0].toppled.unwrap() <= 100);

    let row = scan_point(2, &rat(667, 1000), &int(16), SplittingOrder::Parallel, RunBudget::steps(60)).unwrap();
    assert_eq!(row.regime, Regime::Unknown);
    assert_eq!(row.outcome, ScanOutcome::BudgetExhausted);

    assert_eq!(certified_regime(&rat(1, 2), 1, SplittingOrder::Parallel), Regime::Explosive);
    assert_eq!(certified_regime(&rat(3, 5), 2, SplittingOrder::Parallel), Regime::Unknown);
}
