//! Randomized invariants of the splitting dynamics and the analysis checks.

use proptest::prelude::*;

use splitsim_core::analysis::{
    box_average_check, compute_green, greedy_paths_from_boundary, odometer_laplacian_check, shape_check, Polygon,
};
use splitsim_core::automata::builtin_diamond;
use splitsim_core::conformance::{builtin_mapping, cosimulate, CosimOptions, MappingKind};
use splitsim_core::engine::{
    conservation_check, parity_check, rectangle_check, run, source_corrected_t_bound_check, speed_of_light_check,
    t_bound_check, EvolutionState, RunBudget, RunOutcome, SplittingOrder, Tracking,
};
use splitsim_core::lattice::{Region, Site};
use splitsim_core::numeric::{int, rat, to_f64, AffineMass, HInterval, Rational};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// `lo + (hi - lo) k/m` for `0 <= k < m <= 16`.
fn rational_in(lo: Rational, hi: Rational) -> impl Strategy<Value = Rational> {
    (1i64..=16).prop_flat_map(|m| (Just(m), 0..m)).prop_map(move |(m, k)| &lo + (&hi - &lo) * rat(k, m))
}

fn order() -> impl Strategy<Value = SplittingOrder> {
    prop_oneof![
        Just(SplittingOrder::Parallel),
        Just(SplittingOrder::SingleSiteLexMin),
        any::<u64>().prop_map(SplittingOrder::SingleSiteRandom),
    ]
}

fn stabilize(d: usize, n: Rational, h: Rational, order: SplittingOrder) -> EvolutionState {
    let st = EvolutionState::init_point(d, n, h, order).unwrap();
    match run(st, RunBudget::steps(200_000)) {
        RunOutcome::Stabilized(s) => s,
        other => panic!("robust run did not stabilize: {}", other.label()),
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn parity_of_parallel_splits(
        d in 1usize..=3,
        n in rational_in(int(1), int(12)),
        h in rational_in(int(-1), int(1)),
        steps in 1u64..15,
    ) {
        let tracking = Tracking { splits: true, window_mass: false };
        let mut st = EvolutionState::init_tracked(d, AffineMass::constant(n), HInterval::point(h), SplittingOrder::Parallel, tracking).unwrap();
        for _ in 0..steps {
            if st.is_stable() { break; }
            st.step().unwrap();
        }
        prop_assert!(parity_check(st.splits()));
        prop_assert!(speed_of_light_check(&st));
    }

    #[test]
    fn mass_is_conserved_at_every_step(
        d in 1usize..=3,
        n in rational_in(int(1), int(10)),
        h in rational_in(int(-1), int(1)),
        order in order(),
        steps in 1u64..12,
    ) {
        let mut st = EvolutionState::init_point(d, n, h, order).unwrap();
        prop_assert!(conservation_check(&st));
        for _ in 0..steps {
            if st.is_stable() { break; }
            st.step().unwrap();
            prop_assert!(conservation_check(&st));
        }
    }

    #[test]
    fn stabilized_robust_runs(
        d in 1usize..=2,
        n in rational_in(int(1), int(16)),
        h in prop_oneof![rational_in(int(-2), int(0)), rational_in(int(0), rat(3, 8))],
        order in order(),
    ) {
        let st = stabilize(d, n, h.clone(), order);
        let odo = odometer_laplacian_check(&st).unwrap();
        prop_assert!(odo.holds(), "{:?}", odo);
        prop_assert!(source_corrected_t_bound_check(&st, &h).unwrap());
        if h >= int(0) {
            prop_assert!(t_bound_check(&st, &h).unwrap());
        }
        for k in [1, 2] {
            let b = box_average_check(&st, k).unwrap();
            prop_assert!(b.holds(), "k={} {:?}", k, b.violations);
        }
    }

    #[test]
    fn greedy_paths_reach_the_origin(
        d in 1usize..=3,
        n in rational_in(int(1), int(40)),
        h in rational_in(int(-2), int(0)),
    ) {
        let n = if d == 3 { n / int(2) + int(1) } else { n };
        let st = stabilize(d, n, h, SplittingOrder::Parallel);
        for p in greedy_paths_from_boundary(&st).unwrap() {
            prop_assert!(p.holds(), "{:?}", p);
            prop_assert!(p.path.last().unwrap().is_origin());
        }
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn box_shape_in_the_high_background(
        d in 2usize..=3,
        n in rational_in(int(1), int(6)),
        k in 0i64..100,
    ) {
        let lo = int(1) - rat(1, d as i64);
        let hi = int(1) - rat(1, 2 * d as i64);
        let h = &lo + (&hi - &lo) * rat(k, 100);
        let budget = if d == 2 { 60 } else { 20 };
        let st = EvolutionState::init_point(d, n, h.clone(), SplittingOrder::Parallel).unwrap();
        if let RunOutcome::Stabilized(s) = run(st, RunBudget::steps(budget)) {
            prop_assert!(rectangle_check(&s, &h).unwrap());
        }
    }

    #[test]
    fn point_cosimulation_matches_the_interval_run(
        d in 1usize..=2,
        n in prop::sample::select(vec![1i64, 3, 8]),
        k in 0i64..64,
    ) {
        let mp = builtin_mapping(MappingKind::Diamond(d));
        let spec = builtin_diamond(d);
        let lo = mp.validity.lo().clone();
        let h = &lo + (int(1) - &lo) * rat(k, 64);
        let opts = CosimOptions::new(10, 0);
        let point = cosimulate(&spec, &mp, d, AffineMass::from_ints(n, 0), HInterval::point(h.clone()), &opts);
        prop_assert!(point.success());
        let whole = cosimulate(&spec, &mp, d, AffineMass::from_ints(n, 0), mp.validity.clone(), &opts);
        prop_assert_eq!(&point.pieces[0].steps, &whole.pieces[0].steps);

        let mut a = EvolutionState::init(d, AffineMass::from_ints(n, 0), mp.validity.clone(), SplittingOrder::Parallel).unwrap();
        let mut b = EvolutionState::init_point(d, int(n), h.clone(), SplittingOrder::Parallel).unwrap();
        for _ in 0..10 {
            a.step().unwrap();
            b.step().unwrap();
        }
        prop_assert_eq!(a.config().evaluate_at(&h), b.config().clone());
        prop_assert_eq!(a.toppled(), b.toppled());
    }

    #[test]
    fn shape_check_is_monotone_in_epsilon(
        a in 0i64..12,
        b in 0i64..8,
        holes in prop::collection::vec((-10i32..=10, -10i32..=10), 0..4),
        scale in 4i64..16,
        which in 0usize..3,
        e1 in 0i64..10,
        de in 1i64..6,
    ) {
        let mut t: Region = Region::new();
        for i in -12..=12 {
            for j in -12..=12 {
                let s = Site::xy(i, j);
                if s.l1_norm() <= a || s.linf_norm() <= b {
                    t.insert(s);
                }
            }
        }
        for (i, j) in holes {
            t.remove(&Site::xy(i, j));
        }
        let poly = [Polygon::diamond(), Polygon::square(), Polygon::octagon()][which].clone();
        let f = rat(1, scale);
        let small = shape_check(&t, &f, &poly, &rat(e1, 40)).unwrap();
        let large = shape_check(&t, &f, &poly, &rat(e1 + de, 40)).unwrap();
        prop_assert!(!small.inner_ok || large.inner_ok);
        prop_assert!(!small.outer_ok || large.outer_ok);

        // the outer excess over all cells, by brute force in floating point
        let mut worst = 0.0f64;
        for x in &t {
            for (sx, sy) in [(-0.5, -0.5), (-0.5, 0.5), (0.5, -0.5), (0.5, 0.5)] {
                let p = [(x.coord(0) as f64 + sx) / scale as f64, (x.coord(1) as f64 + sy) / scale as f64];
                worst = worst.max(float_dist(&poly, p));
            }
        }
        prop_assert!((to_f64(&small.outer_excess).sqrt() - worst).abs() < 1e-9);
    }

    #[test]
    fn green_residual_bound(radius in 10i32..24, exp in 6i32..10) {
        let tol = 10f64.powi(-exp);
        let g = compute_green(2, radius, tol, 1_000_000).unwrap();
        prop_assert!(g.max_residual() <= tol);
        prop_assert_eq!(g.get(&Site::origin(2)), Some(0.0));
        let a = g.get(&Site::xy(2, 1)).unwrap();
        let b = g.get(&Site::xy(-1, 2)).unwrap();
        prop_assert!((a - b).abs() < 1e-6);
    }
}

/// Distance from `p` to a convex polygon in floating point.
fn float_dist(poly: &Polygon, p: [f64; 2]) -> f64 {
    let v: Vec<[f64; 2]> = poly.vertices.iter().map(|q| [to_f64(&q[0]), to_f64(&q[1])]).collect();
    let inside = poly.edges.iter().all(|(n, c)| to_f64(&n[0]) * p[0] + to_f64(&n[1]) * p[1] <= to_f64(c) + 1e-15);
    if inside {
        return 0.0;
    }
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            let ab = [b[0] - a[0], b[1] - a[1]];
            let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
            let q = [a[0] + t * ab[0] - p[0], a[1] + t * ab[1] - p[1]];
            (q[0] * q[0] + q[1] * q[1]).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn published_size_bound_fails_for_a_lone_split() {
    let st = stabilize(1, int(1), int(-2), SplittingOrder::Parallel);
    assert_eq!(st.toppled().len(), 1);
    assert!(!t_bound_check(&st, &int(-2)).unwrap());
    assert!(source_corrected_t_bound_check(&st, &int(-2)).unwrap());
}
