//! Grid scans spread over threads; rows come back in grid order.

use std::sync::atomic::{AtomicUsize, Ordering};

use splitsim_core::analysis::{scan_point, ScanRow};
use splitsim_core::engine::{EngineError, RunBudget, SplittingOrder};
use splitsim_core::numeric::Rational;

/// Same rows as the sequential `regime_scan`, computed on up to `threads`
/// workers pulling grid points from a shared counter.
pub fn parallel_regime_scan(
    d: usize,
    hs: &[Rational],
    ns: &[Rational],
    orders: &[SplittingOrder],
    budget: RunBudget,
    threads: usize,
) -> Result<Vec<ScanRow>, EngineError> {
    let mut grid = Vec::with_capacity(hs.len() * ns.len() * orders.len());
    for h in hs {
        for n in ns {
            for &o in orders {
                grid.push((h, n, o));
            }
        }
    }
    let next = AtomicUsize::new(0);
    let workers = threads.clamp(1, grid.len().max(1));
    let mut results: Vec<(usize, Result<ScanRow, EngineError>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&(h, n, o)) = grid.get(i) else { break };
                        out.push((i, scan_point(d, h, n, o, budget)));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("scan worker panicked")).collect()
    });
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitsim_core::analysis::regime_scan;
    use splitsim_core::numeric::{int, rat};

    #[test]
    fn matches_the_sequential_scan() {
        let hs = [rat(-1, 2), rat(1, 4), rat(2, 3), rat(7, 8)];
        let ns = [int(3), int(12)];
        let orders = [SplittingOrder::Parallel, SplittingOrder::SingleSiteRandom(5)];
        let budget = RunBudget { certify: true, ..RunBudget::steps(60) };
        let seq = regime_scan(2, &hs, &ns, &orders, budget).unwrap();
        for threads in [1, 3, 8] {
            assert_eq!(parallel_regime_scan(2, &hs, &ns, &orders, budget, threads).unwrap(), seq);
        }
    }
}
