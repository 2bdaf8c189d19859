//! Parameter scans: certified regime where known, simulation otherwise.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::theory::{certified_regime, Regime};
use crate::engine::{run, EngineError, EvolutionState, RunBudget, RunOutcome, SplittingOrder};
use crate::numeric::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    Stabilized,
    BudgetExhausted,
    /// Not simulated: the parameters are proven explosive.
    Certified,
}

impl ScanOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            ScanOutcome::Stabilized => "stabilized",
            ScanOutcome::BudgetExhausted => "budget_exhausted",
            ScanOutcome::Certified => "certified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub d: usize,
    pub h: Rational,
    pub n: Rational,
    pub order: SplittingOrder,
    pub regime: Regime,
    pub outcome: ScanOutcome,
    /// `|T|` at the end of the simulation.
    pub toppled: Option<usize>,
    pub steps: Option<u64>,
    /// `|T_t|` for `t = 0, 1, …`.
    pub growth: Vec<usize>,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "d,h,n,order,verdict,|T|,steps";

    /// `regime:outcome`, e.g. `unknown:budget_exhausted`.
    pub fn verdict(&self) -> String {
        alloc::format!("{}:{}", self.regime.name(), self.outcome.name())
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<u64>| v.map(|x| alloc::format!("{x}")).unwrap_or_default();
        alloc::format!(
            "{},{},{},{},{},{},{}",
            self.d,
            self.h.reduced(),
            self.n.reduced(),
            self.order.name(),
            self.verdict(),
            opt(self.toppled.map(|t| t as u64)),
            opt(self.steps)
        )
    }

    /// `|T_t| / t` at the last recorded time.
    pub fn growth_rate(&self) -> Option<f64> {
        let t = self.growth.len().checked_sub(1).filter(|&t| t > 0)?;
        Some(self.growth[t] as f64 / t as f64)
    }
}

/// One grid point. Proven-explosive points are only simulated when the budget
/// does not allow certificates.
pub fn scan_point(
    d: usize,
    h: &Rational,
    n: &Rational,
    order: SplittingOrder,
    budget: RunBudget,
) -> Result<ScanRow, EngineError> {
    let regime = certified_regime(h, d, order);
    let mut row = ScanRow {
        d,
        h: h.clone(),
        n: n.clone(),
        order,
        regime,
        outcome: ScanOutcome::Certified,
        toppled: None,
        steps: None,
        growth: Vec::new(),
    };
    if regime == Regime::Explosive && budget.certify {
        return Ok(row);
    }
    let state = EvolutionState::init_point(d, n.clone(), h.clone(), order)?;
    let budget = RunBudget { certify: false, ..budget };
    let (outcome, state) = match run(state, budget) {
        RunOutcome::Stabilized(s) => (ScanOutcome::Stabilized, s),
        RunOutcome::BudgetExhausted(s, _) => (ScanOutcome::BudgetExhausted, s),
        // a single background value never splits, and certificates are off
        RunOutcome::IntervalSplit { .. } | RunOutcome::CertifiedExplosive(_) => unreachable!(),
    };
    row.outcome = outcome;
    row.toppled = Some(state.toppled().len());
    row.steps = Some(state.time());
    row.growth = state.history().iter().map(|r| r.toppled).collect();
    Ok(row)
}

/// Every `(h, n, order)` in grid order.
pub fn regime_scan(
    d: usize,
    hs: &[Rational],
    ns: &[Rational],
    orders: &[SplittingOrder],
    budget: RunBudget,
) -> Result<Vec<ScanRow>, EngineError> {
    let mut rows = Vec::new();
    for h in hs {
        for n in ns {
            for &o in orders {
                rows.push(scan_point(d, h, n, o, budget)?);
            }
        }
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut s = String::from(ScanRow::CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn robust_point_obeys_the_size_bound() {
        let row = scan_point(2, &rat(2, 5), &int(10), SplittingOrder::Parallel, RunBudget::steps(10_000)).unwrap();
        assert_eq!(row.verdict(), "robust:stabilized");
        assert!(row.toppled.unwrap() <= 100);
    }

    #[test]
    fn certified_points_are_not_simulated() {
        let budget = RunBudget { certify: true, ..RunBudget::steps(100) };
        let row = scan_point(1, &rat(1, 2), &int(4), SplittingOrder::Parallel, budget).unwrap();
        assert_eq!(row.csv_row(), "1,1/2,4,parallel,explosive:certified,,");
    }

    #[test]
    fn open_window_runs_out_of_budget() {
        let row = scan_point(2, &rat(667, 1000), &int(16), SplittingOrder::Parallel, RunBudget::steps(40)).unwrap();
        assert_eq!(row.verdict(), "unknown:budget_exhausted");
        assert_eq!(row.growth.len(), 41);
        assert!(row.growth_rate().unwrap() > 1.0);
        let csv = scan_csv(&[row]);
        assert!(csv.starts_with("d,h,n,order,verdict,|T|,steps\n2,667/1000,16,parallel,unknown:budget_exhausted,"));
    }
}
