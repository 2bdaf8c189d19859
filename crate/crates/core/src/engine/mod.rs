//! The splitting dynamics.
//!
//! At every step a set `S` of unstable sites (mass at least 1) is chosen by the
//! splitting order; each site of `S` is emptied and every neighbour receives
//! `1/(2d)` of its mass. Masses are [`AffineMass`] values, so a run started over
//! an interval of backgrounds either behaves identically for every `h` in the
//! interval or stops with [`EngineError::IntervalSplit`] at the first
//! instability test whose outcome depends on `h`.

pub mod dense;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use hashbrown::HashMap;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::lattice::{
    closure, is_box, new_site_map, outer_boundary, Parity, Region, Site, SparseConfiguration,
    MAX_DIM,
};
use crate::numeric::{
    decide_ge_one, format_rational, int, rat, AffineMass, HInterval, IntervalDecision, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplittingOrder {
    /// Every unstable site splits at every step.
    Parallel,
    /// Only the lexicographically smallest unstable site splits.
    SingleSiteLexMin,
    /// One unstable site, drawn uniformly by a seeded generator.
    SingleSiteRandom(u64),
}

impl SplittingOrder {
    pub fn name(&self) -> String {
        match self {
            SplittingOrder::Parallel => "parallel".into(),
            SplittingOrder::SingleSiteLexMin => "lexmin".into(),
            SplittingOrder::SingleSiteRandom(seed) => alloc::format!("random:{seed}"),
        }
    }

    /// Inverse of [`SplittingOrder::name`]; also accepts `leftmost` and
    /// `random` (seed 0).
    pub fn parse(s: &str) -> Option<SplittingOrder> {
        match s {
            "parallel" => Some(SplittingOrder::Parallel),
            "lexmin" | "leftmost" => Some(SplittingOrder::SingleSiteLexMin),
            "random" => Some(SplittingOrder::SingleSiteRandom(0)),
            _ => s.strip_prefix("random:")?.parse().ok().map(SplittingOrder::SingleSiteRandom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instability of site {site} at time {t} changes at h = {crossing}")]
    IntervalSplit { crossing: Rational, site: Site, t: u64 },
    #[error("precondition not met: {0}")]
    PreconditionUnmet(String),
}

/// What to record while running.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tracking {
    /// Keep the list of splitting sites of every step.
    pub splits: bool,
    /// Record the total mass over `T_t ∪ ∂T_t` after every step (costly).
    pub window_mass: bool,
}

/// Per-step growth record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub t: u64,
    pub unstable: usize,
    pub toppled: usize,
    pub window_mass: Option<AffineMass>,
}

/// Configuration plus all bookkeeping of one run.
#[derive(Clone, Debug)]
pub struct EvolutionState {
    d: usize,
    t: u64,
    n: AffineMass,
    interval: HInterval,
    order: SplittingOrder,
    config: SparseConfiguration,
    toppled: Region,
    odometer: HashMap<Site, AffineMass, FxBuildHasher>,
    split_counts: HashMap<Site, u64, FxBuildHasher>,
    unstable: BTreeSet<Site>,
    radius: i64,
    rng: ChaCha8Rng,
    tracking: Tracking,
    splits: Vec<Vec<Site>>,
    last_split: Vec<Site>,
    history: Vec<StepRecord>,
}

impl EvolutionState {
    /// The point-source start `η(0) = n`, `η(x) = h` elsewhere.
    ///
    /// Over a point interval `{h0}` the background and `n` are collapsed to
    /// constants. Fails with [`EngineError::IntervalSplit`] if the origin's
    /// instability is not uniform over the interval.
    pub fn init(
        d: usize,
        n: AffineMass,
        interval: HInterval,
        order: SplittingOrder,
    ) -> Result<Self, EngineError> {
        EvolutionState::init_tracked(d, n, interval, order, Tracking::default())
    }

    pub fn init_tracked(
        d: usize,
        n: AffineMass,
        interval: HInterval,
        order: SplittingOrder,
        tracking: Tracking,
    ) -> Result<Self, EngineError> {
        if !(1..=MAX_DIM).contains(&d) {
            return Err(EngineError::InvalidParams(alloc::format!(
                "dimension {d} outside 1..={MAX_DIM}"
            )));
        }
        let one = Rational::one();
        let hi_ok = if interval.hi_closed() { interval.hi() < &one } else { interval.hi() <= &one };
        if !hi_ok {
            return Err(EngineError::InvalidParams(alloc::format!(
                "background interval {interval} is not below 1"
            )));
        }
        if n.eval(interval.lo()) < Rational::zero() || n.eval(interval.hi()) < Rational::zero() {
            return Err(EngineError::InvalidParams(alloc::format!(
                "n = {n} is negative somewhere on {interval}"
            )));
        }
        let (n, background) = match interval.as_point() {
            Some(h0) => (n.collapse(h0), AffineMass::constant(h0.clone())),
            None => (n, AffineMass::h()),
        };
        let origin = Site::origin(d);
        let config = SparseConfiguration::point_source(d, n.clone(), background);
        let mut unstable = BTreeSet::new();
        match decide_ge_one(&n, &interval) {
            IntervalDecision::AlwaysTrue => {
                unstable.insert(origin);
            }
            IntervalDecision::AlwaysFalse => {}
            IntervalDecision::Mixed(crossing) => {
                return Err(EngineError::IntervalSplit { crossing, site: origin, t: 0 })
            }
        }
        let seed = match order {
            SplittingOrder::SingleSiteRandom(s) => s,
            _ => 0,
        };
        let mut st = EvolutionState {
            d,
            t: 0,
            n,
            interval,
            order,
            config,
            toppled: Region::new(),
            odometer: new_site_map(),
            split_counts: new_site_map(),
            unstable,
            radius: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            tracking,
            splits: Vec::new(),
            last_split: Vec::new(),
            history: Vec::new(),
        };
        st.push_record();
        Ok(st)
    }

    /// Convenience for a pointwise run at a single background value.
    pub fn init_point(
        d: usize,
        n: Rational,
        h: Rational,
        order: SplittingOrder,
    ) -> Result<Self, EngineError> {
        EvolutionState::init(d, AffineMass::constant(n), HInterval::point(h), order)
    }

    fn push_record(&mut self) {
        let window_mass = self.tracking.window_mass.then(|| self.window_mass());
        self.history.push(StepRecord {
            t: self.t,
            unstable: self.unstable.len(),
            toppled: self.toppled.len(),
            window_mass,
        });
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn n(&self) -> &AffineMass {
        &self.n
    }

    pub fn interval(&self) -> &HInterval {
        &self.interval
    }

    pub fn order(&self) -> SplittingOrder {
        self.order
    }

    pub fn config(&self) -> &SparseConfiguration {
        &self.config
    }

    /// `T_t`: every site that has split at least once.
    pub fn toppled(&self) -> &Region {
        &self.toppled
    }

    /// `U_t`: the currently unstable sites.
    pub fn unstable(&self) -> &BTreeSet<Site> {
        &self.unstable
    }

    pub fn is_stable(&self) -> bool {
        self.unstable.is_empty()
    }

    /// Total mass emitted so far by `x`.
    pub fn odometer(&self, x: &Site) -> AffineMass {
        self.odometer.get(x).cloned().unwrap_or_default()
    }

    pub fn split_count(&self, x: &Site) -> u64 {
        self.split_counts.get(x).copied().unwrap_or(0)
    }

    /// Splitting sets `S_1, S_2, …` if split tracking is on.
    /// Sites that split in the most recent step.
    pub fn last_split(&self) -> &[Site] {
        &self.last_split
    }

    pub fn splits(&self) -> &[Vec<Site>] {
        &self.splits
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn tracking(&self) -> Tracking {
        self.tracking
    }

    /// `T_t ∪ ∂T_t`.
    pub fn window(&self) -> Region {
        closure(&self.toppled)
    }

    pub fn window_mass(&self) -> AffineMass {
        self.config.total_over(self.window().iter())
    }

    /// Largest L∞ norm over `T_t` (0 when empty).
    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Narrows the background interval to a subinterval. Decisions already
    /// taken stay valid since they were uniform over the wider interval.
    pub fn restrict(&self, sub: HInterval) -> Result<EvolutionState, EngineError> {
        let inside = sub.as_range().is_subset_of(&self.interval.as_range());
        if !inside {
            return Err(EngineError::InvalidParams(alloc::format!(
                "{sub} is not inside {}",
                self.interval
            )));
        }
        let mut out = self.clone();
        if let Some(h0) = sub.as_point() {
            out.n = out.n.collapse(h0);
            out.config = out.config.evaluate_at(h0);
            for v in out.odometer.values_mut() {
                *v = v.collapse(h0);
            }
            for r in &mut out.history {
                if let Some(m) = &mut r.window_mass {
                    *m = m.collapse(h0);
                }
            }
        }
        out.interval = sub;
        Ok(out)
    }

    fn choose_splitters(&mut self) -> Vec<Site> {
        match self.order {
            SplittingOrder::Parallel => self.unstable.iter().copied().collect(),
            SplittingOrder::SingleSiteLexMin => self.unstable.first().copied().into_iter().collect(),
            SplittingOrder::SingleSiteRandom(_) => {
                let k = self.rng.random_range(0..self.unstable.len());
                self.unstable.iter().nth(k).copied().into_iter().collect()
            }
        }
    }

    /// One step of the dynamics. On [`EngineError::IntervalSplit`] the state is
    /// left untouched (apart from the random generator for the random order).
    pub fn step(&mut self) -> Result<(), EngineError> {
        if self.unstable.is_empty() {
            return Ok(());
        }
        let rng_backup = self.rng.clone();
        let splitters = self.choose_splitters();
        let mut touched: HashMap<Site, AffineMass, FxBuildHasher> = new_site_map();
        let mut emitted = Vec::with_capacity(splitters.len());
        for s in &splitters {
            touched.insert(*s, AffineMass::zero());
        }
        for s in &splitters {
            let mass = self.config.get(s).clone();
            let share = mass.split_share(self.d);
            for y in s.neighbors() {
                *touched.entry(y).or_insert_with(|| self.config.get(&y).clone()) += &share;
            }
            emitted.push(mass);
        }
        let mut decisions = Vec::with_capacity(touched.len());
        for (x, m) in &touched {
            match decide_ge_one(m, &self.interval) {
                IntervalDecision::AlwaysTrue => decisions.push((*x, true)),
                IntervalDecision::AlwaysFalse => decisions.push((*x, false)),
                IntervalDecision::Mixed(crossing) => {
                    self.rng = rng_backup;
                    return Err(EngineError::IntervalSplit { crossing, site: *x, t: self.t + 1 });
                }
            }
        }
        for (x, unstable) in decisions {
            if unstable {
                self.unstable.insert(x);
            } else {
                self.unstable.remove(&x);
            }
        }
        for (x, m) in touched {
            self.config.set(x, m);
        }
        for (s, mass) in splitters.iter().zip(emitted) {
            self.toppled.insert(*s);
            *self.odometer.entry(*s).or_default() += &mass;
            self.radius = self.radius.max(s.linf_norm());
            *self.split_counts.entry(*s).or_insert(0) += 1;
        }
        self.t += 1;
        if self.tracking.splits {
            self.splits.push(splitters.clone());
        }
        self.last_split = splitters;
        self.push_record();
        Ok(())
    }

    /// Growth diagnostics for an unfinished run.
    pub fn diagnostics(&self, reason: BudgetReason) -> Diagnostics {
        Diagnostics {
            reason,
            t: self.t,
            toppled: self.toppled.len(),
            unstable: self.unstable.len(),
            radius: self.radius(),
        }
    }

    /// CSV rows `t,|U_t|,|T_t|,total_mass_window`; the last column is empty
    /// unless window-mass tracking was on.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("t,|U_t|,|T_t|,total_mass_window\n");
        for r in &self.history {
            let _ = write!(out, "{},{},{},", r.t, r.unstable, r.toppled);
            if let Some(m) = &r.window_mass {
                let _ = write!(out, "{m}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetReason {
    Steps,
    Radius,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub reason: BudgetReason,
    pub t: u64,
    pub toppled: usize,
    pub unstable: usize,
    pub radius: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunBudget {
    pub max_steps: u64,
    /// Stop once some toppled site has L∞ norm above this.
    pub max_radius: Option<i64>,
    /// Allow returning a proven explosion certificate without simulating.
    pub certify: bool,
}

impl RunBudget {
    pub fn steps(max_steps: u64) -> RunBudget {
        RunBudget { max_steps, max_radius: None, certify: false }
    }
}

/// A proven explosion for the given parameters, no simulation needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExplosionCertificate {
    /// `h >= 1 - 1/(2d)` and `n >= 1`, any order.
    EveryNeighbourUnstable { threshold: Rational },
    /// Parallel order, `d >= 3`, `h >= C_d'` and `n >= 2d(1-h)`.
    DiagonalProgress { threshold: Rational },
    /// Parallel order, `d = 2`, `h >= 13/19` and `n >= 64 - 84h`.
    PlanarDiagonal { threshold: Rational },
}

#[derive(Clone, Debug)]
pub enum RunOutcome {
    Stabilized(EvolutionState),
    BudgetExhausted(EvolutionState, Diagnostics),
    /// The state is the last one reached before the non-uniform decision.
    IntervalSplit { crossing: Rational, site: Site, t: u64, state: EvolutionState },
    CertifiedExplosive(ExplosionCertificate),
}

impl RunOutcome {
    pub fn stabilized(self) -> Option<EvolutionState> {
        match self {
            RunOutcome::Stabilized(s) => Some(s),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RunOutcome::Stabilized(_) => "stabilized",
            RunOutcome::BudgetExhausted(..) => "budget_exhausted",
            RunOutcome::IntervalSplit { .. } => "interval_split",
            RunOutcome::CertifiedExplosive(_) => "certified_explosive",
        }
    }
}

/// `n >= f` over the whole interval, for affine `f`.
fn dominates(n: &AffineMass, f: &AffineMass, interval: &HInterval) -> bool {
    let diff = n - f;
    diff.eval(interval.lo()) >= Rational::zero() && diff.eval(interval.hi()) >= Rational::zero()
}

/// Explosion certificates that apply to the state's parameters.
pub fn explosion_certificate(state: &EvolutionState) -> Option<ExplosionCertificate> {
    let d = state.d;
    let iv = &state.interval;
    let n = &state.n;
    let lo = iv.lo();
    let threshold = Rational::one() - rat(1, 2 * d as i64);
    if lo >= &threshold && dominates(n, &AffineMass::from_ints(1, 0), iv) {
        return Some(ExplosionCertificate::EveryNeighbourUnstable { threshold });
    }
    if state.order != SplittingOrder::Parallel {
        return None;
    }
    if d >= 3 {
        let c = crate::analysis::theory_constants(d).c_prime;
        let two_d = 2 * d as i64;
        if lo >= &c && dominates(n, &AffineMass::from_ints(two_d, -two_d), iv) {
            return Some(ExplosionCertificate::DiagonalProgress { threshold: c });
        }
    } else if d == 2 {
        let c = rat(13, 19);
        if lo >= &c && dominates(n, &AffineMass::from_ints(64, -84), iv) {
            return Some(ExplosionCertificate::PlanarDiagonal { threshold: c });
        }
    }
    None
}

/// Runs until stable, out of budget, or an `h`-dependent decision.
pub fn run(mut state: EvolutionState, budget: RunBudget) -> RunOutcome {
    if budget.certify {
        if let Some(c) = explosion_certificate(&state) {
            return RunOutcome::CertifiedExplosive(c);
        }
    }
    loop {
        if state.is_stable() {
            return RunOutcome::Stabilized(state);
        }
        if state.t >= budget.max_steps {
            let diag = state.diagnostics(BudgetReason::Steps);
            return RunOutcome::BudgetExhausted(state, diag);
        }
        if let Err(e) = state.step() {
            match e {
                EngineError::IntervalSplit { crossing, site, t } => {
                    return RunOutcome::IntervalSplit { crossing, site, t, state }
                }
                // step only fails with IntervalSplit
                _ => unreachable!(),
            }
        }
        if let Some(r) = budget.max_radius {
            if state.radius > r {
                let diag = state.diagnostics(BudgetReason::Radius);
                return RunOutcome::BudgetExhausted(state, diag);
            }
        }
    }
}

/// Even sites split only at even times and odd sites only at odd times.
/// `splits[k]` is the splitting set of the step from time `k` to `k + 1`.
pub fn parity_check(splits: &[Vec<Site>]) -> bool {
    splits
        .iter()
        .enumerate()
        .all(|(k, s)| s.iter().all(|x| x.parity() == Parity::of_time(k as u64)))
}

fn require_below_half(h: &Rational) -> Result<Rational, EngineError> {
    let half = rat(1, 2);
    if h >= &half {
        return Err(EngineError::PreconditionUnmet(alloc::format!(
            "bound needs h < 1/2, got {}",
            format_rational(h)
        )));
    }
    Ok(half - h)
}

/// `|T| <= n / (1/2 - h)` at a concrete `h < 1/2`, as published.
///
/// Fails for small `n` when `h < 0` (`d = 1`, `n = 1`, `h = -2` gives
/// `|T| = 1 > 2/5`): the mass count behind it credits the origin with
/// `n + h` instead of `n`. See [`source_corrected_t_bound_check`].
pub fn t_bound_check(state: &EvolutionState, h: &Rational) -> Result<bool, EngineError> {
    let gap = require_below_half(h)?;
    let bound = state.n.eval(h) / gap;
    Ok(Rational::from_integer((state.toppled.len() as u64).into()) <= bound)
}

/// `|T| <= (n - h) / (1/2 - h)`, the same mass count with the origin holding
/// `n`. Implies [`t_bound_check`] for `h >= 0`.
pub fn source_corrected_t_bound_check(state: &EvolutionState, h: &Rational) -> Result<bool, EngineError> {
    let gap = require_below_half(h)?;
    let bound = (state.n.eval(h) - h) / gap;
    Ok(Rational::from_integer((state.toppled.len() as u64).into()) <= bound)
}

/// For `h >= 1 - 1/d`, the toppled set of a stabilized run is a box.
pub fn rectangle_check(state: &EvolutionState, h: &Rational) -> Result<bool, EngineError> {
    let need = Rational::one() - rat(1, state.d as i64);
    if h < &need {
        return Err(EngineError::PreconditionUnmet(alloc::format!(
            "box shape needs h >= {}",
            format_rational(&need)
        )));
    }
    if !state.is_stable() {
        return Err(EngineError::PreconditionUnmet("run has not stabilized".into()));
    }
    Ok(is_box(&state.toppled))
}

/// Total mass over `T_t ∪ ∂T_t` equals its value at time 0.
pub fn conservation_check(state: &EvolutionState) -> bool {
    let window = state.window();
    let origin = Site::origin(state.d);
    let mut initial = state.config.background().scale(&int(window.len() as i64));
    if window.contains(&origin) {
        initial = &(&initial - state.config.background()) + &state.n;
    }
    state.config.total_over(window.iter()) == initial
}

/// Whether `T_t` lies inside the diamond of radius `t`.
pub fn speed_of_light_check(state: &EvolutionState) -> bool {
    state.toppled.iter().all(|s| s.l1_norm() <= state.t as i64)
}

/// Final masses of a 1D configuration on `lo..=hi`.
pub fn masses_on_segment(config: &SparseConfiguration, lo: i32, hi: i32) -> Vec<AffineMass> {
    (lo..=hi).map(|x| config.get(&Site::new(&[x])).clone()).collect()
}

/// Sites of the boundary that have not split. Useful for reporting.
pub fn untoppled_boundary(state: &EvolutionState) -> Region {
    outer_boundary(&state.toppled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment(v: &[Rational]) -> Vec<AffineMass> {
        v.iter().cloned().map(AffineMass::constant).collect()
    }

    #[test]
    fn first_move_of_four() {
        let mut st = EvolutionState::init_point(1, int(4), int(0), SplittingOrder::Parallel).unwrap();
        st.step().unwrap();
        assert_eq!(
            masses_on_segment(st.config(), -1, 1),
            segment(&[int(2), int(0), int(2)])
        );
        assert_eq!(st.odometer(&Site::new(&[0])), AffineMass::from_ints(4, 0));
        assert_eq!(st.toppled().len(), 1);
    }

    #[test]
    fn parallel_four_stabilizes() {
        let st = EvolutionState::init_point(1, int(4), int(0), SplittingOrder::Parallel).unwrap();
        let done = run(st, RunBudget::steps(100)).stabilized().unwrap();
        assert_eq!(done.time(), 5);
        let expect = [int(0), rat(1, 2), rat(3, 4), rat(3, 4), int(0), rat(3, 4), rat(3, 4), rat(1, 2), int(0)];
        assert_eq!(masses_on_segment(done.config(), -4, 4), segment(&expect));
        assert_eq!(done.toppled().len(), 5);
        assert!(conservation_check(&done));
        assert_eq!(t_bound_check(&done, &int(0)), Ok(true));
    }

    #[test]
    fn leftmost_four_stabilizes() {
        let st = EvolutionState::init_point(1, int(4), int(0), SplittingOrder::SingleSiteLexMin).unwrap();
        let done = run(st, RunBudget::steps(1000)).stabilized().unwrap();
        let expect = [int(0), rat(1, 2), rat(1, 2), rat(7, 8), rat(3, 4), int(0), rat(3, 4), rat(5, 8), int(0)];
        assert_eq!(masses_on_segment(done.config(), -4, 4), segment(&expect));
    }

    #[test]
    fn zero_source_is_stable() {
        let st = EvolutionState::init(
            2,
            AffineMass::zero(),
            HInterval::half_open(rat(1, 2), rat(3, 4)).unwrap(),
            SplittingOrder::Parallel,
        )
        .unwrap();
        assert!(st.is_stable());
        assert!(conservation_check(&st));
    }

    #[test]
    fn symbolic_split_is_reported() {
        // origin mass 1/4 + h is unstable exactly for h >= 3/4
        let err = EvolutionState::init(
            1,
            "1/4 + h".parse().unwrap(),
            HInterval::half_open(rat(1, 2), int(1)).unwrap(),
            SplittingOrder::Parallel,
        )
        .unwrap_err();
        assert_eq!(err, EngineError::IntervalSplit { crossing: rat(3, 4), site: Site::new(&[0]), t: 0 });
    }

    #[test]
    fn order_names_round_trip() {
        for o in [SplittingOrder::Parallel, SplittingOrder::SingleSiteLexMin, SplittingOrder::SingleSiteRandom(17)] {
            assert_eq!(SplittingOrder::parse(&o.name()), Some(o));
        }
    }

    #[test]
    fn certificates() {
        let st = EvolutionState::init(
            2,
            AffineMass::from_ints(1, 0),
            HInterval::half_open(rat(3, 4), int(1)).unwrap(),
            SplittingOrder::SingleSiteLexMin,
        )
        .unwrap();
        let out = run(st, RunBudget { max_steps: 10, max_radius: None, certify: true });
        assert!(matches!(out, RunOutcome::CertifiedExplosive(ExplosionCertificate::EveryNeighbourUnstable { .. })));
        let st = EvolutionState::init_point(2, int(10), rat(13, 19), SplittingOrder::Parallel).unwrap();
        let out = run(st, RunBudget { max_steps: 10, max_radius: None, certify: true });
        assert!(matches!(out, RunOutcome::CertifiedExplosive(ExplosionCertificate::PlanarDiagonal { .. })));
    }
}
