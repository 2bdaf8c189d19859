//! Label-to-interval mappings and lockstep checks of an automaton against the
//! splitting dynamics over a whole `h`-interval.

pub mod figure8;
pub mod mapping;
pub mod rules;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashSet;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::automata::{ca_step, AutomatonSpec, CAState, CaError};
use crate::engine::{EngineError, EvolutionState, SplittingOrder};
use crate::lattice::{closure, Site, SparseConfiguration};
use crate::numeric::{AffineMass, HInterval, IntervalDecision, NumericError, Rational};

pub use figure8::{figure8_table, FIGURE8_CELLS};
pub use mapping::{builtin_mapping, octagon_mapping_closed, LabelInterval, LabelMapping, MappingKind, SplitBehavior};
pub use rules::{
    containment_range, contribution_sum, derive_contribution, published_rule_checks, verify_rule_arithmetic,
    ContributionSpec, PublishedCheck, PublishedOutcome, PublishedValidity, RuleArithmeticReport, RuleCheckStatus,
    Term,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConformanceError {
    #[error("label {0} has no interval in the mapping")]
    UnmappedLabel(String),
    #[error("interval of label {label} is empty somewhere on the h-range (site {site})")]
    DegenerateInterval { label: String, site: Site },
    #[error("dimension mismatch: configuration {config}, automaton {automaton}")]
    DimensionMismatch { config: usize, automaton: usize },
}

/// A site whose mass is outside its label's interval for some `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub site: Site,
    pub label: String,
    pub mass: AffineMass,
    pub interval: LabelInterval,
    pub decision: IntervalDecision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCheck {
    /// `AlwaysTrue` if every site is in range for every `h`; `AlwaysFalse` if
    /// some site is out of range for every `h`; otherwise the first crossing.
    pub decision: IntervalDecision,
    pub violation: Option<Violation>,
    pub sites_checked: usize,
}

/// Decides `η ∈ M^ξ` over `iv`: every site's mass lies in the interval of its
/// label. Only sites explicit in either structure are tested; the background
/// pair is tested once.
pub fn check_config_in_mapping(
    eta: &SparseConfiguration,
    xi: &CAState,
    spec: &AutomatonSpec,
    mapping: &LabelMapping,
    iv: &HInterval,
) -> Result<MembershipCheck, ConformanceError> {
    if eta.dim() != xi.dim() {
        return Err(ConformanceError::DimensionMismatch { config: eta.dim(), automaton: xi.dim() });
    }
    let table: Vec<Option<&LabelInterval>> = spec.labels.iter().map(|n| mapping.get(n)).collect();
    let mut sites: BTreeSet<Site> = eta.iter_unordered().map(|(s, _)| *s).collect();
    sites.extend(xi.support());
    let mut mixed: Option<Violation> = None;
    let background_site = far_site(eta, xi);
    let mut checked = 0;
    for site in core::iter::once(background_site).chain(sites.iter().copied()) {
        checked += 1;
        let label = xi.get(&site);
        let name = spec.label_name(label);
        let li = table[label.0 as usize].ok_or_else(|| ConformanceError::UnmappedLabel(name.to_string()))?;
        let mass = eta.get(&site);
        let decision = match li.decide(mass, iv) {
            Ok(d) => d,
            Err(NumericError::DegenerateInterval) => {
                return Err(ConformanceError::DegenerateInterval { label: name.to_string(), site })
            }
            Err(_) => unreachable!("membership only fails on degenerate intervals"),
        };
        let violation = || Violation {
            site,
            label: name.to_string(),
            mass: mass.clone(),
            interval: li.clone(),
            decision: decision.clone(),
        };
        match &decision {
            IntervalDecision::AlwaysTrue => {}
            IntervalDecision::AlwaysFalse => {
                return Ok(MembershipCheck {
                    decision: IntervalDecision::AlwaysFalse,
                    violation: Some(violation()),
                    sites_checked: checked,
                })
            }
            IntervalDecision::Mixed(_) => {
                if mixed.is_none() {
                    mixed = Some(violation());
                }
            }
        }
    }
    Ok(match mixed {
        Some(v) => MembershipCheck { decision: v.decision.clone(), violation: Some(v), sites_checked: checked },
        None => MembershipCheck { decision: IntervalDecision::AlwaysTrue, violation: None, sites_checked: checked },
    })
}

/// A site explicit in neither structure, standing for the background.
fn far_site(eta: &SparseConfiguration, xi: &CAState) -> Site {
    let mut reach = 0i64;
    for (s, _) in eta.iter_unordered() {
        reach = reach.max(s.linf_norm());
    }
    for s in xi.support() {
        reach = reach.max(s.linf_norm());
    }
    Site::origin(eta.dim()).with_coord(0, (reach + 1) as i32)
}

/// Settings of [`cosimulate`].
#[derive(Clone, Debug)]
pub struct CosimOptions {
    /// Steps the splitting run is ahead of the automaton.
    pub offset: u64,
    pub t_max: u64,
    pub bisection_budget: usize,
    pub order: SplittingOrder,
}

impl CosimOptions {
    pub fn new(t_max: u64, offset: u64) -> Self {
        CosimOptions { offset, t_max, bisection_budget: 16, order: SplittingOrder::Parallel }
    }
}

/// Outcome of one automaton step, `t` being automaton time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepVerdict {
    pub t: u64,
    pub membership: bool,
    /// `None` while the toppled set is still empty.
    pub growth: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    Membership(Violation),
    /// Growth cluster and `T ∪ ∂T` differ; `site` is the smallest site in
    /// their symmetric difference.
    GrowthCluster { site: Site, in_cluster: bool },
    Automaton(CaError),
    Mapping(ConformanceError),
    Engine(EngineError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceOutcome {
    Verified,
    Failed { t: u64, kind: FailureKind },
    /// Bisection budget exhausted at automaton time `t`.
    Inconclusive { t: u64, crossing: Rational },
}

/// Verdict for one subinterval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceReport {
    pub interval: HInterval,
    pub outcome: PieceOutcome,
    /// Last automaton time checked.
    pub horizon: u64,
    pub steps: Vec<StepVerdict>,
}

/// One bisection of the `h`-interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub interval: HInterval,
    pub crossing: Rational,
    /// Automaton time at which the split was needed.
    pub t: u64,
    /// Site whose status changes across the crossing.
    pub site: Site,
    /// Whether the split came from the engine's instability test (otherwise
    /// from a membership test).
    pub from_engine: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformanceReport {
    pub automaton: String,
    pub mapping: String,
    pub d: usize,
    pub n: AffineMass,
    pub interval: HInterval,
    pub offset: u64,
    pub t_max: u64,
    /// Subintervals in increasing order.
    pub pieces: Vec<PieceReport>,
    pub bisections: Vec<Bisection>,
}

impl ConformanceReport {
    pub fn success(&self) -> bool {
        self.pieces.iter().all(|p| p.outcome == PieceOutcome::Verified)
    }

    /// The smallest horizon over all subintervals.
    pub fn horizon(&self) -> u64 {
        self.pieces.iter().map(|p| p.horizon).min().unwrap_or(0)
    }

    /// First failure in interval order, with its time.
    pub fn first_failure(&self) -> Option<(&HInterval, u64, &FailureKind)> {
        self.pieces.iter().find_map(|p| match &p.outcome {
            PieceOutcome::Failed { t, kind } => Some((&p.interval, *t, kind)),
            _ => None,
        })
    }
}

#[derive(Clone)]
struct Work {
    engine: EvolutionState,
    grid: CAState,
    steps: Vec<StepVerdict>,
    /// `T ∪ ∂T` of the engine, kept up to date step by step.
    window: HashSet<Site, FxBuildHasher>,
}

impl Work {
    fn new(engine: EvolutionState, grid: CAState) -> Self {
        let mut window = HashSet::with_hasher(FxBuildHasher);
        window.extend(closure(engine.toppled()));
        Work { engine, grid, steps: Vec::new(), window }
    }

    fn step_engine(&mut self) -> Result<(), EngineError> {
        self.engine.step()?;
        for s in self.engine.last_split() {
            self.window.insert(*s);
            self.window.extend(s.neighbors());
        }
        Ok(())
    }

    /// Whether the growth cluster equals the window; the first differing
    /// site is searched only on failure.
    fn growth_mismatch(&self) -> Option<(Site, bool)> {
        let same = self.window.len() == self.grid.len() && self.window.iter().all(|s| self.grid.get(s) != self.grid.default_label());
        if same {
            return None;
        }
        let window = closure(self.engine.toppled());
        let cluster = self.grid.support();
        let site = window.symmetric_difference(&cluster).next().copied().expect("sets differ");
        Some((site, cluster.contains(&site)))
    }
}

enum Advance {
    Done(PieceOutcome),
    Split { crossing: Rational, site: Site, from_engine: bool },
}

/// Runs the automaton and the splitting dynamics in lockstep, the latter
/// `offset` steps ahead, checking at every automaton time `t <= t_max` that
/// `η_{t+offset} ∈ M^{ξ_t}` over the whole interval and that the growth
/// cluster of `ξ_t` equals `T ∪ ∂T` of the splitting run.
///
/// Undecided instability or membership splits the interval at the crossing
/// and both halves continue from the current state. Subintervals are handled
/// one after another; the report lists them in interval order.
pub fn cosimulate(
    spec: &AutomatonSpec,
    mapping: &LabelMapping,
    d: usize,
    n: AffineMass,
    interval: HInterval,
    opts: &CosimOptions,
) -> ConformanceReport {
    let mut report = ConformanceReport {
        automaton: spec.name.clone(),
        mapping: mapping.name.clone(),
        d,
        n: n.clone(),
        interval: interval.clone(),
        offset: opts.offset,
        t_max: opts.t_max,
        pieces: Vec::new(),
        bisections: Vec::new(),
    };
    if spec.dim != d {
        report.pieces.push(PieceReport {
            interval,
            outcome: PieceOutcome::Failed {
                t: 0,
                kind: FailureKind::Mapping(ConformanceError::DimensionMismatch { config: d, automaton: spec.dim }),
            },
            horizon: 0,
            steps: Vec::new(),
        });
        return report;
    }
    let mut queue: Vec<(HInterval, Result<Work, EngineError>)> = Vec::new();
    match EvolutionState::init(d, n.clone(), interval.clone(), opts.order) {
        Ok(engine) => queue.push((interval.clone(), Ok(Work::new(engine, spec.initial.clone())))),
        // the origin's own instability is undecided: split before starting
        Err(EngineError::IntervalSplit { crossing, site, .. }) => {
            split_initial(&interval, crossing, site, d, &n, spec, opts, &mut report, &mut queue)
        }
        Err(e) => queue.push((interval.clone(), Err(e))),
    }

    while let Some((iv, work)) = queue.pop() {
        let mut work = match work {
            Ok(w) => w,
            Err(e) => {
                report.pieces.push(PieceReport {
                    interval: iv,
                    outcome: PieceOutcome::Failed { t: 0, kind: FailureKind::Engine(e) },
                    horizon: 0,
                    steps: Vec::new(),
                });
                continue;
            }
        };
        match advance(spec, mapping, &mut work, &iv, opts) {
            Advance::Done(outcome) => {
                let horizon = work.steps.last().map(|s| s.t).unwrap_or(0);
                report.pieces.push(PieceReport { interval: iv, outcome, horizon, steps: work.steps });
            }
            Advance::Split { crossing, site, from_engine } => {
                let t = work.grid.t;
                let halves = iv.split_at(&crossing);
                match halves {
                    Some((a, b)) if report.bisections.len() < opts.bisection_budget => {
                        report.bisections.push(Bisection {
                            interval: iv.clone(),
                            crossing,
                            t,
                            site,
                            from_engine,
                        });
                        // upper half first so the lower half is processed first
                        for half in [b, a] {
                            let w = work.engine.restrict(half.clone()).map(|engine| Work { engine, ..work.clone() });
                            queue.push((half, w));
                        }
                    }
                    _ => {
                        let horizon = work.steps.last().map(|s| s.t).unwrap_or(0);
                        report.pieces.push(PieceReport {
                            interval: iv,
                            outcome: PieceOutcome::Inconclusive { t, crossing },
                            horizon,
                            steps: work.steps,
                        });
                    }
                }
            }
        }
    }
    report.pieces.sort_by(|a, b| {
        a.interval.lo().cmp(b.interval.lo()).then(b.interval.lo_closed().cmp(&a.interval.lo_closed()))
    });
    report
}

#[allow(clippy::too_many_arguments)]
fn split_initial(
    iv: &HInterval,
    crossing: Rational,
    site: Site,
    d: usize,
    n: &AffineMass,
    spec: &AutomatonSpec,
    opts: &CosimOptions,
    report: &mut ConformanceReport,
    queue: &mut Vec<(HInterval, Result<Work, EngineError>)>,
) {
    match iv.split_at(&crossing) {
        Some((a, b)) if opts.bisection_budget > 0 => {
            report.bisections.push(Bisection { interval: iv.clone(), crossing, t: 0, site, from_engine: true });
            for half in [b, a] {
                let w = EvolutionState::init(d, n.clone(), half.clone(), opts.order)
                    .map(|engine| Work::new(engine, spec.initial.clone()));
                queue.push((half, w));
            }
        }
        _ => report.pieces.push(PieceReport {
            interval: iv.clone(),
            outcome: PieceOutcome::Inconclusive { t: 0, crossing },
            horizon: 0,
            steps: Vec::new(),
        }),
    }
}

fn advance(
    spec: &AutomatonSpec,
    mapping: &LabelMapping,
    work: &mut Work,
    iv: &HInterval,
    opts: &CosimOptions,
) -> Advance {
    loop {
        let t = work.grid.t;
        while work.engine.time() < t + opts.offset {
            match work.step_engine() {
                Ok(()) => {}
                Err(EngineError::IntervalSplit { crossing, site, .. }) => {
                    return Advance::Split { crossing, site, from_engine: true }
                }
                Err(e) => return Advance::Done(PieceOutcome::Failed { t, kind: FailureKind::Engine(e) }),
            }
        }
        let check = match check_config_in_mapping(work.engine.config(), &work.grid, spec, mapping, iv) {
            Ok(c) => c,
            Err(e) => return Advance::Done(PieceOutcome::Failed { t, kind: FailureKind::Mapping(e) }),
        };
        match (&check.decision, check.violation) {
            (IntervalDecision::AlwaysTrue, _) => {}
            (IntervalDecision::Mixed(c), Some(v)) => {
                return Advance::Split { crossing: c.clone(), site: v.site, from_engine: false }
            }
            (_, Some(v)) => {
                work.steps.push(StepVerdict { t, membership: false, growth: None });
                return Advance::Done(PieceOutcome::Failed { t, kind: FailureKind::Membership(v) });
            }
            (_, None) => unreachable!("a failed membership check names its site"),
        }
        let growth = if work.engine.toppled().is_empty() {
            None
        } else {
            if let Some((site, in_cluster)) = work.growth_mismatch() {
                work.steps.push(StepVerdict { t, membership: true, growth: Some(false) });
                return Advance::Done(PieceOutcome::Failed { t, kind: FailureKind::GrowthCluster { site, in_cluster } });
            }
            Some(true)
        };
        work.steps.push(StepVerdict { t, membership: true, growth });
        if t >= opts.t_max {
            return Advance::Done(PieceOutcome::Verified);
        }
        match ca_step(spec, &work.grid) {
            Ok(next) => work.grid = next,
            Err(e) => return Advance::Done(PieceOutcome::Failed { t: t + 1, kind: FailureKind::Automaton(e) }),
        }
    }
}
