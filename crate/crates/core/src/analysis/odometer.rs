//! Diagnostics on the odometer `u` of a stabilized run (total mass emitted by
//! each site), with `Δf(x) = (1/2d) Σ_{y~x} f(y) - f(x)`.

use alloc::vec::Vec;


use num_traits::{One, Signed};

use super::green::GreenTable;
use super::AnalysisError;
use crate::engine::EvolutionState;
use crate::lattice::{closure, cube_region, new_site_map, Site};
use crate::numeric::{decide_ge_one, int, rat, to_f64, AffineMass, IntervalDecision, Rational};

fn require_stable(state: &EvolutionState) -> Result<(), AnalysisError> {
    if state.is_stable() {
        Ok(())
    } else {
        Err(AnalysisError::NotStabilized)
    }
}

/// `Δu(x)`.
pub fn odometer_laplacian(state: &EvolutionState, x: &Site) -> AffineMass {
    let sum: AffineMass = x.neighbors().map(|y| state.odometer(&y)).sum();
    &sum.scale(&rat(1, 2 * state.dim() as i64)) - &state.odometer(x)
}

/// Non-negative at both ends of the run's interval, hence on all of it.
fn nonneg(state: &EvolutionState, m: &AffineMass) -> bool {
    let iv = state.interval();
    !m.eval(iv.lo()).is_negative() && !m.eval(iv.hi()).is_negative()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdometerReport {
    pub sites: usize,
    /// `Δu(x) + (n - h) δ_0 = η_∞(x) - h` on `T ∪ ∂T`.
    pub identity_ok: bool,
    /// `η_∞(x) - h < 1 - h` on `T ∪ ∂T`.
    pub upper_ok: bool,
    /// `η_∞(x) - h >= -h` on `T`.
    pub lower_ok: bool,
    pub first_failure: Option<Site>,
}

impl OdometerReport {
    pub fn holds(&self) -> bool {
        self.identity_ok && self.upper_ok && self.lower_ok
    }
}

/// Exact check of the odometer identity and its bounds, as affine masses over
/// the run's interval.
pub fn odometer_laplacian_check(state: &EvolutionState) -> Result<OdometerReport, AnalysisError> {
    require_stable(state)?;
    let h = state.config().background().clone();
    let source = state.n() - &h;
    let window = closure(state.toppled());
    let mut report =
        OdometerReport { sites: window.len(), identity_ok: true, upper_ok: true, lower_ok: true, first_failure: None };
    for x in &window {
        let eta = state.config().get(x);
        let mut lhs = odometer_laplacian(state, x);
        if x.is_origin() {
            lhs += &source;
        }
        let identity = lhs == eta - &h;
        let upper = decide_ge_one(eta, state.interval()) == IntervalDecision::AlwaysFalse;
        let lower = !state.toppled().contains(x) || nonneg(state, eta);
        report.identity_ok &= identity;
        report.upper_ok &= upper;
        report.lower_ok &= lower;
        if !(identity && upper && lower) && report.first_failure.is_none() {
            report.first_failure = Some(*x);
        }
    }
    Ok(report)
}

fn point_h(state: &EvolutionState) -> Result<Rational, AnalysisError> {
    state
        .interval()
        .as_point()
        .cloned()
        .ok_or_else(|| AnalysisError::PreconditionUnmet("needs a run at a single background value".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyPath {
    pub path: Vec<Site>,
    /// `-(2d/(2d-1)) h`
    pub bound: Rational,
    /// Smallest `u(x_{k+1}) - u(x_k)`; `None` for a path of length 0.
    pub min_increment: Option<Rational>,
}

impl GreedyPath {
    /// Every increment exceeds the bound (so `u` increases strictly).
    pub fn holds(&self) -> bool {
        self.min_increment.as_ref().is_none_or(|m| *m > self.bound)
    }
}

/// Follows the site losing the most mass among the current site's
/// neighbours, excluding the previous site (ties to the lexicographically
/// smallest), from `start` until the origin.
pub fn greedy_increasing_path(state: &EvolutionState, start: &Site) -> Result<GreedyPath, AnalysisError> {
    require_stable(state)?;
    let h = point_h(state)?;
    if !h.is_negative() {
        return Err(AnalysisError::PreconditionUnmet("greedy path needs h < 0".into()));
    }
    let t = state.toppled();
    if !t.contains(start) || start.neighbors().all(|y| t.contains(&y)) {
        return Err(AnalysisError::PreconditionUnmet("start must be in T and next to its boundary".into()));
    }
    let two_d = 2 * state.dim() as i64;
    let bound = -(rat(two_d, two_d - 1) * &h);
    let u = |x: &Site| state.odometer(x).eval(&h);
    let mut path = alloc::vec![*start];
    let mut min_increment: Option<Rational> = None;
    let mut prev: Option<Site> = None;
    let mut cur = *start;
    while !cur.is_origin() {
        let mut best: Option<(Site, Rational)> = None;
        for y in cur.neighbors() {
            if Some(y) == prev {
                continue;
            }
            let v = u(&y);
            let better = match &best {
                None => true,
                Some((s, b)) => v > *b || (v == *b && y < *s),
            };
            if better {
                best = Some((y, v));
            }
        }
        let (next, v) = best.expect("at least one neighbour");
        if !t.contains(&next) || path.len() > t.len() {
            return Err(AnalysisError::PathStuck { at: cur, step: path.len() - 1 });
        }
        let inc = &v - &u(&cur);
        if min_increment.as_ref().is_none_or(|m| inc < *m) {
            min_increment = Some(inc);
        }
        prev = Some(cur);
        cur = next;
        path.push(cur);
    }
    Ok(GreedyPath { path, bound, min_increment })
}

/// The greedy path from every site of `T` next to `∂T`.
pub fn greedy_paths_from_boundary(state: &EvolutionState) -> Result<Vec<GreedyPath>, AnalysisError> {
    let t = state.toppled();
    let starts: Vec<Site> = t.iter().filter(|x| x.neighbors().any(|y| !t.contains(&y))).copied().collect();
    starts.iter().map(|s| greedy_increasing_path(state, s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxAverageReport {
    pub k: i64,
    /// Sites of `T^{(k)}`.
    pub checked: usize,
    pub violations: Vec<Site>,
}

impl BoxAverageReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `Δu^{(k)}(x) >= k/(2k+1) - h - (n-h)/(2k+1)^d 1_{0 ∈ Q_k(x)}` on
/// `T^{(k)} = {x : Q_k(x) ⊆ T}`, exactly over the run's interval.
pub fn box_average_check(state: &EvolutionState, k: i64) -> Result<BoxAverageReport, AnalysisError> {
    require_stable(state)?;
    if k < 0 {
        return Err(AnalysisError::PreconditionUnmet("box radius must be non-negative".into()));
    }
    let t = state.toppled();
    let d = state.dim();
    let h = state.config().background().clone();
    let vol = int(2 * k + 1).pow(d as i32);
    let inv_vol = Rational::one() / &vol;
    let base = &AffineMass::constant(rat(k, 2 * k + 1)) - &h;
    let at_origin = &base - &(state.n() - &h).scale(&inv_vol);
    let mut lap = new_site_map::<AffineMass>();
    let mut report = BoxAverageReport { k, checked: 0, violations: Vec::new() };
    for x in t {
        let cube = cube_region(*x, k);
        if !cube.iter().all(|y| t.contains(y)) {
            continue;
        }
        report.checked += 1;
        let mut sum = AffineMass::zero();
        for y in &cube {
            let l = lap.entry(*y).or_insert_with(|| odometer_laplacian(state, y));
            sum += &*l;
        }
        let avg = sum.scale(&inv_vol);
        let rhs = if cube.contains(&Site::origin(d)) { &at_origin } else { &base };
        if !nonneg(state, &(&avg - rhs)) {
            report.violations.push(*x);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperharmonicReport {
    pub sites: usize,
    /// Largest `Δ(u - ξ̃)` with `ξ̃ = (1-h)|x|^2 + (n-h) g`.
    pub max_value: f64,
    /// `(n - h)` times the table's residual: the numerical slack allowed.
    pub slack: f64,
    /// Largest deviation from the exact value `η_∞ - 1`.
    pub max_deviation: f64,
}

impl SuperharmonicReport {
    pub fn holds(&self) -> bool {
        self.max_value < self.slack
    }
}

/// Evaluates `Δ(u - ξ̃)` on `T ∪ ∂T` with a numerical Green table.
pub fn superharmonicity_check(state: &EvolutionState, green: &GreenTable) -> Result<SuperharmonicReport, AnalysisError> {
    require_stable(state)?;
    let h = point_h(state)?;
    if green.d != state.dim() {
        return Err(AnalysisError::PreconditionUnmet("Green table has the wrong dimension".into()));
    }
    let hf = to_f64(&h);
    let nf = to_f64(&state.n().eval(&h));
    let window = closure(state.toppled());
    let mut max_value = f64::NEG_INFINITY;
    let mut max_deviation = 0.0f64;
    for x in &window {
        let dg = green
            .laplacian(x)
            .ok_or_else(|| AnalysisError::PreconditionUnmet("Green table too small for the toppled set".into()))?;
        let du = to_f64(&odometer_laplacian(state, x).eval(&h));
        // Δ|x|^2 = 1
        let v = du - (1.0 - hf) - (nf - hf) * dg;
        let exact = to_f64(&state.config().get(x).eval(&h)) - 1.0;
        max_value = max_value.max(v);
        max_deviation = max_deviation.max((v - exact).abs());
    }
    Ok(SuperharmonicReport {
        sites: window.len(),
        max_value,
        slack: (nf - hf).abs() * green.residual,
        max_deviation,
    })
}
