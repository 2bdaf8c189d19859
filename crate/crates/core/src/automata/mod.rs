//! Finite-state cellular automata with multiset neighbourhood rules.
//!
//! A rule `s ⊕ s1,…,s2d → s'` fires on a cell labelled `s` when some
//! permutation of its neighbours' labels matches the patterns `s1,…,s2d`.
//! Patterns are labels, named classes of labels, or the wildcard `*`. Rules are
//! tried in order and the first match wins.

pub mod builtin;
pub mod text;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::lattice::{new_site_map, Region, Site, MAX_DIM};

pub use builtin::{
    builtin_diamond, builtin_octagon, builtin_square, construct_chi, construct_diamond_pattern,
    construct_zeta, octagon_radius,
};

/// Index into an automaton's label list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(pub u8);

/// Bit set over label ids (at most 32 labels).
pub type LabelMask = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Label(LabelId),
    /// Index into [`AutomatonSpec::classes`].
    Class(usize),
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    /// Number used when reporting (the position in the published list).
    pub number: u32,
    pub center: Pattern,
    pub neighbors: Vec<Pattern>,
    pub result: LabelId,
    /// Whether this rule takes precedence over later rules that also match
    /// with a different result.
    pub overrides: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CaError {
    #[error("no rule matches site {site} with label {center} and neighbours {neighbors:?}")]
    NoMatchingRule { site: Site, center: String, neighbors: Vec<String> },
    #[error("rules {first} and {second} both match site {site} with different results")]
    Ambiguous { site: Site, first: u32, second: u32 },
    #[error("invalid automaton: {0}")]
    InvalidSpec(String),
}

/// A sparse label grid. Sites not stored carry the default label.
#[derive(Clone, Debug)]
pub struct CAState {
    pub t: u64,
    dim: usize,
    default: LabelId,
    labels: HashMap<Site, LabelId, FxBuildHasher>,
}

impl PartialEq for CAState {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.default == other.default && self.labels == other.labels
    }
}

impl Eq for CAState {}

impl CAState {
    pub fn new(dim: usize, default: LabelId) -> CAState {
        assert!((1..=MAX_DIM).contains(&dim));
        CAState { t: 0, dim, default, labels: new_site_map() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn default_label(&self) -> LabelId {
        self.default
    }

    pub fn get(&self, x: &Site) -> LabelId {
        self.labels.get(x).copied().unwrap_or(self.default)
    }

    pub fn set(&mut self, x: Site, l: LabelId) {
        if l == self.default {
            self.labels.remove(&x);
        } else {
            self.labels.insert(x, l);
        }
    }

    /// Sites with a non-default label.
    pub fn support(&self) -> Region {
        self.labels.keys().copied().collect()
    }

    pub fn sorted_entries(&self) -> Vec<(Site, LabelId)> {
        let mut v: Vec<(Site, LabelId)> = self.labels.iter().map(|(s, l)| (*s, *l)).collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// First site (lexicographic) where the two grids differ.
    pub fn first_difference(&self, other: &CAState) -> Option<Site> {
        let mut sites = self.support();
        sites.extend(other.support());
        sites.into_iter().find(|s| self.get(s) != other.get(s))
    }
}

/// Alphabet, classes, prioritized rules and initial grid of an automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonSpec {
    pub name: String,
    pub dim: usize,
    /// Label names; `h` stands for the background label.
    pub labels: Vec<String>,
    pub default: LabelId,
    pub classes: Vec<(String, LabelMask)>,
    pub rules: Vec<Rule>,
    pub initial: CAState,
}

impl AutomatonSpec {
    pub fn label(&self, name: &str) -> Option<LabelId> {
        self.labels.iter().position(|l| l == name).map(|i| LabelId(i as u8))
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.0 as usize]
    }

    pub fn class(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|(n, _)| n == name)
    }

    pub fn pattern_matches(&self, p: Pattern, l: LabelId) -> bool {
        match p {
            Pattern::Label(x) => x == l,
            Pattern::Class(c) => self.classes[c].1 & (1 << l.0) != 0,
            Pattern::Any => true,
        }
    }

    pub fn pattern_name(&self, p: Pattern) -> String {
        match p {
            Pattern::Label(l) => self.label_name(l).to_string(),
            Pattern::Class(c) => self.classes[c].0.clone(),
            Pattern::Any => "*".to_string(),
        }
    }

    fn rule_matches(&self, rule: &Rule, center: LabelId, neighbors: &[LabelId]) -> bool {
        self.pattern_matches(rule.center, center)
            && multiset_match(&rule.neighbors, neighbors, |p, l| self.pattern_matches(p, l))
    }

    /// The first rule matching the neighbourhood, if any.
    pub fn first_match(&self, center: LabelId, neighbors: &[LabelId]) -> Option<&Rule> {
        self.rules.iter().find(|r| self.rule_matches(r, center, neighbors))
    }

    /// Structural checks: sizes, class masks, and that a default cell with
    /// default neighbours stays default (so untouched space can be skipped).
    pub fn validate(&self) -> Result<(), CaError> {
        let bad = |m: String| Err(CaError::InvalidSpec(m));
        if self.labels.is_empty() || self.labels.len() > 32 {
            return bad("alphabet must have 1..=32 labels".into());
        }
        let all: LabelMask = if self.labels.len() == 32 { u32::MAX } else { (1 << self.labels.len()) - 1 };
        for (name, mask) in &self.classes {
            if mask & !all != 0 {
                return bad(alloc::format!("class {name} uses unknown labels"));
            }
        }
        for r in &self.rules {
            if r.neighbors.len() != 2 * self.dim {
                return bad(alloc::format!("rule {} needs {} neighbour patterns", r.number, 2 * self.dim));
            }
            for p in r.neighbors.iter().chain([&r.center]) {
                if let Pattern::Class(c) = p {
                    if *c >= self.classes.len() {
                        return bad(alloc::format!("rule {} uses an unknown class", r.number));
                    }
                }
            }
        }
        let quiet = [self.default; 2 * MAX_DIM];
        match self.first_match(self.default, &quiet[..2 * self.dim]) {
            Some(r) if r.result == self.default => Ok(()),
            _ => bad("a default cell among default neighbours must stay default".into()),
        }
    }

    fn describe(&self, site: Site, center: LabelId, neighbors: &[LabelId]) -> CaError {
        CaError::NoMatchingRule {
            site,
            center: self.label_name(center).to_string(),
            neighbors: neighbors.iter().map(|l| self.label_name(*l).to_string()).collect(),
        }
    }
}

/// Whether the labels can be assigned one-to-one to the patterns.
pub fn multiset_match<P: Copy, L: Copy>(
    patterns: &[P],
    labels: &[L],
    matches: impl Fn(P, L) -> bool,
) -> bool {
    let k = patterns.len();
    if k != labels.len() {
        return false;
    }
    // augmenting paths on a graph with at most 2*MAX_DIM nodes per side
    let mut adj = [[false; 2 * MAX_DIM]; 2 * MAX_DIM];
    for i in 0..k {
        for j in 0..k {
            adj[i][j] = matches(patterns[i], labels[j]);
        }
    }
    let mut owner = [usize::MAX; 2 * MAX_DIM];
    fn augment(
        i: usize,
        k: usize,
        adj: &[[bool; 2 * MAX_DIM]; 2 * MAX_DIM],
        seen: &mut [bool; 2 * MAX_DIM],
        owner: &mut [usize; 2 * MAX_DIM],
    ) -> bool {
        for j in 0..k {
            if adj[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j] == usize::MAX || augment(owner[j], k, adj, seen, owner) {
                    owner[j] = i;
                    return true;
                }
            }
        }
        false
    }
    (0..k).all(|i| {
        let mut seen = [false; 2 * MAX_DIM];
        augment(i, k, &adj, &mut seen, &mut owner)
    })
}

/// Step options.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepOptions {
    /// Fail when two matching rules disagree and the first does not override.
    pub check_ambiguity: bool,
}

/// One synchronous update of every cell.
///
/// Only non-default cells and their neighbours are evaluated; every other cell
/// is a default cell among default neighbours, which stays default (checked by
/// [`AutomatonSpec::validate`]).
pub fn ca_step(spec: &AutomatonSpec, state: &CAState) -> Result<CAState, CaError> {
    ca_step_with(spec, state, StepOptions::default())
}

pub fn ca_step_with(spec: &AutomatonSpec, state: &CAState, opts: StepOptions) -> Result<CAState, CaError> {
    let mut candidates: Vec<Site> = Vec::with_capacity(state.labels.len() * 3);
    let mut seen: HashMap<Site, (), FxBuildHasher> = new_site_map();
    for s in state.labels.keys() {
        if seen.insert(*s, ()).is_none() {
            candidates.push(*s);
        }
        for y in s.neighbors() {
            if seen.insert(y, ()).is_none() {
                candidates.push(y);
            }
        }
    }
    candidates.sort_unstable();
    let mut next = CAState::new(state.dim, state.default);
    next.t = state.t + 1;
    let mut nbrs = [LabelId(0); 2 * MAX_DIM];
    let k = 2 * state.dim;
    for x in candidates {
        let center = state.get(&x);
        for (slot, y) in nbrs.iter_mut().zip(x.neighbors()) {
            *slot = state.get(&y);
        }
        let nb = &nbrs[..k];
        let mut matching = spec.rules.iter().filter(|r| spec.rule_matches(r, center, nb));
        let rule = matching.next().ok_or_else(|| spec.describe(x, center, nb))?;
        if opts.check_ambiguity && !rule.overrides {
            if let Some(other) = matching.find(|r| r.result != rule.result) {
                return Err(CaError::Ambiguous { site: x, first: rule.number, second: other.number });
            }
        }
        next.set(x, rule.result);
    }
    Ok(next)
}

/// Runs `steps` updates from `state`.
pub fn ca_run(spec: &AutomatonSpec, state: &CAState, steps: u64) -> Result<CAState, CaError> {
    let mut cur = state.clone();
    for _ in 0..steps {
        cur = ca_step(spec, &cur)?;
    }
    Ok(cur)
}

/// `G_t`: cells whose label is not the background label.
pub fn growth_cluster(state: &CAState) -> Region {
    state.support()
}

/// Mismatch found by [`verify_recurrence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceMismatch {
    pub index: u64,
    pub t: u64,
    pub site: Site,
    pub expected: LabelId,
    pub found: LabelId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceReport {
    /// `(index, time)` pairs that matched.
    pub verified: Vec<(u64, u64)>,
    pub mismatch: Option<RecurrenceMismatch>,
    pub error: Option<CaError>,
}

impl RecurrenceReport {
    pub fn success(&self) -> bool {
        self.mismatch.is_none() && self.error.is_none()
    }
}

/// Runs the automaton from its initial grid and compares it with
/// `construct(i)` at time `schedule(i)` for `i = 0..=max_index`.
pub fn verify_recurrence(
    spec: &AutomatonSpec,
    construct: impl Fn(u64) -> CAState,
    schedule: impl Fn(u64) -> u64,
    max_index: u64,
) -> RecurrenceReport {
    let mut report = RecurrenceReport { verified: Vec::new(), mismatch: None, error: None };
    let mut cur = spec.initial.clone();
    for i in 0..=max_index {
        let t = schedule(i);
        while cur.t < t {
            match ca_step(spec, &cur) {
                Ok(next) => cur = next,
                Err(e) => {
                    report.error = Some(e);
                    return report;
                }
            }
        }
        let expected = construct(i);
        if let Some(site) = cur.first_difference(&expected) {
            report.mismatch = Some(RecurrenceMismatch {
                index: i,
                t,
                site,
                expected: expected.get(&site),
                found: cur.get(&site),
            });
            return report;
        }
        report.verified.push((i, t));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_is_permutation_invariant() {
        let pats = [Pattern::Label(LabelId(1)), Pattern::Any, Pattern::Any, Pattern::Label(LabelId(2))];
        let m = |p: Pattern, l: LabelId| match p {
            Pattern::Label(x) => x == l,
            _ => true,
        };
        assert!(multiset_match(&pats, &[LabelId(2), LabelId(0), LabelId(1), LabelId(0)], m));
        assert!(multiset_match(&pats, &[LabelId(0), LabelId(1), LabelId(0), LabelId(2)], m));
        assert!(!multiset_match(&pats, &[LabelId(1), LabelId(1), LabelId(0), LabelId(0)], m));
    }

    #[test]
    fn diamond_first_step() {
        let spec = builtin_diamond(2);
        let next = ca_step(&spec, &spec.initial).unwrap();
        let u = spec.label("u").unwrap();
        let e = spec.label("e").unwrap();
        assert_eq!(next.get(&Site::xy(0, 0)), e);
        for y in Site::xy(0, 0).neighbors() {
            assert_eq!(next.get(&y), u);
        }
        assert_eq!(next.len(), 5);
    }

    #[test]
    fn quiet_state_is_fixed() {
        let spec = builtin_square();
        let empty = CAState::new(2, spec.default);
        let next = ca_step(&spec, &empty).unwrap();
        assert!(next.is_empty());
    }

    #[test]
    fn unmatched_neighbourhood_is_an_error() {
        let spec = builtin_diamond(1);
        let mut st = CAState::new(1, spec.default);
        // e next to the background with a lone u neighbour matches no rule
        st.set(Site::new(&[0]), spec.label("e").unwrap());
        st.set(Site::new(&[1]), spec.label("u").unwrap());
        let err = ca_step(&spec, &st).unwrap_err();
        assert!(matches!(err, CaError::NoMatchingRule { .. }));
    }
}
