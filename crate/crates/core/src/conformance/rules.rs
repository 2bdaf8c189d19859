//! Interval arithmetic behind each transition rule: the masses a cell can
//! hold after one step, as a Minkowski sum of the intervals of the cells that
//! feed it, against the interval of the rule's result label.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;

use super::mapping::{builtin_mapping, LabelInterval, LabelMapping, MappingKind, SplitBehavior};
use super::ConformanceError;
use crate::automata::{AutomatonSpec, Pattern, Rule};
use crate::numeric::{rat, AffineMass, HInterval, HRange, Rational};

/// One splitting neighbour: `coef` times the interval of `label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coef: Rational,
    pub label: String,
    pub interval: LabelInterval,
}

/// What a rule's centre ends up with: its own remaining mass plus a share of
/// every splitting neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionSpec {
    pub rule: u32,
    /// Mass the centre keeps (`{0}` when it splits).
    pub base: LabelInterval,
    pub terms: Vec<Term>,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleArithmeticReport {
    pub rule: u32,
    pub result: LabelInterval,
    pub target: LabelInterval,
    /// Exact set of `h < 1` for which `result ⊆ target`.
    pub validity: HRange,
    /// Whether the checked interval lies inside `validity`.
    pub holds_on_interval: bool,
}

/// Minkowski sum of the base and the scaled terms.
pub fn contribution_sum(spec: &ContributionSpec) -> LabelInterval {
    let mut lo = spec.base.lo().clone();
    let mut hi = spec.base.hi().cloned();
    let mut point = matches!(spec.base, LabelInterval::Point(_));
    for t in &spec.terms {
        lo += &t.interval.lo().scale(&t.coef);
        hi = match (hi, t.interval.hi()) {
            (Some(a), Some(b)) => Some(&a + &b.scale(&t.coef)),
            _ => None,
        };
        point &= matches!(t.interval, LabelInterval::Point(_));
    }
    if point {
        LabelInterval::Point(lo)
    } else {
        LabelInterval::HalfOpen { lo, hi }
    }
}

/// Exact `h`-set (below 1) on which interval `a` is contained in `b`.
pub fn containment_range(a: &LabelInterval, b: &LabelInterval) -> HRange {
    let below_one = HRange::below(Rational::one());
    let range = match (a, b) {
        (LabelInterval::Point(x), LabelInterval::Point(p)) => HRange::where_zero(&(x - p)),
        (LabelInterval::HalfOpen { .. }, LabelInterval::Point(_)) => HRange::empty(),
        (LabelInterval::Point(x), LabelInterval::HalfOpen { lo, hi }) => {
            let r = HRange::where_nonneg(&(x - lo), false);
            match hi {
                Some(hi) => r.intersect(&HRange::where_nonneg(&(hi - x), true)),
                None => r,
            }
        }
        (LabelInterval::HalfOpen { lo: l, hi: h }, LabelInterval::HalfOpen { lo, hi }) => {
            let r = HRange::where_nonneg(&(l - lo), false);
            match (h, hi) {
                (_, None) => r,
                (None, Some(_)) => HRange::empty(),
                (Some(h), Some(hi)) => r.intersect(&HRange::where_nonneg(&(hi - h), false)),
            }
        }
    };
    range.intersect(&below_one)
}

/// Computes the rule's result interval and where it fits the target label.
pub fn verify_rule_arithmetic(
    mapping: &LabelMapping,
    spec: &ContributionSpec,
    iv: &HInterval,
) -> Result<RuleArithmeticReport, ConformanceError> {
    let target = mapping.get(&spec.target).ok_or_else(|| ConformanceError::UnmappedLabel(spec.target.clone()))?;
    let result = contribution_sum(spec);
    let validity = containment_range(&result, target);
    let holds_on_interval = iv.as_range().is_subset_of(&validity);
    Ok(RuleArithmeticReport { rule: spec.rule, result, target: target.clone(), validity, holds_on_interval })
}

fn pattern_interval(
    spec: &AutomatonSpec,
    mapping: &LabelMapping,
    p: Pattern,
    iv: &HInterval,
) -> Option<(String, LabelInterval, SplitBehavior)> {
    let name = match p {
        Pattern::Label(l) => spec.label_name(l).to_string(),
        Pattern::Class(c) => spec.classes[c].0.clone(),
        Pattern::Any => return None,
    };
    let li = mapping.get(&name)?.clone();
    let b = mapping.behavior(&name, iv)?;
    Some((name, li, b))
}

/// Builds the contribution of a rule from the mapping alone.
///
/// A centre that always splits keeps nothing and, by the checkerboard
/// property, none of its neighbours split. Otherwise the centre keeps its
/// interval; neighbours that always split add `1/(2d)` of their interval,
/// those that may split add `1/(2d)` of `[0, hi)`, and stable ones add
/// nothing. A wildcard counts as "may split" with no upper bound, which is
/// only usable when some label is unbounded. Returns `None` when the centre
/// may or may not split.
pub fn derive_contribution(
    spec: &AutomatonSpec,
    mapping: &LabelMapping,
    rule: &Rule,
    iv: &HInterval,
) -> Option<ContributionSpec> {
    let coef = rat(1, 2 * spec.dim as i64);
    let target = spec.label_name(rule.result).to_string();
    let (_, center, cb) = pattern_interval(spec, mapping, rule.center, iv)?;
    let zero = LabelInterval::Point(AffineMass::zero());
    match cb {
        SplitBehavior::Always => {
            return Some(ContributionSpec { rule: rule.number, base: zero, terms: Vec::new(), target })
        }
        SplitBehavior::Maybe => return None,
        SplitBehavior::Never => {}
    }
    let unbounded = mapping.entries.iter().any(|(_, li)| li.hi().is_none());
    let mut terms = Vec::new();
    for &p in &rule.neighbors {
        if p == Pattern::Any {
            if !unbounded {
                return None;
            }
            terms.push(Term { coef: coef.clone(), label: "*".into(), interval: LabelInterval::unbounded(AffineMass::zero()) });
            continue;
        }
        let (label, li, b) = pattern_interval(spec, mapping, p, iv)?;
        match b {
            SplitBehavior::Never => {}
            SplitBehavior::Always => terms.push(Term { coef: coef.clone(), label, interval: li }),
            SplitBehavior::Maybe => terms.push(Term {
                coef: coef.clone(),
                label,
                interval: LabelInterval::HalfOpen { lo: AffineMass::zero(), hi: li.hi().cloned() },
            }),
        }
    }
    Some(ContributionSpec { rule: rule.number, base: center, terms, target })
}

/// The stated validity of a rule: an exact `h`-range or a prose argument that
/// is not interval arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublishedValidity {
    Range(HRange),
    Structural(&'static str),
}

/// A published rule check, as stated, to be recomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublishedCheck {
    pub kind: MappingKind,
    /// Rule number in the automaton.
    pub rule: u32,
    /// Number under which the check is stated (differs from `rule` for the
    /// square automaton).
    pub listed_as: String,
    pub contribution: Option<ContributionSpec>,
    pub stated_result: Option<LabelInterval>,
    pub stated_validity: PublishedValidity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleCheckStatus {
    /// Result interval and validity range agree exactly with the statement.
    Reproduced,
    /// The statement disagrees with the exact computation.
    Erratum { result_matches: bool, validity_matches: bool, computed_holds: bool },
    /// Argued in prose, not by interval arithmetic.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublishedOutcome {
    pub check: PublishedCheck,
    pub report: Option<RuleArithmeticReport>,
    pub status: RuleCheckStatus,
}

impl PublishedCheck {
    /// Recomputes the check over the mapping's validity interval.
    pub fn evaluate(&self, mapping: &LabelMapping) -> Result<PublishedOutcome, ConformanceError> {
        let (contribution, stated) = match (&self.contribution, &self.stated_validity) {
            (Some(c), PublishedValidity::Range(r)) => (c, r),
            _ => return Ok(PublishedOutcome { check: self.clone(), report: None, status: RuleCheckStatus::Structural }),
        };
        let report = verify_rule_arithmetic(mapping, contribution, &mapping.validity)?;
        let result_matches = self.stated_result.as_ref().is_none_or(|r| *r == report.result);
        let validity_matches = *stated == report.validity;
        let status = if result_matches && validity_matches {
            RuleCheckStatus::Reproduced
        } else {
            RuleCheckStatus::Erratum { result_matches, validity_matches, computed_holds: report.holds_on_interval }
        };
        Ok(PublishedOutcome { check: self.clone(), report: Some(report), status })
    }
}

fn ho(lo: AffineMass, hi: AffineMass) -> LabelInterval {
    LabelInterval::half_open(lo, hi)
}

fn aff(a: Rational, b: Rational) -> AffineMass {
    AffineMass::new(a, b)
}

fn lin(a: i64, b: i64) -> AffineMass {
    AffineMass::from_ints(a, b)
}

struct Builder<'a> {
    kind: MappingKind,
    mapping: &'a LabelMapping,
    out: Vec<PublishedCheck>,
}

impl Builder<'_> {
    fn term(&self, num: i64, den: i64, label: &str) -> Term {
        let interval = self.mapping.get(label).expect("mapped label").clone();
        Term { coef: rat(num, den), label: label.into(), interval }
    }

    fn base(&self, label: Option<&str>) -> LabelInterval {
        match label {
            Some(l) => self.mapping.get(l).expect("mapped label").clone(),
            None => LabelInterval::Point(AffineMass::zero()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn arith(
        &mut self,
        rule: u32,
        listed_as: &str,
        center: Option<&str>,
        terms: &[(i64, i64, &str)],
        target: &str,
        stated_result: Option<LabelInterval>,
        validity: HRange,
    ) {
        let terms = terms.iter().map(|&(n, d, l)| self.term(n, d, l)).collect();
        let contribution = ContributionSpec { rule, base: self.base(center), terms, target: target.into() };
        self.out.push(PublishedCheck {
            kind: self.kind,
            rule,
            listed_as: listed_as.into(),
            contribution: Some(contribution),
            stated_result,
            stated_validity: PublishedValidity::Range(validity),
        });
    }

    fn prose(&mut self, rule: u32, listed_as: &str, why: &'static str) {
        self.out.push(PublishedCheck {
            kind: self.kind,
            rule,
            listed_as: listed_as.into(),
            contribution: None,
            stated_result: None,
            stated_validity: PublishedValidity::Structural(why),
        });
    }
}

fn closed(a: Rational, b: Rational) -> HRange {
    HRange::closed(a, b)
}

fn from_to_one(a: Rational) -> HRange {
    HRange::at_least(a).intersect(&HRange::below(Rational::one()))
}

/// The stated rule checks for the square and octagon automata, with the
/// stated result intervals and validity ranges transcribed as printed.
pub fn published_rule_checks(kind: MappingKind) -> Vec<PublishedCheck> {
    let mapping = builtin_mapping(kind);
    let mut b = Builder { kind, mapping: &mapping, out: Vec::new() };
    let below_one = HRange::below(Rational::one());
    let h = || LabelInterval::Point(AffineMass::h());
    let all = || HRange::below(Rational::one());
    match kind {
        MappingKind::Diamond(_) => {}
        MappingKind::Square => {
            b.arith(1, "1", Some("h"), &[], "h", Some(h()), all());
            let empties = "a splitting cell's neighbours do not split, so it empties";
            let capped = "a cell that split once receives from at most four neighbours before splitting again";
            b.prose(3, "2-5", capped);
            b.prose(4, "2-5", empties);
            b.prose(5, "2-5", empties);
            b.prose(6, "2-5", capped);
            b.arith(7, "6", Some("h"), &[(1, 4, "d")], "m", Some(ho(lin(1, 0), lin(4, -4))), all());
            b.arith(8, "7", Some("h"), &[(1, 4, "m")], "p", Some(ho(aff(rat(1, 4), rat(1, 1)), lin(1, 0))), all());
            b.arith(
                9,
                "8",
                Some("p"),
                &[(1, 2, "m"), (1, 4, "m'")],
                "d",
                Some(ho(aff(rat(3, 4), rat(1, 1)), aff(rat(6, 1), rat(-23, 4)))),
                closed(rat(13, 20), rat(40, 57)),
            );
            b.arith(
                11,
                "9",
                Some("h"),
                &[(1, 2, "m")],
                "d",
                Some(ho(aff(rat(1, 2), rat(1, 1)), lin(2, -1))),
                closed(rat(7, 10), rat(14, 19)),
            );
            b.arith(
                10,
                "10",
                Some("h"),
                &[(1, 4, "d"), (1, 4, "m")],
                "d",
                Some(ho(AffineMass::constant(rat(5, 4)), lin(5, -5))),
                closed(rat(11, 16), rat(11, 15)),
            );
            b.arith(
                12,
                "11",
                None,
                &[(1, 2, "d"), (1, 4, "c")],
                "m'",
                Some(ho(lin(2, -2), lin(12, -15))),
                below_one,
            );
        }
        MappingKind::Octagon => {
            let r = rat;
            b.arith(1, "1", Some("h"), &[], "h", Some(h()), all());
            b.prose(2, "2", "a splitting cell's neighbours do not split, so it empties");
            b.arith(3, "3", Some("h"), &[(1, 4, "m")], "p", Some(ho(aff(r(1, 4), r(1, 1)), lin(1, 0))), all());
            b.arith(4, "4", Some("h"), &[(1, 4, "d")], "m", Some(ho(lin(1, 0), lin(4, -4))), all());
            b.arith(
                5,
                "5",
                Some("h"),
                &[(1, 4, "d'")],
                "m",
                Some(ho(aff(r(3, 32), r(21, 16)), lin(4, -4))),
                from_to_one(r(29, 42)),
            );
            b.arith(
                6,
                "6",
                Some("h"),
                &[(1, 4, "d!")],
                "m",
                Some(ho(aff(r(1, 8), r(21, 16)), lin(4, -4))),
                from_to_one(r(2, 3)),
            );
            b.arith(
                7,
                "7",
                Some("h"),
                &[(1, 4, "q")],
                "d",
                Some(ho(aff(r(1, 4), r(5, 4)), lin(15, -19))),
                from_to_one(r(5, 7)),
            );
            b.arith(
                8,
                "8",
                Some("h"),
                &[(1, 4, "q"), (1, 4, "m")],
                "d!",
                Some(ho(aff(r(1, 2), r(5, 4)), lin(16, -20))),
                all(),
            );
            // stated as printed: lower end 85h/64 + 7/32 and `1 > h >= 5/2`
            b.arith(
                9,
                "9",
                Some("h"),
                &[(1, 4, "q'"), (1, 4, "m")],
                "d!",
                Some(ho(aff(r(7, 32), r(85, 64)), lin(16, -20))),
                from_to_one(r(5, 2)),
            );
            b.arith(
                10,
                "10",
                Some("h"),
                &[(1, 4, "d'"), (1, 4, "m")],
                "d'",
                Some(ho(aff(r(11, 32), r(21, 16)), lin(5, -5))),
                closed(r(1, 2), r(11, 15)),
            );
            b.arith(
                11,
                "11",
                Some("h"),
                &[(1, 2, "d'")],
                "d'",
                Some(ho(aff(r(3, 16), r(13, 8)), lin(8, -9))),
                closed(r(1, 2), r(8, 11)),
            );
            b.arith(
                12,
                "12",
                Some("p"),
                &[(1, 4, "d!"), (1, 4, "m"), (1, 4, "c")],
                "q'",
                Some(ho(aff(r(7, 8), r(21, 16)), lin(21, -26))),
                HRange::at_most(r(13, 18)),
            );
            b.arith(
                13,
                "13",
                Some("p"),
                &[(1, 2, "m"), (1, 4, "c")],
                "q",
                Some(ho(lin(1, 1), lin(18, -22))),
                HRange::at_most(r(21, 29)),
            );
            b.arith(
                14,
                "14",
                Some("p"),
                &[(1, 4, "m"), (1, 4, "d"), (1, 4, "c")],
                "q",
                Some(ho(AffineMass::constant(r(7, 4)), lin(21, -26))),
                HRange::at_most(r(13, 18)),
            );
            b.arith(
                15,
                "15",
                None,
                &[(1, 4, "q'"), (1, 4, "c"), (1, 4, "d'")],
                "c",
                Some(ho(aff(r(9, 16), r(41, 64)), lin(34, -45))),
                closed(r(28, 41), r(26, 35)),
            );
            b.arith(
                16,
                "16",
                None,
                &[(1, 2, "d!"), (1, 4, "c'")],
                "c",
                Some(ho(aff(r(1, 2), r(3, 4)), lin(23, -30))),
                closed(r(2, 3), r(37, 50)),
            );
            b.arith(
                17,
                "17",
                None,
                &[(1, 4, "q"), (1, 4, "c"), (1, 4, "d!")],
                "c",
                Some(ho(aff(r(5, 8), r(9, 16)), lin(34, -45))),
                closed(r(2, 3), r(26, 35)),
            );
            b.arith(
                18,
                "18",
                None,
                &[(1, 4, "q'"), (1, 4, "c"), (1, 4, "d!")],
                "c",
                Some(ho(aff(r(19, 32), r(41, 64)), lin(34, -45))),
                closed(r(26, 41), r(26, 35)),
            );
            b.prose(19, "19", "an empty cell whose four neighbours split gets at least 1 and at most the largest mass");
            b.arith(
                20,
                "20",
                None,
                &[(1, 4, "m"), (1, 2, "q"), (1, 4, "c")],
                "c'",
                Some(ho(aff(r(1, 1), r(1, 2)), lin(46, -61))),
                HRange::at_most(r(14, 19)),
            );
        }
    }
    b.out
}
