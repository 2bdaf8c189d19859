//! Label-to-mass mappings.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;

use crate::numeric::{
    decide_equal, decide_in_half_open, rat, AffineMass, HInterval, IntervalDecision, NumericError,
    Rational,
};

/// The masses a label stands for. Endpoints are affine in `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelInterval {
    /// A single value (closed singleton).
    Point(AffineMass),
    /// `[lo, hi)`, with `hi = None` meaning `+inf`.
    HalfOpen { lo: AffineMass, hi: Option<AffineMass> },
}

impl LabelInterval {
    pub fn lo(&self) -> &AffineMass {
        match self {
            LabelInterval::Point(p) => p,
            LabelInterval::HalfOpen { lo, .. } => lo,
        }
    }

    /// Upper end; `None` is `+inf`. For a point this is the point itself.
    pub fn hi(&self) -> Option<&AffineMass> {
        match self {
            LabelInterval::Point(p) => Some(p),
            LabelInterval::HalfOpen { hi, .. } => hi.as_ref(),
        }
    }

    pub fn half_open(lo: AffineMass, hi: AffineMass) -> Self {
        LabelInterval::HalfOpen { lo, hi: Some(hi) }
    }

    pub fn unbounded(lo: AffineMass) -> Self {
        LabelInterval::HalfOpen { lo, hi: None }
    }

    /// Membership of `x` for every `h` in the interval.
    pub fn decide(&self, x: &AffineMass, iv: &HInterval) -> Result<IntervalDecision, NumericError> {
        match self {
            LabelInterval::Point(p) => Ok(decide_equal(x, p, iv)),
            LabelInterval::HalfOpen { lo, hi } => decide_in_half_open(x, lo, hi.as_ref(), iv),
        }
    }
}

impl core::fmt::Display for LabelInterval {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LabelInterval::Point(p) => write!(f, "{{{p}}}"),
            LabelInterval::HalfOpen { lo, hi: Some(hi) } => write!(f, "[{lo}, {hi})"),
            LabelInterval::HalfOpen { lo, hi: None } => write!(f, "[{lo}, inf)"),
        }
    }
}

/// Whether masses of a label are certainly unstable, certainly stable, or
/// either, over an `h`-interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitBehavior {
    Never,
    Always,
    Maybe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MappingKind {
    Diamond(usize),
    Square,
    Octagon,
}

/// Label name to interval, plus the `h`-range on which the mapping is meant
/// to be used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMapping {
    pub name: String,
    pub entries: Vec<(String, LabelInterval)>,
    pub validity: HInterval,
}

fn m(a: Rational, b: Rational) -> AffineMass {
    AffineMass::new(a, b)
}

fn c(a: i64) -> AffineMass {
    AffineMass::from_ints(a, 0)
}

fn lin(a: i64, b: i64) -> AffineMass {
    AffineMass::from_ints(a, b)
}

impl LabelMapping {
    pub fn get(&self, label: &str) -> Option<&LabelInterval> {
        self.entries.iter().find(|(n, _)| n == label).map(|(_, i)| i)
    }

    /// Classifies a label's masses against the threshold 1 over `iv`.
    pub fn behavior(&self, label: &str, iv: &HInterval) -> Option<SplitBehavior> {
        let li = self.get(label)?;
        let one = Rational::one();
        let at_least_one = |x: &AffineMass| x.eval(iv.lo()) >= one && x.eval(iv.hi()) >= one;
        let at_most_one = |x: &AffineMass| x.eval(iv.lo()) <= one && x.eval(iv.hi()) <= one;
        Some(match li {
            LabelInterval::Point(p) => {
                if at_least_one(p) {
                    SplitBehavior::Always
                } else if p.eval(iv.lo()) < one && p.eval(iv.hi()) < one {
                    SplitBehavior::Never
                } else {
                    SplitBehavior::Maybe
                }
            }
            LabelInterval::HalfOpen { lo, hi } => {
                if at_least_one(lo) {
                    SplitBehavior::Always
                } else if hi.as_ref().is_some_and(at_most_one) {
                    SplitBehavior::Never
                } else {
                    SplitBehavior::Maybe
                }
            }
        })
    }

    /// Labels whose half-open interval is empty somewhere on `iv`.
    pub fn empty_labels(&self, iv: &HInterval) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, li)| match li {
                LabelInterval::Point(_) => false,
                LabelInterval::HalfOpen { lo, hi: Some(hi) } => {
                    let w = hi - lo;
                    w.eval(iv.lo()) <= Rational::from_integer(0.into())
                        || w.eval(iv.hi()) < Rational::from_integer(0.into())
                }
                LabelInterval::HalfOpen { hi: None, .. } => false,
            })
            .map(|(n, _)| n.clone())
            .collect()
    }
}

/// One of the three published mappings.
pub fn builtin_mapping(kind: MappingKind) -> LabelMapping {
    let entry = |n: &str, i: LabelInterval| (n.to_string(), i);
    let ho = LabelInterval::half_open;
    match kind {
        MappingKind::Diamond(d) => LabelMapping {
            name: "diamond".into(),
            entries: alloc::vec![
                entry("e", LabelInterval::Point(c(0))),
                entry("h", LabelInterval::Point(AffineMass::h())),
                entry("s", ho(c(0), c(1))),
                entry("u", LabelInterval::unbounded(c(1))),
            ],
            validity: HInterval::half_open(Rational::one() - rat(1, 2 * d as i64), Rational::one())
                .expect("nonempty"),
        },
        MappingKind::Square => LabelMapping {
            name: "square".into(),
            entries: alloc::vec![
                entry("e", LabelInterval::Point(c(0))),
                entry("h", LabelInterval::Point(AffineMass::h())),
                entry("s", ho(c(0), c(1))),
                entry("p", ho(m(rat(1, 4), rat(1, 1)), c(1))),
                entry("m", ho(c(1), lin(4, -4))),
                entry("m'", ho(c(0), lin(12, -15))),
                entry("c", ho(c(0), lin(16, -20))),
                entry("d", ho(lin(4, -4), lin(16, -20))),
            ],
            validity: HInterval::half_open(rat(7, 10), rat(40, 57)).expect("nonempty"),
        },
        MappingKind::Octagon => LabelMapping {
            name: "octagon".into(),
            entries: alloc::vec![
                entry("e", LabelInterval::Point(c(0))),
                entry("h", LabelInterval::Point(AffineMass::h())),
                entry("p", ho(m(rat(1, 4), rat(1, 1)), c(1))),
                entry("s", ho(c(0), c(1))),
                entry("m", ho(c(1), lin(4, -4))),
                entry("d", ho(lin(4, -4), lin(16, -20))),
                entry("d'", ho(m(rat(3, 8), rat(5, 4)), lin(16, -20))),
                entry("d!", ho(m(rat(1, 2), rat(5, 4)), lin(16, -20))),
                entry("q", ho(lin(1, 1), lin(60, -80))),
                entry("q'", ho(m(rat(7, 8), rat(21, 16)), lin(60, -80))),
                entry("c", ho(c(1), lin(60, -80))),
                entry("c'", ho(m(rat(1, 1), rat(1, 2)), lin(60, -80))),
                entry("u", ho(c(1), lin(60, -80))),
            ],
            validity: HInterval::half_open(rat(5, 7), rat(13, 18)).expect("nonempty"),
        },
    }
}

/// The octagon mapping with the closed validity range `[5/7, 13/18]`.
pub fn octagon_mapping_closed() -> LabelMapping {
    let mut mp = builtin_mapping(MappingKind::Octagon);
    mp.validity = HInterval::closed(rat(5, 7), rat(13, 18)).expect("nonempty");
    mp
}
