//! Exact rationals and masses of the form `a + b*h`.
//!
//! Every mass produced by the splitting dynamics from a point source over a
//! background `h` is affine in `h`, because the update rule is linear with
//! constant coefficients. Keeping masses symbolic lets a single run certify its
//! behaviour over a whole interval of `h`: each threshold test becomes an affine
//! predicate whose truth set is an interval, decided exactly from its endpoints.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational with a positive denominator.
///
/// Masses built by [`AffineMass`] arithmetic are not always stored in lowest
/// terms (normalising 300-bit numbers after every addition dominates long
/// runs); comparison, equality and hashing are by value and text output is
/// reduced.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("cannot parse `{0}` as a rational")]
    BadRational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("cannot parse `{0}` as an affine mass")]
    BadMass(String),
    #[error("cannot parse `{0}` as an h-interval")]
    BadInterval(String),
    #[error("empty interval: lower end {lo} exceeds upper end {hi}")]
    EmptyInterval { lo: Rational, hi: Rational },
    #[error("mapping interval is empty for some h in the range (lower end exceeds upper end)")]
    DegenerateInterval,
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p/q` or `p` (optional sign).
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let s = s.trim();
    let bad = || NumericError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(NumericError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` text, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    let q = q.reduced();
    alloc::format!("{}/{}", q.numer(), q.denom())
}

/// Lossy conversion for human summaries and plotting only.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // both parts overflow f64: shift them down together
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// A mass `a + b*h` with exact rational coefficients.
#[derive(Clone, Debug, Default)]
pub struct AffineMass {
    pub a: Rational,
    pub b: Rational,
}

impl AffineMass {
    pub fn new(a: Rational, b: Rational) -> Self {
        AffineMass { a, b }
    }

    pub fn zero() -> Self {
        AffineMass::default()
    }

    pub fn constant(a: Rational) -> Self {
        AffineMass { a, b: Rational::zero() }
    }

    /// The background mass `h` itself.
    pub fn h() -> Self {
        AffineMass { a: Rational::zero(), b: Rational::one() }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        AffineMass { a: int(a), b: int(b) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.b.is_zero()
    }

    pub fn eval(&self, h: &Rational) -> Rational {
        &self.a + &self.b * h
    }

    pub fn scale(&self, k: &Rational) -> Self {
        AffineMass { a: &self.a * k, b: &self.b * k }
    }

    /// The share each of the `2d` neighbours receives when this mass splits.
    pub fn split_share(&self, d: usize) -> Self {
        let k = BigInt::from(2 * d as u64);
        let div = |q: &Rational| strip_twos(q.numer().clone(), q.denom() * &k);
        AffineMass { a: div(&self.a), b: div(&self.b) }
    }

    /// Sign of the mass at `h`, by integer cross-multiplication.
    pub fn sign_at(&self, h: &Rational) -> Ordering {
        let lhs = self.a.numer() * self.b.denom() * h.denom();
        let rhs = self.b.numer() * h.numer() * self.a.denom();
        (lhs + rhs).sign().cmp_zero()
    }

    /// Substitutes a concrete `h`, leaving a constant mass.
    pub fn collapse(&self, h: &Rational) -> Self {
        AffineMass::constant(self.eval(h))
    }

    /// The unique `h` where this mass equals `level`, if the slope is nonzero.
    pub fn crossing(&self, level: &Rational) -> Option<Rational> {
        if self.b.is_zero() {
            None
        } else {
            Some((level - &self.a) / &self.b)
        }
    }
}

/// Value equality by cross-multiplication (cheaper than the generic ratio
/// comparison on unreduced operands).
fn same_value(x: &Rational, y: &Rational) -> bool {
    x.numer() * y.denom() == y.numer() * x.denom()
}

impl PartialEq for AffineMass {
    fn eq(&self, other: &Self) -> bool {
        same_value(&self.a, &other.a) && same_value(&self.b, &other.b)
    }
}

impl Eq for AffineMass {}

impl core::hash::Hash for AffineMass {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        // ratio hashing is by value, matching the equality above
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl fmt::Display for AffineMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*h", format_rational(&self.a), format_rational(&self.b))
    }
}

impl FromStr for AffineMass {
    type Err = NumericError;

    /// Accepts `a + b*h`, `a - b*h`, `a`, `b*h` and `h`, with integer shorthand.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericError::BadMass(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let parse_h_term = |t: &str| -> Result<Rational, NumericError> {
            let coef = t.strip_suffix('h').ok_or_else(bad)?;
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            match coef {
                "" | "+" => Ok(Rational::one()),
                "-" => Ok(-Rational::one()),
                c => parse_rational(c).map_err(|_| bad()),
            }
        };
        if !compact.ends_with('h') {
            return Ok(AffineMass::constant(parse_rational(&compact).map_err(|_| bad())?));
        }
        // split at the last top-level sign that is not part of the constant's own sign
        // or of the coefficient (e.g. `3/4+-1/4*h`)
        let bytes = compact.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'+' && bytes[i - 1] != b'-'
            {
                split = Some(i);
                break;
            }
        }
        match split {
            None => Ok(AffineMass::new(Rational::zero(), parse_h_term(&compact)?)),
            Some(i) => {
                let a = parse_rational(&compact[..i]).map_err(|_| bad())?;
                let (sign, rest) = compact[i..].split_at(1);
                let mut b = parse_h_term(rest)?;
                if sign == "-" {
                    b = -b;
                }
                Ok(AffineMass::new(a, b))
            }
        }
    }
}

/// `n/d`, with common factors of two removed when `d` is a power of two;
/// assumes `d > 0`. Other denominators are left alone so that they keep
/// dividing each other along a run.
fn strip_twos(n: BigInt, d: BigInt) -> Rational {
    if n.is_zero() {
        return Rational::zero();
    }
    let dz = d.trailing_zeros().unwrap_or(0);
    if dz + 1 != d.bits() {
        return Rational::new_raw(n, d);
    }
    let k = n.trailing_zeros().unwrap_or(0).min(dz);
    Rational::new_raw(n >> k, d >> k)
}

/// `x + y` without a gcd when one denominator divides the other, which is the
/// usual case along a run.
fn add_lazy(x: &Rational, y: &Rational) -> Rational {
    let (xn, xd) = (x.numer(), x.denom());
    let (yn, yd) = (y.numer(), y.denom());
    if xd == yd {
        return strip_twos(xn + yn, xd.clone());
    }
    let (small, big, sn, bn) = if xd.bits() <= yd.bits() { (xd, yd, xn, yn) } else { (yd, xd, yn, xn) };
    let (q, r) = num_integer::Integer::div_rem(big, small);
    if r.is_zero() {
        return strip_twos(sn * q + bn, big.clone());
    }
    x + y
}

fn sub_lazy(x: &Rational, y: &Rational) -> Rational {
    add_lazy(x, &-y)
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a AffineMass> for &'a AffineMass {
    type Output = AffineMass;
    fn add(self, rhs: &'a AffineMass) -> AffineMass {
        AffineMass { a: add_lazy(&self.a, &rhs.a), b: add_lazy(&self.b, &rhs.b) }
    }
}

impl Add for AffineMass {
    type Output = AffineMass;
    fn add(self, rhs: AffineMass) -> AffineMass {
        &self + &rhs
    }
}

impl<'a> AddAssign<&'a AffineMass> for AffineMass {
    fn add_assign(&mut self, rhs: &'a AffineMass) {
        self.a = add_lazy(&self.a, &rhs.a);
        self.b = add_lazy(&self.b, &rhs.b);
    }
}

impl<'a> Sub<&'a AffineMass> for &'a AffineMass {
    type Output = AffineMass;
    fn sub(self, rhs: &'a AffineMass) -> AffineMass {
        AffineMass { a: sub_lazy(&self.a, &rhs.a), b: sub_lazy(&self.b, &rhs.b) }
    }
}

impl Sub for AffineMass {
    type Output = AffineMass;
    fn sub(self, rhs: AffineMass) -> AffineMass {
        &self - &rhs
    }
}

impl<'a> SubAssign<&'a AffineMass> for AffineMass {
    fn sub_assign(&mut self, rhs: &'a AffineMass) {
        self.a = sub_lazy(&self.a, &rhs.a);
        self.b = sub_lazy(&self.b, &rhs.b);
    }
}

impl Neg for AffineMass {
    type Output = AffineMass;
    fn neg(self) -> AffineMass {
        AffineMass { a: -self.a, b: -self.b }
    }
}

impl<'a> Mul<&'a Rational> for &'a AffineMass {
    type Output = AffineMass;
    fn mul(self, k: &'a Rational) -> AffineMass {
        self.scale(k)
    }
}

impl core::iter::Sum for AffineMass {
    fn sum<I: Iterator<Item = AffineMass>>(iter: I) -> Self {
        iter.fold(AffineMass::zero(), |acc, x| acc + x)
    }
}

/// One end of an [`HRange`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub value: Rational,
    pub closed: bool,
}

impl Endpoint {
    pub fn closed(value: Rational) -> Self {
        Endpoint { value, closed: true }
    }

    pub fn open(value: Rational) -> Self {
        Endpoint { value, closed: false }
    }
}

/// An interval of the real line with optional infinite ends; used for truth
/// sets of affine predicates and for validity ranges of rule arithmetic.
///
/// Empty ranges are normalised to [`HRange::empty`] so that equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HRange {
    pub lower: Option<Endpoint>,
    pub upper: Option<Endpoint>,
    empty: bool,
}

impl HRange {
    pub fn all() -> Self {
        HRange { lower: None, upper: None, empty: false }
    }

    pub fn empty() -> Self {
        HRange { lower: None, upper: None, empty: true }
    }

    pub fn new(lower: Option<Endpoint>, upper: Option<Endpoint>) -> Self {
        HRange { lower, upper, empty: false }.normalized()
    }

    /// `[lo, hi]`
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        HRange::new(Some(Endpoint::closed(lo)), Some(Endpoint::closed(hi)))
    }

    /// `(-inf, hi]`
    pub fn at_most(hi: Rational) -> Self {
        HRange::new(None, Some(Endpoint::closed(hi)))
    }

    /// `[lo, +inf)`
    pub fn at_least(lo: Rational) -> Self {
        HRange::new(Some(Endpoint::closed(lo)), None)
    }

    /// `(-inf, hi)`
    pub fn below(hi: Rational) -> Self {
        HRange::new(None, Some(Endpoint::open(hi)))
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    fn normalized(self) -> Self {
        if self.empty {
            return HRange::empty();
        }
        if let (Some(lo), Some(hi)) = (&self.lower, &self.upper) {
            match lo.value.cmp(&hi.value) {
                Ordering::Greater => return HRange::empty(),
                Ordering::Equal if !(lo.closed && hi.closed) => return HRange::empty(),
                _ => {}
            }
        }
        self
    }

    pub fn contains(&self, h: &Rational) -> bool {
        if self.empty {
            return false;
        }
        let above = match &self.lower {
            None => true,
            Some(e) if e.closed => h >= &e.value,
            Some(e) => h > &e.value,
        };
        let below = match &self.upper {
            None => true,
            Some(e) if e.closed => h <= &e.value,
            Some(e) => h < &e.value,
        };
        above && below
    }

    pub fn intersect(&self, other: &HRange) -> HRange {
        if self.empty || other.empty {
            return HRange::empty();
        }
        let lower = tighter(&self.lower, &other.lower, Ordering::Greater);
        let upper = tighter(&self.upper, &other.upper, Ordering::Less);
        HRange::new(lower, upper)
    }

    /// Whether `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &HRange) -> bool {
        self.intersect(other) == *self
    }

    /// Truth set of `f(h) >= 0` (or `> 0` when `strict`).
    pub fn where_nonneg(f: &AffineMass, strict: bool) -> HRange {
        if f.b.is_zero() {
            let holds = if strict { f.a.is_positive() } else { !f.a.is_negative() };
            return if holds { HRange::all() } else { HRange::empty() };
        }
        let end = Endpoint { value: -&f.a / &f.b, closed: !strict };
        if f.b.is_positive() {
            HRange::new(Some(end), None)
        } else {
            HRange::new(None, Some(end))
        }
    }

    /// Truth set of `f(h) == 0`.
    pub fn where_zero(f: &AffineMass) -> HRange {
        if f.b.is_zero() {
            if f.a.is_zero() {
                HRange::all()
            } else {
                HRange::empty()
            }
        } else {
            let root = -&f.a / &f.b;
            HRange::closed(root.clone(), root)
        }
    }
}

fn tighter(a: &Option<Endpoint>, b: &Option<Endpoint>, prefer: Ordering) -> Option<Endpoint> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => match x.value.cmp(&y.value) {
            o if o == prefer => Some(x.clone()),
            Ordering::Equal => Some(Endpoint { value: x.value.clone(), closed: x.closed && y.closed }),
            _ => Some(y.clone()),
        },
    }
}

impl fmt::Display for HRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "{{}}");
        }
        match &self.lower {
            None => write!(f, "(-inf")?,
            Some(e) => write!(f, "{}{}", if e.closed { '[' } else { '(' }, format_rational(&e.value))?,
        }
        match &self.upper {
            None => write!(f, ", +inf)"),
            Some(e) => write!(f, ", {}{}", format_rational(&e.value), if e.closed { ']' } else { ')' }),
        }
    }
}

/// A bounded interval of background values `h`. The usual form is half-open
/// `[lo, hi)`; closed and point intervals (`[h, h]`) are also representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HInterval {
    lo: Endpoint,
    hi: Endpoint,
}

impl HInterval {
    /// `[lo, hi)`, requires `lo < hi`.
    pub fn half_open(lo: Rational, hi: Rational) -> Result<Self, NumericError> {
        if lo >= hi {
            return Err(NumericError::EmptyInterval { lo, hi });
        }
        Ok(HInterval { lo: Endpoint::closed(lo), hi: Endpoint::open(hi) })
    }

    /// `[lo, hi]`, requires `lo <= hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Result<Self, NumericError> {
        if lo > hi {
            return Err(NumericError::EmptyInterval { lo, hi });
        }
        Ok(HInterval { lo: Endpoint::closed(lo), hi: Endpoint::closed(hi) })
    }

    pub fn point(h: Rational) -> Self {
        HInterval { lo: Endpoint::closed(h.clone()), hi: Endpoint::closed(h) }
    }

    pub fn from_endpoints(lo: Endpoint, hi: Endpoint) -> Result<Self, NumericError> {
        let r = HRange::new(Some(lo.clone()), Some(hi.clone()));
        if r.is_empty() {
            return Err(NumericError::EmptyInterval { lo: lo.value, hi: hi.value });
        }
        Ok(HInterval { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo.value
    }

    pub fn hi(&self) -> &Rational {
        &self.hi.value
    }

    pub fn lo_closed(&self) -> bool {
        self.lo.closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi.closed
    }

    pub fn is_point(&self) -> bool {
        self.lo.value == self.hi.value
    }

    /// The single value of a point interval.
    pub fn as_point(&self) -> Option<&Rational> {
        self.is_point().then_some(&self.lo.value)
    }

    pub fn as_range(&self) -> HRange {
        HRange::new(Some(self.lo.clone()), Some(self.hi.clone()))
    }

    pub fn contains(&self, h: &Rational) -> bool {
        self.as_range().contains(h)
    }

    /// Splits at an interior crossing `c` into the part below `c` and the part
    /// from `c` on. When `c` is the (closed) lower end itself, the point `{c}`
    /// is split off instead.
    pub fn split_at(&self, c: &Rational) -> Option<(HInterval, HInterval)> {
        if !self.contains(c) || self.is_point() {
            return None;
        }
        if c == self.lo() {
            let left = HInterval::point(c.clone());
            let right = HInterval::from_endpoints(Endpoint::open(c.clone()), self.hi.clone()).ok()?;
            return Some((left, right));
        }
        let left = HInterval::from_endpoints(self.lo.clone(), Endpoint::open(c.clone())).ok()?;
        let right = HInterval::from_endpoints(Endpoint::closed(c.clone()), self.hi.clone()).ok()?;
        Some((left, right))
    }

    /// A representative interior value (the midpoint, or the point itself).
    pub fn midpoint(&self) -> Rational {
        (self.lo() + self.hi()) / int(2)
    }
}

impl fmt::Display for HInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{}", format_rational(self.lo()));
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo.closed { '[' } else { '(' },
            format_rational(self.lo()),
            format_rational(self.hi()),
            if self.hi.closed { ']' } else { ')' }
        )
    }
}

impl FromStr for HInterval {
    type Err = NumericError;

    /// `p/q` for a point, or `[p/q,r/s)` with any bracket combination.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || NumericError::BadInterval(s.to_string());
        let first = t.chars().next().ok_or_else(bad)?;
        if first != '[' && first != '(' {
            return Ok(HInterval::point(parse_rational(t)?));
        }
        let last = t.chars().last().ok_or_else(bad)?;
        if last != ']' && last != ')' {
            return Err(bad());
        }
        let inner = &t[1..t.len() - 1];
        let (lo, hi) = inner.split_once(',').ok_or_else(bad)?;
        HInterval::from_endpoints(
            Endpoint { value: parse_rational(lo)?, closed: first == '[' },
            Endpoint { value: parse_rational(hi)?, closed: last == ']' },
        )
    }
}

/// Outcome of deciding an affine predicate uniformly over an [`HInterval`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalDecision {
    AlwaysTrue,
    AlwaysFalse,
    /// The predicate changes truth value at `crossing`, inside the interval.
    Mixed(Rational),
}

impl IntervalDecision {
    /// Classifies a truth set against the interval.
    pub fn from_truth_set(truth: &HRange, interval: &HInterval) -> Self {
        let domain = interval.as_range();
        let inside = truth.intersect(&domain);
        if inside.is_empty() {
            return IntervalDecision::AlwaysFalse;
        }
        if inside == domain {
            return IntervalDecision::AlwaysTrue;
        }
        // the truth set meets the interval partially: one of its ends lies inside
        let lower_cut = match (&inside.lower, &domain.lower) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        };
        let crossing = if lower_cut {
            inside.lower.as_ref().map(|e| e.value.clone())
        } else {
            inside.upper.as_ref().map(|e| e.value.clone())
        };
        IntervalDecision::Mixed(crossing.unwrap_or_else(|| interval.lo().clone()))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, IntervalDecision::AlwaysTrue)
    }
}

/// Decides `x(h) >= 1` for every `h` in the interval (the instability test).
pub fn decide_ge_one(x: &AffineMass, interval: &HInterval) -> IntervalDecision {
    let shifted = AffineMass::new(sub_lazy(&x.a, &Rational::one()), x.b.clone());
    let (at_lo, at_hi) = (shifted.sign_at(interval.lo()), shifted.sign_at(interval.hi()));
    if at_lo.is_ge() && at_hi.is_ge() {
        return IntervalDecision::AlwaysTrue;
    }
    if at_lo.is_lt() && at_hi.is_lt() {
        return IntervalDecision::AlwaysFalse;
    }
    IntervalDecision::from_truth_set(&HRange::where_nonneg(&shifted, false), interval)
}

/// Decides `lo(h) <= x(h) < hi(h)` over the interval; `hi = None` is `+inf`.
///
/// When `hi` equals `lo` the mapping interval is the closed singleton `{lo}`
/// and membership is exact equality.
pub fn decide_in_half_open(
    x: &AffineMass,
    lo: &AffineMass,
    hi: Option<&AffineMass>,
    interval: &HInterval,
) -> Result<IntervalDecision, NumericError> {
    match hi {
        Some(hi) if hi != lo && holds_throughout(x, lo, hi, interval) => return Ok(IntervalDecision::AlwaysTrue),
        None => {
            let above = x - lo;
            if above.sign_at(interval.lo()).is_ge() && above.sign_at(interval.hi()).is_ge() {
                return Ok(IntervalDecision::AlwaysTrue);
            }
        }
        _ => {}
    }
    let domain = interval.as_range();
    if hi == Some(lo) {
        let truth = HRange::where_zero(&(x - lo));
        return Ok(IntervalDecision::from_truth_set(&truth, interval));
    }
    let mut truth = HRange::where_nonneg(&(x - lo), false);
    if let Some(hi) = hi {
        let width = hi - lo;
        let inverted = HRange::where_nonneg(&(-width), true);
        if !inverted.intersect(&domain).is_empty() {
            return Err(NumericError::DegenerateInterval);
        }
        truth = truth.intersect(&HRange::where_nonneg(&(hi - x), true));
    }
    Ok(IntervalDecision::from_truth_set(&truth, interval))
}

/// `lo <= x < hi` on the whole interval, read off the two ends since every
/// side is affine.
fn holds_throughout(x: &AffineMass, lo: &AffineMass, hi: &AffineMass, iv: &HInterval) -> bool {
    let above = x - lo;
    if above.sign_at(iv.lo()).is_lt() || above.sign_at(iv.hi()).is_lt() {
        return false;
    }
    let below = hi - x;
    let (u0, u1) = (below.sign_at(iv.lo()), below.sign_at(iv.hi()));
    let end_ok = |u: Ordering, closed: bool| if closed { u.is_gt() } else { u.is_ge() };
    end_ok(u0, iv.lo_closed()) && end_ok(u1, iv.hi_closed()) && (u0.is_gt() || u1.is_gt())
}

/// Decides exact equality `x(h) == p(h)` over the interval.
pub fn decide_equal(x: &AffineMass, p: &AffineMass, interval: &HInterval) -> IntervalDecision {
    if x == p {
        return IntervalDecision::AlwaysTrue;
    }
    IntervalDecision::from_truth_set(&HRange::where_zero(&(x - p)), interval)
}
