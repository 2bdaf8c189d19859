//! JSON reports. Exact values are strings (`p/q`, `a/b + c/d*h`, intervals);
//! no field holds a decimal approximation.

use serde::Serialize;
use splitsim_core::analysis::{BallBounds, ScanRow, ShapeVerdict, TheoryConstants};
use splitsim_core::conformance::{ConformanceReport, FailureKind, PieceOutcome, PublishedOutcome, RuleCheckStatus};
use splitsim_core::lattice::Site;
use splitsim_core::numeric::format_rational;

fn coords(s: &Site) -> Vec<i32> {
    s.coords().to_vec()
}

#[derive(Serialize)]
pub struct PieceJson {
    pub interval: String,
    pub outcome: String,
    pub horizon: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_at: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize)]
pub struct BisectionJson {
    pub interval: String,
    pub crossing: String,
    pub t: u64,
    pub site: Vec<i32>,
    pub from_engine: bool,
}

#[derive(Serialize)]
pub struct ConformanceJson {
    pub automaton: String,
    pub mapping: String,
    pub d: usize,
    pub n: String,
    pub interval: String,
    pub offset: u64,
    pub t_max: u64,
    pub success: bool,
    pub horizon: u64,
    pub pieces: Vec<PieceJson>,
    pub bisections: Vec<BisectionJson>,
}

fn failure_detail(kind: &FailureKind) -> String {
    match kind {
        FailureKind::Membership(v) => format!(
            "mass {} at {:?} not in {} of label {}",
            v.mass,
            coords(&v.site),
            v.interval,
            v.label
        ),
        FailureKind::GrowthCluster { site, in_cluster } => {
            format!("growth cluster differs at {:?} (in cluster: {in_cluster})", coords(site))
        }
        FailureKind::Automaton(e) => format!("automaton: {e}"),
        FailureKind::Mapping(e) => format!("mapping: {e}"),
        FailureKind::Engine(e) => format!("engine: {e}"),
    }
}

impl From<&ConformanceReport> for ConformanceJson {
    fn from(r: &ConformanceReport) -> Self {
        let pieces = r
            .pieces
            .iter()
            .map(|p| {
                let (outcome, failed_at, detail) = match &p.outcome {
                    PieceOutcome::Verified => ("verified".to_string(), None, None),
                    PieceOutcome::Failed { t, kind } => ("failed".to_string(), Some(*t), Some(failure_detail(kind))),
                    PieceOutcome::Inconclusive { t, crossing } => {
                        ("inconclusive".to_string(), Some(*t), Some(format!("crossing {}", format_rational(crossing))))
                    }
                };
                PieceJson { interval: p.interval.to_string(), outcome, horizon: p.horizon, failed_at, detail }
            })
            .collect();
        let bisections = r
            .bisections
            .iter()
            .map(|b| BisectionJson {
                interval: b.interval.to_string(),
                crossing: format_rational(&b.crossing),
                t: b.t,
                site: coords(&b.site),
                from_engine: b.from_engine,
            })
            .collect();
        ConformanceJson {
            automaton: r.automaton.clone(),
            mapping: r.mapping.clone(),
            d: r.d,
            n: r.n.to_string(),
            interval: r.interval.to_string(),
            offset: r.offset,
            t_max: r.t_max,
            success: r.success(),
            horizon: r.horizon(),
            pieces,
            bisections,
        }
    }
}

#[derive(Serialize)]
pub struct RuleCheckJson {
    pub rule: u32,
    pub listed_as: String,
    /// `reproduced`, `erratum` or `structural`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed_result: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed_validity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds_on_interval: Option<bool>,
}

impl From<&PublishedOutcome> for RuleCheckJson {
    fn from(o: &PublishedOutcome) -> Self {
        let status = match o.status {
            RuleCheckStatus::Reproduced => "reproduced",
            RuleCheckStatus::Erratum { .. } => "erratum",
            RuleCheckStatus::Structural => "structural",
        };
        RuleCheckJson {
            rule: o.check.rule,
            listed_as: o.check.listed_as.clone(),
            status: status.into(),
            computed_result: o.report.as_ref().map(|r| r.result.to_string()),
            computed_validity: o.report.as_ref().map(|r| r.validity.to_string()),
            holds_on_interval: o.report.as_ref().map(|r| r.holds_on_interval),
        }
    }
}

#[derive(Serialize)]
pub struct ShapeJson {
    pub polygon: String,
    pub d: usize,
    pub n: String,
    pub h: String,
    pub t: u64,
    pub scale: String,
    pub epsilon: String,
    pub toppled: usize,
    pub metric: String,
    pub inner_ok: bool,
    pub outer_ok: bool,
    pub uncovered: usize,
    pub outside: usize,
    pub inner_gap: String,
    pub outer_excess: String,
}

impl ShapeJson {
    #[allow(clippy::too_many_arguments)]
    pub fn new(polygon: &str, d: usize, n: String, h: String, t: u64, scale: String, epsilon: String, toppled: usize, v: &ShapeVerdict) -> Self {
        ShapeJson {
            polygon: polygon.into(),
            d,
            n,
            h,
            t,
            scale,
            epsilon,
            toppled,
            metric: format!("{:?}", v.metric),
            inner_ok: v.inner_ok,
            outer_ok: v.outer_ok,
            uncovered: v.uncovered,
            outside: v.outside,
            inner_gap: format_rational(&v.inner_gap),
            outer_excess: format_rational(&v.outer_excess),
        }
    }
}

/// Exact parts of a ball-bound check; radii and margins are floating point
/// and only appear in the human summary.
#[derive(Serialize)]
pub struct BallJson {
    pub d: usize,
    pub n: String,
    pub h: String,
    pub epsilon: String,
    pub toppled: usize,
    pub inner_norm_sq: i64,
    pub outer_norm_sq: i64,
}

impl BallJson {
    pub fn new(b: &BallBounds, toppled: usize) -> Self {
        BallJson {
            d: b.d,
            n: format_rational(&b.n),
            h: format_rational(&b.h),
            epsilon: format_rational(&b.eps),
            toppled,
            inner_norm_sq: b.inner_sq,
            outer_norm_sq: b.outer_sq,
        }
    }
}

#[derive(Serialize)]
pub struct ConstantsJson {
    pub d: usize,
    pub p: String,
    pub q: String,
    pub h_star: String,
    pub c_prime: String,
    pub upper_bound: String,
    pub flipped_closed_form: String,
}

impl From<&TheoryConstants> for ConstantsJson {
    fn from(c: &TheoryConstants) -> Self {
        ConstantsJson {
            d: c.d,
            p: format_rational(&c.p),
            q: format_rational(&c.q),
            h_star: format_rational(&c.h_star),
            c_prime: format_rational(&c.c_prime),
            upper_bound: format_rational(&c.upper_bound),
            flipped_closed_form: format_rational(&c.flipped_closed_form),
        }
    }
}

#[derive(Serialize)]
pub struct ScanJson {
    pub d: usize,
    pub h: String,
    pub n: String,
    pub order: String,
    pub verdict: String,
    pub toppled: Option<usize>,
    pub steps: Option<u64>,
    pub growth: Vec<usize>,
}

impl From<&ScanRow> for ScanJson {
    fn from(r: &ScanRow) -> Self {
        ScanJson {
            d: r.d,
            h: format_rational(&r.h),
            n: format_rational(&r.n),
            order: r.order.name(),
            verdict: r.verdict(),
            toppled: r.toppled,
            steps: r.steps,
            growth: r.growth.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}
