//! Exact text snapshots of a configuration.
//!
//! ```text
//! SPLITSIM 1
//! d=2 t=8 order=parallel
//! h=[5/7,13/18)
//! n=3/1+0/1*h
//! 0 0 | 1/2 | 1/4
//! ```
//!
//! Body lines are `x1 … xd | a | b` for the mass `a + b*h`, sorted by site.
//! Sites whose mass equals the background are omitted. The background is the
//! constant `h` for a point value and the symbol `h` for an interval.

use std::fmt::Write as _;
use std::path::Path;

use splitsim_core::engine::{EvolutionState, SplittingOrder};
use splitsim_core::lattice::{Site, SparseConfiguration, MAX_DIM};
use splitsim_core::numeric::{format_rational, parse_rational, AffineMass, HInterval, Rational};
use thiserror::Error;

pub const MAGIC: &str = "SPLITSIM 1";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> SnapshotError {
    SnapshotError::Parse { line, message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub d: usize,
    pub t: u64,
    pub order: SplittingOrder,
    pub interval: HInterval,
    pub n: AffineMass,
    pub config: SparseConfiguration,
}

/// `a/b+c/d*h` without spaces, both parts reduced.
pub fn format_mass_compact(m: &AffineMass) -> String {
    format!("{}+{}*h", format_rational(&m.a), format_rational(&m.b))
}

pub fn background_for(interval: &HInterval) -> AffineMass {
    match interval.as_point() {
        Some(h) => AffineMass::constant(h.clone()),
        None => AffineMass::h(),
    }
}

impl Snapshot {
    pub fn from_state(state: &EvolutionState) -> Snapshot {
        Snapshot {
            d: state.dim(),
            t: state.time(),
            order: state.order(),
            interval: state.interval().clone(),
            n: state.n().clone(),
            config: state.config().clone(),
        }
    }

    /// The same state with `h` substituted, as a point snapshot.
    pub fn evaluate_at(&self, h: &Rational) -> Snapshot {
        Snapshot {
            d: self.d,
            t: self.t,
            order: self.order,
            interval: HInterval::point(h.clone()),
            n: AffineMass::constant(self.n.eval(h)),
            config: self.config.evaluate_at(h),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "d={} t={} order={}", self.d, self.t, self.order.name());
        let _ = writeln!(s, "h={}", self.interval);
        let _ = writeln!(s, "n={}", format_mass_compact(&self.n));
        for (x, m) in self.config.sorted_entries() {
            let coords: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
            let _ = writeln!(s, "{} | {} | {}", coords.join(" "), format_rational(&m.a), format_rational(&m.b));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Snapshot, SnapshotError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header = |what: &str| lines.next().ok_or_else(|| parse_err(0, format!("missing {what} line")));

        let (ln, magic) = header("format")?;
        if magic.trim() != MAGIC {
            return Err(parse_err(ln, format!("expected `{MAGIC}`")));
        }

        let (ln, run) = header("run")?;
        let (mut d, mut t, mut order) = (None, None, None);
        for field in run.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| parse_err(ln, format!("bad field `{field}`")))?;
            match k {
                "d" => d = Some(v.parse::<usize>().map_err(|_| parse_err(ln, "bad dimension"))?),
                "t" => t = Some(v.parse::<u64>().map_err(|_| parse_err(ln, "bad time"))?),
                "order" => order = Some(SplittingOrder::parse(v).ok_or_else(|| parse_err(ln, "unknown order"))?),
                _ => return Err(parse_err(ln, format!("unknown field `{k}`"))),
            }
        }
        let d = d.ok_or_else(|| parse_err(ln, "missing d"))?;
        if !(1..=MAX_DIM).contains(&d) {
            return Err(parse_err(ln, format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        let t = t.ok_or_else(|| parse_err(ln, "missing t"))?;
        let order = order.ok_or_else(|| parse_err(ln, "missing order"))?;

        let (ln, hline) = header("h")?;
        let hv = hline.strip_prefix("h=").ok_or_else(|| parse_err(ln, "expected `h=`"))?;
        let interval: HInterval = hv.parse().map_err(|e| parse_err(ln, format!("{e}")))?;

        let (ln, nline) = header("n")?;
        let nv = nline.strip_prefix("n=").ok_or_else(|| parse_err(ln, "expected `n=`"))?;
        let n: AffineMass = nv.parse().map_err(|e| parse_err(ln, format!("{e}")))?;

        let mut config = SparseConfiguration::new(d, background_for(&interval));
        let mut seen = std::collections::BTreeSet::new();
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 3 {
                return Err(parse_err(ln, "expected `coords | a | b`"));
            }
            let coords: Vec<i32> = parts[0]
                .split_whitespace()
                .map(|c| c.parse::<i32>())
                .collect::<Result<_, _>>()
                .map_err(|_| parse_err(ln, "bad coordinate"))?;
            if coords.len() != d {
                return Err(parse_err(ln, format!("expected {d} coordinates, found {}", coords.len())));
            }
            let a = parse_rational(parts[1]).map_err(|e| parse_err(ln, format!("{e}")))?;
            let b = parse_rational(parts[2]).map_err(|e| parse_err(ln, format!("{e}")))?;
            let site = Site::new(&coords);
            if !seen.insert(site) {
                return Err(parse_err(ln, format!("duplicate site {site}")));
            }
            config.set(site, AffineMass::new(a, b));
        }
        Ok(Snapshot { d, t, order, interval, n, config })
    }
}

pub fn save_snapshot(snap: &Snapshot, path: &Path) -> Result<(), SnapshotError> {
    std::fs::write(path, snap.to_text())?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    Snapshot::parse(&std::fs::read_to_string(path)?)
}
