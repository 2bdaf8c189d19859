//! Text form of automaton label grids.
//!
//! ```text
//! SPLITSIM-CA 1
//! automaton=octagon d=2 t=135
//! -6 0 | p
//! ```
//!
//! Only cells differing from the default label are listed, sorted by site.

use std::fmt::Write as _;

use splitsim_core::automata::{AutomatonSpec, CAState};
use splitsim_core::lattice::Site;

use crate::snapshot::SnapshotError;

pub const GRID_MAGIC: &str = "SPLITSIM-CA 1";

pub fn format_grid(spec: &AutomatonSpec, state: &CAState) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{GRID_MAGIC}\nautomaton={} d={} t={}", spec.name, state.dim(), state.t);
    for (x, l) in state.sorted_entries() {
        let coords: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "{} | {}", coords.join(" "), spec.label_name(l));
    }
    s
}

/// Parses a grid written for `spec`.
pub fn parse_grid(spec: &AutomatonSpec, text: &str) -> Result<CAState, SnapshotError> {
    let err = |line: usize, message: String| SnapshotError::Parse { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == GRID_MAGIC => {}
        _ => return Err(err(1, format!("expected `{GRID_MAGIC}`"))),
    }
    let (ln, head) = lines.next().ok_or_else(|| err(2, "missing header".into()))?;
    let (mut name, mut d, mut t) = (None, None, None);
    for field in head.split_whitespace() {
        match field.split_once('=') {
            Some(("automaton", v)) => name = Some(v.to_string()),
            Some(("d", v)) => d = v.parse::<usize>().ok(),
            Some(("t", v)) => t = v.parse::<u64>().ok(),
            _ => return Err(err(ln, format!("bad field `{field}`"))),
        }
    }
    let (Some(name), Some(d), Some(t)) = (name, d, t) else {
        return Err(err(ln, "header needs automaton, d and t".into()));
    };
    if name != spec.name || d != spec.dim {
        return Err(err(ln, format!("grid is for {name} in dimension {d}, not {} in {}", spec.name, spec.dim)));
    }
    let mut state = CAState::new(d, spec.default);
    state.t = t;
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (cs, label) = line.split_once('|').ok_or_else(|| err(ln, "expected `coords | label`".into()))?;
        let coords: Vec<i32> = cs
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| err(ln, "bad coordinate".into()))?;
        if coords.len() != d {
            return Err(err(ln, format!("expected {d} coordinates")));
        }
        let l = spec.label(label.trim()).ok_or_else(|| err(ln, format!("unknown label `{}`", label.trim())))?;
        state.set(Site::new(&coords), l);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitsim_core::automata::{builtin_octagon, builtin_square};

    #[test]
    fn round_trip() {
        let spec = builtin_octagon();
        let text = format_grid(&spec, &spec.initial);
        let back = parse_grid(&spec, &text).unwrap();
        assert_eq!(back, spec.initial);
        assert_eq!(format_grid(&spec, &back), text);
        assert!(parse_grid(&builtin_square(), &text).is_err());
    }
}
