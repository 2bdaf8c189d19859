//! Plain-text automaton description.
//!
//! ```text
//! automaton square
//! dim 2
//! labels e h p m m' c d
//! default h
//! class s = e h p
//! 1: h | s s s s -> h
//! override 20: e | m q q c -> c'
//! at 0 0 = d
//! ```
//!
//! Rule numbers are optional (lines are numbered from 1 otherwise). `*` is the
//! wildcard. `at` lines list the non-default cells of the initial grid.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use thiserror::Error;

use super::{AutomatonSpec, CAState, LabelId, LabelMask, Pattern, Rule};
use crate::lattice::{Site, MAX_DIM};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct RuleParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> RuleParseError {
    RuleParseError { line, message: message.into() }
}

pub fn parse_automaton(text: &str) -> Result<AutomatonSpec, RuleParseError> {
    let mut name = String::from("unnamed");
    let mut dim: Option<usize> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut default: Option<LabelId> = None;
    let mut classes: Vec<(String, LabelMask)> = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();
    let mut cells: Vec<(usize, Site, String)> = Vec::new();

    let find_label = |labels: &[String], s: &str| labels.iter().position(|l| l == s).map(|i| LabelId(i as u8));

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "automaton" => name = rest.to_string(),
            "dim" => {
                let d: usize = rest.parse().map_err(|_| err(ln, "bad dimension"))?;
                if !(1..=MAX_DIM).contains(&d) {
                    return Err(err(ln, "dimension out of range"));
                }
                dim = Some(d);
            }
            "labels" => {
                labels = rest.split_whitespace().map(str::to_string).collect();
                if labels.is_empty() || labels.len() > 32 {
                    return Err(err(ln, "need 1..=32 labels"));
                }
            }
            "default" => {
                default = Some(find_label(&labels, rest).ok_or_else(|| err(ln, "unknown default label"))?)
            }
            "class" => {
                let (cname, members) = rest.split_once('=').ok_or_else(|| err(ln, "expected `class name = labels`"))?;
                let mut mask: LabelMask = 0;
                for m in members.split_whitespace() {
                    let l = find_label(&labels, m).ok_or_else(|| err(ln, alloc::format!("unknown label {m}")))?;
                    mask |= 1 << l.0;
                }
                classes.push((cname.trim().to_string(), mask));
            }
            "at" => {
                let (coords, label) = rest.split_once('=').ok_or_else(|| err(ln, "expected `at x y = label`"))?;
                let c: Result<Vec<i32>, _> = coords.split_whitespace().map(str::parse).collect();
                let c = c.map_err(|_| err(ln, "bad coordinate"))?;
                if c.is_empty() || c.len() > MAX_DIM {
                    return Err(err(ln, "bad coordinate count"));
                }
                cells.push((ln, Site::new(&c), label.trim().to_string()));
            }
            _ => {
                let d = dim.ok_or_else(|| err(ln, "rule before `dim`"))?;
                rules.push(parse_rule(line, ln, rules.len() as u32 + 1, d, &labels, &classes)?);
            }
        }
    }
    let dim = dim.ok_or_else(|| err(0, "missing `dim`"))?;
    let default = default.ok_or_else(|| err(0, "missing `default`"))?;
    let mut initial = CAState::new(dim, default);
    for (ln, site, label) in cells {
        if site.dim() != dim {
            return Err(err(ln, "coordinate count differs from dim"));
        }
        let l = find_label(&labels, &label).ok_or_else(|| err(ln, alloc::format!("unknown label {label}")))?;
        initial.set(site, l);
    }
    let spec = AutomatonSpec { name, dim, labels, default, classes, rules, initial };
    spec.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(spec)
}

fn parse_rule(
    line: &str,
    ln: usize,
    fallback_number: u32,
    dim: usize,
    labels: &[String],
    classes: &[(String, LabelMask)],
) -> Result<Rule, RuleParseError> {
    let mut body = line;
    let mut overrides = false;
    if let Some(r) = body.strip_prefix("override") {
        overrides = true;
        body = r.trim_start();
    }
    let mut number = fallback_number;
    if let Some((num, r)) = body.split_once(':') {
        number = num.trim().parse().map_err(|_| err(ln, "bad rule number"))?;
        body = r;
    }
    let (lhs, result) = body.split_once("->").ok_or_else(|| err(ln, "expected `->`"))?;
    let (center, nbrs) = lhs.split_once('|').ok_or_else(|| err(ln, "expected `|`"))?;
    let pattern = |tok: &str| -> Result<Pattern, RuleParseError> {
        if tok == "*" {
            return Ok(Pattern::Any);
        }
        if let Some(i) = labels.iter().position(|l| l == tok) {
            return Ok(Pattern::Label(LabelId(i as u8)));
        }
        if let Some(c) = classes.iter().position(|(n, _)| n == tok) {
            return Ok(Pattern::Class(c));
        }
        Err(err(ln, alloc::format!("unknown symbol {tok}")))
    };
    let center = pattern(center.trim())?;
    let neighbors: Result<Vec<Pattern>, _> = nbrs.split_whitespace().map(pattern).collect();
    let neighbors = neighbors?;
    if neighbors.len() != 2 * dim {
        return Err(err(ln, alloc::format!("expected {} neighbour symbols", 2 * dim)));
    }
    let result = match pattern(result.trim())? {
        Pattern::Label(l) => l,
        _ => return Err(err(ln, "rule result must be a label")),
    };
    Ok(Rule { number, center, neighbors, result, overrides })
}

/// Canonical text; [`parse_automaton`] inverts it exactly.
pub fn format_automaton(spec: &AutomatonSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "automaton {}", spec.name);
    let _ = writeln!(out, "dim {}", spec.dim);
    let _ = writeln!(out, "labels {}", spec.labels.join(" "));
    let _ = writeln!(out, "default {}", spec.label_name(spec.default));
    for (name, mask) in &spec.classes {
        let members: Vec<&str> = (0..spec.labels.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| spec.labels[i].as_str())
            .collect();
        let _ = writeln!(out, "class {} = {}", name, members.join(" "));
    }
    for r in &spec.rules {
        let nb: Vec<String> = r.neighbors.iter().map(|p| spec.pattern_name(*p)).collect();
        let _ = writeln!(
            out,
            "{}{}: {} | {} -> {}",
            if r.overrides { "override " } else { "" },
            r.number,
            spec.pattern_name(r.center),
            nb.join(" "),
            spec.label_name(r.result)
        );
    }
    for (site, l) in spec.initial.sorted_entries() {
        let coords: Vec<String> = site.coords().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "at {} = {}", coords.join(" "), spec.label_name(l));
    }
    out
}
