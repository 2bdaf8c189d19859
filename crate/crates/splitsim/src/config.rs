//! Run configuration and its TOML form.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use splitsim_core::engine::{EngineError, EvolutionState, RunBudget, SplittingOrder};
use splitsim_core::numeric::{AffineMass, HInterval};
use thiserror::Error;

use crate::snapshot::format_mass_compact;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

/// Everything needed to start and bound one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub d: usize,
    pub n: AffineMass,
    pub h: HInterval,
    pub order: SplittingOrder,
    pub max_steps: u64,
    pub max_radius: Option<i64>,
    /// Directory for snapshots, traces and frames.
    pub out_dir: Option<PathBuf>,
    /// Write a snapshot every this many steps (0: final state only).
    pub frame_every: u64,
}

/// On-disk form; exact values are kept as strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    d: usize,
    n: String,
    h: String,
    order: String,
    max_steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_radius: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    out_dir: Option<String>,
    #[serde(default)]
    frame_every: u64,
}

impl RunConfig {
    pub fn new(d: usize, n: AffineMass, h: HInterval, order: SplittingOrder) -> RunConfig {
        RunConfig { d, n, h, order, max_steps: 1_000_000, max_radius: None, out_dir: None, frame_every: 0 }
    }

    pub fn budget(&self) -> RunBudget {
        RunBudget { max_steps: self.max_steps, max_radius: self.max_radius, certify: false }
    }

    pub fn init(&self) -> Result<EvolutionState, EngineError> {
        EvolutionState::init(self.d, self.n.clone(), self.h.clone(), self.order)
    }

    pub fn to_text(&self) -> String {
        let raw = RawConfig {
            d: self.d,
            n: format_mass_compact(&self.n),
            h: self.h.to_string(),
            order: self.order.name(),
            max_steps: self.max_steps,
            max_radius: self.max_radius,
            out_dir: self.out_dir.as_ref().map(|p| p.display().to_string()),
            frame_every: self.frame_every,
        };
        toml::to_string(&raw).expect("plain table serializes")
    }

    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        Ok(RunConfig {
            d: raw.d,
            n: raw.n.parse().map_err(|e| field("n", format!("{e}")))?,
            h: raw.h.parse().map_err(|e| field("h", format!("{e}")))?,
            order: SplittingOrder::parse(&raw.order).ok_or_else(|| field("order", raw.order.clone()))?,
            max_steps: raw.max_steps,
            max_radius: raw.max_radius,
            out_dir: raw.out_dir.map(PathBuf::from),
            frame_every: raw.frame_every,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitsim_core::numeric::rat;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::new(
            2,
            AffineMass::from_ints(5, -5),
            HInterval::half_open(rat(7, 10), rat(40, 57)).unwrap(),
            SplittingOrder::SingleSiteRandom(9),
        );
        c.max_radius = Some(30);
        c.out_dir = Some("runs/a".into());
        let text = c.to_text();
        assert_eq!(RunConfig::parse(&text).unwrap(), c);
        assert!(text.contains("n = \"5/1+-5/1*h\""));
        assert!(c.init().is_ok());
    }

    #[test]
    fn bad_fields_are_named() {
        let e = RunConfig::parse("d = 1\nn = \"4\"\nh = \"[1,0)\"\norder = \"parallel\"\nmax_steps = 5\n").unwrap_err();
        assert!(e.to_string().starts_with("h:"), "{e}");
        assert!(RunConfig::parse("d = 1\nbogus = 2\n").is_err());
    }
}
