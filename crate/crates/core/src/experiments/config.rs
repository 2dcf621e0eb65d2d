//! Sweep configuration in a flat `key = value` format.
//!
//! ```text
//! # comments start with '#'
//! nodes = 5..100:5
//! p = 0.01, 0.05, 0.1
//! ratios = 0.5, 1, 2
//! delta = one            # or a list of delta/Tmax ratios
//! repetitions = 3
//! rng_seed = 42
//! skip_redundant = false
//! timing = false
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::temporal_graph::Time;

pub const DEFAULT_P_GRID: [f64; 12] = [0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5, 0.7, 0.9];
pub const DEFAULT_RATIO_GRID: [f64; 14] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0];
pub const DELTA_RATIOS: [f64; 5] = [0.01, 0.05, 0.1, 0.3, 0.5];

/// How delta is derived from Tmax.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule {
    One,
    /// `delta = max(1, round(r * Tmax))` for every ratio `r`.
    Ratios(Vec<f64>),
}

impl DeltaRule {
    /// Distinct deltas for `lifetime`, ascending.
    pub fn deltas(&self, lifetime: Time) -> Vec<Time> {
        match self {
            DeltaRule::One => vec![1],
            DeltaRule::Ratios(rs) => {
                let mut ds: Vec<Time> = rs
                    .iter()
                    .map(|r| ((r * f64::from(lifetime)).round() as Time).max(1))
                    .collect();
                ds.sort_unstable();
                ds.dedup();
                ds
            }
        }
    }
}

impl fmt::Display for DeltaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaRule::One => f.write_str("one"),
            DeltaRule::Ratios(rs) => f.write_str(&join(rs)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub nodes: Vec<usize>,
    pub p: Vec<f64>,
    /// Tmax / n ratios.
    pub ratios: Vec<f64>,
    pub delta: DeltaRule,
    pub repetitions: usize,
    pub rng_seed: u64,
    pub skip_redundant: bool,
    /// Record wall time per game. Off by default so that reruns produce
    /// identical files.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            nodes: (5..=100).step_by(5).collect(),
            p: DEFAULT_P_GRID.to_vec(),
            ratios: DEFAULT_RATIO_GRID.to_vec(),
            delta: DeltaRule::One,
            repetitions: 3,
            rng_seed: 0,
            skip_redundant: false,
            timing: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() || self.p.is_empty() || self.ratios.is_empty() {
            return Err(Error::InvalidParameter(
                "node, p and ratio grids must be non-empty".into(),
            ));
        }
        if let DeltaRule::Ratios(rs) = &self.delta {
            if rs.is_empty() || rs.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                return Err(Error::InvalidParameter("delta ratios must be positive".into()));
            }
        }
        if self.p.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParameter("p values must lie in [0, 1]".into()));
        }
        if self.ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidParameter("Tmax/n ratios must be positive".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "nodes = {}\np = {}\nratios = {}\ndelta = {}\nrepetitions = {}\nrng_seed = {}\nskip_redundant = {}\ntiming = {}\n",
            join(&self.nodes),
            join(&self.p),
            join(&self.ratios),
            self.delta,
            self.repetitions,
            self.rng_seed,
            self.skip_redundant,
            self.timing,
        )
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl FromStr for SweepConfig {
    type Err = Error;

    /// Missing keys keep their defaults.
    fn from_str(text: &str) -> Result<Self> {
        let mut config = SweepConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "nodes" => config.nodes = parse_usize_list(value).map_err(err)?,
                "p" => config.p = parse_f64_list(value).map_err(err)?,
                "ratios" => config.ratios = parse_f64_list(value).map_err(err)?,
                "delta" => {
                    config.delta = if value == "one" {
                        DeltaRule::One
                    } else if value == "ratios" {
                        DeltaRule::Ratios(DELTA_RATIOS.to_vec())
                    } else {
                        DeltaRule::Ratios(parse_f64_list(value).map_err(err)?)
                    }
                }
                "repetitions" => config.repetitions = parse_one(value).map_err(err)?,
                "rng_seed" => config.rng_seed = parse_one(value).map_err(err)?,
                "skip_redundant" => config.skip_redundant = parse_one(value).map_err(err)?,
                "timing" => config.timing = parse_one(value).map_err(err)?,
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        config.validate()?;
        Ok(config)
    }
}

fn parse_one<T: FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse `{s}`"))
}

/// Comma-separated items; an item `a..b:s` expands to `a, a+s, ..., <= b`.
fn parse_usize_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match item.split_once("..") {
            Some((a, rest)) => {
                let (b, step) = rest.split_once(':').unwrap_or((rest, "1"));
                let (a, b, step): (usize, usize, usize) = (parse_one(a)?, parse_one(b)?, parse_one(step)?);
                if step == 0 {
                    return Err("range step must be positive".into());
                }
                out.extend((a..=b).step_by(step));
            }
            None => out.push(parse_one(item)?),
        }
    }
    Ok(out)
}

fn parse_f64_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        match item.split_once("..") {
            Some((a, rest)) => {
                let (b, step) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("real range `{item}` needs a step"))?;
                let (a, b, step): (f64, f64, f64) = (parse_one(a)?, parse_one(b)?, parse_one(step)?);
                if step <= 0.0 {
                    return Err("range step must be positive".into());
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| a + i as f64 * step));
            }
            None => out.push(parse_one(item)?),
        }
    }
    Ok(out)
}
