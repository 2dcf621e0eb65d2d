//! Ingestion of interaction logs (`network_id u v timestamp` rows) into
//! temporal graphs, one per network.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tracing::warn;

use crate::error::{Error, Result};
use crate::temporal_graph::{EdgeRecord, TemporalGraph, Time, Variant};

/// How raw timestamps become time steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucketing {
    #[default]
    /// Distinct timestamps ranked `1, 2, ...`.
    Raw,
    /// `floor((ts - first) / w) + 1`.
    FixedWidth(f64),
}

impl fmt::Display for Bucketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bucketing::Raw => f.write_str("raw"),
            Bucketing::FixedWidth(w) => write!(f, "fixed:{w}"),
        }
    }
}

impl FromStr for Bucketing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "raw" {
            return Ok(Bucketing::Raw);
        }
        let width = s
            .strip_prefix("fixed:")
            .and_then(|w| w.parse::<f64>().ok())
            .filter(|w| w.is_finite() && *w > 0.0)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("bucketing must be raw or fixed:<w> with w > 0, got `{s}`"))
            })?;
        Ok(Bucketing::FixedWidth(width))
    }
}

/// What to do with repeated contacts between the same two nodes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    /// Keep the earliest step per pair (simple graph).
    #[default]
    FirstLabel,
    /// Keep every distinct step as a parallel record.
    Multiedge,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::FirstLabel => "first",
            Reduction::Multiedge => "multi",
        })
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Reduction::FirstLabel),
            "multi" => Ok(Reduction::Multiedge),
            _ => Err(Error::InvalidParameter(format!(
                "reduction must be first or multi, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub network: String,
    pub u: String,
    pub v: String,
    pub timestamp: f64,
}

/// One ingested network. `id_map[i]` is the original id of node `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestedNetwork {
    pub network: String,
    pub id_map: Vec<String>,
    pub graph: TemporalGraph,
}

/// Parses rows separated by commas or whitespace. A first line whose
/// timestamp is not a number is taken as a header. Self-loops are dropped
/// with a warning.
pub fn parse_records(text: &str) -> Result<Vec<InteractionRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `network_id u v timestamp`, found {} fields", fields.len()),
            });
        }
        let timestamp = match fields[3].parse::<f64>() {
            Ok(ts) if ts.is_finite() && ts >= 0.0 => ts,
            Ok(_) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("timestamp `{}` must be a non-negative number", fields[3]),
                })
            }
            Err(_) if out.is_empty() && !seen_data_before(text, i) => continue,
            Err(_) => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("timestamp `{}` is not a number", fields[3]),
                })
            }
        };
        if fields[1] == fields[2] {
            warn!(line = line_no, "dropping self-loop on {}", fields[1]);
            continue;
        }
        out.push(InteractionRecord {
            network: fields[0].to_string(),
            u: fields[1].to_string(),
            v: fields[2].to_string(),
            timestamp,
        });
    }
    Ok(out)
}

// true if a non-comment line precedes line index `i`
fn seen_data_before(text: &str, i: usize) -> bool {
    text.lines()
        .take(i)
        .any(|l| !l.trim().is_empty() && !l.trim().starts_with('#'))
}

/// Builds one graph per network id, in id order.
pub fn ingest_str(text: &str, bucketing: Bucketing, reduction: Reduction) -> Result<Vec<IngestedNetwork>> {
    let records = parse_records(text)?;
    let mut by_network: BTreeMap<&str, Vec<&InteractionRecord>> = BTreeMap::new();
    for r in &records {
        by_network.entry(r.network.as_str()).or_default().push(r);
    }
    let mut out = Vec::new();
    for (network, rows) in by_network {
        match build_network(network, &rows, bucketing, reduction)? {
            Some(net) => out.push(net),
            None => warn!(network, "skipping empty network"),
        }
    }
    Ok(out)
}

pub fn ingest(path: &Path, bucketing: Bucketing, reduction: Reduction) -> Result<Vec<IngestedNetwork>> {
    ingest_str(&fs::read_to_string(path)?, bucketing, reduction)
}

/// Ingests several files in parallel, keeping the input order.
pub fn ingest_files(
    paths: &[PathBuf],
    bucketing: Bucketing,
    reduction: Reduction,
) -> Result<Vec<Vec<IngestedNetwork>>> {
    paths.par_iter().map(|p| ingest(p, bucketing, reduction)).collect()
}

fn build_network(
    network: &str,
    rows: &[&InteractionRecord],
    bucketing: Bucketing,
    reduction: Reduction,
) -> Result<Option<IngestedNetwork>> {
    if rows.is_empty() {
        return Ok(None);
    }
    let ids: BTreeSet<&str> = rows.iter().flat_map(|r| [r.u.as_str(), r.v.as_str()]).collect();
    let id_map: Vec<String> = sorted_ids(ids);
    let index: HashMap<&str, usize> = id_map.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let step = step_map(rows.iter().map(|r| r.timestamp), bucketing)?;
    let mut labels: BTreeMap<(usize, usize), BTreeSet<Time>> = BTreeMap::new();
    for r in rows {
        let (a, b) = (index[r.u.as_str()], index[r.v.as_str()]);
        labels
            .entry((a.min(b), a.max(b)))
            .or_default()
            .insert(step(r.timestamp));
    }
    let lifetime = labels.values().flat_map(|s| s.iter().copied()).max().unwrap_or(1);
    let (variant, edges) = match reduction {
        Reduction::FirstLabel => (
            Variant::Simple,
            labels
                .iter()
                .map(|(&(u, v), s)| EdgeRecord::single(u, v, *s.first().expect("non-empty")))
                .collect(),
        ),
        Reduction::Multiedge => (
            Variant::Multiedge,
            labels
                .iter()
                .flat_map(|(&(u, v), s)| s.iter().map(move |&t| EdgeRecord::single(u, v, t)))
                .collect(),
        ),
    };
    let graph = TemporalGraph::new(id_map.len(), lifetime, variant, edges)?;
    Ok(Some(IngestedNetwork {
        network: network.to_string(),
        id_map,
        graph,
    }))
}

// numeric ids in numeric order, then the rest lexicographically
fn sorted_ids(ids: BTreeSet<&str>) -> Vec<String> {
    let mut v: Vec<&str> = ids.into_iter().collect();
    v.sort_by(|a, b| match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        _ => a.cmp(b),
    });
    v.into_iter().map(str::to_string).collect()
}

fn step_map(timestamps: impl Iterator<Item = f64>, bucketing: Bucketing) -> Result<Box<dyn Fn(f64) -> Time>> {
    let mut all: Vec<f64> = timestamps.collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    match bucketing {
        Bucketing::Raw => Ok(Box::new(move |ts| {
            let rank = all.partition_point(|&x| x < ts);
            (rank + 1) as Time
        })),
        Bucketing::FixedWidth(w) => {
            let first = all[0];
            let max_step = ((all[all.len() - 1] - first) / w).floor() + 1.0;
            if max_step > f64::from(Time::MAX) {
                return Err(Error::InvalidParameter(format!(
                    "width {w} yields more than {} steps",
                    Time::MAX
                )));
            }
            Ok(Box::new(move |ts| ((ts - first) / w).floor() as Time + 1))
        }
    }
}

/// Writes `<network>.tg` and `<network>.ids` for every network. Returns the
/// graph paths.
pub fn write_networks(dir: &Path, networks: &[IngestedNetwork]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for net in networks {
        let stem: String = net
            .network
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        let graph_path = dir.join(format!("{stem}.tg"));
        fs::write(&graph_path, net.graph.to_text())?;
        let ids: String = net
            .id_map
            .iter()
            .enumerate()
            .map(|(i, id)| format!("{i} {id}\n"))
            .collect();
        fs::write(dir.join(format!("{stem}.ids")), ids)?;
        out.push(graph_path);
    }
    Ok(out)
}
