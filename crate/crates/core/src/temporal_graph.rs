//! Temporal graphs: a static graph whose edges carry time labels in
//! `[1, lifetime]`, in three flavours (one label per edge, label sets per
//! edge, or parallel single-label edges).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

pub type NodeId = usize;
pub type Time = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Simple,
    Multilabel,
    Multiedge,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Simple => "simple",
            Variant::Multilabel => "multilabel",
            Variant::Multiedge => "multiedge",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simple" => Ok(Variant::Simple),
            "multilabel" => Ok(Variant::Multilabel),
            "multiedge" => Ok(Variant::Multiedge),
            other => Err(Error::InvalidParameter(format!("unknown variant `{other}`"))),
        }
    }
}

/// One edge record. Endpoints are stored as `u < v`; labels are sorted and
/// distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: NodeId,
    pub v: NodeId,
    pub labels: Vec<Time>,
}

impl EdgeRecord {
    pub fn new(a: NodeId, b: NodeId, labels: impl IntoIterator<Item = Time>) -> Self {
        let mut labels: Vec<Time> = labels.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        Self {
            u: a.min(b),
            v: a.max(b),
            labels,
        }
    }

    pub fn single(a: NodeId, b: NodeId, label: Time) -> Self {
        Self::new(a, b, [label])
    }

    pub fn pair(&self) -> (NodeId, NodeId) {
        (self.u, self.v)
    }

    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// An edge record as seen from one endpoint, at one of its labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Incidence {
    pub label: Time,
    pub neighbor: NodeId,
    pub record: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphData {
    node_count: usize,
    lifetime: Time,
    variant: Variant,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct TemporalGraph {
    node_count: usize,
    lifetime: Time,
    variant: Variant,
    edges: Vec<EdgeRecord>,
    // per node, sorted by (label, neighbor, record)
    incidence: Vec<Vec<Incidence>>,
}

impl TryFrom<GraphData> for TemporalGraph {
    type Error = Error;

    fn try_from(data: GraphData) -> Result<Self> {
        TemporalGraph::new(data.node_count, data.lifetime, data.variant, data.edges)
    }
}

impl From<TemporalGraph> for GraphData {
    fn from(g: TemporalGraph) -> Self {
        GraphData {
            node_count: g.node_count,
            lifetime: g.lifetime,
            variant: g.variant,
            edges: g.edges,
        }
    }
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.same_labeling(other)
    }
}

impl TemporalGraph {
    pub fn new(node_count: usize, lifetime: Time, variant: Variant, edges: Vec<EdgeRecord>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        if lifetime == 0 {
            return Err(Error::InvalidGraph("lifetime must be positive".into()));
        }
        let edges: Vec<EdgeRecord> = edges.into_iter().map(|e| EdgeRecord::new(e.u, e.v, e.labels)).collect();
        let mut seen_pairs = HashSet::new();
        let mut seen_labels = HashSet::new();
        for e in &edges {
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.u)));
            }
            if e.v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "node {} out of range for {node_count} nodes",
                    e.v
                )));
            }
            if e.labels.is_empty() {
                return Err(Error::InvalidGraph(format!("edge {}-{} has no label", e.u, e.v)));
            }
            if let Some(&bad) = e.labels.iter().find(|&&t| t == 0 || t > lifetime) {
                return Err(Error::InvalidGraph(format!(
                    "label {bad} on edge {}-{} outside [1, {lifetime}]",
                    e.u, e.v
                )));
            }
            match variant {
                Variant::Simple | Variant::Multiedge if e.labels.len() != 1 => {
                    return Err(Error::InvalidGraph(format!(
                        "{variant} edge {}-{} must carry exactly one label",
                        e.u, e.v
                    )));
                }
                Variant::Simple | Variant::Multilabel if !seen_pairs.insert(e.pair()) => {
                    return Err(Error::InvalidGraph(format!(
                        "parallel edge {}-{} in a {variant} graph",
                        e.u, e.v
                    )));
                }
                Variant::Multiedge if !seen_labels.insert((e.u, e.v, e.labels[0])) => {
                    return Err(Error::InvalidGraph(format!(
                        "parallel edges {}-{} share label {}",
                        e.u, e.v, e.labels[0]
                    )));
                }
                _ => {}
            }
        }

        let mut incidence = vec![Vec::new(); node_count];
        for (record, e) in edges.iter().enumerate() {
            for &label in &e.labels {
                incidence[e.u].push(Incidence {
                    label,
                    neighbor: e.v,
                    record,
                });
                incidence[e.v].push(Incidence {
                    label,
                    neighbor: e.u,
                    record,
                });
            }
        }
        for list in &mut incidence {
            list.sort_unstable();
        }
        Ok(Self {
            node_count,
            lifetime,
            variant,
            edges,
            incidence,
        })
    }

    /// A simple graph from `(u, v, label)` triples.
    pub fn simple(
        node_count: usize,
        lifetime: Time,
        edges: impl IntoIterator<Item = (NodeId, NodeId, Time)>,
    ) -> Result<Self> {
        let records = edges.into_iter().map(|(u, v, t)| EdgeRecord::single(u, v, t)).collect();
        Self::new(node_count, lifetime, Variant::Simple, records)
    }

    /// The same records read as a graph of another variant. A simple graph
    /// is valid under every variant; the reverse needs one label per pair.
    pub fn as_variant(&self, variant: Variant) -> Result<Self> {
        if variant == self.variant {
            return Ok(self.clone());
        }
        Self::new(self.node_count, self.lifetime, variant, self.edges.clone())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn lifetime(&self) -> Time {
        self.lifetime
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, record: usize) -> &EdgeRecord {
        &self.edges[record]
    }

    /// Number of edge records.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of (record, label) pairs.
    pub fn temporal_edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.labels.len()).sum()
    }

    pub fn incident(&self, v: NodeId) -> &[Incidence] {
        &self.incidence[v]
    }

    /// Incidences at `v` whose label lies in `lo..=hi`.
    pub fn incident_between(&self, v: NodeId, lo: Time, hi: Time) -> &[Incidence] {
        let list = &self.incidence[v];
        let start = list.partition_point(|inc| inc.label < lo);
        let end = list.partition_point(|inc| inc.label <= hi);
        if start >= end {
            &[]
        } else {
            &list[start..end]
        }
    }

    pub fn incident_at(&self, v: NodeId, t: Time) -> &[Incidence] {
        self.incident_between(v, t, t)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// True if some record between `a` and `b` carries label `t`.
    pub fn has_label(&self, a: NodeId, b: NodeId, t: Time) -> bool {
        a < self.node_count && self.incident_at(a, t).iter().any(|inc| inc.neighbor == b)
    }

    /// Records between `a` and `b`, in record order.
    pub fn records_between(&self, a: NodeId, b: NodeId) -> impl Iterator<Item = usize> + '_ {
        let pair = (a.min(b), a.max(b));
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.pair() == pair)
            .map(|(i, _)| i)
    }

    /// Static pairs with their record multiplicity, sorted.
    pub fn static_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut pairs: Vec<_> = self.edges.iter().map(EdgeRecord::pair).collect();
        pairs.sort_unstable();
        pairs
    }

    /// Sorted `(u, v, labels)` multiset used for equality.
    fn canonical(&self) -> Vec<(NodeId, NodeId, Vec<Time>)> {
        let mut c: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, e.labels.clone())).collect();
        c.sort_unstable();
        c
    }

    /// Graph equality: same nodes, lifetime, variant and label multiset per
    /// canonical edge record. Record order is irrelevant.
    pub fn same_labeling(&self, other: &TemporalGraph) -> bool {
        self.node_count == other.node_count
            && self.lifetime == other.lifetime
            && self.variant == other.variant
            && self.canonical() == other.canonical()
    }

    /// Copy with record `record` relabelled.
    pub fn with_labels(&self, record: usize, labels: Vec<Time>) -> Result<Self> {
        let mut edges = self.edges.clone();
        let e = &edges[record];
        edges[record] = EdgeRecord::new(e.u, e.v, labels);
        Self::new(self.node_count, self.lifetime, self.variant, edges)
    }

    /// Line format: header `n m Tmax variant`, then `u v label[,label...]`
    /// per record.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.node_count,
            self.edges.len(),
            self.lifetime,
            self.variant
        );
        for e in &self.edges {
            let labels: Vec<String> = e.labels.iter().map(Time::to_string).collect();
            out.push_str(&format!("{} {} {}\n", e.u, e.v, labels.join(",")));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: hline,
                message: "header must be `n m Tmax variant`".into(),
            });
        }
        let n = parse_num::<usize>(fields[0], hline)?;
        let m = parse_num::<usize>(fields[1], hline)?;
        let lifetime = parse_num::<Time>(fields[2], hline)?;
        let variant = fields[3].parse::<Variant>().map_err(|e| Error::Parse {
            line: hline,
            message: e.to_string(),
        })?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line,
                    message: "edge line must be `u v label[,label...]`".into(),
                });
            }
            let u = parse_num::<NodeId>(parts[0], line)?;
            let v = parse_num::<NodeId>(parts[1], line)?;
            let labels = parts[2]
                .split(',')
                .map(|s| parse_num::<Time>(s, line))
                .collect::<Result<Vec<_>>>()?;
            edges.push(EdgeRecord::new(u, v, labels));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges but {} were given", edges.len()),
            });
        }
        Self::new(n, lifetime, variant, edges)
    }
}

fn parse_num<T: FromStr>(s: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a non-negative integer, found `{s}`"),
    })
}

/// Partition of the temporal edges into delta-edge connected components.
///
/// The unit of the partition is a `(record, label)` pair. For simple and
/// multiedge graphs there is exactly one unit per record and units are
/// indexed like records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaEccPartition {
    pub units: Vec<(usize, Time)>,
    pub component_id: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl DeltaEccPartition {
    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn component(&self, record: usize, label: Time) -> Option<usize> {
        self.units
            .binary_search(&(record, label))
            .ok()
            .map(|i| self.component_id[i])
    }

    /// Component of a record's first label.
    pub fn record_component(&self, record: usize) -> Option<usize> {
        let i = self.units.partition_point(|&(r, _)| r < record);
        (i < self.units.len() && self.units[i].0 == record).then(|| self.component_id[i])
    }

    pub fn mean_size(&self) -> f64 {
        if self.sizes.is_empty() {
            0.0
        } else {
            self.units.len() as f64 / self.sizes.len() as f64
        }
    }

    /// Components as sorted unit lists, in order of smallest member.
    pub fn groups(&self) -> Vec<Vec<(usize, Time)>> {
        let mut groups = vec![Vec::new(); self.sizes.len()];
        for (unit, &c) in self.units.iter().zip(&self.component_id) {
            groups[c].push(*unit);
        }
        groups
    }
}

/// Delta-edge connected components: the transitive closure of "two temporal
/// edges share an endpoint and their labels differ by at most `delta`".
/// Two labels of the same multilabel record are linked by the same rule.
pub fn delta_ecc(graph: &TemporalGraph, delta: Time) -> DeltaEccPartition {
    let units: Vec<(usize, Time)> = graph
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(r, e)| e.labels.iter().map(move |&t| (r, t)))
        .collect();
    let index: BTreeMap<(usize, Time), usize> = units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut uf = UnionFind::new(units.len());
    for v in 0..graph.node_count() {
        // incidences are sorted by label, so linking neighbours in that
        // order yields every pair within distance delta transitively
        for w in graph.incident(v).windows(2) {
            if w[1].label - w[0].label <= delta {
                uf.union(index[&(w[0].record, w[0].label)], index[&(w[1].record, w[1].label)]);
            }
        }
    }
    let mut root_to_component = BTreeMap::new();
    let mut component_id = Vec::with_capacity(units.len());
    let mut sizes = Vec::new();
    for i in 0..units.len() {
        let root = uf.find(i);
        let next = root_to_component.len();
        let c = *root_to_component.entry(root).or_insert(next);
        if c == sizes.len() {
            sizes.push(0);
        }
        sizes[c] += 1;
        component_id.push(c);
    }
    DeltaEccPartition {
        units,
        component_id,
        sizes,
    }
}

/// True iff the `(u, v, label)` sequence forms a path in the static graph
/// with strictly increasing labels. Every triple must name an existing edge
/// carrying that label.
pub fn is_temporal_path(graph: &TemporalGraph, sequence: &[(NodeId, NodeId, Time)]) -> Result<bool> {
    for &(u, v, t) in sequence {
        if !graph.has_label(u, v, t) {
            return Err(Error::UnknownEdge { u, v, label: t });
        }
    }
    if sequence.len() <= 1 {
        return Ok(true);
    }
    if sequence.windows(2).any(|w| w[0].2 >= w[1].2) {
        return Ok(false);
    }
    let (a, b, _) = sequence[0];
    let (c, d, _) = sequence[1];
    let start = if b == c || b == d {
        a
    } else if a == c || a == d {
        b
    } else {
        return Ok(false);
    };
    let mut visited = HashSet::from([start]);
    let mut current = start;
    for &(u, v, _) in sequence {
        let next = if u == current {
            v
        } else if v == current {
            u
        } else {
            return Ok(false);
        };
        if !visited.insert(next) {
            return Ok(false);
        }
        current = next;
    }
    Ok(true)
}
