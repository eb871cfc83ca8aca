//! Finite metric graphs: sampling, gluing, exact ball measures, and extraction
//! from a decomposed leaf space.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::foliated::{self, HlsSpace};
use crate::metric::{self, FiniteMetricSpace, WeightedGraphSpace};
use crate::paths::{self, Adjacency};
use crate::union_find::UnionFind;

/// Nodes and positive-length edges; loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct MetricGraph {
    nodes: Vec<String>,
    edges: Vec<(usize, usize, f64)>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    nodes: Vec<String>,
    edges: Vec<(String, String, f64)>,
}

impl TryFrom<RawGraph> for MetricGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        MetricGraph::new(raw.nodes, raw.edges)
    }
}

impl From<MetricGraph> for RawGraph {
    fn from(g: MetricGraph) -> Self {
        RawGraph {
            edges: g
                .edges
                .iter()
                .map(|&(u, v, l)| (g.nodes[u].clone(), g.nodes[v].clone(), l))
                .collect(),
            nodes: g.nodes,
        }
    }
}

impl MetricGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<(String, String, f64)>) -> Result<Self> {
        let index = metric::index_ids("node", &nodes)?;
        let lookup = |id: &String| {
            index.get(id).copied().ok_or_else(|| Error::UnknownId {
                kind: "node",
                id: id.clone(),
            })
        };
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, l) in &edges {
            out.push((lookup(u)?, lookup(v)?, *l));
        }
        Self::from_indexed(nodes, out)
    }

    pub(crate) fn from_indexed(
        nodes: Vec<String>,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Empty("graph"));
        }
        let index = metric::index_ids("node", &nodes)?;
        for &(u, v, l) in &edges {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::NonPositiveLength(
                    nodes[u].clone(),
                    nodes[v].clone(),
                    l,
                ));
            }
        }
        let g = Self {
            nodes,
            edges,
            index,
        };
        let (comp, count) = paths::components(&g.adjacency());
        if count > 1 {
            let other = comp.iter().position(|&c| c != 0).expect("two components");
            return Err(Error::Disconnected(
                g.nodes[0].clone(),
                g.nodes[other].clone(),
            ));
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Number of edge ends at each node; a loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(u, v, _) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    fn adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::new(self.nodes.len());
        for &(u, v, l) in &self.edges {
            adj.add_edge(u, v, l);
        }
        adj
    }
}

/// Subdivides each edge into `⌈length/step⌉` equal parts and returns the
/// geodesic metric on nodes and subdivision points. Subdivision point `k` of
/// edge `e` is named `e<e>.<k>`.
pub fn sample_graph(g: &MetricGraph, step: f64) -> Result<FiniteMetricSpace> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {step}"
        )));
    }
    let mut taken: HashSet<String> = g.nodes.iter().cloned().collect();
    let mut vertices = g.nodes.clone();
    let mut edges = Vec::new();
    for (e, &(u, v, l)) in g.edges.iter().enumerate() {
        let parts = ((l / step) - defaults::RELATIVE_TOL).ceil().max(1.0) as usize;
        let piece = l / parts as f64;
        let mut prev = u;
        for k in 1..parts {
            let mut id = format!("e{e}.{k}");
            while taken.contains(&id) {
                id = format!("~{id}");
            }
            taken.insert(id.clone());
            vertices.push(id);
            let cur = vertices.len() - 1;
            edges.push((prev, cur, piece));
            prev = cur;
        }
        edges.push((prev, v, piece));
    }
    metric::geodesic_metric(&WeightedGraphSpace::from_indexed(vertices, edges))
}

/// Node-identified union of two graphs. Each pair names a node of `g1` and a
/// node of `g2`; identification is the generated equivalence. Merged nodes
/// take the id of their first member; clashing `g2` ids are prefixed with `b:`.
pub fn glue_graphs(
    g1: &MetricGraph,
    g2: &MetricGraph,
    pairs: &[(String, String)],
) -> Result<MetricGraph> {
    let n1 = g1.nodes.len();
    let n = n1 + g2.nodes.len();
    let mut uf = UnionFind::new(n);
    for (a, b) in pairs {
        let i = g1.node_index(a).ok_or_else(|| Error::UnknownId {
            kind: "node",
            id: a.clone(),
        })?;
        let j = g2.node_index(b).ok_or_else(|| Error::UnknownId {
            kind: "node",
            id: b.clone(),
        })?;
        uf.union(i, n1 + j);
    }
    let (labels, k) = uf.labels();
    let mut taken: HashSet<String> = g1.nodes.iter().cloned().collect();
    let mut names: Vec<Option<String>> = vec![None; k];
    for i in 0..n {
        if names[labels[i]].is_some() {
            continue;
        }
        names[labels[i]] = Some(if i < n1 {
            g1.nodes[i].clone()
        } else {
            let mut id = g2.nodes[i - n1].clone();
            while taken.contains(&id) {
                id = format!("b:{id}");
            }
            taken.insert(id.clone());
            id
        });
    }
    let edges = g1
        .edges
        .iter()
        .map(|&(u, v, l)| (labels[u], labels[v], l))
        .chain(
            g2.edges
                .iter()
                .map(|&(u, v, l)| (labels[n1 + u], labels[n1 + v], l)),
        )
        .collect();
    MetricGraph::from_indexed(names.into_iter().map(Option::unwrap).collect(), edges)
}

/// A point of a metric graph: a node, or a point of edge `edge` at distance
/// `offset` from its first end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallCenter {
    Node(String),
    Edge { edge: usize, offset: f64 },
}

/// Lebesgue measure of the open ball `B(x, η)`, by exact interval arithmetic
/// on every edge.
pub fn ball_measure(g: &MetricGraph, center: &BallCenter, eta: f64) -> Result<f64> {
    let adj = g.adjacency();
    let (init, own) = match center {
        BallCenter::Node(id) => {
            let i = g.node_index(id).ok_or_else(|| Error::UnknownId {
                kind: "node",
                id: id.clone(),
            })?;
            (vec![(i, 0.0)], None)
        }
        BallCenter::Edge { edge, offset } => {
            let &(u, v, l) = g.edges.get(*edge).ok_or_else(|| {
                Error::InvalidParameter(format!("edge index {edge} out of range"))
            })?;
            if !(0.0..=l).contains(offset) {
                return Err(Error::InvalidParameter(format!(
                    "offset {offset} outside edge {edge} of length {l}"
                )));
            }
            (vec![(u, *offset), (v, l - offset)], Some((*edge, *offset)))
        }
    };
    let dist = paths::dijkstra_from(&adj, &init);
    let mut total = 0.0;
    for (e, &(a, b, l)) in g.edges.iter().enumerate() {
        let mut spans: Vec<(f64, f64)> = Vec::with_capacity(3);
        if let Some(da) = dist[a] {
            spans.push((0.0, eta - da));
        }
        if let Some(db) = dist[b] {
            spans.push((l - (eta - db), l));
        }
        if let Some((oe, s)) = own {
            if oe == e {
                spans.push((s - eta, s + eta));
            }
        }
        total += union_length(&mut spans, l);
    }
    Ok(total)
}

fn union_length(spans: &mut [(f64, f64)], len: f64) -> f64 {
    let mut clipped: Vec<(f64, f64)> = spans
        .iter()
        .map(|&(a, b)| (a.max(0.0), b.min(len)))
        .filter(|(a, b)| b > a)
        .collect();
    clipped.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in clipped {
        match cur {
            Some((ca, cb)) if a <= cb => cur = Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((ca, cb)) = cur {
        total += cb - ca;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSample {
    pub center: BallCenter,
    pub eta: f64,
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub beta: f64,
    pub eta0: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub passes: bool,
    pub samples: Vec<MeasureSample>,
}

/// Checks `η/β ≤ μ(B(x, η)) ≤ βη` on nodes, edge quarter points and
/// midpoints, for `η ∈ {η₀/2, η₀/4, η₀/8}`, where `η₀` is half the shortest
/// edge and `β = max(2, max degree)`.
pub fn measure_ball_check(g: &MetricGraph) -> Result<MeasureReport> {
    if g.edges.is_empty() {
        return Err(Error::Empty("edge set"));
    }
    let eta0 = 0.5 * g.edges.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    let beta = g.degrees().into_iter().max().unwrap_or(0).max(2) as f64;
    let mut centers: Vec<BallCenter> = g.nodes.iter().cloned().map(BallCenter::Node).collect();
    for (e, &(_, _, l)) in g.edges.iter().enumerate() {
        for t in [0.25, 0.5, 0.75] {
            centers.push(BallCenter::Edge {
                edge: e,
                offset: t * l,
            });
        }
    }
    let mut samples = Vec::with_capacity(centers.len() * 3);
    for c in centers {
        for div in [2.0, 4.0, 8.0] {
            let eta = eta0 / div;
            let measure = ball_measure(g, &c, eta)?;
            samples.push(MeasureSample {
                center: c.clone(),
                eta,
                measure,
            });
        }
    }
    let ratios = samples.iter().map(|s| s.measure / s.eta);
    let min_ratio = ratios.clone().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.fold(0.0, f64::max);
    let slack = 1e-12;
    Ok(MeasureReport {
        beta,
        eta0,
        min_ratio,
        max_ratio,
        passes: min_ratio >= 1.0 / beta - slack && max_ratio <= beta + slack,
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Node,
    Segment,
}

impl RegionKind {
    fn name(self) -> &'static str {
        match self {
            RegionKind::Node => "node",
            RegionKind::Segment => "segment",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub classes: Vec<String>,
    pub kind: RegionKind,
}

/// Path metric of hops no longer than 1.5 times the largest nearest-neighbour
/// gap. A segment region wrapped around a short cycle is shortcut by the
/// ambient metric but not by this one.
fn intrinsic(sub: &FiniteMetricSpace) -> std::result::Result<FiniteMetricSpace, String> {
    let m = sub.len();
    if m < 2 {
        return Ok(sub.clone());
    }
    let gap = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i)
                .map(|j| sub.d(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let hop = 1.5 * gap;
    let mut w: Vec<Vec<Option<f64>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (sub.d(i, j) <= hop).then(|| sub.d(i, j)))
                .collect()
        })
        .collect();
    paths::floyd(&mut w);
    if let Some((i, j)) = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .find(|&(i, j)| w[i][j].is_none())
    {
        return Err(format!(
            "classes `{}` and `{}` are not linked by hops of at most {hop}",
            sub.id(i),
            sub.id(j)
        ));
    }
    FiniteMetricSpace::from_fn(sub.points().to_vec(), |i, j| w[i][j].expect("linked"))
        .map_err(|e| e.to_string())
}

/// Builds a metric graph from a partition of the HLS classes into node and
/// segment regions. Node regions must have diameter at most `tol`. Each
/// segment becomes an edge whose length is its diameter in the region's own
/// hop metric; its two extreme classes attach to the closest node region
/// within `tol`, or to a fresh end node when none is that close.
pub fn extract_graph(h: &HlsSpace, regions: &[Region], tol: f64) -> Result<MetricGraph> {
    let space = &h.space;
    let n = space.len();
    let mut region_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(regions.len());
    for (r, reg) in regions.iter().enumerate() {
        let bad = |reason: String| Error::BadRegion {
            index: r,
            kind: reg.kind.name(),
            reason,
        };
        if reg.classes.is_empty() {
            return Err(bad("no classes".into()));
        }
        let mut idx = Vec::with_capacity(reg.classes.len());
        for c in &reg.classes {
            let i = space
                .index_of(c)
                .ok_or_else(|| bad(format!("unknown class `{c}`")))?;
            if region_of[i] != usize::MAX {
                return Err(bad(format!(
                    "class `{c}` already belongs to region {}",
                    region_of[i]
                )));
            }
            region_of[i] = r;
            idx.push(i);
        }
        members.push(idx);
    }
    if let Some(i) = region_of.iter().position(|&r| r == usize::MAX) {
        return Err(Error::InvalidParameter(format!(
            "class `{}` is not covered by any region",
            space.id(i)
        )));
    }

    let mut nodes: Vec<String> = Vec::new();
    let mut node_of_region: Vec<Option<usize>> = vec![None; regions.len()];
    for (r, reg) in regions.iter().enumerate() {
        if reg.kind != RegionKind::Node {
            continue;
        }
        let diam = space.subspace(&members[r]).diameter();
        if diam > tol {
            return Err(Error::BadRegion {
                index: r,
                kind: "node",
                reason: format!("diameter {diam} exceeds tolerance {tol}"),
            });
        }
        node_of_region[r] = Some(nodes.len());
        nodes.push(reg.classes[0].clone());
    }

    let mut taken: HashSet<String> = nodes.iter().cloned().collect();
    let mut edges = Vec::new();
    for (r, reg) in regions.iter().enumerate() {
        if reg.kind != RegionKind::Segment {
            continue;
        }
        let bad = |reason: String| Error::BadRegion {
            index: r,
            kind: "segment",
            reason,
        };
        let sub = intrinsic(&space.subspace(&members[r])).map_err(bad)?;
        let far = |from: usize| {
            (0..sub.len()).fold(from, |best, j| {
                if sub.d(from, j) > sub.d(from, best) {
                    j
                } else {
                    best
                }
            })
        };
        let start = far(0);
        let end = far(start);
        let length = sub.d(start, end);
        if !(length > 0.0) {
            return Err(bad("zero length".into()));
        }
        let seg_tol = defaults::relative_tol(space.diameter()).max(f64::EPSILON * length * 16.0);
        foliated::segment_parameter_on(&sub, sub.id(start), seg_tol)
            .map_err(|e| bad(e.to_string()))?;

        let mut attach = |class: usize, which: &str| -> usize {
            let global = members[r][class];
            let best = (0..n)
                .filter(|&j| {
                    let rj = region_of[j];
                    regions[rj].kind == RegionKind::Node && space.d(global, j) <= tol
                })
                .min_by(|&a, &b| {
                    space
                        .d(global, a)
                        .total_cmp(&space.d(global, b))
                        .then(a.cmp(&b))
                });
            match best {
                Some(j) => node_of_region[region_of[j]].expect("node region"),
                None => {
                    let mut id = format!("{}:{which}", reg.classes[0]);
                    while taken.contains(&id) {
                        id = format!("~{id}");
                    }
                    taken.insert(id.clone());
                    nodes.push(id);
                    nodes.len() - 1
                }
            }
        };
        let a = attach(start, "start");
        let b = attach(end, "end");
        edges.push((a, b, length));
    }
    MetricGraph::from_indexed(nodes, edges)
}
