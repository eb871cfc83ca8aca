//! Example foliations as complexes, and the realization of a metric graph as
//! a complex whose leaf space is that graph.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foliated::{glue_complexes, Edge, EdgeKind, FoliatedComplex, GlueMode, HlsSpace};
use crate::graph::{MetricGraph, Region, RegionKind};
use crate::metric::Bijection;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    /// `leaves` parallel leaves at spacing `length/(leaves−1)`, each a path of
    /// `fiber` vertices at the same spacing, joined by transverse rungs.
    ProductIBundle {
        length: f64,
        leaves: usize,
        fiber: usize,
    },
    /// `resolution` leaves of golden-ratio slope on the unit torus, each
    /// sampled over `resolution` turns.
    KroneckerTorus { resolution: usize },
    /// A compact boundary circle with `resolution` spiralling interior leaves.
    ReebAnnulus { resolution: usize },
    /// `boundaries` compact circles and `resolution` interior leaves, each
    /// interior leaf passing within half a mesh of every circle.
    StarBlock {
        boundaries: usize,
        resolution: usize,
    },
}

pub fn generate(g: &Generator) -> Result<FoliatedComplex> {
    generate_prefixed(g, "")
}

struct Builder {
    prefix: String,
    vertices: Vec<String>,
    leaf: Vec<usize>,
    leaves: Vec<String>,
    compact: Vec<bool>,
    edges: Vec<Edge>,
}

impl Builder {
    fn new(prefix: &str) -> Self {
        Self {
            prefix: prefix.to_string(),
            vertices: Vec::new(),
            leaf: Vec::new(),
            leaves: Vec::new(),
            compact: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn leaf(&mut self, name: String, compact: bool) -> usize {
        self.leaves.push(format!("{}{name}", self.prefix));
        self.compact.push(compact);
        self.leaves.len() - 1
    }

    fn vertex(&mut self, name: String, leaf: usize) -> usize {
        self.vertices.push(format!("{}{name}", self.prefix));
        self.leaf.push(leaf);
        self.vertices.len() - 1
    }

    fn edge(&mut self, u: usize, v: usize, len: f64) {
        let kind = if self.leaf[u] == self.leaf[v] {
            EdgeKind::Tangential
        } else {
            EdgeKind::Transverse
        };
        self.edges.push(Edge { u, v, len, kind });
    }

    fn finish(self, mesh: f64) -> Result<FoliatedComplex> {
        FoliatedComplex::from_parts(
            self.vertices,
            self.leaf,
            self.leaves,
            self.edges,
            mesh,
            self.compact,
        )
    }
}

fn need(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}

/// As [`generate`], with every vertex and leaf id prefixed.
pub fn generate_prefixed(g: &Generator, prefix: &str) -> Result<FoliatedComplex> {
    let mut b = Builder::new(prefix);
    match *g {
        Generator::ProductIBundle {
            length,
            leaves,
            fiber,
        } => {
            need(
                length > 0.0 && length.is_finite(),
                "length must be positive",
            )?;
            need(leaves >= 2, "an I-bundle needs at least 2 leaves")?;
            need(fiber >= 1, "fiber size must be positive")?;
            let h = length / (leaves - 1) as f64;
            let mut ids = vec![vec![0; fiber]; leaves];
            for i in 0..leaves {
                let l = b.leaf(format!("L{i}"), i == 0 || i == leaves - 1);
                for j in 0..fiber {
                    ids[i][j] = b.vertex(format!("v{i}_{j}"), l);
                    if j > 0 {
                        b.edge(ids[i][j - 1], ids[i][j], h);
                    }
                    if i > 0 {
                        b.edge(ids[i - 1][j], ids[i][j], h);
                    }
                }
            }
            b.finish(h)
        }
        Generator::KroneckerTorus { resolution: r } => {
            need(r >= 2, "resolution must be at least 2")?;
            let alpha = (5f64.sqrt() - 1.0) / 2.0;
            let rf = r as f64;
            let samples = r * r;
            let step = (1.0 + alpha * alpha).sqrt() / rf;
            // column -> (height, vertex)
            let mut columns: Vec<Vec<(f64, usize)>> = vec![Vec::new(); r];
            for j in 0..r {
                let l = b.leaf(format!("K{j}"), false);
                let mut prev = None;
                for s in 0..samples {
                    let y = (j as f64 / rf + alpha * s as f64 / rf).rem_euclid(1.0);
                    let v = b.vertex(format!("k{j}_{s}"), l);
                    columns[s % r].push((y, v));
                    if let Some(p) = prev {
                        b.edge(p, v, step);
                    }
                    prev = Some(v);
                }
            }
            for col in &mut columns {
                col.sort_by(|a, b| a.0.total_cmp(&b.0));
                let m = col.len();
                for i in 0..m {
                    let (y, v) = col[i];
                    let l = b.leaf[v];
                    if let Some(k) = (1..m).find(|&k| b.leaf[col[(i + k) % m].1] != l) {
                        let (y2, v2) = col[(i + k) % m];
                        let gap = (y2 - y).rem_euclid(1.0);
                        b.edge(v, v2, gap);
                    }
                }
            }
            b.finish(1.0 / rf)
        }
        Generator::ReebAnnulus { resolution: r } => {
            need(r >= 2, "resolution must be at least 2")?;
            let h = 1.0 / r as f64;
            let boundary = b.leaf("B".into(), true);
            let ring: Vec<usize> = (0..r)
                .map(|a| b.vertex(format!("b{a}"), boundary))
                .collect();
            for a in 0..r {
                b.edge(ring[a], ring[(a + 1) % r], h);
            }
            // column[a][k]: vertex at angle a and height 1 − k/r
            let mut column = vec![vec![0; r]; r];
            for j in 0..r {
                let l = b.leaf(format!("R{j}"), false);
                for k in 0..r {
                    let v = b.vertex(format!("r{j}_{k}"), l);
                    column[(k + j) % r][k] = v;
                    if k > 0 {
                        b.edge(
                            column[(k - 1 + j) % r][k - 1],
                            v,
                            std::f64::consts::SQRT_2 * h,
                        );
                    }
                }
            }
            for a in 0..r {
                for k in 1..r {
                    b.edge(column[a][k - 1], column[a][k], h);
                }
                b.edge(column[a][r - 1], ring[a], h);
            }
            b.finish(h)
        }
        Generator::StarBlock {
            boundaries: k,
            resolution: r,
        } => {
            need(k >= 1, "a star block needs at least one boundary")?;
            need(r >= 1, "resolution must be positive")?;
            let h = 1.0 / r as f64;
            let mut circles = vec![vec![0; r]; k];
            for (c, circle) in circles.iter_mut().enumerate() {
                let l = b.leaf(format!("S{c}"), true);
                for (j, slot) in circle.iter_mut().enumerate() {
                    *slot = b.vertex(format!("s{c}_{j}"), l);
                }
                for j in 0..r {
                    if r > 1 && !(r == 2 && j == 1) {
                        b.edge(circle[j], circle[(j + 1) % r], h);
                    }
                }
            }
            for j in 0..r {
                let l = b.leaf(format!("T{j}"), false);
                let mut prev = None;
                for (c, circle) in circles.iter().enumerate() {
                    let v = b.vertex(format!("t{j}_{c}"), l);
                    b.edge(v, circle[j], h / 2.0);
                    if let Some(p) = prev {
                        b.edge(p, v, h);
                    }
                    prev = Some(v);
                }
            }
            b.finish(h)
        }
    }
}

/// A realized graph with the leaves contributed by each node and edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub complex: FoliatedComplex,
    /// Leaves of each node's block (for a node of degree 1, the bundle end
    /// leaf it sits on).
    pub node_leaves: Vec<Vec<String>>,
    /// Interior leaves of each edge's bundle.
    pub edge_leaves: Vec<Vec<String>>,
}

impl Realization {
    /// Node and segment regions of `h = hls(self.complex)` for
    /// [`extract_graph`](crate::graph::extract_graph). A class claimed by an
    /// earlier region is skipped, and edges without interior classes are
    /// dropped.
    pub fn regions(&self, h: &HlsSpace) -> Result<Vec<Region>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let groups = self
            .node_leaves
            .iter()
            .map(|l| (l, RegionKind::Node))
            .chain(self.edge_leaves.iter().map(|l| (l, RegionKind::Segment)));
        for (leaves, kind) in groups {
            let mut classes = Vec::new();
            for l in leaves {
                let c = h.class_of_leaf.get(l).ok_or_else(|| Error::UnknownId {
                    kind: "leaf",
                    id: l.clone(),
                })?;
                if seen.insert(c.clone()) {
                    classes.push(c.clone());
                }
            }
            if !classes.is_empty() {
                out.push(Region { classes, kind });
            }
        }
        Ok(out)
    }
}

/// Realizes a metric graph at resolution `r`: each node of degree `m ≥ 2`
/// becomes a star block with `m` boundary circles, each edge of length `d` an
/// I-bundle with `⌈d·r⌉ + 1` leaves, glued tangentially along the incidences.
/// Nodes of degree 1 are the bare end leaves of their bundle and an isolated
/// node is a single compact leaf.
pub fn realize_graph(g: &MetricGraph, r: usize) -> Result<Realization> {
    need(r >= 1, "resolution must be positive")?;
    let nodes = g.nodes();
    let edges = g.edges();
    let deg = g.degrees();

    if edges.is_empty() {
        let mut b = Builder::new("");
        let l = b.leaf("N0".into(), true);
        b.vertex("n0".into(), l);
        let complex = b.finish(1.0 / r as f64)?;
        return Ok(Realization {
            complex,
            node_leaves: vec![vec!["N0".into()]],
            edge_leaves: vec![],
        });
    }

    let blocks: Vec<Option<FoliatedComplex>> = (0..nodes.len())
        .map(|i| {
            (deg[i] >= 2)
                .then(|| {
                    generate_prefixed(
                        &Generator::StarBlock {
                            boundaries: deg[i],
                            resolution: r,
                        },
                        &format!("N{i}."),
                    )
                })
                .transpose()
        })
        .collect::<Result<_>>()?;
    let mut next_slot = vec![0usize; nodes.len()];
    // Boundary circle `slot` of node `i`'s block: its first two vertices.
    let slot_vertices = |i: usize, slot: usize| -> Vec<String> {
        if r > 1 {
            vec![format!("N{i}.s{slot}_0"), format!("N{i}.s{slot}_1")]
        } else {
            vec![format!("N{i}.s{slot}_0")]
        }
    };

    let bundles: Vec<(FoliatedComplex, usize)> = edges
        .iter()
        .enumerate()
        .map(|(e, &(_, _, d))| {
            let n = ((d * r as f64) - 1e-9).ceil().max(1.0) as usize + 1;
            let k = generate_prefixed(
                &Generator::ProductIBundle {
                    length: d,
                    leaves: n,
                    fiber: 2,
                },
                &format!("E{e}."),
            )?;
            Ok((k, n))
        })
        .collect::<Result<_>>()?;
    let end_vertices = |e: usize, at_end: bool| -> Vec<String> {
        let i = if at_end { bundles[e].1 - 1 } else { 0 };
        if r > 1 {
            vec![format!("E{e}.v{i}_0"), format!("E{e}.v{i}_1")]
        } else {
            vec![format!("E{e}.v{i}_0")]
        }
    };

    let mut placed = vec![false; nodes.len()];
    let mut used_edge = vec![false; edges.len()];
    let start = (0..nodes.len()).find(|&i| deg[i] >= 2).unwrap_or(0);
    let mut node_leaves: Vec<Vec<String>> = (0..nodes.len())
        .map(|i| match &blocks[i] {
            Some(b) => b.leaves().to_vec(),
            None => {
                let (e, &(u, _, _)) = edges
                    .iter()
                    .enumerate()
                    .find(|(_, &(u, v, _))| u == i || v == i)
                    .expect("degree 1");
                let idx = if u == i { 0 } else { bundles[e].1 - 1 };
                vec![format!("E{e}.L{idx}")]
            }
        })
        .collect();
    let mut complex = match &blocks[start] {
        Some(b) => b.clone(),
        None => {
            // degree-1 start node: begin from its bundle
            let e = edges
                .iter()
                .position(|&(u, v, _)| u == start || v == start)
                .expect("degree 1");
            used_edge[e] = true;
            let (u, v, _) = edges[e];
            let other = if u == start { v } else { u };
            // with no node of degree 2 or more the graph is a single edge
            placed[other] = true;
            bundles[e].0.clone()
        }
    };
    placed[start] = true;

    let mut queue: VecDeque<usize> = (0..nodes.len()).filter(|&i| placed[i]).collect();
    while let Some(x) = queue.pop_front() {
        for (e, &(u, v, _)) in edges.iter().enumerate() {
            if used_edge[e] || (u != x && v != x) {
                continue;
            }
            used_edge[e] = true;
            // orient so the bundle's first leaf sits at `x`
            let (near_is_u, far) = if u == x { (true, v) } else { (false, u) };
            let mut f_pairs = Vec::new();
            if blocks[x].is_some() {
                let slot = next_slot[x];
                next_slot[x] += 1;
                f_pairs.extend(zip(&slot_vertices(x, slot), &end_vertices(e, !near_is_u)));
            }
            if placed[far] {
                if blocks[far].is_some() {
                    let slot = next_slot[far];
                    next_slot[far] += 1;
                    f_pairs.extend(zip(&slot_vertices(far, slot), &end_vertices(e, near_is_u)));
                }
                let f = Bijection::new(f_pairs)?;
                complex = glue_complexes(&complex, &bundles[e].0, &f, GlueMode::Tangential)?;
            } else {
                let f = Bijection::new(f_pairs)?;
                complex = glue_complexes(&complex, &bundles[e].0, &f, GlueMode::Tangential)?;
                if let Some(b) = &blocks[far] {
                    let slot = next_slot[far];
                    next_slot[far] += 1;
                    let f = pair(&end_vertices(e, near_is_u), &slot_vertices(far, slot))?;
                    complex = glue_complexes(&complex, b, &f, GlueMode::Tangential)?;
                    // the boundary circle now carries the bundle's end leaf id
                    let idx = if near_is_u { bundles[e].1 - 1 } else { 0 };
                    let old = format!("N{far}.S{slot}");
                    for l in &mut node_leaves[far] {
                        if *l == old {
                            *l = format!("E{e}.L{idx}");
                        }
                    }
                }
                placed[far] = true;
                queue.push_back(far);
            }
        }
    }

    let edge_leaves = bundles
        .iter()
        .enumerate()
        .map(|(e, (_, n))| (1..n - 1).map(|i| format!("E{e}.L{i}")).collect())
        .collect();
    Ok(Realization {
        complex,
        node_leaves,
        edge_leaves,
    })
}

fn zip(a: &[String], b: &[String]) -> Vec<(String, String)> {
    a.iter().cloned().zip(b.iter().cloned()).collect()
}

fn pair(a: &[String], b: &[String]) -> Result<Bijection> {
    Bijection::new(zip(a, b))
}
