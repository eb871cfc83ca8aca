//! Foliated complexes: leaf-labelled weighted graphs whose edges are either
//! tangential (inside a leaf) or transverse (between leaves), and their
//! Hausdorff leaf spaces.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::metric::{self, Bijection, FiniteMetricSpace, WeightedGraphSpace};
use crate::paths::{self, Adjacency};
use crate::quotient::{self, Collapsed};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Tangential,
    Transverse,
}

impl EdgeKind {
    fn between(a: usize, b: usize) -> Self {
        if a == b {
            EdgeKind::Tangential
        } else {
            EdgeKind::Transverse
        }
    }

    fn name(self) -> &'static str {
        match self {
            EdgeKind::Tangential => "tangential",
            EdgeKind::Transverse => "transverse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub len: f64,
    pub kind: EdgeKind,
}

/// A leaf-labelled weighted graph with a declared resolution `mesh`.
///
/// Leaves are indexed in order of their first vertex. Compact leaves (boundary
/// or closed leaves) are exempt from the mesh contract, which otherwise asks
/// every vertex to reach a vertex of another leaf within `mesh`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoliatedComplex {
    vertices: Vec<String>,
    leaf: Vec<usize>,
    leaves: Vec<String>,
    edges: Vec<Edge>,
    mesh: f64,
    compact: Vec<bool>,
    index: HashMap<String, usize>,
    leaf_index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    vertices: Vec<String>,
    leaf_of: BTreeMap<String, String>,
    edges: Vec<(String, String, f64, EdgeKind)>,
    mesh: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    compact_leaves: Vec<String>,
}

impl Serialize for FoliatedComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawComplex {
            vertices: self.vertices.clone(),
            leaf_of: self
                .vertices
                .iter()
                .zip(&self.leaf)
                .map(|(v, &l)| (v.clone(), self.leaves[l].clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        self.vertices[e.u].clone(),
                        self.vertices[e.v].clone(),
                        e.len,
                        e.kind,
                    )
                })
                .collect(),
            mesh: self.mesh,
            compact_leaves: self.compact_leaves().map(str::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FoliatedComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawComplex::deserialize(d)?;
        FoliatedComplex::new(
            raw.vertices,
            raw.leaf_of,
            raw.edges,
            raw.mesh,
            raw.compact_leaves,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl FoliatedComplex {
    pub fn new(
        vertices: Vec<String>,
        leaf_of: BTreeMap<String, String>,
        edges: Vec<(String, String, f64, EdgeKind)>,
        mesh: f64,
        compact_leaves: Vec<String>,
    ) -> Result<Self> {
        let index = metric::index_ids("vertex", &vertices)?;
        for v in leaf_of.keys() {
            if !index.contains_key(v) {
                return Err(Error::UnknownId {
                    kind: "vertex",
                    id: v.clone(),
                });
            }
        }
        let mut leaves: Vec<String> = Vec::new();
        let mut leaf_index: HashMap<&str, usize> = HashMap::new();
        let mut leaf = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let l = leaf_of.get(v).ok_or_else(|| {
                Error::InvalidParameter(format!("vertex `{v}` has no leaf assignment"))
            })?;
            let next = leaves.len();
            let li = *leaf_index.entry(l.as_str()).or_insert(next);
            if li == next {
                leaves.push(l.clone());
            }
            leaf.push(li);
        }
        let mut compact = vec![false; leaves.len()];
        for l in &compact_leaves {
            let li = leaf_index.get(l.as_str()).ok_or_else(|| Error::UnknownId {
                kind: "leaf",
                id: l.clone(),
            })?;
            compact[*li] = true;
        }
        let lookup = |id: &String| {
            index.get(id).copied().ok_or_else(|| Error::UnknownId {
                kind: "vertex",
                id: id.clone(),
            })
        };
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, len, kind) in &edges {
            out.push(Edge {
                u: lookup(u)?,
                v: lookup(v)?,
                len: *len,
                kind: *kind,
            });
        }
        Self::from_parts(vertices, leaf, leaves, out, mesh, compact)
    }

    /// Assembles and validates a complex from indexed parts. Leaves are
    /// renumbered by first vertex and leaves without vertices are dropped.
    pub(crate) fn from_parts(
        vertices: Vec<String>,
        leaf: Vec<usize>,
        leaves: Vec<String>,
        edges: Vec<Edge>,
        mesh: f64,
        compact: Vec<bool>,
    ) -> Result<Self> {
        let mut renumber = vec![usize::MAX; leaves.len()];
        let mut kept = Vec::new();
        let mut kept_compact = Vec::new();
        let mut new_leaf = Vec::with_capacity(leaf.len());
        for &l in &leaf {
            if renumber[l] == usize::MAX {
                renumber[l] = kept.len();
                kept.push(leaves[l].clone());
                kept_compact.push(compact[l]);
            }
            new_leaf.push(renumber[l]);
        }
        let index = metric::index_ids("vertex", &vertices)?;
        let leaf_index = metric::index_ids("leaf", &kept)?;
        let k = Self {
            vertices,
            leaf: new_leaf,
            leaves: kept,
            edges,
            mesh,
            compact: kept_compact,
            index,
            leaf_index,
        };
        k.validate()?;
        Ok(k)
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::Empty("complex"));
        }
        if !(self.mesh > 0.0) || !self.mesh.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mesh must be positive, got {}",
                self.mesh
            )));
        }
        for e in &self.edges {
            let (u, v) = (&self.vertices[e.u], &self.vertices[e.v]);
            if !(e.len > 0.0) || !e.len.is_finite() {
                return Err(Error::NonPositiveLength(u.clone(), v.clone(), e.len));
            }
            if e.u == e.v {
                return Err(Error::InvalidParameter(format!("self-loop at `{u}`")));
            }
            if EdgeKind::between(self.leaf[e.u], self.leaf[e.v]) != e.kind {
                return Err(Error::EdgeKindMismatch {
                    kind: e.kind.name(),
                    u: u.clone(),
                    v: v.clone(),
                });
            }
        }
        let adj = self.adjacency();
        let (comp, count) = paths::components(&adj);
        if count > 1 {
            let other = comp.iter().position(|&c| c != 0).expect("two components");
            return Err(Error::Disconnected(
                self.vertices[0].clone(),
                self.vertices[other].clone(),
            ));
        }
        let mut tangential = Adjacency::new(self.vertices.len());
        for e in self.edges.iter().filter(|e| e.kind == EdgeKind::Tangential) {
            tangential.add_edge(e.u, e.v, e.len);
        }
        let (comp, _) = paths::components(&tangential);
        let mut first: Vec<Option<usize>> = vec![None; self.leaves.len()];
        for (v, &l) in self.leaf.iter().enumerate() {
            match first[l] {
                None => first[l] = Some(v),
                Some(f) if comp[f] != comp[v] => {
                    return Err(Error::LeafDisconnected {
                        leaf: self.leaves[l].clone(),
                        a: self.vertices[f].clone(),
                        b: self.vertices[v].clone(),
                    })
                }
                Some(_) => {}
            }
        }
        if self.leaves.len() > 1 {
            let reach = self.mesh * (1.0 + defaults::RELATIVE_TOL);
            let bad = (0..self.vertices.len())
                .into_par_iter()
                .filter(|&v| !self.compact[self.leaf[v]])
                .find_first(|&v| {
                    let own = self.leaf[v];
                    paths::nearest_within(&adj, v, reach, |u| self.leaf[u] != own).is_none()
                });
            if let Some(v) = bad {
                return Err(Error::MeshContract {
                    vertex: self.vertices[v].clone(),
                    mesh: self.mesh,
                });
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Leaf index of vertex `v`.
    pub fn leaf_of(&self, v: usize) -> usize {
        self.leaf[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn leaf_index(&self, id: &str) -> Option<usize> {
        self.leaf_index.get(id).copied()
    }

    fn require_vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index(id).ok_or_else(|| Error::UnknownId {
            kind: "vertex",
            id: id.to_string(),
        })
    }

    fn require_leaf(&self, id: &str) -> Result<usize> {
        self.leaf_index(id).ok_or_else(|| Error::UnknownId {
            kind: "leaf",
            id: id.to_string(),
        })
    }

    pub fn is_compact(&self, leaf: usize) -> bool {
        self.compact[leaf]
    }

    pub fn compact_leaves(&self) -> impl Iterator<Item = &str> {
        self.leaves
            .iter()
            .zip(&self.compact)
            .filter(|(_, &c)| c)
            .map(|(l, _)| l.as_str())
    }

    /// Vertex indices of each leaf.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.leaves.len()];
        for (v, &l) in self.leaf.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::new(self.vertices.len());
        for e in &self.edges {
            adj.add_edge(e.u, e.v, e.len);
        }
        adj
    }

    /// The underlying weighted graph, forgetting leaves.
    pub fn graph(&self) -> WeightedGraphSpace {
        WeightedGraphSpace::from_indexed(
            self.vertices.clone(),
            self.edges.iter().map(|e| (e.u, e.v, e.len)).collect(),
        )
    }

    /// Geodesic metric on the vertices.
    pub fn geodesic(&self) -> Result<FiniteMetricSpace> {
        metric::geodesic_metric(&self.graph())
    }
}

/// Set distances between leaves: `dist(L, L')` is the least geodesic distance
/// between a vertex of `L` and a vertex of `L'`. A pseudometric in general
/// without the triangle inequality.
pub fn leaf_distance_matrix(k: &FoliatedComplex) -> Result<FiniteMetricSpace> {
    let rows = leaf_distances(k)?;
    FiniteMetricSpace::from_fn(k.leaves.clone(), |a, b| rows[a][b])
}

fn leaf_distances(k: &FoliatedComplex) -> Result<Vec<Vec<f64>>> {
    let adj = k.adjacency();
    let members = k.members();
    let nl = members.len();
    let raw: Vec<Vec<Option<f64>>> = members
        .par_iter()
        .map(|src| {
            let d = paths::dijkstra(&adj, src);
            let mut row: Vec<Option<f64>> = vec![None; nl];
            for (v, dv) in d.into_iter().enumerate() {
                if let Some(dv) = dv {
                    let l = k.leaf[v];
                    if row[l].is_none_or(|cur| dv < cur) {
                        row[l] = Some(dv);
                    }
                }
            }
            row
        })
        .collect();
    let mut out = vec![vec![0.0; nl]; nl];
    for a in 0..nl {
        for b in a + 1..nl {
            let d = raw[a][b].ok_or_else(|| {
                Error::Disconnected(
                    k.vertices[members[a][0]].clone(),
                    k.vertices[members[b][0]].clone(),
                )
            })?;
            out[a][b] = d;
            out[b][a] = d;
        }
    }
    Ok(out)
}

/// Hausdorff leaf space: leaf classes with the chain-infimum metric `ρ`.
/// Class ids are the id of the class's first leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HlsSpace {
    pub space: FiniteMetricSpace,
    pub class_of_leaf: BTreeMap<String, String>,
    pub class_of_vertex: BTreeMap<String, String>,
}

impl HlsSpace {
    pub fn class_index_of_leaf(&self, leaf: &str) -> Option<usize> {
        self.space.index_of(self.class_of_leaf.get(leaf)?)
    }

    pub fn class_index_of_vertex(&self, vertex: &str) -> Option<usize> {
        self.space.index_of(self.class_of_vertex.get(vertex)?)
    }
}

/// HLS with the zero-collapse threshold at its default, relative to the
/// diameter of the leaf distance matrix.
pub fn hls(k: &FoliatedComplex) -> Result<HlsSpace> {
    let rows = leaf_distances(k)?;
    let diam = rows.iter().flatten().copied().fold(0.0, f64::max);
    hls_from_rows(k, &rows, defaults::relative_tol(diam))
}

/// HLS with classes at `ρ ≤ zero_tol` identified.
pub fn hls_with(k: &FoliatedComplex, zero_tol: f64) -> Result<HlsSpace> {
    if !(zero_tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "zero tolerance must be nonnegative, got {zero_tol}"
        )));
    }
    let rows = leaf_distances(k)?;
    hls_from_rows(k, &rows, zero_tol)
}

fn hls_from_rows(k: &FoliatedComplex, rows: &[Vec<f64>], zero_tol: f64) -> Result<HlsSpace> {
    let nl = k.leaves.len();
    let mut uf = UnionFind::new(nl);
    let collapsed: Collapsed =
        quotient::collapse_classes(nl, &mut uf, |a, b| Some(rows[a][b]), zero_tol)
            .expect("leaf distances are finite");
    let q = quotient::assemble(&k.leaves, &collapsed);
    let class_of_vertex = k
        .vertices
        .iter()
        .zip(&k.leaf)
        .map(|(v, &l)| (v.clone(), q.class_map[&k.leaves[l]].clone()))
        .collect();
    Ok(HlsSpace {
        space: q.space,
        class_of_leaf: q.class_map,
        class_of_vertex,
    })
}

/// A basic function: one positive value per leaf.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpSpec {
    pub values: BTreeMap<String, f64>,
}

impl WarpSpec {
    /// The same value on every leaf of `k`.
    pub fn constant(k: &FoliatedComplex, value: f64) -> Self {
        Self {
            values: k.leaves.iter().map(|l| (l.clone(), value)).collect(),
        }
    }

    fn resolve(&self, k: &FoliatedComplex) -> Result<Vec<f64>> {
        for l in self.values.keys() {
            k.require_leaf(l)?;
        }
        k.leaves
            .iter()
            .map(|l| {
                let v = *self
                    .values
                    .get(l)
                    .ok_or_else(|| Error::MissingLeaf(l.clone()))?;
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::BadWarpValue {
                        leaf: l.clone(),
                        value: v,
                        expected: "a positive finite number",
                    });
                }
                Ok(v)
            })
            .collect()
    }
}

/// Scales each tangential edge by the value of its leaf. Transverse edges are
/// unchanged. The declared mesh grows with values above 1 so the contract
/// still holds.
pub fn warp(k: &FoliatedComplex, f: &WarpSpec) -> Result<FoliatedComplex> {
    let values = f.resolve(k)?;
    let mut out = k.clone();
    for e in &mut out.edges {
        if e.kind == EdgeKind::Tangential {
            e.len *= values[k.leaf[e.u]];
        }
    }
    let top = values.iter().copied().fold(1.0, f64::max);
    out.mesh = k.mesh * top;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueMode {
    Tangential,
    Transverse,
}

fn fresh(base: &str, taken: &mut HashSet<String>) -> String {
    let mut id = base.to_string();
    while taken.contains(&id) {
        id = format!("b:{id}");
    }
    taken.insert(id.clone());
    id
}

/// Glues `k2` onto `k1` by identifying each `a` with `f(a)`, `a` a vertex of
/// `k1`. Merged vertices keep their `k1` id; `k2` ids that clash with `k1` are
/// prefixed with `b:`.
///
/// Tangential mode requires `f` to map leaves onto leaves and merges the
/// matched leaves. Transverse mode merges no leaves: a merged vertex keeps its
/// `k1` leaf and edge kinds are reassigned from leaf incidence.
pub fn glue_complexes(
    k1: &FoliatedComplex,
    k2: &FoliatedComplex,
    f: &Bijection,
    mode: GlueMode,
) -> Result<FoliatedComplex> {
    if f.is_empty() {
        return Err(Error::Disconnected(
            k1.vertices[0].clone(),
            format!("b:{}", k2.vertices[0]),
        ));
    }
    let mut target: Vec<Option<usize>> = vec![None; k2.vertices.len()];
    let mut leaf_2to1: Vec<Option<(usize, usize)>> = vec![None; k2.leaves.len()];
    let mut leaf_1to2: Vec<Option<(usize, usize)>> = vec![None; k1.leaves.len()];
    for (p, (a, b)) in f.pairs().iter().enumerate() {
        let (i1, i2) = (k1.require_vertex(a)?, k2.require_vertex(b)?);
        if target[i2].is_some() {
            return Err(Error::NotBijective(b.clone()));
        }
        target[i2] = Some(i1);
        if mode == GlueMode::Tangential {
            let (l1, l2) = (k1.leaf[i1], k2.leaf[i2]);
            let clash = |q: usize| {
                let (qa, qb) = &f.pairs()[q];
                Error::NotLeafRespecting(format!("{a} -> {b}"), format!("{qa} -> {qb}"))
            };
            match leaf_1to2[l1] {
                Some((m, q)) if m != l2 => return Err(clash(q)),
                _ => leaf_1to2[l1] = Some((l2, p)),
            }
            match leaf_2to1[l2] {
                Some((m, q)) if m != l1 => return Err(clash(q)),
                _ => leaf_2to1[l2] = Some((l1, p)),
            }
        }
    }

    let mut taken: HashSet<String> = k1.leaves.iter().cloned().collect();
    let mut leaves = k1.leaves.clone();
    let mut compact = k1.compact.clone();
    let mut leaf_map2 = vec![usize::MAX; k2.leaves.len()];
    for (l2, id) in k2.leaves.iter().enumerate() {
        match leaf_2to1[l2] {
            Some((l1, _)) => {
                leaf_map2[l2] = l1;
                compact[l1] |= k2.compact[l2];
            }
            None => {
                leaf_map2[l2] = leaves.len();
                leaves.push(fresh(id, &mut taken));
                compact.push(k2.compact[l2]);
            }
        }
    }

    let mut taken: HashSet<String> = k1.vertices.iter().cloned().collect();
    let mut vertices = k1.vertices.clone();
    let mut leaf = k1.leaf.clone();
    let mut vmap2 = vec![usize::MAX; k2.vertices.len()];
    for (i2, id) in k2.vertices.iter().enumerate() {
        match target[i2] {
            Some(i1) => vmap2[i2] = i1,
            None => {
                vmap2[i2] = vertices.len();
                vertices.push(fresh(id, &mut taken));
                leaf.push(leaf_map2[k2.leaf[i2]]);
            }
        }
    }

    let mut edges = k1.edges.clone();
    for e in &k2.edges {
        let (u, v) = (vmap2[e.u], vmap2[e.v]);
        edges.push(Edge {
            u,
            v,
            len: e.len,
            kind: EdgeKind::between(leaf[u], leaf[v]),
        });
    }
    FoliatedComplex::from_parts(vertices, leaf, leaves, edges, k1.mesh.max(k2.mesh), compact)
}

/// Fuses the given leaves into one, named after the first. Transverse edges
/// inside the fused set become tangential. The fused leaf is declared compact,
/// as is the leaf a turbulization inserts along a closed transversal.
pub fn fuse_leaves<S: AsRef<str>>(k: &FoliatedComplex, leaves: &[S]) -> Result<FoliatedComplex> {
    let Some(first) = leaves.first() else {
        return Err(Error::Empty("leaf set"));
    };
    let into = k.require_leaf(first.as_ref())?;
    let mut redirect: Vec<usize> = (0..k.leaves.len()).collect();
    let mut compact = k.compact.clone();
    for l in leaves {
        let li = k.require_leaf(l.as_ref())?;
        redirect[li] = into;
    }
    compact[into] = true;
    let leaf: Vec<usize> = k.leaf.iter().map(|&l| redirect[l]).collect();
    let edges = k
        .edges
        .iter()
        .map(|e| Edge {
            kind: EdgeKind::between(leaf[e.u], leaf[e.v]),
            ..*e
        })
        .collect();
    FoliatedComplex::from_parts(
        k.vertices.clone(),
        leaf,
        k.leaves.clone(),
        edges,
        k.mesh,
        compact,
    )
}

/// Class pairs `(π₁(a), π₂(f(a)))` induced by a vertex identification.
pub fn induced_class_relation(
    h1: &HlsSpace,
    h2: &HlsSpace,
    f: &Bijection,
) -> Result<Vec<(String, String)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (a, b) in f.pairs() {
        let lookup = |h: &HlsSpace, v: &String| {
            h.class_of_vertex
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnknownId {
                    kind: "vertex",
                    id: v.clone(),
                })
        };
        let pair = (lookup(h1, a)?, lookup(h2, b)?);
        if seen.insert(pair.clone()) {
            out.push(pair);
        }
    }
    Ok(out)
}

/// The parameter `d(c) = ρ(base, c)` of a segment-like HLS. Fails unless `d` is
/// injective and `|d(x) − d(y)|` matches `ρ(x, y)` within `tol` for all pairs.
pub fn segment_parameter(
    h: &HlsSpace,
    base_class: &str,
    tol: f64,
) -> Result<BTreeMap<String, f64>> {
    segment_parameter_on(&h.space, base_class, tol)
}

pub(crate) fn segment_parameter_on(
    space: &FiniteMetricSpace,
    base_class: &str,
    tol: f64,
) -> Result<BTreeMap<String, f64>> {
    let b = space.require(base_class)?;
    let d = space.row(b);
    let n = space.len();
    for x in 0..n {
        for y in x + 1..n {
            let gap = (d[x] - d[y]).abs();
            if gap <= tol {
                return Err(Error::NotSegmentLike(format!(
                    "classes `{}` and `{}` share the parameter value {}",
                    space.id(x),
                    space.id(y),
                    d[x]
                )));
            }
            if (gap - space.d(x, y)).abs() > tol {
                return Err(Error::NotSegmentLike(format!(
                    "classes `{}` and `{}` are {} apart but their parameters differ by {gap}",
                    space.id(x),
                    space.id(y),
                    space.d(x, y)
                )));
            }
        }
    }
    Ok((0..n).map(|x| (space.id(x).to_string(), d[x])).collect())
}
