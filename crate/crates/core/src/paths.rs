//! Shortest paths over index-based adjacency lists.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

/// Undirected adjacency list with positive edge weights.
#[derive(Debug, Clone, Default)]
pub(crate) struct Adjacency {
    pub(crate) nbrs: Vec<Vec<(usize, f64)>>,
}

impl Adjacency {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            nbrs: vec![Vec::new(); n],
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.nbrs.len()
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize, w: f64) {
        if u == v {
            return;
        }
        self.nbrs[u].push((v, w));
        self.nbrs[v].push((u, w));
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties on node index
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multi-source Dijkstra. Unreachable vertices get `None`.
pub(crate) fn dijkstra(adj: &Adjacency, sources: &[usize]) -> Vec<Option<f64>> {
    let init: Vec<(usize, f64)> = sources.iter().map(|&s| (s, 0.0)).collect();
    dijkstra_from(adj, &init)
}

/// Dijkstra with initial offsets at the sources.
pub(crate) fn dijkstra_from(adj: &Adjacency, init: &[(usize, f64)]) -> Vec<Option<f64>> {
    let n = adj.len();
    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &(s, d0) in init {
        if dist[s].is_none_or(|cur| d0 < cur) {
            dist[s] = Some(d0);
            heap.push(Entry { dist: d0, node: s });
        }
    }
    while let Some(Entry { dist: d, node: u }) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj.nbrs[u] {
            let nd = d + w;
            if dist[v].is_none_or(|best| nd < best) {
                dist[v] = Some(nd);
                heap.push(Entry { dist: nd, node: v });
            }
        }
    }
    dist
}

/// Dijkstra from `source` that stops at the first settled vertex satisfying
/// `accept` or once the frontier exceeds `radius`.
pub(crate) fn nearest_within(
    adj: &Adjacency,
    source: usize,
    radius: f64,
    mut accept: impl FnMut(usize) -> bool,
) -> Option<(usize, f64)> {
    let mut dist: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(source, 0.0);
    heap.push(Entry {
        dist: 0.0,
        node: source,
    });
    while let Some(Entry { dist: d, node: u }) = heap.pop() {
        if d > radius {
            return None;
        }
        if dist.get(&u).is_some_and(|&best| d > best) {
            continue;
        }
        if u != source && accept(u) {
            return Some((u, d));
        }
        for &(v, w) in &adj.nbrs[u] {
            let nd = d + w;
            if nd <= radius && dist.get(&v).is_none_or(|&best| nd < best) {
                dist.insert(v, nd);
                heap.push(Entry { dist: nd, node: v });
            }
        }
    }
    None
}

/// All-pairs shortest paths, parallel over sources. Rows are symmetrized by
/// taking the entry computed from the smaller index, so the output is exactly
/// symmetric and independent of scheduling. Returns the first unreachable pair
/// on failure.
pub(crate) fn all_pairs(adj: &Adjacency) -> Result<Vec<Vec<f64>>, (usize, usize)> {
    let n = adj.len();
    let rows: Vec<Vec<Option<f64>>> = (0..n)
        .into_par_iter()
        .map(|s| dijkstra(adj, &[s]))
        .collect();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            match rows[i][j] {
                Some(d) => {
                    out[i][j] = d;
                    out[j][i] = d;
                }
                None => return Err((i, j)),
            }
        }
    }
    Ok(out)
}

/// Connected components of the adjacency, labelled in order of first vertex.
pub(crate) fn components(adj: &Adjacency) -> (Vec<usize>, usize) {
    let n = adj.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj.nbrs[u] {
                if label[v] == usize::MAX {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

/// Floyd–Warshall over an optional-weight matrix (`None` = no edge). Gains of a few ulps are ignored so
/// that an already closed table comes back unchanged.
pub(crate) fn floyd(w: &mut [Vec<Option<f64>>]) {
    let k = w.len();
    for m in 0..k {
        for i in 0..k {
            let Some(dim) = w[i][m] else { continue };
            for j in 0..k {
                let Some(dmj) = w[m][j] else { continue };
                let cand = dim + dmj;
                if w[i][j].is_none_or(|cur| cand < cur - 4.0 * f64::EPSILON * cur) {
                    w[i][j] = Some(cand);
                }
            }
        }
    }
}
