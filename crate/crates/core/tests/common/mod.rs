#![allow(dead_code)]

use std::collections::BTreeMap;

use hlskit::{EdgeKind, FiniteMetricSpace, FoliatedComplex, MetricGraph, WeightedGraphSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn floyd(mut d: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Random metric on `n` points (shortest paths of a random complete graph),
/// with some points doubled when `pseudo` holds.
pub fn random_space(r: &mut impl Rng, n: usize, pseudo: bool) -> FiniteMetricSpace {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = r.gen_range(0.1..4.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    let mut d = floyd(d);
    if pseudo && n >= 2 {
        for _ in 0..r.gen_range(0..n) {
            let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
            if a != b {
                for k in 0..n {
                    d[b][k] = d[a][k];
                    d[k][b] = d[k][a];
                }
                d[a][b] = 0.0;
                d[b][a] = 0.0;
                d[b][b] = 0.0;
            }
        }
    }
    FiniteMetricSpace::new(ids("p", n), d).unwrap()
}

pub fn random_relation(r: &mut impl Rng, x: &FiniteMetricSpace) -> Vec<(String, String)> {
    let n = x.len();
    (0..r.gen_range(0..=n))
        .map(|_| {
            (
                x.id(r.gen_range(0..n)).to_string(),
                x.id(r.gen_range(0..n)).to_string(),
            )
        })
        .collect()
}

/// Cheapest simple path from `a` to `b`, where `w(i, j)` is the step cost.
pub fn simple_path_min(
    n: usize,
    a: usize,
    b: usize,
    w: &dyn Fn(usize, usize) -> Option<f64>,
) -> Option<f64> {
    fn go(
        cur: usize,
        b: usize,
        acc: f64,
        used: &mut Vec<bool>,
        w: &dyn Fn(usize, usize) -> Option<f64>,
        best: &mut Option<f64>,
    ) {
        if cur == b {
            if best.map_or(true, |x| acc < x) {
                *best = Some(acc);
            }
            return;
        }
        for nxt in 0..used.len() {
            if used[nxt] {
                continue;
            }
            if let Some(c) = w(cur, nxt) {
                used[nxt] = true;
                go(nxt, b, acc + c, used, w, best);
                used[nxt] = false;
            }
        }
    }
    let mut used = vec![false; n];
    used[a] = true;
    let mut best = None;
    go(a, b, 0.0, &mut used, w, &mut best);
    best
}

/// Chain infimum between the classes of `a` and `b`: steps inside the
/// relation are free, others cost the distance.
pub fn chain_oracle(x: &FiniteMetricSpace, rel: &[(String, String)], a: usize, b: usize) -> f64 {
    let n = x.len();
    let mut related = vec![vec![false; n]; n];
    for (p, q) in rel {
        let (i, j) = (x.index_of(p).unwrap(), x.index_of(q).unwrap());
        related[i][j] = true;
        related[j][i] = true;
    }
    let w = |i: usize, j: usize| Some(if related[i][j] { 0.0 } else { x.d(i, j) });
    simple_path_min(n, a, b, &w).unwrap()
}

/// Random connected weighted graph; may contain parallel edges.
pub fn random_graph_space(r: &mut impl Rng, n: usize, extra: usize) -> WeightedGraphSpace {
    let v = ids("v", n);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = r.gen_range(0..i);
        edges.push((v[i].clone(), v[j].clone(), r.gen_range(0.1..3.0)));
    }
    for _ in 0..extra {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b {
            edges.push((v[a].clone(), v[b].clone(), r.gen_range(0.1..3.0)));
        }
    }
    WeightedGraphSpace::new(v, edges).unwrap()
}

/// Cheapest simple path by enumeration over a graph's edges.
pub fn path_oracle(g: &WeightedGraphSpace, a: usize, b: usize) -> Option<f64> {
    let n = g.vertices().len();
    let mut w = vec![vec![None::<f64>; n]; n];
    for &(u, v, len) in g.edges() {
        let cur = w[u][v].map_or(len, |c: f64| c.min(len));
        w[u][v] = Some(cur);
        w[v][u] = Some(cur);
    }
    simple_path_min(n, a, b, &|i, j| w[i][j])
}

/// Random foliated complex: a random spanning tree whose edges are marked
/// tangential at random, plus extra edges.
pub fn random_complex(r: &mut impl Rng, n: usize, extra: usize) -> FoliatedComplex {
    let v = ids("v", n);
    let mut leaf: Vec<usize> = (0..n).collect();
    fn root(leaf: &mut [usize], mut i: usize) -> usize {
        while leaf[i] != i {
            leaf[i] = leaf[leaf[i]];
            i = leaf[i];
        }
        i
    }
    let mut tree = Vec::new();
    for i in 1..n {
        let j = r.gen_range(0..i);
        let tangential = r.gen_bool(0.6);
        if tangential {
            let (a, b) = (root(&mut leaf, i), root(&mut leaf, j));
            leaf[a] = b;
        }
        tree.push((i, j, r.gen_range(0.1..2.0)));
    }
    for _ in 0..extra {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b {
            tree.push((a, b, r.gen_range(0.1..2.0)));
        }
    }
    let lab: Vec<usize> = (0..n).map(|i| root(&mut leaf, i)).collect();
    let leaf_of: BTreeMap<String, String> = (0..n)
        .map(|i| (v[i].clone(), format!("L{}", lab[i])))
        .collect();
    // mesh: the farthest any vertex is from another leaf
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b, len) in &tree {
        d[a][b] = d[a][b].min(len);
        d[b][a] = d[b][a].min(len);
    }
    let d = floyd(d);
    let mesh = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| lab[j] != lab[i])
                .map(|j| d[i][j])
                .fold(f64::INFINITY, f64::min)
        })
        .filter(|m| m.is_finite())
        .fold(1.0, f64::max);
    let edges = tree
        .into_iter()
        .map(|(a, b, len)| {
            let kind = if lab[a] == lab[b] {
                EdgeKind::Tangential
            } else {
                EdgeKind::Transverse
            };
            (v[a].clone(), v[b].clone(), len, kind)
        })
        .collect();
    FoliatedComplex::new(v, leaf_of, edges, mesh, Vec::new()).unwrap()
}

/// Leaf pseudometric by Floyd–Warshall over vertices with tangential edges
/// free, then the minimum over member pairs.
pub fn leaf_oracle(k: &FoliatedComplex) -> Vec<Vec<f64>> {
    let n = k.vertices().len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in k.edges() {
        let c = match e.kind {
            EdgeKind::Tangential => 0.0,
            EdgeKind::Transverse => e.len,
        };
        if c < d[e.u][e.v] {
            d[e.u][e.v] = c;
            d[e.v][e.u] = c;
        }
    }
    let d = floyd(d);
    let m = k.leaves().len();
    let mut out = vec![vec![f64::INFINITY; m]; m];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (k.leaf_of(i), k.leaf_of(j));
            out[a][b] = out[a][b].min(d[i][j]);
        }
    }
    out
}

pub fn random_metric_graph(r: &mut impl Rng, n: usize, extra: usize) -> MetricGraph {
    let v = ids("n", n);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = r.gen_range(0..i);
        edges.push((v[i].clone(), v[j].clone(), r.gen_range(0.2..2.0)));
    }
    for _ in 0..extra {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        edges.push((v[a].clone(), v[b].clone(), r.gen_range(0.2..2.0)));
    }
    MetricGraph::new(v, edges).unwrap()
}

/// Position of each sample point: `(edge, t·len)` for subdivision points,
/// `(node)` for nodes. Mirrors the sampling id scheme `e{edge}.{k}`.
pub enum Pos {
    Node(usize),
    Edge(usize, f64),
}

pub fn sample_positions(g: &MetricGraph, x: &FiniteMetricSpace, step: f64) -> Vec<Pos> {
    x.points()
        .iter()
        .map(|p| {
            if let Some(i) = g.node_index(p) {
                return Pos::Node(i);
            }
            let (e, k) = p[1..].split_once('.').unwrap();
            let (e, k): (usize, f64) = (e.parse().unwrap(), k.parse().unwrap());
            let len = g.edges()[e].2;
            let parts = (len / step - 1e-9).ceil().max(1.0);
            Pos::Edge(e, k * len / parts)
        })
        .collect()
}

/// Length-metric distance between two positions, via node distances from a
/// Floyd–Warshall pass.
pub fn graph_point_oracle(g: &MetricGraph) -> impl Fn(&Pos, &Pos) -> f64 + '_ {
    let n = g.nodes().len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(u, v, len) in g.edges() {
        d[u][v] = d[u][v].min(len);
        d[v][u] = d[v][u].min(len);
    }
    let d = floyd(d);
    move |a: &Pos, b: &Pos| {
        // (node, offset) options for reaching each position
        let ends = |p: &Pos| -> Vec<(usize, f64)> {
            match *p {
                Pos::Node(i) => vec![(i, 0.0)],
                Pos::Edge(e, t) => {
                    let (u, v, len) = g.edges()[e];
                    vec![(u, t), (v, len - t)]
                }
            }
        };
        let mut best = f64::INFINITY;
        for (u, s) in ends(a) {
            for (v, t) in ends(b) {
                best = best.min(s + d[u][v] + t);
            }
        }
        if let (Pos::Edge(e1, t1), Pos::Edge(e2, t2)) = (a, b) {
            if e1 == e2 {
                best = best.min((t1 - t2).abs());
            }
        }
        best
    }
}

pub fn permuted(x: &FiniteMetricSpace, r: &mut impl Rng) -> (FiniteMetricSpace, Vec<usize>) {
    let n = x.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let rows = (0..n)
        .map(|i| (0..n).map(|j| x.d(perm[i], perm[j])).collect())
        .collect();
    (FiniteMetricSpace::new(ids("q", n), rows).unwrap(), perm)
}
