//! Gromov–Hausdorff distance: an exact oracle for tiny spaces, the net bound
//! `3·max(r_X, r_Y, δ)`, a correspondence search heuristic, and lower bounds.
//!
//! Every estimator first puts its two inputs in a canonical order, so swapping
//! the arguments gives the same numbers.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::metric::{self, FiniteMetricSpace};

/// A relation covering both point sets, with its distortion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub pairs: Vec<(String, String)>,
    pub distortion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GhMethod {
    Exact,
    GromovNet,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Witness {
    Correspondence(Correspondence),
    MatchedNets {
        /// `(x, y)` net pairs of the matching.
        pairs: Vec<(String, String)>,
        r_x: f64,
        r_y: f64,
        delta: f64,
        /// True when the matching is proven optimal.
        optimal: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: GhMethod,
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl GhEstimate {
    fn flipped(mut self) -> Self {
        match &mut self.witness {
            Witness::Correspondence(c) => flip(&mut c.pairs),
            Witness::MatchedNets {
                pairs, r_x, r_y, ..
            } => {
                flip(pairs);
                std::mem::swap(r_x, r_y);
            }
        }
        self
    }
}

fn flip(pairs: &mut [(String, String)]) {
    for p in pairs {
        std::mem::swap(&mut p.0, &mut p.1);
    }
}

fn cmp_f64s(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// True when `(y, x)` is the canonical order of the pair.
fn should_swap(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> bool {
    let sorted = |s: &FiniteMetricSpace| {
        let mut v: Vec<f64> = s.rows().into_iter().flatten().collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let flat = |s: &FiniteMetricSpace| -> Vec<f64> { s.rows().into_iter().flatten().collect() };
    let o = x
        .len()
        .cmp(&y.len())
        .then_with(|| cmp_f64s(&sorted(x), &sorted(y)))
        .then_with(|| cmp_f64s(&flat(x), &flat(y)))
        .then_with(|| x.points().cmp(y.points()));
    o == Ordering::Greater
}

fn canonical<T>(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    f: impl FnOnce(&FiniteMetricSpace, &FiniteMetricSpace) -> Result<T>,
    unswap: impl FnOnce(T) -> T,
) -> Result<T> {
    if should_swap(x, y) {
        f(y, x).map(unswap)
    } else {
        f(x, y)
    }
}

/// Distortion of an index relation.
pub fn distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a + 1..] {
            worst = worst.max((x.d(i, k) - y.d(j, l)).abs());
        }
    }
    worst
}

fn named(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    pairs: &[(usize, usize)],
) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|&(i, j)| (x.id(i).to_string(), y.id(j).to_string()))
        .collect()
}

/// Exact `d_GH` by searching all correspondences, refused when `|x|·|y|`
/// exceeds [`defaults::GH_EXACT_CAP`].
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<f64> {
    gh_exact_with(x, y, defaults::GH_EXACT_CAP).map(|c| c.distortion / 2.0)
}

/// The optimal correspondence, with cap `cap` on `|x|·|y|`.
pub fn gh_exact_with(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cap: usize,
) -> Result<Correspondence> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("space"));
    }
    let size = x.len() * y.len();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    canonical(
        x,
        y,
        |x, y| {
            let pairs = exact_search(x, y);
            Ok(Correspondence {
                distortion: distortion(x, y, &pairs),
                pairs: named(x, y, &pairs),
            })
        },
        |mut c| {
            flip(&mut c.pairs);
            c
        },
    )
}

/// Include/exclude search over the pair grid, pruned by the incumbent and by
/// coverage. Exhaustive in effect: only branches that cannot beat the best
/// complete correspondence are cut.
fn exact_search(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<(usize, usize)> {
    struct State<'a> {
        x: &'a FiniteMetricSpace,
        y: &'a FiniteMetricSpace,
        cells: Vec<(usize, usize)>,
        chosen: Vec<(usize, usize)>,
        row_cover: Vec<usize>,
        col_cover: Vec<usize>,
        row_left: Vec<usize>,
        col_left: Vec<usize>,
        best: f64,
        best_set: Vec<(usize, usize)>,
    }

    fn go(s: &mut State, c: usize, cur: f64) {
        if c == s.cells.len() {
            if s.row_cover.iter().all(|&v| v > 0)
                && s.col_cover.iter().all(|&v| v > 0)
                && cur < s.best
            {
                s.best = cur;
                s.best_set = s.chosen.clone();
            }
            return;
        }
        let (i, j) = s.cells[c];
        s.row_left[i] -= 1;
        s.col_left[j] -= 1;
        let with = s
            .chosen
            .iter()
            .map(|&(k, l)| (s.x.d(i, k) - s.y.d(j, l)).abs())
            .fold(cur, f64::max);
        if with < s.best {
            s.chosen.push((i, j));
            s.row_cover[i] += 1;
            s.col_cover[j] += 1;
            go(s, c + 1, with);
            s.row_cover[i] -= 1;
            s.col_cover[j] -= 1;
            s.chosen.pop();
        }
        let row_ok = s.row_cover[i] > 0 || s.row_left[i] > 0;
        let col_ok = s.col_cover[j] > 0 || s.col_left[j] > 0;
        if row_ok && col_ok {
            go(s, c + 1, cur);
        }
        s.row_left[i] += 1;
        s.col_left[j] += 1;
    }

    let (n, m) = (x.len(), y.len());
    let mut st = State {
        x,
        y,
        cells: (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect(),
        chosen: Vec::new(),
        row_cover: vec![0; n],
        col_cover: vec![0; m],
        row_left: vec![m; n],
        col_left: vec![n; m],
        best: f64::INFINITY,
        best_set: Vec::new(),
    };
    go(&mut st, 0, 0.0);
    st.best_set
}

/// `max(½|diam X − diam Y|, ½·H(ecc X, ecc Y))`, where `H` is the Hausdorff
/// distance between the eccentricity value sets on the real line.
pub fn lower_bounds(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let diam = 0.5 * (x.diameter() - y.diameter()).abs();
    let mut ex = x.eccentricities();
    let mut ey = y.eccentricities();
    ex.sort_by(f64::total_cmp);
    ey.sort_by(f64::total_cmp);
    let one_sided = |a: &[f64], b: &[f64]| {
        a.iter()
            .map(|&v| {
                let p = b.partition_point(|&w| w < v);
                let mut best = f64::INFINITY;
                if p < b.len() {
                    best = best.min(b[p] - v);
                }
                if p > 0 {
                    best = best.min(v - b[p - 1]);
                }
                best
            })
            .fold(0.0, f64::max)
    };
    let haus = one_sided(&ex, &ey).max(one_sided(&ey, &ex));
    diam.max(0.5 * haus)
}

/// Bijection between two equal-size nets minimizing the largest distance
/// discrepancy. Returns `(assignment, δ, proven optimal)`.
fn match_nets(
    x: &FiniteMetricSpace,
    a: &[usize],
    y: &FiniteMetricSpace,
    b: &[usize],
) -> (Vec<usize>, f64, bool) {
    let k = a.len();
    let cost = |asg: &[usize]| -> f64 {
        let mut w: f64 = 0.0;
        for p in 0..k {
            for q in p + 1..k {
                w = w.max((x.d(a[p], a[q]) - y.d(b[asg[p]], b[asg[q]])).abs());
            }
        }
        w
    };
    // profile gap orders candidates
    let profile = |s: &FiniteMetricSpace, set: &[usize], i: usize| {
        let mut v: Vec<f64> = set.iter().map(|&j| s.d(set[i], j)).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let pa: Vec<Vec<f64>> = (0..k).map(|i| profile(x, a, i)).collect();
    let pb: Vec<Vec<f64>> = (0..k).map(|i| profile(y, b, i)).collect();
    let gap = |i: usize, j: usize| {
        pa[i]
            .iter()
            .zip(&pb[j])
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max)
    };
    let cand: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let mut c: Vec<usize> = (0..k).collect();
            c.sort_by(|&p, &q| gap(i, p).total_cmp(&gap(i, q)).then(p.cmp(&q)));
            c
        })
        .collect();

    // greedy start plus pairwise swaps
    let mut asg = vec![usize::MAX; k];
    let mut used = vec![false; k];
    for i in 0..k {
        let j = *cand[i].iter().find(|&&j| !used[j]).expect("free target");
        asg[i] = j;
        used[j] = true;
    }
    let mut best = cost(&asg);
    loop {
        let mut improved = false;
        for p in 0..k {
            for q in p + 1..k {
                asg.swap(p, q);
                let c = cost(&asg);
                if c < best {
                    best = c;
                    improved = true;
                } else {
                    asg.swap(p, q);
                }
            }
        }
        if !improved {
            break;
        }
    }

    let budget = if k <= defaults::NET_EXHAUSTIVE_K {
        u64::MAX
    } else {
        defaults::NET_NODE_BUDGET
    };
    let mut nodes = 0u64;
    let mut cur = vec![usize::MAX; k];
    let mut used = vec![false; k];
    let mut best_asg = asg;
    let complete = bnb(
        0,
        0.0,
        &mut cur,
        &mut used,
        &mut best,
        &mut best_asg,
        &mut nodes,
        budget,
        &|p, j, cur: &[usize]| {
            (0..p)
                .map(|q| (x.d(a[p], a[q]) - y.d(b[j], b[cur[q]])).abs())
                .fold(0.0, f64::max)
        },
        &cand,
    );
    (best_asg, best, complete)
}

#[allow(clippy::too_many_arguments)]
fn bnb(
    p: usize,
    cur_cost: f64,
    cur: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut f64,
    best_asg: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
    step: &dyn Fn(usize, usize, &[usize]) -> f64,
    cand: &[Vec<usize>],
) -> bool {
    let k = cur.len();
    if p == k {
        if cur_cost < *best {
            *best = cur_cost;
            best_asg.clone_from(cur);
        }
        return true;
    }
    for &j in &cand[p] {
        if used[j] {
            continue;
        }
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        let c = cur_cost.max(step(p, j, cur));
        if c >= *best {
            continue;
        }
        cur[p] = j;
        used[j] = true;
        let done = bnb(
            p + 1,
            c,
            cur,
            used,
            best,
            best_asg,
            nodes,
            budget,
            step,
            cand,
        );
        used[j] = false;
        cur[p] = usize::MAX;
        if !done {
            return false;
        }
    }
    true
}

/// Net bound: farthest-point `k`-nets `A ⊂ X`, `B ⊂ Y` and a bijection with
/// largest discrepancy `δ` give `d_GH ≤ 3·max(r_X, r_Y, δ)`. `k` is clamped
/// to the smaller space.
pub fn gromov_net_bound(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    k: usize,
    seed: u64,
) -> Result<GhEstimate> {
    if k == 0 {
        return Err(Error::InvalidParameter("net size must be positive".into()));
    }
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("space"));
    }
    canonical(x, y, |x, y| net_bound(x, y, k, seed), GhEstimate::flipped)
}

fn net_bound(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    k: usize,
    seed: u64,
) -> Result<GhEstimate> {
    let mut notes = Vec::new();
    let keff = k.min(x.len()).min(y.len());
    if keff < k {
        notes.push(format!("net size clamped from {k} to {keff}"));
    }
    let nx = metric::k_net(x, keff, seed)?;
    let ny = metric::k_net(y, keff, seed)?;
    let (asg, delta, optimal) = match_nets(x, &nx.members, y, &ny.members);
    if !optimal {
        notes.push("net matching search hit its node budget".into());
    }
    let eps = nx.radius.max(ny.radius).max(delta);
    let pairs = asg
        .iter()
        .enumerate()
        .map(|(p, &q)| (nx.member_ids[p].clone(), ny.member_ids[q].clone()))
        .collect();
    Ok(GhEstimate {
        lower: lower_bounds(x, y).min(3.0 * eps),
        upper: 3.0 * eps,
        method: GhMethod::GromovNet,
        witness: Witness::MatchedNets {
            pairs,
            r_x: nx.radius,
            r_y: ny.radius,
            delta,
            optimal,
        },
        notes,
    })
}

/// Seeded correspondence search with `budget` restarts run in parallel.
/// Each restart anchors one point pair, extends greedily in farthest-point
/// order, then refines single assignments and the worst pair.
pub fn gh_heuristic(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    budget: usize,
    seed: u64,
) -> Result<GhEstimate> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("space"));
    }
    canonical(
        x,
        y,
        |x, y| Ok(heuristic(x, y, budget, seed)),
        GhEstimate::flipped,
    )
}

fn restart_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(i as u64)
        .rotate_left(17)
}

fn heuristic(x: &FiniteMetricSpace, y: &FiniteMetricSpace, budget: usize, seed: u64) -> GhEstimate {
    let ex = x.eccentricities();
    let ey = y.eccentricities();
    let runs: Vec<(f64, Vec<(usize, usize)>)> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(seed, i));
            let rel = search(x, y, &ex, &ey, i, &mut rng);
            (distortion(x, y, &rel), rel)
        })
        .collect();
    let (d, rel) = runs
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("budget ≥ 1");
    GhEstimate {
        lower: lower_bounds(x, y).min(d / 2.0),
        upper: d / 2.0,
        method: GhMethod::Heuristic,
        witness: Witness::Correspondence(Correspondence {
            pairs: named(x, y, &rel),
            distortion: d,
        }),
        notes: Vec::new(),
    }
}

/// One restart. The relation is `graph(φ) ∪ graph(ψ)ᵀ` with `φ: X → Y` and
/// `ψ: Y → X`, stored as `n + m` pairs, first the `φ` pairs.
fn search(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    ex: &[f64],
    ey: &[f64],
    restart: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let (n, m) = (x.len(), y.len());
    let x0 = if restart == 0 { 0 } else { rng.gen_range(0..n) };
    let mut by_ecc: Vec<usize> = (0..m).collect();
    by_ecc.sort_by(|&a, &b| {
        (ey[a] - ex[x0])
            .abs()
            .total_cmp(&(ey[b] - ex[x0]).abs())
            .then(a.cmp(&b))
    });
    // restarts walk down the eccentricity ranking, then go random
    let y0 = if restart < m {
        by_ecc[restart]
    } else {
        *by_ecc.choose(rng).expect("nonempty")
    };

    let order_x = full_order(x, x0);
    let order_y = full_order(y, y0);
    let mut rel: Vec<(usize, usize)> = vec![(x0, y0)];
    let mut phi = vec![usize::MAX; n];
    phi[x0] = y0;
    let mut psi = vec![usize::MAX; m];
    let against = |rel: &[(usize, usize)], i: usize, j: usize, skip: Option<usize>| -> f64 {
        rel.iter()
            .enumerate()
            .filter(|(e, _)| Some(*e) != skip)
            .map(|(_, &(k, l))| (x.d(i, k) - y.d(j, l)).abs())
            .fold(0.0, f64::max)
    };
    for &i in order_x.iter().skip(1) {
        let j = (0..m)
            .min_by(|&a, &b| {
                against(&rel, i, a, None)
                    .total_cmp(&against(&rel, i, b, None))
                    .then((ey[a] - ex[i]).abs().total_cmp(&(ey[b] - ex[i]).abs()))
                    .then(a.cmp(&b))
            })
            .expect("nonempty");
        phi[i] = j;
        rel.push((i, j));
    }
    for &j in &order_y {
        let i = (0..n)
            .min_by(|&a, &b| {
                against(&rel, a, j, None)
                    .total_cmp(&against(&rel, b, j, None))
                    .then((ex[a] - ey[j]).abs().total_cmp(&(ex[b] - ey[j]).abs()))
                    .then(a.cmp(&b))
            })
            .expect("nonempty");
        psi[j] = i;
        rel.push((i, j));
    }
    // canonical layout: φ pairs by x, then ψ pairs by y
    let mut rel: Vec<(usize, usize)> = (0..n)
        .map(|i| (i, phi[i]))
        .chain((0..m).map(|j| (psi[j], j)))
        .collect();

    // sweeps: move each element to its best partner against the rest
    for _ in 0..8 {
        let mut changed = false;
        for e in 0..rel.len() {
            let (i, j) = rel[e];
            let now = against(&rel, i, j, Some(e));
            let better = if e < n {
                (0..m)
                    .map(|b| (against(&rel, i, b, Some(e)), b))
                    .min_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)))
                    .filter(|&(c, _)| c < now)
                    .map(|(_, b)| (i, b))
            } else {
                (0..n)
                    .map(|a| (against(&rel, a, j, Some(e)), a))
                    .min_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)))
                    .filter(|&(c, _)| c < now)
                    .map(|(_, a)| (a, j))
            };
            if let Some(p) = better {
                rel[e] = p;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // worst-pair moves
    for _ in 0..32 {
        let total = distortion(x, y, &rel);
        if total == 0.0 {
            break;
        }
        let mut worst = (0, 0);
        let mut wv = -1.0;
        for a in 0..rel.len() {
            for b in a + 1..rel.len() {
                let v = (x.d(rel[a].0, rel[b].0) - y.d(rel[a].1, rel[b].1)).abs();
                if v > wv {
                    wv = v;
                    worst = (a, b);
                }
            }
        }
        let mut moved = false;
        for e in [worst.0, worst.1] {
            let (i, j) = rel[e];
            let rest = without(x, y, &rel, e);
            let options: Vec<(usize, usize)> = if e < n {
                (0..m).map(|b| (i, b)).collect()
            } else {
                (0..n).map(|a| (a, j)).collect()
            };
            let best = options
                .into_iter()
                .map(|(a, b)| (rest.max(against(&rel, a, b, Some(e))), (a, b)))
                .min_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
            if let Some((c, p)) = best {
                if c < total {
                    rel[e] = p;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            break;
        }
    }
    rel
}

/// Farthest-point order from `start`, followed by any points it skipped at
/// distance zero.
fn full_order(x: &FiniteMetricSpace, start: usize) -> Vec<usize> {
    let (mut order, _) = metric::farthest_point_order(x, start, x.len());
    let mut seen = vec![false; x.len()];
    for &i in &order {
        seen[i] = true;
    }
    order.extend((0..x.len()).filter(|&i| !seen[i]));
    order
}

/// Distortion of `rel` without element `e`.
fn without(x: &FiniteMetricSpace, y: &FiniteMetricSpace, rel: &[(usize, usize)], e: usize) -> f64 {
    let mut w: f64 = 0.0;
    for a in 0..rel.len() {
        if a == e {
            continue;
        }
        for b in a + 1..rel.len() {
            if b == e {
                continue;
            }
            w = w.max((x.d(rel[a].0, rel[b].0) - y.d(rel[a].1, rel[b].1)).abs());
        }
    }
    w
}

/// Options for [`estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub exact_cap: usize,
    /// Net size for the net bound; `None` uses the smaller space size.
    pub net_k: Option<usize>,
    pub budget: usize,
    pub seed: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            exact_cap: defaults::GH_EXACT_CAP,
            net_k: None,
            budget: defaults::HEURISTIC_BUDGET,
            seed: defaults::SEED,
        }
    }
}

/// Best available estimate: exact within the cap, otherwise the tighter of
/// the net bound and the heuristic.
pub fn estimate(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    opts: &EstimateOptions,
) -> Result<GhEstimate> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Empty("space"));
    }
    if x.len() * y.len() <= opts.exact_cap {
        let c = gh_exact_with(x, y, opts.exact_cap)?;
        let v = c.distortion / 2.0;
        return Ok(GhEstimate {
            lower: v,
            upper: v,
            method: GhMethod::Exact,
            witness: Witness::Correspondence(c),
            notes: Vec::new(),
        });
    }
    let k = opts.net_k.unwrap_or(x.len().min(y.len()));
    let net = gromov_net_bound(x, y, k, opts.seed)?;
    let heur = gh_heuristic(x, y, opts.budget, opts.seed)?;
    let lower = lower_bounds(x, y);
    let mut best = if heur.upper < net.upper { heur } else { net };
    best.lower = lower.min(best.upper);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(rows: Vec<Vec<f64>>) -> FiniteMetricSpace {
        let ids = (0..rows.len()).map(|i| format!("p{i}")).collect();
        FiniteMetricSpace::new(ids, rows).unwrap()
    }

    fn line(xs: &[f64]) -> FiniteMetricSpace {
        let ids = (0..xs.len()).map(|i| format!("t{i}")).collect();
        FiniteMetricSpace::from_fn(ids, |i, j| (xs[i] - xs[j]).abs()).unwrap()
    }

    #[test]
    fn exact_examples() {
        let x = line(&[0.0, 1.0, 3.0]);
        assert_eq!(gh_exact(&x, &x).unwrap(), 0.0);

        let one = space(vec![vec![0.0]]);
        let two = space(vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert_eq!(gh_exact(&one, &two).unwrap(), 1.0);

        let delta = 0.1;
        let tri = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let scaled = space(
            tri.rows()
                .iter()
                .map(|r| r.iter().map(|v| v * (1.0 + delta)).collect())
                .collect(),
        );
        let v = gh_exact(&tri, &scaled).unwrap();
        assert!((v - delta * 2.0 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_refuses_over_cap() {
        let x = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            gh_exact(&x, &x),
            Err(Error::CapExceeded { size: 25, cap: 16 })
        );
    }

    #[test]
    fn net_bound_examples() {
        let x = line(&[0.0, 0.5, 1.0, 2.0]);
        let e = gromov_net_bound(&x, &x, 4, 0).unwrap();
        assert_eq!(e.upper, 0.0);
        let e = gromov_net_bound(&x, &x, 10, 0).unwrap();
        assert_eq!(e.notes.len(), 1);
    }

    #[test]
    fn lower_bound_examples() {
        let a = line(&[0.0, 2.0]);
        let b = line(&[0.0, 1.0]);
        assert!(lower_bounds(&a, &b) >= 0.5);
        assert_eq!(lower_bounds(&a, &a), 0.0);
    }

    #[test]
    fn heuristic_on_identical() {
        let x = line(&[0.0, 0.3, 1.0, 1.7, 4.0]);
        let e = gh_heuristic(&x, &x, 1, 0).unwrap();
        assert_eq!(e.upper, 0.0);
    }

    #[test]
    fn estimators_are_symmetric() {
        let a = line(&[0.0, 0.4, 1.0, 2.5, 2.6]);
        let b = line(&[0.0, 1.1, 1.3, 2.0]);
        let h1 = gh_heuristic(&a, &b, 4, 3).unwrap();
        let h2 = gh_heuristic(&b, &a, 4, 3).unwrap();
        assert_eq!(h1.upper, h2.upper);
        let n1 = gromov_net_bound(&a, &b, 3, 3).unwrap();
        let n2 = gromov_net_bound(&b, &a, 3, 3).unwrap();
        assert_eq!(n1.upper, n2.upper);
        assert_eq!(lower_bounds(&a, &b), lower_bounds(&b, &a));
    }
}
