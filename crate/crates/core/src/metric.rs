//! Finite metric and pseudometric spaces, weighted graphs with their geodesic
//! metric, farthest-point ε-nets, and isometry search.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::paths::{self, Adjacency};

/// Points with a complete distance table. Point ids are opaque; everything
/// downstream works on index positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    dist: Vec<f64>,
    labels: BTreeMap<String, String>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    points: Vec<String>,
    dist: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, String>,
}

impl TryFrom<RawSpace> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        FiniteMetricSpace::new(raw.points, raw.dist)?.with_labels(raw.labels)
    }
}

impl From<FiniteMetricSpace> for RawSpace {
    fn from(s: FiniteMetricSpace) -> Self {
        RawSpace {
            dist: s.rows(),
            points: s.points,
            labels: s.labels,
        }
    }
}

pub(crate) fn index_ids(kind: &'static str, ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateId {
                kind,
                id: id.clone(),
            });
        }
    }
    Ok(index)
}

impl FiniteMetricSpace {
    /// Checks structure only: square, finite, nonnegative, unique ids. Metric
    /// axioms are checked by [`validate_metric`].
    pub fn new(points: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        if rows.len() != n {
            return Err(Error::NonSquare {
                points: n,
                rows: rows.len(),
                row: rows.len().min(n),
                len: rows
                    .get(n.min(rows.len().saturating_sub(1)))
                    .map_or(0, Vec::len),
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquare {
                    points: n,
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
        }
        let index = index_ids("point", &points)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite(points[i].clone(), points[j].clone()));
                }
                if v < 0.0 {
                    return Err(Error::NegativeEntry(
                        points[i].clone(),
                        points[j].clone(),
                        v,
                    ));
                }
            }
        }
        Ok(Self {
            dist: rows.into_iter().flatten().collect(),
            points,
            labels: BTreeMap::new(),
            index,
        })
    }

    /// Builds a space from a distance function over indices. The caller
    /// guarantees the values are finite and nonnegative.
    pub(crate) fn from_fn(points: Vec<String>, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let n = points.len();
        let index = index_ids("point", &points)?;
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(f(i, j));
            }
        }
        Ok(Self {
            points,
            dist,
            labels: BTreeMap::new(),
            index,
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<String, String>) -> Result<Self> {
        for id in labels.keys() {
            if !self.index.contains_key(id) {
                return Err(Error::UnknownId {
                    kind: "point",
                    id: id.clone(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn id(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownId {
            kind: "point",
            id: id.to_string(),
        })
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.points.len() + j]
    }

    /// Distance by point id.
    pub fn dist(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.d(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.points.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub fn eccentricities(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.row(i).iter().copied().fold(0.0, f64::max))
            .collect()
    }

    /// Default absolute tolerance for this space (relative tolerance × diameter).
    pub fn default_tol(&self) -> f64 {
        defaults::relative_tol(self.diameter())
    }

    /// The subspace on the given indices, in the given order.
    pub fn subspace(&self, idx: &[usize]) -> FiniteMetricSpace {
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        Self::from_fn(points, |a, b| self.d(idx[a], idx[b])).expect("ids of a subspace are unique")
    }

    /// Same space with point ids replaced; used when two spaces must not share ids.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Result<FiniteMetricSpace> {
        let points = self.points.iter().map(|p| f(p)).collect();
        Self::from_fn(points, |a, b| self.d(a, b))
    }
}

/// Vertices and positive-length edges; the discretization substrate for a
/// compact length space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct WeightedGraphSpace {
    vertices: Vec<String>,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: Vec<String>,
    edges: Vec<(String, String, f64)>,
}

impl TryFrom<RawGraph> for WeightedGraphSpace {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        WeightedGraphSpace::new(raw.vertices, raw.edges)
    }
}

impl From<WeightedGraphSpace> for RawGraph {
    fn from(g: WeightedGraphSpace) -> Self {
        RawGraph {
            edges: g
                .edges
                .iter()
                .map(|&(u, v, w)| (g.vertices[u].clone(), g.vertices[v].clone(), w))
                .collect(),
            vertices: g.vertices,
        }
    }
}

impl WeightedGraphSpace {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, f64)>) -> Result<Self> {
        let index = index_ids("vertex", &vertices)?;
        let lookup = |id: &String| {
            index.get(id).copied().ok_or_else(|| Error::UnknownId {
                kind: "vertex",
                id: id.clone(),
            })
        };
        let mut out = Vec::with_capacity(edges.len());
        for (u, v, w) in &edges {
            let (a, b) = (lookup(u)?, lookup(v)?);
            if !(*w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveLength(u.clone(), v.clone(), *w));
            }
            out.push((a, b, *w));
        }
        Ok(Self {
            vertices,
            edges: out,
        })
    }

    pub(crate) fn from_indexed(vertices: Vec<String>, edges: Vec<(usize, usize, f64)>) -> Self {
        Self { vertices, edges }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        let mut adj = Adjacency::new(self.vertices.len());
        for &(u, v, w) in &self.edges {
            adj.add_edge(u, v, w);
        }
        adj
    }
}

/// Shortest-path metric of a connected weighted graph.
pub fn geodesic_metric(g: &WeightedGraphSpace) -> Result<FiniteMetricSpace> {
    let adj = g.adjacency();
    let rows = paths::all_pairs(&adj)
        .map_err(|(a, b)| Error::Disconnected(g.vertices[a].clone(), g.vertices[b].clone()))?;
    FiniteMetricSpace::from_fn(g.vertices.clone(), |i, j| rows[i][j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricMode {
    Strict,
    Pseudo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    NonZeroDiagonal {
        point: String,
        value: f64,
    },
    Asymmetric {
        a: String,
        b: String,
        ab: f64,
        ba: f64,
    },
    ZeroDistance {
        a: String,
        b: String,
    },
    /// `d(a, c) > d(a, b) + d(b, c) + tol`.
    Triangle {
        a: String,
        b: String,
        c: String,
        excess: f64,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub mode: MetricMode,
    pub tol: f64,
    pub check_triangle: bool,
}

/// Checks the axioms of `mode` within additive tolerance `tol`.
pub fn validate_metric(space: &FiniteMetricSpace, mode: MetricMode, tol: f64) -> ValidationReport {
    validate_with(
        space,
        ValidationOptions {
            mode,
            tol,
            check_triangle: true,
        },
    )
}

pub fn validate_with(space: &FiniteMetricSpace, opts: ValidationOptions) -> ValidationReport {
    let n = space.len();
    let id = |i: usize| space.id(i).to_string();
    let mut violations = Vec::new();
    for i in 0..n {
        let v = space.d(i, i);
        if v > opts.tol {
            violations.push(Violation::NonZeroDiagonal {
                point: id(i),
                value: v,
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ab, ba) = (space.d(i, j), space.d(j, i));
            if (ab - ba).abs() > opts.tol {
                violations.push(Violation::Asymmetric {
                    a: id(i),
                    b: id(j),
                    ab,
                    ba,
                });
            }
            if opts.mode == MetricMode::Strict && ab.min(ba) <= opts.tol {
                violations.push(Violation::ZeroDistance { a: id(i), b: id(j) });
            }
        }
    }
    if opts.check_triangle {
        for a in 0..n {
            for c in a + 1..n {
                let ac = space.d(a, c);
                for b in 0..n {
                    if b == a || b == c {
                        continue;
                    }
                    let excess = ac - (space.d(a, b) + space.d(b, c));
                    if excess > opts.tol {
                        violations.push(Violation::Triangle {
                            a: id(a),
                            b: id(b),
                            c: id(c),
                            excess,
                        });
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A subset of a host space covering it within `radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsNet {
    /// Member indices into the host, in selection order.
    pub members: Vec<usize>,
    pub member_ids: Vec<String>,
    pub radius: f64,
}

/// Max over host points of the distance to the nearest member.
pub fn covering_radius(space: &FiniteMetricSpace, members: &[usize]) -> f64 {
    if members.is_empty() {
        return f64::INFINITY;
    }
    (0..space.len())
        .map(|p| {
            members
                .iter()
                .map(|&m| space.d(p, m))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Farthest-point order from `start`: `radii[k]` is the covering radius of the
/// first `k + 1` members. Ties go to the smaller index.
pub(crate) fn farthest_point_order(
    space: &FiniteMetricSpace,
    start: usize,
    limit: usize,
) -> (Vec<usize>, Vec<f64>) {
    let n = space.len();
    let mut order = vec![start];
    let mut nearest: Vec<f64> = space.row(start).to_vec();
    let mut radii = Vec::with_capacity(limit);
    loop {
        let (far, r) =
            nearest
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                    if v > bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                });
        radii.push(r.max(0.0));
        if order.len() >= limit.min(n) {
            break;
        }
        order.push(far);
        for (p, slot) in nearest.iter_mut().enumerate() {
            *slot = slot.min(space.d(p, far));
        }
    }
    (order, radii)
}

/// Seed-selected start point: `seed mod |space|`.
pub(crate) fn seed_start(space: &FiniteMetricSpace, seed: u64) -> usize {
    (seed % space.len().max(1) as u64) as usize
}

/// Greedy farthest-point ε-net, stopping as soon as the covering radius is at
/// most `target_radius`.
pub fn eps_net(space: &FiniteMetricSpace, target_radius: f64, seed: u64) -> Result<EpsNet> {
    if !(target_radius >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target radius must be nonnegative, got {target_radius}"
        )));
    }
    if space.is_empty() {
        return Err(Error::Empty("space"));
    }
    let (order, radii) = farthest_point_order(space, seed_start(space, seed), space.len());
    let k = radii
        .iter()
        .position(|&r| r <= target_radius)
        .unwrap_or(radii.len() - 1);
    Ok(net_from(space, &order[..=k], radii[k]))
}

/// Farthest-point net with exactly `min(k, |space|)` members.
pub fn k_net(space: &FiniteMetricSpace, k: usize, seed: u64) -> Result<EpsNet> {
    if space.is_empty() {
        return Err(Error::Empty("space"));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("net size must be positive".into()));
    }
    let (order, radii) = farthest_point_order(space, seed_start(space, seed), k);
    let r = *radii.last().expect("at least one radius");
    Ok(net_from(space, &order, r))
}

fn net_from(space: &FiniteMetricSpace, members: &[usize], radius: f64) -> EpsNet {
    EpsNet {
        members: members.to_vec(),
        member_ids: members.iter().map(|&m| space.id(m).to_string()).collect(),
        radius,
    }
}

/// A bijection between two finite id sets, stored as ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(String, String)>", into = "Vec<(String, String)>")]
pub struct Bijection {
    pairs: Vec<(String, String)>,
}

impl TryFrom<Vec<(String, String)>> for Bijection {
    type Error = Error;

    fn try_from(pairs: Vec<(String, String)>) -> Result<Self> {
        Bijection::new(pairs)
    }
}

impl From<Bijection> for Vec<(String, String)> {
    fn from(b: Bijection) -> Self {
        b.pairs
    }
}

impl Bijection {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self> {
        let mut left = HashSet::new();
        let mut right = HashSet::new();
        for (a, b) in &pairs {
            if !left.insert(a) {
                return Err(Error::NotBijective(a.clone()));
            }
            if !right.insert(b) {
                return Err(Error::NotBijective(b.clone()));
            }
        }
        Ok(Self { pairs })
    }

    pub fn identity<S: AsRef<str>>(ids: &[S]) -> Self {
        Self {
            pairs: ids
                .iter()
                .map(|s| (s.as_ref().to_string(), s.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, from: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(a, _)| a == from)
            .map(|(_, b)| b.as_str())
    }

    pub fn inverse(&self) -> Bijection {
        Bijection {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IsometryOptions {
    /// Spaces up to this size are searched without a node budget.
    pub exhaustive_cap: usize,
    /// Node budget for larger spaces; exhausting it reports no isometry.
    pub node_budget: u64,
}

impl Default for IsometryOptions {
    fn default() -> Self {
        Self {
            exhaustive_cap: defaults::ISOMETRY_EXHAUSTIVE_CAP,
            node_budget: defaults::ISOMETRY_NODE_BUDGET,
        }
    }
}

/// A bijection `x → y` whose pairwise distance discrepancy is at most `tol`,
/// if one exists.
pub fn find_isometry(x: &FiniteMetricSpace, y: &FiniteMetricSpace, tol: f64) -> Option<Bijection> {
    find_isometry_with(x, y, tol, IsometryOptions::default())
}

pub fn find_isometry_with(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    tol: f64,
    opts: IsometryOptions,
) -> Option<Bijection> {
    let map = isometry_indices(x, y, tol, opts)?;
    Some(Bijection {
        pairs: map
            .iter()
            .enumerate()
            .map(|(i, &j)| (x.id(i).to_string(), y.id(j).to_string()))
            .collect(),
    })
}

fn sorted_profiles(s: &FiniteMetricSpace) -> Vec<Vec<f64>> {
    (0..s.len())
        .map(|i| {
            let mut r = s.row(i).to_vec();
            r.sort_by(f64::total_cmp);
            r
        })
        .collect()
}

fn profile_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn isometry_indices(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    tol: f64,
    opts: IsometryOptions,
) -> Option<Vec<usize>> {
    let n = x.len();
    if y.len() != n {
        return None;
    }
    let (px, py) = (sorted_profiles(x), sorted_profiles(y));
    // Sorting is 1-Lipschitz in the sup norm, so an isometry within tol can
    // only pair points whose sorted profiles agree within tol.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut c: Vec<(f64, usize)> = (0..n)
            .filter_map(|j| {
                let g = profile_gap(&px[i], &py[j]);
                (g <= tol).then_some((g, j))
            })
            .collect();
        if c.is_empty() {
            return None;
        }
        c.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then_with(|| a.1.abs_diff(i).cmp(&b.1.abs_diff(i)))
                .then_with(|| a.1.cmp(&b.1))
        });
        candidates.push(c.into_iter().map(|(_, j)| j).collect());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));

    struct Search<'a> {
        x: &'a FiniteMetricSpace,
        y: &'a FiniteMetricSpace,
        tol: f64,
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        assign: Vec<usize>,
        used: Vec<bool>,
        nodes: u64,
        budget: Option<u64>,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize) -> Option<bool> {
            if depth == self.order.len() {
                return Some(true);
            }
            let i = self.order[depth];
            for ci in 0..self.candidates[i].len() {
                let j = self.candidates[i][ci];
                if self.used[j] {
                    continue;
                }
                self.nodes += 1;
                if self.budget.is_some_and(|b| self.nodes > b) {
                    return None;
                }
                let consistent = self.order[..depth]
                    .iter()
                    .all(|&p| (self.x.d(i, p) - self.y.d(j, self.assign[p])).abs() <= self.tol);
                if !consistent {
                    continue;
                }
                self.assign[i] = j;
                self.used[j] = true;
                if self.run(depth + 1)? {
                    return Some(true);
                }
                self.used[j] = false;
            }
            Some(false)
        }
    }

    let mut search = Search {
        x,
        y,
        tol,
        order,
        candidates,
        assign: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
        budget: (n > opts.exhaustive_cap).then_some(opts.node_budget),
    };
    match search.run(0) {
        Some(true) => Some(search.assign),
        _ => None,
    }
}

/// Max pairwise discrepancy of an index map `x → y`.
pub fn max_discrepancy(x: &FiniteMetricSpace, y: &FiniteMetricSpace, map: &[usize]) -> f64 {
    let n = map.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((x.d(i, j) - y.d(map[i], map[j])).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    fn space(rows: Vec<Vec<f64>>) -> FiniteMetricSpace {
        FiniteMetricSpace::new(ids(rows.len()), rows).unwrap()
    }

    #[test]
    fn minimal_strict_metric() {
        let s = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(validate_metric(&s, MetricMode::Strict, 0.0).is_valid());
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let s = FiniteMetricSpace::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        let report = validate_metric(&s, MetricMode::Strict, 1e-12);
        assert_eq!(
            report.violations,
            vec![Violation::Triangle {
                a: "a".into(),
                b: "b".into(),
                c: "c".into(),
                excess: 3.0
            }]
        );
    }

    #[test]
    fn zero_distance_is_pseudo_only() {
        let s = space(vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert!(validate_metric(&s, MetricMode::Pseudo, 0.0).is_valid());
        let strict = validate_metric(&s, MetricMode::Strict, 0.0);
        assert_eq!(
            strict.violations,
            vec![Violation::ZeroDistance {
                a: "p0".into(),
                b: "p1".into()
            }]
        );
    }

    #[test]
    fn asymmetry_and_diagonal_reported() {
        let s = space(vec![vec![0.5, 1.0], vec![2.0, 0.0]]);
        let r = validate_metric(&s, MetricMode::Pseudo, 1e-9);
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            FiniteMetricSpace::new(ids(2), vec![vec![0.0, 1.0]]),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(ids(2), vec![vec![0.0, 1.0], vec![1.0]]),
            Err(Error::NonSquare { .. })
        ));
        assert!(matches!(
            FiniteMetricSpace::new(ids(2), vec![vec![0.0, -1.0], vec![1.0, 0.0]]),
            Err(Error::NegativeEntry(..))
        ));
        assert!(matches!(
            FiniteMetricSpace::new(
                vec!["a".into(), "a".into()],
                vec![vec![0.0, 1.0], vec![1.0, 0.0]]
            ),
            Err(Error::DuplicateId { .. })
        ));
    }

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedGraphSpace {
        WeightedGraphSpace::new(
            ids(n),
            edges
                .iter()
                .map(|&(u, v, w)| (format!("p{u}"), format!("p{v}"), w))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn path_and_cycle_geodesics() {
        let path = geodesic_metric(&graph(3, &[(0, 1, 1.0), (1, 2, 1.0)])).unwrap();
        assert_eq!(path.d(0, 2), 2.0);
        let cycle = geodesic_metric(&graph(
            4,
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)],
        ))
        .unwrap();
        assert_eq!(cycle.d(0, 2), 2.0);
        assert_eq!(cycle.d(1, 3), 2.0);
    }

    #[test]
    fn disconnected_graph_names_vertices() {
        let err = geodesic_metric(&graph(3, &[(0, 1, 1.0)])).unwrap_err();
        assert_eq!(err, Error::Disconnected("p0".into(), "p2".into()));
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(matches!(
            WeightedGraphSpace::new(ids(2), vec![("p0".into(), "p1".into(), 0.0)]),
            Err(Error::NonPositiveLength(..))
        ));
        assert!(matches!(
            WeightedGraphSpace::new(ids(2), vec![("p0".into(), "q".into(), 1.0)]),
            Err(Error::UnknownId { .. })
        ));
    }

    fn segment(n: usize) -> FiniteMetricSpace {
        FiniteMetricSpace::from_fn(ids(n), |i, j| (i as f64 - j as f64).abs()).unwrap()
    }

    #[test]
    fn eps_net_edge_cases() {
        let s = segment(5);
        let whole = eps_net(&s, 10.0, 3).unwrap();
        assert_eq!(whole.members.len(), 1);
        let all = eps_net(&s, 0.0, 0).unwrap();
        assert_eq!(all.members.len(), 5);
        assert_eq!(all.radius, 0.0);
    }

    #[test]
    fn eps_net_on_unit_segment() {
        let s = segment(5);
        let net = eps_net(&s, 1.0, 0).unwrap();
        assert_eq!(net.members, vec![0, 4, 2]);
        assert_eq!(net.radius, 1.0);
        assert_eq!(covering_radius(&s, &net.members), 1.0);
        // Exhaustive minimum: no single point covers within 1, some pair does.
        let min = (1..=5)
            .find(|&k| {
                subsets(5, k)
                    .iter()
                    .any(|sub| covering_radius(&s, sub) <= 1.0)
            })
            .unwrap();
        assert_eq!(min, 2);
        assert!(net.members.len() >= min);
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
            .collect()
    }

    #[test]
    fn isometry_examples() {
        let s = segment(4);
        let b = find_isometry(&s, &s, 0.0).unwrap();
        assert_eq!(b.len(), 4);
        let one = space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let two = space(vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert!(find_isometry(&one, &two, 0.5).is_none());
        assert!(find_isometry(&one, &segment(3), 10.0).is_none());
    }

    #[test]
    fn isometry_of_permuted_copy() {
        let s = FiniteMetricSpace::from_fn(ids(7), |i, j| {
            if i == j {
                0.0
            } else {
                1.0 + ((i * 7 + j * 7 + i * j) % 5) as f64 * 0.1
            }
        })
        .unwrap();
        let perm = [3, 6, 0, 2, 5, 1, 4];
        let t = s.subspace(&perm);
        let b = find_isometry(&s, &t, 0.0).unwrap();
        let map: Vec<usize> = (0..7)
            .map(|i| t.index_of(b.get(s.id(i)).unwrap()).unwrap())
            .collect();
        assert_eq!(max_discrepancy(&s, &t, &map), 0.0);
    }
}
