//! Quotient pseudometrics: the chain infimum over an equivalence relation,
//! followed by identification of points at zero quotient distance.
//!
//! The chain infimum is computed over the class graph. Classes are the
//! equivalence closure of the relation; the weight between two classes is the
//! minimum distance between their members (absent when no member pair has a
//! finite distance, as across a disjoint union). Shortest paths over that graph
//! give the quotient pseudometric exactly: every chain costs at least the
//! class-graph path it induces, and every class-graph path is realized by a
//! chain. Classes at quotient distance within the zero tolerance are then
//! merged.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Bijection, FiniteMetricSpace};
use crate::paths;
use crate::union_find::UnionFind;

/// Unordered point pairs to be identified.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointRelation {
    pub pairs: Vec<(String, String)>,
}

impl PointRelation {
    pub fn new(pairs: Vec<(String, String)>) -> Self {
        Self { pairs }
    }

    /// All points of `ids` related to each other.
    pub fn all_of<S: AsRef<str>>(ids: &[S]) -> Self {
        let pairs = ids
            .windows(2)
            .map(|w| (w[0].as_ref().to_string(), w[1].as_ref().to_string()))
            .collect();
        Self { pairs }
    }
}

/// A quotient space over class ids together with the projection of original
/// points onto classes. A class id is the id of the class's first member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientResult {
    pub space: FiniteMetricSpace,
    pub class_map: BTreeMap<String, String>,
}

impl QuotientResult {
    /// Index in `space` of the class containing `point`.
    pub fn class_index(&self, point: &str) -> Option<usize> {
        self.space.index_of(self.class_map.get(point)?)
    }
}

pub(crate) struct Collapsed {
    /// Distances between final classes.
    pub dist: Vec<Vec<f64>>,
    /// Final class of each input element.
    pub class_of: Vec<usize>,
    pub classes: usize,
}

/// Quotient of `n` elements grouped by `groups`, with pairwise weights given by
/// `weight` (`None` = no direct connection). On failure returns two elements
/// with no connecting chain.
pub(crate) fn collapse_classes(
    n: usize,
    groups: &mut UnionFind,
    weight: impl Fn(usize, usize) -> Option<f64>,
    zero_tol: f64,
) -> std::result::Result<Collapsed, (usize, usize)> {
    let (labels, k) = groups.labels();
    let mut first = vec![usize::MAX; k];
    for (i, &c) in labels.iter().enumerate().rev() {
        first[c] = i;
    }
    let mut w: Vec<Vec<Option<f64>>> = vec![vec![None; k]; k];
    for (c, row) in w.iter_mut().enumerate() {
        row[c] = Some(0.0);
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (labels[i], labels[j]);
            if a == b {
                continue;
            }
            if let Some(d) = weight(i, j) {
                if w[a][b].is_none_or(|cur| d < cur) {
                    w[a][b] = Some(d);
                    w[b][a] = Some(d);
                }
            }
        }
    }
    paths::floyd(&mut w);
    for a in 0..k {
        for b in a + 1..k {
            if w[a][b].is_none() {
                return Err((first[a], first[b]));
            }
        }
    }
    let d: Vec<Vec<f64>> = w
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.expect("connected")).collect())
        .collect();

    let mut zero = UnionFind::new(k);
    for a in 0..k {
        for b in a + 1..k {
            if d[a][b] <= zero_tol {
                zero.union(a, b);
            }
        }
    }
    let (merged, k2) = zero.labels();
    let dist = if k2 == k {
        d
    } else {
        let mut w2: Vec<Vec<Option<f64>>> = vec![vec![None; k2]; k2];
        for a in 0..k {
            for b in 0..k {
                let (p, q) = (merged[a], merged[b]);
                let v = if p == q { 0.0 } else { d[a][b] };
                if w2[p][q].is_none_or(|cur| v < cur) {
                    w2[p][q] = Some(v);
                }
            }
        }
        paths::floyd(&mut w2);
        w2.into_iter()
            .map(|r| r.into_iter().map(|v| v.expect("connected")).collect())
            .collect()
    };
    Ok(Collapsed {
        dist,
        class_of: labels.iter().map(|&c| merged[c]).collect(),
        classes: k2,
    })
}

/// Names classes after their first member and assembles the result.
pub(crate) fn assemble(ids: &[String], collapsed: &Collapsed) -> QuotientResult {
    let mut names: Vec<Option<String>> = vec![None; collapsed.classes];
    for (i, &c) in collapsed.class_of.iter().enumerate() {
        if names[c].is_none() {
            names[c] = Some(ids[i].clone());
        }
    }
    let names: Vec<String> = names
        .into_iter()
        .map(|n| n.expect("class has a member"))
        .collect();
    let class_map = ids
        .iter()
        .zip(&collapsed.class_of)
        .map(|(id, &c)| (id.clone(), names[c].clone()))
        .collect();
    let space = FiniteMetricSpace::from_fn(names, |a, b| collapsed.dist[a][b])
        .expect("class names are distinct point ids");
    QuotientResult { space, class_map }
}

/// Quotient pseudometric of `space` by the equivalence closure of `rel`, with
/// zero-distance classes identified at the space's default tolerance.
pub fn quotient_metric(space: &FiniteMetricSpace, rel: &PointRelation) -> Result<QuotientResult> {
    quotient_metric_with(space, rel, space.default_tol())
}

pub fn quotient_metric_with(
    space: &FiniteMetricSpace,
    rel: &PointRelation,
    zero_tol: f64,
) -> Result<QuotientResult> {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for (a, b) in &rel.pairs {
        uf.union(space.require(a)?, space.require(b)?);
    }
    let collapsed = collapse_classes(n, &mut uf, |i, j| Some(space.d(i, j)), zero_tol)
        .expect("a finite metric space is connected");
    Ok(assemble(space.points(), &collapsed))
}

pub(crate) const LEFT: &str = "x:";
pub(crate) const RIGHT: &str = "y:";

/// Gluing of `x` and `y` along a bijection `f: A → B`, `A ⊂ x`, `B ⊂ y`.
/// Points of the disjoint union are named `x:<id>` and `y:<id>`. An empty `f`
/// leaves the union disconnected, reported as [`Error::Disconnected`].
pub fn glue(x: &FiniteMetricSpace, y: &FiniteMetricSpace, f: &Bijection) -> Result<QuotientResult> {
    glue_relation(x, y, f.pairs())
}

/// Gluing along an arbitrary relation between points of `x` and points of `y`;
/// the identification is the smallest equivalence relation containing it.
pub fn glue_relation(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    pairs: &[(String, String)],
) -> Result<QuotientResult> {
    let (nx, ny) = (x.len(), y.len());
    let n = nx + ny;
    let mut uf = UnionFind::new(n);
    for (a, b) in pairs {
        uf.union(x.require(a)?, nx + y.require(b)?);
    }
    let ids: Vec<String> = x
        .points()
        .iter()
        .map(|p| format!("{LEFT}{p}"))
        .chain(y.points().iter().map(|p| format!("{RIGHT}{p}")))
        .collect();
    let zero_tol = x.default_tol().max(y.default_tol());
    let weight = |i: usize, j: usize| match (i < nx, j < nx) {
        (true, true) => Some(x.d(i, j)),
        (false, false) => Some(y.d(i - nx, j - nx)),
        _ => None,
    };
    let collapsed = collapse_classes(n, &mut uf, weight, zero_tol)
        .map_err(|(a, b)| Error::Disconnected(ids[a].clone(), ids[b].clone()))?;
    Ok(assemble(&ids, &collapsed))
}

/// Identifies a nonempty subset to a single point.
pub fn collapse_subset<S: AsRef<str>>(
    space: &FiniteMetricSpace,
    subset: &[S],
) -> Result<QuotientResult> {
    if subset.is_empty() {
        return Err(Error::Empty("subset"));
    }
    quotient_metric(space, &PointRelation::all_of(subset))
}

/// Quotient by the orbits of the group generated by `generators`, each a
/// bijection of the whole point set.
pub fn orbit_quotient(
    space: &FiniteMetricSpace,
    generators: &[Bijection],
) -> Result<QuotientResult> {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for (g, gen) in generators.iter().enumerate() {
        let mut hit = vec![false; n];
        let mut covered = vec![false; n];
        for (a, b) in gen.pairs() {
            let (i, j) = (space.require(a)?, space.require(b)?);
            covered[i] = true;
            hit[j] = true;
            uf.union(i, j);
        }
        if let Some(p) = (0..n).find(|&p| !covered[p] || !hit[p]) {
            return Err(Error::InvalidParameter(format!(
                "generator {g} is not a bijection of the point set (point `{}` is not covered)",
                space.id(p)
            )));
        }
    }
    let collapsed = collapse_classes(n, &mut uf, |i, j| Some(space.d(i, j)), space.default_tol())
        .expect("a finite metric space is connected");
    Ok(assemble(space.points(), &collapsed))
}
