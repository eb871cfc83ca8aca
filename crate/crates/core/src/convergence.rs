//! Warped sequences, their distance to the leaf space, and the dense leaf
//! family condition.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::foliated::{self, FoliatedComplex, HlsSpace, WarpSpec};
use crate::gh::{self, EstimateOptions, GhMethod, Witness};
use crate::metric::{self, FiniteMetricSpace};
use crate::paths;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WarpFamily {
    /// `f_n ≡ 1/n`.
    ConstantInverse,
    /// `f_n = 1/n` on the listed leaves and 1 elsewhere.
    LeafSubsetDecay { leaves: Vec<String> },
    /// `f_n ≡ 1`.
    Unit,
    /// Explicit terms by index.
    Table { terms: BTreeMap<usize, WarpSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarpSequence {
    pub base: FoliatedComplex,
    pub family: WarpFamily,
}

impl WarpSequence {
    /// The `n`-th warping function, checked to cover every leaf with values
    /// in `(0, 1]`.
    pub fn term(&self, n: usize) -> Result<WarpSpec> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "sequence indices start at 1".into(),
            ));
        }
        let inv = 1.0 / n as f64;
        let spec = match &self.family {
            WarpFamily::ConstantInverse => WarpSpec::constant(&self.base, inv),
            WarpFamily::Unit => WarpSpec::constant(&self.base, 1.0),
            WarpFamily::LeafSubsetDecay { leaves } => {
                let mut spec = WarpSpec::constant(&self.base, 1.0);
                for l in leaves {
                    let slot = spec.values.get_mut(l).ok_or_else(|| Error::UnknownId {
                        kind: "leaf",
                        id: l.clone(),
                    })?;
                    *slot = inv;
                }
                spec
            }
            WarpFamily::Table { terms } => terms.get(&n).cloned().ok_or(Error::MissingTerm(n))?,
        };
        for l in self.base.leaves() {
            let v = *spec
                .values
                .get(l)
                .ok_or_else(|| Error::MissingLeaf(l.clone()))?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::BadWarpValue {
                    leaf: l.clone(),
                    value: v,
                    expected: "a value in (0, 1]",
                });
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converged,
    NotConverged,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub gh_lower: f64,
    pub gh_upper: f64,
    /// Estimator that produced `gh_upper`.
    pub method: String,
    /// Covering radius of the leaf-space net used by the net bound.
    pub net_radius: f64,
    /// Covering radius of the subsample taken from the warped complex (0 when
    /// it was used whole).
    pub subsample_radius: f64,
    pub density_radius: Option<f64>,
    pub condition_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub mesh: f64,
    pub tau_conv: f64,
    pub verdict: Verdict,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    gh_lower: f64,
    gh_upper: f64,
    method: &'a str,
    density_radius: Option<f64>,
    condition_holds: bool,
}

impl ConvergenceReport {
    /// One line per row: `n,gh_lower,gh_upper,method,density_radius,condition_holds`.
    /// The density columns are evaluated at `ε = τ_conv`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow {
                n: r.n,
                gh_lower: r.gh_lower,
                gh_upper: r.gh_upper,
                method: &r.method,
                density_radius: r.density_radius,
                condition_holds: r.condition_holds,
            })
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOptions {
    /// `None` uses `2·mesh` plus the final net radius.
    pub tau_conv: Option<f64>,
    pub vertex_cap: usize,
    pub estimate: EstimateOptions,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self {
            tau_conv: None,
            vertex_cap: defaults::CONVERGENCE_VERTEX_CAP,
            estimate: EstimateOptions::default(),
        }
    }
}

fn check_ns(ns: &[usize]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::Empty("index list"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] == 0 {
        return Err(Error::InvalidParameter(
            "indices must be positive and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Half the distortion of the correspondence `{(v, π(v))}` between the
/// vertices and their leaf classes.
fn projection_bound(x: &FiniteMetricSpace, h: &HlsSpace) -> f64 {
    let class: Vec<usize> = x
        .points()
        .iter()
        .map(|v| h.class_index_of_vertex(v).expect("vertex of the base"))
        .collect();
    let worst = (0..x.len())
        .into_par_iter()
        .map(|i| {
            (i + 1..x.len())
                .map(|j| (x.d(i, j) - h.space.d(class[i], class[j])).abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    worst / 2.0
}

struct RowEstimate {
    lower: f64,
    upper: f64,
    method: String,
    net_radius: f64,
    subsample_radius: f64,
}

fn estimate_row(
    warped: &FoliatedComplex,
    h: &HlsSpace,
    opts: &ConvergenceOptions,
) -> Result<RowEstimate> {
    let x = warped.geodesic()?;
    let y = &h.space;
    let projection = projection_bound(&x, h);
    let (xs, sub_r) = if x.len() > opts.vertex_cap {
        let net = metric::k_net(&x, opts.vertex_cap, opts.estimate.seed)?;
        (x.subspace(&net.members), net.radius)
    } else {
        (x.clone(), 0.0)
    };
    let eopts = EstimateOptions {
        net_k: Some(opts.estimate.net_k.unwrap_or(y.len())),
        ..opts.estimate
    };
    let est = gh::estimate(&xs, y, &eopts)?;
    let net_radius = match (&est.method, &est.witness) {
        (GhMethod::GromovNet, Witness::MatchedNets { r_y, .. }) => *r_y,
        _ => 0.0,
    };
    let lower = gh::lower_bounds(&x, y).max(est.lower - sub_r).max(0.0);
    let sampled_upper = est.upper + sub_r;
    let (upper, method) = if projection <= sampled_upper {
        (projection, "projection".to_string())
    } else {
        let tag = serde_json::to_value(est.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        (sampled_upper, tag)
    };
    Ok(RowEstimate {
        lower: lower.min(upper),
        upper,
        method,
        net_radius,
        subsample_radius: sub_r,
    })
}

/// Estimates `d_GH(warp(base, f_n), HLS(base))` for each `n` in `ns`.
/// Converged when the final upper bound is at most `τ_conv`, not converged
/// when the final lower bound exceeds it.
pub fn run_convergence(
    seq: &WarpSequence,
    ns: &[usize],
    opts: &ConvergenceOptions,
) -> Result<ConvergenceReport> {
    check_ns(ns)?;
    let h = foliated::hls(&seq.base)?;
    let mesh = seq.base.mesh();
    let specs: Vec<WarpSpec> = ns.iter().map(|&n| seq.term(n)).collect::<Result<_>>()?;
    let ests: Vec<RowEstimate> = specs
        .par_iter()
        .map(|f| {
            let w = foliated::warp(&seq.base, f)?;
            estimate_row(&w, &h, opts)
        })
        .collect::<Result<_>>()?;
    let final_net = ests.last().map_or(0.0, |e| e.net_radius);
    let tau = match opts.tau_conv {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {t}"
            )))
        }
        None => 2.0 * mesh + final_net,
    };
    let mut rows = Vec::with_capacity(ns.len());
    for ((&n, f), e) in ns.iter().zip(&specs).zip(ests) {
        let cond = density(&seq.base, f, tau);
        rows.push(ConvergenceRow {
            n,
            gh_lower: e.lower,
            gh_upper: e.upper,
            method: e.method,
            net_radius: e.net_radius,
            subsample_radius: e.subsample_radius,
            density_radius: cond.1,
            condition_holds: cond.2,
        });
    }
    let last = rows.last().expect("nonempty");
    let verdict = if last.gh_upper <= tau {
        Verdict::Converged
    } else if last.gh_lower > tau {
        Verdict::NotConverged
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvergenceReport {
        rows,
        mesh,
        tau_conv: tau,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub n: usize,
    pub eps: f64,
    /// Leaves with `f_n < ε`.
    pub family: Vec<String>,
    /// Largest distance from a vertex to the family's vertices; `None` for an
    /// empty family.
    pub density_radius: Option<f64>,
    pub holds: bool,
}

fn density(base: &FoliatedComplex, f: &WarpSpec, eps: f64) -> (Vec<String>, Option<f64>, bool) {
    let family: Vec<usize> = base
        .leaves()
        .iter()
        .enumerate()
        .filter(|(_, l)| f.values[*l] < eps)
        .map(|(i, _)| i)
        .collect();
    if family.is_empty() {
        return (Vec::new(), None, false);
    }
    let sources: Vec<usize> = (0..base.vertices().len())
        .filter(|&v| family.contains(&base.leaf_of(v)))
        .collect();
    let d = paths::dijkstra(&base.adjacency(), &sources);
    let radius = d
        .into_iter()
        .map(|v| v.expect("connected complex"))
        .fold(0.0, f64::max);
    let names = family.iter().map(|&i| base.leaves()[i].clone()).collect();
    (names, Some(radius), radius <= eps)
}

/// Whether the leaves with `f_n < ε` form an `ε`-dense set of vertices in the
/// base geodesic metric.
pub fn check_density_condition(seq: &WarpSequence, eps: f64, n: usize) -> Result<ConditionReport> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ε must be positive, got {eps}"
        )));
    }
    let f = seq.term(n)?;
    let (family, density_radius, holds) = density(&seq.base, &f, eps);
    Ok(ConditionReport {
        n,
        eps,
        family,
        density_radius,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditStatus {
    Agree,
    AgreeWithinSlack,
    Disagree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCell {
    pub eps: f64,
    /// Per index: whether the condition holds at that `n`.
    pub holds: Vec<bool>,
    /// Smallest `n` from which the condition holds through the last index.
    pub from_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub ns: Vec<usize>,
    pub cells: Vec<AuditCell>,
    /// The condition holds eventually for every `ε` of the grid.
    pub condition: bool,
    pub verdict: Verdict,
    pub status: AuditStatus,
    /// Mesh plus the final estimator gap.
    pub slack: f64,
    pub convergence: ConvergenceReport,
}

/// Cross-tabulates the density condition over `eps_grid × ns` against the
/// convergence verdict.
pub fn iff_audit(
    seq: &WarpSequence,
    eps_grid: &[f64],
    ns: &[usize],
    opts: &ConvergenceOptions,
) -> Result<AuditReport> {
    if eps_grid.is_empty() {
        return Err(Error::Empty("ε grid"));
    }
    let convergence = run_convergence(seq, ns, opts)?;
    let mut cells = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let holds: Vec<bool> = ns
            .iter()
            .map(|&n| check_density_condition(seq, eps, n).map(|c| c.holds))
            .collect::<Result<_>>()?;
        let tail = holds.iter().rev().take_while(|&&h| h).count();
        let from_n = (tail > 0).then(|| ns[ns.len() - tail]);
        cells.push(AuditCell { eps, holds, from_n });
    }
    let condition = cells.iter().all(|c| c.from_n.is_some());
    let last = convergence.rows.last().expect("nonempty");
    let tau = convergence.tau_conv;
    let slack = convergence.mesh + (last.gh_upper - last.gh_lower);
    let verdict = convergence.verdict;
    let status = match (condition, verdict) {
        (true, Verdict::Converged) | (false, Verdict::NotConverged) => AuditStatus::Agree,
        (true, Verdict::Inconclusive) if last.gh_upper <= tau + slack => {
            AuditStatus::AgreeWithinSlack
        }
        (false, Verdict::Inconclusive) if last.gh_lower > tau - slack => {
            AuditStatus::AgreeWithinSlack
        }
        _ => AuditStatus::Disagree,
    };
    Ok(AuditReport {
        ns: ns.to_vec(),
        cells,
        condition,
        verdict,
        status,
        slack,
        convergence,
    })
}
