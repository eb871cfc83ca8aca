//! Graphviz export.

use std::fmt::Write as _;

use crate::foliated::{EdgeKind, FoliatedComplex, HlsSpace};
use crate::graph::MetricGraph;
use crate::metric::FiniteMetricSpace;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn num(x: f64) -> String {
    format!("{x:.4}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

/// Vertices clustered by leaf; tangential edges black, transverse red.
pub fn complex_to_dot(k: &FoliatedComplex) -> String {
    let mut out = String::from("graph complex {\n  node [shape=point];\n");
    for (li, (leaf, members)) in k.leaves().iter().zip(k.members()).enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{li} {{");
        let style = if k.is_compact(li) { "solid" } else { "dashed" };
        let _ = writeln!(out, "    label={}; style={style};", quote(leaf));
        for v in members {
            let _ = writeln!(out, "    {};", quote(&k.vertices()[v]));
        }
        out.push_str("  }\n");
    }
    for e in k.edges() {
        let color = match e.kind {
            EdgeKind::Tangential => "black",
            EdgeKind::Transverse => "red",
        };
        let _ = writeln!(
            out,
            "  {} -- {} [color={color}, label={}];",
            quote(&k.vertices()[e.u]),
            quote(&k.vertices()[e.v]),
            quote(&num(e.len))
        );
    }
    out.push_str("}\n");
    out
}

pub fn graph_to_dot(g: &MetricGraph) -> String {
    let mut out = String::from("graph metric_graph {\n");
    for n in g.nodes() {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for &(u, v, len) in g.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(&g.nodes()[u]),
            quote(&g.nodes()[v]),
            quote(&num(len))
        );
    }
    out.push_str("}\n");
    out
}

/// Draws only the pairs whose distance is not realized through a third
/// point, labelled with the distance.
pub fn space_to_dot(x: &FiniteMetricSpace) -> String {
    let mut out = String::from("graph space {\n");
    for p in x.points() {
        let _ = writeln!(out, "  {};", quote(p));
    }
    let tol = x.default_tol();
    let n = x.len();
    for i in 0..n {
        for j in i + 1..n {
            let dij = x.d(i, j);
            let through = (0..n)
                .filter(|&k| k != i && k != j)
                .any(|k| x.d(i, k) > tol && x.d(k, j) > tol && x.d(i, k) + x.d(k, j) <= dij + tol);
            if !through {
                let _ = writeln!(
                    out,
                    "  {} -- {} [label={}];",
                    quote(&x.points()[i]),
                    quote(&x.points()[j]),
                    quote(&num(dij))
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

/// The leaf-class space with each class labelled by its member leaves.
pub fn hls_to_dot(h: &HlsSpace) -> String {
    let mut members = vec![Vec::new(); h.space.len()];
    for (leaf, class) in &h.class_of_leaf {
        if let Some(i) = h.space.index_of(class) {
            members[i].push(leaf.as_str());
        }
    }
    let mut out = space_to_dot(&h.space);
    let mut labels = String::new();
    for (i, p) in h.space.points().iter().enumerate() {
        let _ = writeln!(
            labels,
            "  {} [label={}];",
            quote(p),
            quote(&members[i].join(","))
        );
    }
    out.insert_str(out.len() - 2, &labels);
    out
}
