mod common;

use std::collections::{BTreeSet, VecDeque};

use common::*;
use hlskit::foliated::induced_class_relation;
use hlskit::generators::generate_prefixed;
use hlskit::quotient::glue_relation;
use hlskit::{
    collapse_subset, find_isometry, fuse_leaves, generate, glue_complexes, hls, segment_parameter,
    validate_metric, warp, Bijection, EdgeKind, EstimateOptions, FoliatedComplex, Generator,
    GlueMode, MetricMode, WarpSpec,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_warp(k: &FoliatedComplex, r: &mut impl Rng, lo: f64, hi: f64) -> WarpSpec {
    WarpSpec {
        values: k
            .leaves()
            .iter()
            .map(|l| (l.clone(), r.gen_range(lo..hi)))
            .collect(),
    }
}

/// Leaves reached by growing from a random leaf across transverse edges.
fn connected_leaf_set(k: &FoliatedComplex, r: &mut impl Rng, size: usize) -> Vec<String> {
    let m = k.leaves().len();
    let start = r.gen_range(0..m);
    let mut nbr = vec![BTreeSet::new(); m];
    for e in k.edges() {
        if e.kind == EdgeKind::Transverse {
            let (a, b) = (k.leaf_of(e.u), k.leaf_of(e.v));
            nbr[a].insert(b);
            nbr[b].insert(a);
        }
    }
    let mut seen = vec![false; m];
    let mut out = vec![start];
    seen[start] = true;
    let mut q = VecDeque::from([start]);
    while let Some(a) = q.pop_front() {
        let mut next: Vec<usize> = nbr[a].iter().copied().filter(|&b| !seen[b]).collect();
        next.shuffle(r);
        for b in next {
            if out.len() >= size {
                break;
            }
            seen[b] = true;
            out.push(b);
            q.push_back(b);
        }
    }
    out.into_iter().map(|i| k.leaves()[i].clone()).collect()
}

fn bundle(d: f64, n: usize, m: usize) -> FoliatedComplex {
    generate(&Generator::ProductIBundle {
        length: d,
        leaves: n,
        fiber: m,
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hls_matches_contracted_graph(seed in any::<u64>(), n in 1usize..=14, extra in 0usize..10) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, n, extra);
        let h = hls(&k).unwrap();
        let want = leaf_oracle(&k);
        let tol = 1e-9 * h.space.diameter().max(1.0);
        for (a, la) in k.leaves().iter().enumerate() {
            for (b, lb) in k.leaves().iter().enumerate() {
                let got = h.space.d(h.class_index_of_leaf(la).unwrap(), h.class_index_of_leaf(lb).unwrap());
                prop_assert!((got - want[a][b]).abs() <= tol, "{la}-{lb}: {got} vs {}", want[a][b]);
            }
        }
        prop_assert!(validate_metric(&h.space, MetricMode::Strict, h.space.default_tol()).is_valid());
    }

    #[test]
    fn warping_leaves_hls_unchanged(seed in any::<u64>(), n in 2usize..=14, extra in 0usize..10) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, n, extra);
        let f = random_warp(&k, &mut r, 0.01, 3.0);
        let w = warp(&k, &f).unwrap();
        let (a, b) = (hls(&w).unwrap(), hls(&k).unwrap());
        prop_assert!(find_isometry(&a.space, &b.space, b.space.default_tol()).is_some());
    }

    #[test]
    fn warping_is_monotone(seed in any::<u64>(), n in 2usize..=12, extra in 0usize..8) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, n, extra);
        let f = random_warp(&k, &mut r, 0.01, 1.0);
        let g = WarpSpec {
            values: f.values.iter().map(|(l, v)| (l.clone(), v + r.gen_range(0.0..1.0))).collect(),
        };
        let (x, y) = (warp(&k, &f).unwrap().geodesic().unwrap(), warp(&k, &g).unwrap().geodesic().unwrap());
        for i in 0..x.len() {
            for j in 0..x.len() {
                prop_assert!(x.d(i, j) <= y.d(i, j) + 1e-12);
            }
        }
    }

    #[test]
    fn fusing_equals_collapse(seed in any::<u64>(), n in 2usize..=14, extra in 0usize..10, size in 1usize..5) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, n, extra);
        let s = connected_leaf_set(&k, &mut r, size);
        let h = hls(&k).unwrap();
        let classes: BTreeSet<String> = s.iter().map(|l| h.class_of_leaf[l].clone()).collect();
        let classes: Vec<String> = classes.into_iter().collect();
        let collapsed = collapse_subset(&h.space, &classes).unwrap();
        let fused = hls(&fuse_leaves(&k, &s).unwrap()).unwrap();
        let tol = h.space.default_tol().max(1e-12);
        prop_assert!(find_isometry(&fused.space, &collapsed.space, tol).is_some());
    }

    #[test]
    fn complex_json_round_trip(seed in any::<u64>(), n in 1usize..=10, extra in 0usize..6) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, n, extra);
        let s = serde_json::to_string(&k).unwrap();
        let back: FoliatedComplex = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tangential_glue_matches_metric_glue(seed in any::<u64>(), n1 in 3usize..8, n2 in 3usize..8, m in 1usize..4) {
        let mut r = rng(seed);
        let k1 = bundle(1.0, n1, m);
        let k2 = generate_prefixed(&Generator::ProductIBundle { length: 0.5, leaves: n2, fiber: m }, "w").unwrap();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut r);
        let pairs = (0..m)
            .map(|j| (format!("v{}_{j}", n1 - 1), format!("wv0_{}", perm[j])))
            .collect();
        let f = Bijection::new(pairs).unwrap();
        let glued = glue_complexes(&k1, &k2, &f, GlueMode::Tangential).unwrap();
        let (h1, h2) = (hls(&k1).unwrap(), hls(&k2).unwrap());
        let rel = induced_class_relation(&h1, &h2, &f).unwrap();
        let metric = glue_relation(&h1.space, &h2.space, &rel).unwrap();
        let hg = hls(&glued).unwrap();
        let est = hlskit::estimate(&hg.space, &metric.space, &EstimateOptions::default()).unwrap();
        prop_assert!(est.upper <= 2.0 * k1.mesh().max(k2.mesh()) + 1e-12, "upper {}", est.upper);
    }
}

#[test]
fn bundle_hls_is_a_segment() {
    for (d, n) in [(0.5, 6), (1.0, 11), (2.0, 21)] {
        let k = bundle(d, n, 3);
        let h = hls(&k).unwrap();
        assert_eq!(h.space.len(), n);
        assert!((h.space.diameter() - d).abs() < 1e-9);
        let base = h.class_of_leaf["L0"].clone();
        let t = segment_parameter(&h, &base, h.space.default_tol()).unwrap();
        for i in 0..n {
            let want = d * i as f64 / (n - 1) as f64;
            assert!((t[&h.class_of_leaf[&format!("L{i}")]] - want).abs() < 1e-9);
        }
    }
}

#[test]
fn generator_hls_are_strict_metrics() {
    let gens = [
        Generator::ProductIBundle {
            length: 1.0,
            leaves: 11,
            fiber: 4,
        },
        Generator::KroneckerTorus { resolution: 8 },
        Generator::ReebAnnulus { resolution: 16 },
        Generator::StarBlock {
            boundaries: 3,
            resolution: 16,
        },
    ];
    for g in gens {
        let h = hls(&generate(&g).unwrap()).unwrap();
        assert!(
            validate_metric(&h.space, MetricMode::Strict, h.space.default_tol()).is_valid(),
            "{g:?}"
        );
    }
}
