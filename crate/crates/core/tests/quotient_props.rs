mod common;

use common::*;
use hlskit::quotient::glue_relation;
use hlskit::{find_isometry, glue, quotient_metric, Bijection, PointRelation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn class_distances_equal_chain_infimum(seed in any::<u64>(), n in 1usize..=7) {
        let mut r = rng(seed);
        let x = random_space(&mut r, n, true);
        let rel = random_relation(&mut r, &x);
        let q = quotient_metric(&x, &PointRelation::new(rel.clone())).unwrap();
        for a in 0..n {
            for b in 0..n {
                let got = q.space.dist(&q.class_map[x.id(a)], &q.class_map[x.id(b)]).unwrap();
                let want = chain_oracle(&x, &rel, a, b);
                prop_assert!(close(got, want, 1e-12), "{a}-{b}: {got} vs {want}");
                prop_assert!(got <= x.d(a, b) + 1e-12);
            }
        }
    }

    #[test]
    fn trivial_relation_is_isometry(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let x = random_space(&mut r, n, false);
        let q = quotient_metric(&x, &PointRelation::new(Vec::new())).unwrap();
        prop_assert!(find_isometry(&x, &q.space, 0.0).is_some());
    }

    #[test]
    fn quotient_is_idempotent(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let x = random_space(&mut r, n, true);
        let rel = random_relation(&mut r, &x);
        let q = quotient_metric(&x, &PointRelation::new(rel)).unwrap();
        let again = quotient_metric(&q.space, &PointRelation::new(Vec::new())).unwrap();
        prop_assert!(find_isometry(&q.space, &again.space, 0.0).is_some());
    }

    #[test]
    fn glue_commutes(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=5) {
        let mut r = rng(seed);
        let x = random_space(&mut r, n, false);
        let y = random_space(&mut r, m, false);
        let k = 1 + (seed as usize) % n.min(m);
        let pairs: Vec<(String, String)> = (0..k).map(|i| (x.id(i).to_string(), y.id(i).to_string())).collect();
        let f = Bijection::new(pairs).unwrap();
        let xy = glue(&x, &y, &f).unwrap();
        let yx = glue(&y, &x, &f.inverse()).unwrap();
        prop_assert!(find_isometry(&xy.space, &yx.space, xy.space.default_tol().max(1e-12)).is_some());
        let via_rel = glue_relation(&x, &y, f.pairs()).unwrap();
        prop_assert_eq!(via_rel, xy);
    }
}
