use diskclique::furthest::{Backend, FurthestIndex, WeightedSite};
use diskclique::Point;
use proptest::prelude::*;

fn sites() -> impl Strategy<Value = Vec<WeightedSite>> {
    prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0, -10.0f64..0.0), 0..120).prop_map(|v| {
        v.into_iter().enumerate().map(|(i, (x, y, w))| WeightedSite::new(i, Point::new(x, y), w)).collect()
    })
}

fn backend() -> impl Strategy<Value = Backend> {
    prop_oneof![Just(Backend::BruteForce), Just(Backend::Bucketed)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn furthest_dominates_every_live_site(s in sites(), b in backend(), qx in -80.0f64..80.0, qy in -80.0f64..80.0) {
        let q = Point::new(qx, qy);
        let mut idx = FurthestIndex::build(b, s.clone()).unwrap();
        match idx.furthest(q) {
            None => prop_assert!(s.is_empty()),
            Some((best, d)) => {
                prop_assert_eq!(d, best.delta(q));
                for site in &s {
                    prop_assert!(site.delta(q) < d || (site.delta(q) == d && site.site_id >= best.site_id));
                }
            }
        }
    }

    #[test]
    fn extract_above_matches_filter(s in sites(), b in backend(), qx in -80.0f64..80.0, qy in -80.0f64..80.0, thr in 0.0f64..100.0) {
        let q = Point::new(qx, qy);
        let mut idx = FurthestIndex::build(b, s.clone()).unwrap();
        let got = idx.extract_above(q, thr);
        let mut expect: Vec<WeightedSite> = s.iter().copied().filter(|x| x.delta(q) > thr).collect();
        expect.sort_by(|a, b| b.delta(q).total_cmp(&a.delta(q)).then(a.site_id.cmp(&b.site_id)));
        prop_assert_eq!(&got, &expect);
        prop_assert!(idx.extract_above(q, thr).is_empty());
        prop_assert_eq!(idx.len(), s.len() - got.len());
    }

    #[test]
    fn brute_force_extract_costs_output_plus_one(s in sites(), qx in -80.0f64..80.0, qy in -80.0f64..80.0, thr in 0.0f64..100.0) {
        let mut idx = FurthestIndex::build(Backend::BruteForce, s).unwrap();
        let before = idx.op_count();
        let got = idx.extract_above(Point::new(qx, qy), thr);
        prop_assert_eq!(idx.op_count() - before, 1 + got.len() as u64);
    }
}
