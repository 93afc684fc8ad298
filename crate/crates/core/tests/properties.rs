use islandfs_core::algorithms::{
    crossover_at, mutate_bits, neighborhoods, tchebycheff, uniform_weights, velocity_update, PsoParams,
};
use islandfs_core::classifier::{balanced_auc, cardinality_score, confusion};
use islandfs_core::dataset::{project, shard_rows, Matrix};
use islandfs_core::metrics::{eaf, hypervolume, t_test_pooled};
use islandfs_core::mo::{crowding_distances, dominates, front_indices, ns_select_indices};
use islandfs_core::rng::stream;
use islandfs_core::{Dataset, FeatureMask, LrModel, ObjectivePair};
use proptest::prelude::*;

/// Objective values on a coarse grid so ties and duplicates occur.
fn objectives(max: usize) -> impl Strategy<Value = Vec<ObjectivePair>> {
    prop::collection::vec((0u8..=10, 0u8..=10), 1..max)
        .prop_map(|v| v.into_iter().map(|(c, a)| ObjectivePair::new(c as f64 / 10.0, a as f64 / 10.0)).collect())
}

fn peel(objs: &[ObjectivePair]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..objs.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let (f, rest): (Vec<usize>, Vec<usize>) =
            left.iter().partition(|&&i| !left.iter().any(|&j| dominates(&objs[j], &objs[i])));
        fronts.push(f);
        left = rest;
    }
    fronts
}

fn non_dominated_subset(objs: &[ObjectivePair]) -> Vec<ObjectivePair> {
    front_indices(objs)[0].iter().map(|&i| objs[i]).collect()
}

fn mask_strategy(len: std::ops::Range<usize>) -> impl Strategy<Value = FeatureMask> {
    prop::collection::vec(any::<bool>(), len).prop_map(FeatureMask::new)
}

proptest! {
    #[test]
    fn sort_matches_peeling(objs in objectives(40)) {
        prop_assert_eq!(front_indices(&objs), peel(&objs));
    }

    #[test]
    fn selection_keeps_extremes(objs in objectives(40), frac in 0.0f64..1.0) {
        prop_assume!(objs.len() >= 2);
        let n = 2 + ((objs.len() - 2) as f64 * frac) as usize;
        let keys: Vec<u64> = (0..objs.len() as u64).collect();
        let kept = ns_select_indices(&objs, &keys, n).unwrap();
        prop_assert_eq!(kept.len(), n);
        let best_auc = objs.iter().map(|o| o.auc).fold(f64::MIN, f64::max);
        let least_card = objs.iter().map(|o| o.cardinality).fold(f64::MAX, f64::min);
        prop_assert!(kept.iter().any(|&i| objs[i].auc == best_auc));
        prop_assert!(kept.iter().any(|&i| objs[i].cardinality == least_card));
    }

    #[test]
    fn dominance_is_a_strict_order(objs in objectives(12)) {
        for a in &objs {
            prop_assert!(!dominates(a, a));
            for b in &objs {
                prop_assert!(!(dominates(a, b) && dominates(b, a)));
                for c in &objs {
                    if dominates(a, b) && dominates(b, c) {
                        prop_assert!(dominates(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn front_boundaries_are_infinitely_crowded(objs in objectives(30)) {
        let front = non_dominated_subset(&objs);
        let d = crowding_distances(&front);
        let lo = front.iter().map(|o| o.cardinality).fold(f64::MAX, f64::min);
        let hi = front.iter().map(|o| o.cardinality).fold(f64::MIN, f64::max);
        prop_assert!(front.iter().zip(&d).any(|(o, d)| o.cardinality == lo && d.is_infinite()));
        prop_assert!(front.iter().zip(&d).any(|(o, d)| o.cardinality == hi && d.is_infinite()));
        prop_assert!(d.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn hypervolume_is_bounded_and_monotone(objs in objectives(20), c in 0.0f64..=1.0, a in 0.0f64..=1.0) {
        let front = non_dominated_subset(&objs);
        let hv = hypervolume(&front).unwrap();
        prop_assert!((0.0..=1.0).contains(&hv));
        let p = ObjectivePair::new(c, a);
        if !front.iter().any(|q| dominates(q, &p)) {
            let mut grown: Vec<ObjectivePair> = front.iter().copied().filter(|q| !dominates(&p, q)).collect();
            grown.push(p);
            prop_assert!(hypervolume(&grown).unwrap() >= hv - 1e-12);
        }
    }

    #[test]
    fn t_test_is_antisymmetric(a in prop::collection::vec(0.0f64..1.0, 2..25), b in prop::collection::vec(0.0f64..1.0, 2..25)) {
        let ab = t_test_pooled(&a, &b, 0.05).unwrap();
        let ba = t_test_pooled(&b, &a, 0.05).unwrap();
        prop_assert!((ab.t_statistic + ba.t_statistic).abs() < 1e-9);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
        prop_assert_eq!(ab.dof, a.len() + b.len() - 2);
    }

    #[test]
    fn attainment_surfaces_are_staircases(fronts in prop::collection::vec(objectives(8), 1..6)) {
        let fronts: Vec<Vec<ObjectivePair>> = fronts.iter().map(|f| non_dominated_subset(f)).collect();
        let s = eaf(&fronts).unwrap();
        for surface in [&s.best, &s.median, &s.worst] {
            for w in surface.points.windows(2) {
                prop_assert!(w[0].cardinality < w[1].cardinality && w[0].auc < w[1].auc);
            }
        }
    }

    #[test]
    fn shards_partition_the_rows(zeros in 4usize..40, ones in 4usize..40, k in 1usize..5, seed in any::<u64>()) {
        let n = zeros + ones;
        let labels: Vec<u8> = (0..n).map(|i| u8::from(i >= zeros)).collect();
        let ds = Dataset::dense((0..n).map(|i| i as f64).collect(), 1, labels, None).unwrap();
        let shards = shard_rows(&ds, k, seed).unwrap();
        let mut all: Vec<usize> = shards.iter().flat_map(|s| s.row_ids().to_vec()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        for s in &shards {
            let [c0, c1] = s.class_counts();
            prop_assert!(c0 >= zeros / k && c0 <= zeros.div_ceil(k));
            prop_assert!(c1 >= ones / k && c1 <= ones.div_ceil(k));
        }
    }

    #[test]
    fn projection_keeps_popcount_columns(mask in mask_strategy(1..30), rows in 2usize..10) {
        prop_assume!(mask.popcount() > 0);
        let nf = mask.len();
        let labels: Vec<u8> = (0..rows).map(|i| (i % 2) as u8).collect();
        let ds = Dataset::dense((0..rows * nf).map(|i| i as f64).collect(), nf, labels, None).unwrap();
        let (x, y) = project(&ds, &mask).unwrap();
        prop_assert_eq!(x.cols(), mask.popcount());
        prop_assert_eq!(y.len(), rows);
        let card = cardinality_score(&mask).unwrap();
        // exact up to the rounding of one division and one multiplication
        let back = card * nf as f64;
        prop_assert!((back - mask.popcount() as f64).abs() <= 4.0 * f64::EPSILON * back);
    }

    #[test]
    fn balanced_auc_ignores_row_order(values in prop::collection::vec(-3.0f64..3.0, 4..30), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = values.len();
        let labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let m = LrModel { weights: vec![1.3], intercept: -0.2 };
        let before = balanced_auc(&confusion(&m, &Matrix::new(n, 1, values.clone()), &labels, 0.5).unwrap()).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut stream(seed, &[]));
        let x = Matrix::new(n, 1, order.iter().map(|&i| values[i]).collect());
        let y: Vec<u8> = order.iter().map(|&i| labels[i]).collect();
        prop_assert_eq!(before, balanced_auc(&confusion(&m, &x, &y, 0.5).unwrap()).unwrap());
    }

    #[test]
    fn tchebycheff_is_homogeneous_in_weights(c in 0.0f64..1.0, a in 0.0f64..1.0, l in 0.0f64..1.0, scale in 0.1f64..10.0) {
        let f = ObjectivePair::new(c, a);
        let ideal = [0.05, 0.02];
        let g = tchebycheff(&f, &[l, 1.0 - l], &ideal);
        let scaled = tchebycheff(&f, &[scale * l, scale * (1.0 - l)], &ideal);
        prop_assert!((scaled - scale * g).abs() < 1e-12);
    }

    #[test]
    fn neighbourhoods_mirror_for_odd_sizes(n in 3usize..40, t in 0usize..20) {
        let t = (2 * t + 1).min(if n % 2 == 0 { n - 1 } else { n });
        let w = uniform_weights(n).unwrap();
        let b = neighborhoods(&w, t).unwrap();
        for i in 0..n {
            let mut mirrored: Vec<usize> = b[n - 1 - i].iter().map(|&j| n - 1 - j).collect();
            mirrored.sort_unstable();
            let mut own = b[i].clone();
            own.sort_unstable();
            prop_assert_eq!(own, mirrored);
        }
    }

    #[test]
    fn variation_conserves_and_flips(p1 in mask_strategy(2..40), seed in any::<u64>()) {
        let len = p1.len();
        let p2 = FeatureMask::new(p1.bits().iter().map(|b| !b).collect());
        let cut = 1 + (seed as usize % (len - 1));
        let (c1, c2) = crossover_at(&p1, &p2, cut);
        for j in 0..len {
            prop_assert_eq!(u8::from(c1.get(j)) + u8::from(c2.get(j)), u8::from(p1.get(j)) + u8::from(p2.get(j)));
        }
        let mut rng = stream(seed, &[]);
        prop_assert_eq!(mutate_bits(p1.clone(), 0.0, &mut rng), p1.clone());
        prop_assert_eq!(mutate_bits(p1.clone(), 1.0, &mut rng), p2);
    }

    #[test]
    fn velocities_stay_clamped(v in prop::collection::vec(-10.0f64..10.0, 1..20), seed in any::<u64>()) {
        let mut rng = stream(seed, &[]);
        let n = v.len();
        let p = FeatureMask::random(n, &mut rng);
        let pb = FeatureMask::random(n, &mut rng);
        let gb = FeatureMask::random(n, &mut rng);
        let params = PsoParams { w: 1.0, c1: 3.0, c2: 3.0, ..PsoParams::default() };
        let out = velocity_update(&v, &p, &pb, &gb, &params, &mut rng).unwrap();
        prop_assert!(out.iter().all(|x| x.abs() <= params.vmax));
    }
}
