use std::sync::Arc;

use critfpp::distributions::{classify_regime, from_ak, AkSequence, DistSpec, DEFAULT_K_MAX};
use critfpp::dynamics::{covering_number, scan_statistic, DynamicalField, IntervalSet, PointToBox};
use critfpp::fpp::{passage_time, point_to_box, WeightField};
use critfpp::io::fmt_num;
use critfpp::labels::{LabelField, LabelSource};
use critfpp::lattice::{Region, Vertex, VertexIndex};
use critfpp::percolation::{has_arms, has_crossing, open_config, ArmSpec, Color, Direction};
use proptest::prelude::*;

fn box_field(radius: i32, tau: &[f64]) -> WeightField {
    let idx = Arc::new(VertexIndex::new(Region::Box { radius }).unwrap());
    let n = idx.len();
    WeightField::from_weights(idx, tau.iter().copied().cycle().take(n).collect())
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..4.0f64], 81)
}

fn vertex(r: i32) -> impl Strategy<Value = Vertex> {
    (-r..=r, -r..=r).prop_map(|(x, y)| Vertex::new(x, y))
}

fn seq() -> impl Strategy<Value = AkSequence> {
    prop_oneof![
        (0.01..10.0f64).prop_map(|c| AkSequence::Constant { c }),
        (0.01..10.0f64, 0.0..3.0f64, 0.0..3.0f64).prop_map(|(c, beta, gamma)| AkSequence::PowerLog { c, beta, gamma }),
        (0.01..10.0f64, 0.05..0.99f64).prop_map(|(c, r)| AkSequence::Geometric { c, r }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn raising_weights_never_lowers_passage_times(tau in weights(), bump in prop::collection::vec(0.0..2.0f64, 81), a in vertex(4), b in vertex(4)) {
        let region = Region::Box { radius: 4 };
        let low = box_field(4, &tau);
        let high_tau: Vec<f64> = tau.iter().zip(&bump).map(|(t, d)| t + d).collect();
        let high = box_field(4, &high_tau);
        let t_low = passage_time(&low, &[a], &[b], &region, false).unwrap().value;
        let t_high = passage_time(&high, &[a], &[b], &region, false).unwrap().value;
        prop_assert!(t_high >= t_low);
        prop_assert!(point_to_box(&high, 4).unwrap() >= point_to_box(&low, 4).unwrap());
    }

    #[test]
    fn endpoint_asymmetry_is_bounded(tau in weights(), a in vertex(4), b in vertex(4)) {
        let region = Region::Box { radius: 4 };
        let f = box_field(4, &tau);
        let ab = passage_time(&f, &[a], &[b], &region, false).unwrap().value;
        let ba = passage_time(&f, &[b], &[a], &region, false).unwrap().value;
        let bound = f.tau(a).unwrap().max(f.tau(b).unwrap());
        prop_assert!((ab - ba).abs() <= bound + 1e-12);
        if a != b {
            prop_assert!(ab >= f.tau(b).unwrap());
        }
    }

    #[test]
    fn concatenation_bounds_passage_time(tau in weights(), a in vertex(4), b in vertex(4), c in vertex(4)) {
        let region = Region::Box { radius: 4 };
        let f = box_field(4, &tau);
        let t = |x: Vertex, y: Vertex| passage_time(&f, &[x], &[y], &region, true).unwrap();
        let ab = t(a, b);
        let bc = t(b, c);
        let mut glued = ab.witness.clone().unwrap();
        glued.extend(bc.witness.clone().unwrap().into_iter().skip(1));
        prop_assert!((critfpp::fpp::path_time(&f, &glued) - (ab.value + bc.value)).abs() <= 1e-9);
        prop_assert!(t(a, c).value <= ab.value + bc.value + 1e-12);
    }

    #[test]
    fn crossings_and_arms_are_monotone_in_p(seed in any::<u64>(), p in 0.3..0.7f64, dp in 0.0..0.2f64) {
        let rect = Region::Rect { x0: 0, x1: 12, y0: 0, y1: 12 };
        let labels = LabelField::generate(Arc::new(VertexIndex::new(Region::Box { radius: 12 }).unwrap()), &LabelSource::new(seed));
        let lo = open_config(&labels, p).unwrap();
        let hi = open_config(&labels, p + dp).unwrap();
        if has_crossing(&lo, &rect, Direction::LeftRight, Color::Open).unwrap() {
            prop_assert!(has_crossing(&hi, &rect, Direction::LeftRight, Color::Open).unwrap());
        }
        let one = ArmSpec::one_arm();
        if has_arms(&lo, 0, 12, &one).unwrap() {
            prop_assert!(has_arms(&hi, 0, 12, &one).unwrap());
        }
    }

    #[test]
    fn arm_events_nest(seed in any::<u64>(), m in 0i32..3, dm in 0i32..3, dn in 0i32..4) {
        let labels = LabelField::generate(Arc::new(VertexIndex::new(Region::Box { radius: 12 }).unwrap()), &LabelSource::new(seed));
        let cfg = open_config(&labels, 0.5).unwrap();
        for spec in [ArmSpec::one_arm(), ArmSpec::polychromatic_two(), ArmSpec::half_plane_one_arm()] {
            let m2 = m + dm;
            let n2 = 12 - dn;
            if has_arms(&cfg, m, 12, &spec).unwrap() && m2 < n2 {
                prop_assert!(has_arms(&cfg, m2, n2, &spec).unwrap(), "{} fails to nest", spec);
            }
        }
    }

    #[test]
    fn lowering_every_a_k_never_raises_point_to_box(seed in any::<u64>(), c in 0.1..3.0f64, shrink in 0.1..1.0f64) {
        let src = LabelSource::new(seed);
        let region = Region::Box { radius: 8 };
        let big = from_ak(&AkSequence::PowerLog { c, beta: 1.0, gamma: 0.0 }, DEFAULT_K_MAX).unwrap();
        let small = from_ak(&AkSequence::PowerLog { c: c * shrink, beta: 1.0, gamma: 0.0 }, DEFAULT_K_MAX).unwrap();
        let t_big = point_to_box(&WeightField::generate(region.clone(), &big, &src).unwrap(), 8).unwrap();
        let t_small = point_to_box(&WeightField::generate(region, &small, &src).unwrap(), 8).unwrap();
        prop_assert!(t_small <= t_big);
    }

    #[test]
    fn trajectories_ignore_vertices_outside_the_statistic(seed in any::<u64>()) {
        let cdf = critfpp::distributions::Cdf::bernoulli(0.5).unwrap();
        let src = LabelSource::new(seed);
        let small = DynamicalField::generate(Region::Box { radius: 6 }, 0.5, cdf.clone(), src.clone()).unwrap();
        let large = DynamicalField::generate(Region::Box { radius: 9 }, 0.5, cdf.clone(), src.clone()).unwrap();
        let a = scan_statistic(&small, &mut PointToBox::new(6).unwrap()).unwrap();
        let b = scan_statistic(&large, &mut PointToBox::new(6).unwrap()).unwrap();
        prop_assert_eq!(&a, &b);
        let again = DynamicalField::generate(Region::Box { radius: 6 }, 0.5, cdf, src).unwrap();
        prop_assert_eq!(a, scan_statistic(&again, &mut PointToBox::new(6).unwrap()).unwrap());
    }

    #[test]
    fn covering_numbers_shrink_with_scale(cuts in prop::collection::vec(0.0..1.0f64, 0..12), e1 in 0.001..0.5f64, e2 in 0.001..0.5f64) {
        let mut cuts = cuts;
        cuts.sort_by(f64::total_cmp);
        let pieces: Vec<(f64, f64)> = cuts.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let set = IntervalSet::new(pieces.clone(), 1.0).unwrap();
        prop_assert!(set.measure() <= 1.0 + 1e-12);
        let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let n_small = covering_number(&set, small, (0.0, 1.0)).unwrap();
        let n_large = covering_number(&set, large, (0.0, 1.0)).unwrap();
        prop_assert!(n_large <= n_small);
        prop_assert!(n_small as usize <= (1.0 / small).ceil() as usize + pieces.len());
    }

    #[test]
    fn classification_ignores_positive_scaling(s in seq(), k in 0.01..100.0f64) {
        let scaled = match &s {
            AkSequence::Constant { c } => AkSequence::Constant { c: c * k },
            AkSequence::PowerLog { c, beta, gamma } => AkSequence::PowerLog { c: c * k, beta: *beta, gamma: *gamma },
            AkSequence::Geometric { c, r } => AkSequence::Geometric { c: c * k, r: *r },
            other => other.clone(),
        };
        let a = classify_regime(0.5, &s);
        let b = classify_regime(0.5, &scaled);
        prop_assert_eq!(a.sum_ak, b.sum_ak);
        prop_assert_eq!(a.sum_k78_ak, b.sum_k78_ak);
        prop_assert_eq!(a.kak_behavior, b.kak_behavior);
        prop_assert_eq!(a.tags(), b.tags());
    }

    #[test]
    fn distribution_text_round_trips(s in seq(), k_max in 2u32..80) {
        let spec = DistSpec::FromAk { seq: s, k_max };
        let text = spec.to_string();
        let back: DistSpec = text.parse().unwrap();
        prop_assert_eq!(&back, &spec);
        let cdf = back.build().unwrap();
        for k in 2..k_max.min(40) {
            prop_assert!(cdf.ak(k + 1) <= cdf.ak(k));
        }
    }

    #[test]
    fn numbers_keep_twelve_significant_digits(x in -1e9..1e9f64) {
        let text = fmt_num(x);
        prop_assert!(!text.contains('e'));
        let back: f64 = text.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300) + 1e-12);
    }
}
