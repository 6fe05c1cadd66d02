//! Invariants checked on generated inputs.

mod common;

use std::collections::HashSet;
use std::f64::consts::PI;

use proptest::prelude::*;

use common::{annulus_chord_crossings, subset_gap};
use flatsphere::annulus::{annulus_self_intersections, classify_trajectory, AnnulusSpec, Boundary};
use flatsphere::bounds::compute_bounds;
use flatsphere::corpus::random_doubled_polygon_with;
use flatsphere::curvature::{curvature_gap, CurvatureProfile};
use flatsphere::delaunay::{default_flip_cap, delaunayize, is_locally_delaunay};
use flatsphere::geodesic::{
    combinatorial_length, count_self_intersections, enumerate_saddle_connections, trace, Start,
};
use flatsphere::normal::{decode_normal, encode_normal};
use flatsphere::surface::{normalize_area, parse_surface, validate_surface, ConeSurface, DEFAULT_TOL};

fn surface(seed: u64) -> ConeSurface {
    random_doubled_polygon_with(seed, None, 0.01)
}

fn small_surface(seed: u64) -> ConeSurface {
    random_doubled_polygon_with(seed, Some(3 + (seed % 3) as usize), 0.01)
}

fn gap(ks: &[f64]) -> f64 {
    curvature_gap(&CurvatureProfile::new(ks.to_vec()).unwrap()).unwrap()
}

/// Curvatures below 1 summing to 2.
fn profile() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.8f64..0.95, 2..10).prop_filter_map("last curvature below 1", |mut ks| {
        let last = 2.0 - ks.iter().sum::<f64>();
        (last < 0.95 && last > -3.0).then(|| {
            ks.push(last);
            ks
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_polygons_validate(seed in any::<u64>()) {
        let s = surface(seed);
        let report = validate_surface(&s.to_raw(), DEFAULT_TOL);
        prop_assert!(report.pass);
        prop_assert!(report.gauss_bonnet_residual.unwrap() < 1e-9);
        let sum: f64 = s.curvatures().iter().sum();
        prop_assert!((sum - 2.0).abs() < 1e-9);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let s = surface(seed);
        let u = normalize_area(&s).unwrap();
        let again = normalize_area(&u).unwrap();
        prop_assert!((u.area() - 1.0).abs() < 1e-12);
        for t in 0..u.triangle_count() {
            for e in 0..3 {
                prop_assert!((u.lengths(t)[e] - again.lengths(t)[e]).abs() < 1e-12);
            }
        }
        for v in 0..s.vertex_count() {
            prop_assert!((u.cone_angle(v) - s.cone_angle(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn file_round_trip(seed in any::<u64>()) {
        let s = surface(seed);
        prop_assert_eq!(parse_surface(&s.to_fsph()).unwrap(), s.to_raw());
    }

    #[test]
    fn gap_matches_subsets_and_ignores_order(ks in profile(), rot in 0usize..10) {
        let g = gap(&ks);
        prop_assert!((g - subset_gap(&ks)).abs() < 1e-12);
        prop_assert!((0.0..=1.0 / 3.0 + 1e-12).contains(&g));
        let mut shuffled = ks.clone();
        shuffled.reverse();
        let r = rot % shuffled.len();
        shuffled.rotate_left(r);
        prop_assert!((gap(&shuffled) - g).abs() < 1e-12);
    }

    #[test]
    fn annulus_modulus_is_scale_free(r in 0.01f64..10.0, ratio in 1.01f64..100.0, theta in 0.05f64..10.0, c in 0.001f64..1000.0) {
        let a = AnnulusSpec::new(r, r * ratio, theta).unwrap();
        let b = AnnulusSpec::new(c * r, c * r * ratio, theta).unwrap();
        let (ma, mb) = (a.modulus().unwrap(), b.modulus().unwrap());
        prop_assert!((ma - mb).abs() < 1e-9 * ma.abs().max(1.0));
    }

    #[test]
    fn annulus_regimes_meet_at_the_threshold(r in 0.01f64..0.99, theta in 0.1f64..3.0) {
        let a = AnnulusSpec::new(r, 1.0, theta).unwrap();
        let alpha = r.asin();
        let below = classify_trajectory(&a, Boundary::Outer, alpha).unwrap();
        let above = classify_trajectory(&a, Boundary::Outer, alpha + 1e-12).unwrap();
        prop_assert!((below.min_radius - r).abs() < 1e-9);
        prop_assert!((above.min_radius - r).abs() < 1e-9);
    }

    #[test]
    fn annulus_count_matches_developed_cone(m in 2u32..40, alpha in 0.01f64..1.56) {
        let theta = 2.0 * PI / m as f64;
        let q = (PI - 2.0 * alpha) / theta;
        // the two readings of a boundary case differ only by rounding
        prop_assume!((q - q.round()).abs() > 1e-6);
        let a = AnnulusSpec::new(0.0, 1.0, theta).unwrap();
        prop_assert_eq!(annulus_self_intersections(&a, alpha).unwrap(), annulus_chord_crossings(m, alpha));
    }

    #[test]
    fn bounds_are_monotone(n in 3u64..40, delta in 0.001f64..0.33, k in 0u64..50) {
        let b = compute_bounds(n, delta, k).unwrap();
        let fields = |b: &flatsphere::BoundsReport| [
            b.s_bound, b.count_bound_log2, b.simple_count_bound_log2, b.length_bound,
            b.simple_length_bound, b.diameter_bound, b.comb_length_bound,
        ];
        let base = fields(&b);
        let more_n = fields(&compute_bounds(n + 1, delta, k).unwrap());
        let more_k = fields(&compute_bounds(n, delta, k + 1).unwrap());
        let more_delta = fields(&compute_bounds(n, delta * 1.01, k).unwrap());
        for i in 0..base.len() {
            prop_assert!(base[i].is_finite());
            prop_assert!(more_n[i] >= base[i]);
            prop_assert!(more_k[i] >= base[i]);
            prop_assert!(more_delta[i] <= base[i]);
        }
        prop_assert!(compute_bounds(n, delta * 1.01, k).unwrap().chords_bound <= b.chords_bound);
        prop_assert!(compute_bounds(n, delta * 1.01, k).unwrap().monogon_angle_bound <= b.monogon_angle_bound);
        if b.simple_count_bound.is_finite() {
            let direct = b.simple_count_bound.log2();
            prop_assert!((direct - b.simple_count_bound_log2).abs() < 1e-9 * direct.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn delaunay_preserves_the_metric(seed in any::<u64>()) {
        let s = surface(seed);
        let (d, report) = delaunayize(&s).unwrap();
        prop_assert_eq!(d.vertex_count(), s.vertex_count());
        prop_assert_eq!(d.edge_count(), s.edge_count());
        prop_assert!(report.all_delaunay);
        prop_assert!(report.flips <= default_flip_cap(&s));
        prop_assert!((d.area() - s.area()).abs() < 1e-9 * s.area());
        let mut a: Vec<f64> = s.cone_angles().to_vec();
        let mut b: Vec<f64> = d.cone_angles().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        for e in 0..d.edge_count() {
            prop_assert!(is_locally_delaunay(&d, d.edge_slot(e)));
        }
    }

    #[test]
    fn developed_traces_are_straight(seed in any::<u64>(), tri in 0usize..24, u in 0.05f64..0.45, v in 0.05f64..0.45, dir in 0.0f64..(2.0 * PI), len in 0.5f64..30.0) {
        let s = surface(seed);
        let tri = tri % s.triangle_count();
        let c = s.chart(tri);
        let point = c[0] + (c[1] - c[0]) * u + (c[2] - c[0]) * v;
        let t = trace(&s, Start::Interior { triangle: tri, point }, dir, len).unwrap();
        let dev = t.develop(&s).unwrap();
        let a = dev[0][0];
        let far = dev.last().unwrap()[1];
        let span = a.dist(far);
        let sum: f64 = t.segments.iter().map(|g| g.length()).sum();
        prop_assert!((sum - t.length).abs() < 1e-9 * t.length.max(1.0));
        prop_assert!((span - t.length).abs() < 1e-7 * t.length.max(1.0));
        let dir = (far - a).normalized();
        for w in dev.windows(2) {
            prop_assert!(w[0][1].dist(w[1][0]) < 1e-7 * t.length.max(1.0));
        }
        for [p, q] in &dev {
            prop_assert!(dir.cross(*p - a).abs() < 1e-7 * t.length.max(1.0));
            prop_assert!(dir.cross(*q - a).abs() < 1e-7 * t.length.max(1.0));
        }
    }

    #[test]
    fn enumerated_connections_are_unique_and_end_at_vertices(seed in any::<u64>()) {
        let s = small_surface(seed);
        let conns = enumerate_saddle_connections(&s, 2.0 * s.max_edge_length()).unwrap();
        let keys: HashSet<_> = conns.iter().map(|c| (c.start, c.end, c.crossings.clone(), c.edge)).collect();
        prop_assert_eq!(keys.len(), conns.len());
        for c in &conns {
            let t = c.trajectory(&s);
            prop_assert!(t.is_saddle_connection());
            prop_assert!((t.length - c.length).abs() < 1e-9 * c.length.max(1.0));
        }
    }

    #[test]
    fn normal_coordinates_round_trip(seed in any::<u64>()) {
        let (d, _) = delaunayize(&small_surface(seed)).unwrap();
        let conns = enumerate_saddle_connections(&d, 2.5 * d.max_edge_length()).unwrap();
        let mut seen = HashSet::new();
        for c in conns.iter().filter(|c| !c.is_edge()) {
            let t = c.trajectory(&d);
            if count_self_intersections(&t) > 0 {
                continue;
            }
            let nc = encode_normal(&t, &d).unwrap();
            prop_assert_eq!(decode_normal(&nc, &d).unwrap(), c.crossings.clone());
            let total: u64 = nc.counts.iter().map(|&x| u64::from(x)).sum();
            prop_assert_eq!(total as usize, combinatorial_length(&t, &d).unwrap() - 1);
            prop_assert!(seen.insert(nc));
        }
    }
}
