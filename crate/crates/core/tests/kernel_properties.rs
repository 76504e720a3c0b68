use clarke_kit::convex::{
    contains, cone_is_pointed, distance_to_minkowski, min_norm_point, support_value, FiniteCone,
    MinkowskiSet,
};
use clarke_kit::oracles::{distance_pg, min_norm_brute_force, zero_in_hull_lp};
use clarke_kit::Vector;
use proptest::prelude::*;

fn vector(dim: usize, scale: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-scale..scale, dim).prop_map(|c| Vector::new(c).unwrap())
}

fn points(dims: std::ops::RangeInclusive<usize>, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vector>> {
    (dims, count).prop_flat_map(|(d, m)| prop::collection::vec(vector(d, 5.0), m))
}

fn nonzero(dim: usize) -> impl Strategy<Value = Vector> {
    vector(dim, 1.0).prop_filter("nonzero", |v| v.norm() > 1e-3)
}

fn minkowski(dim: usize) -> impl Strategy<Value = MinkowskiSet> {
    (prop::collection::vec(vector(dim, 3.0), 1..6), prop::collection::vec(nonzero(dim), 0..3))
        .prop_map(move |(h, g)| MinkowskiSet::from_parts(dim, h, g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn wolfe_criterion(pts in points(2..=5, 3..=10)) {
        let p = min_norm_point(&pts).unwrap();
        for q in &pts {
            prop_assert!(p.dot(&(q - &p)) >= -1e-8, "p = {p}, q = {q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn agrees_with_grid_oracle(pts in points(2..=3, 1..=6)) {
        let a = min_norm_point(&pts).unwrap();
        let b = min_norm_brute_force(&pts);
        prop_assert!(a.distance(&b) <= 1e-7, "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pointedness_matches_lp((dim, gens) in (2usize..=4).prop_flat_map(|d| (Just(d), prop::collection::vec(nonzero(d), 1..=8)))) {
        let cone = FiniteCone::new(dim, gens).unwrap();
        let lp = !zero_in_hull_lp(&cone.normalized_generators(), 1e-9);
        prop_assert_eq!(cone_is_pointed(&cone), lp);
    }

    #[test]
    fn adding_generators_never_increases_distance(
        set in minkowski(2),
        extra_vertex in vector(2, 3.0),
        extra_ray in nonzero(2),
        v in vector(2, 5.0),
    ) {
        let base = distance_to_minkowski(&v, &set).unwrap().distance;
        let mut verts = set.hull().vertices().to_vec();
        verts.push(extra_vertex);
        let more_hull = MinkowskiSet::from_parts(2, verts, set.cone().generators().to_vec()).unwrap();
        let mut gens = set.cone().generators().to_vec();
        gens.push(extra_ray);
        let more_cone = MinkowskiSet::from_parts(2, set.hull().vertices().to_vec(), gens).unwrap();
        prop_assert!(distance_to_minkowski(&v, &more_hull).unwrap().distance <= base + 1e-9);
        prop_assert!(distance_to_minkowski(&v, &more_cone).unwrap().distance <= base + 1e-9);
    }

    #[test]
    fn containment_ignores_order(set in minkowski(3), v in vector(3, 4.0), tol in 1e-6..1.0f64, rot in 0usize..5) {
        let mut verts = set.hull().vertices().to_vec();
        let mut gens = set.cone().generators().to_vec();
        verts.reverse();
        let r = rot % verts.len();
        verts.rotate_left(r);
        gens.reverse();
        let shuffled = MinkowskiSet::from_parts(3, verts, gens).unwrap();
        let d = distance_to_minkowski(&v, &set).unwrap().distance;
        // skip the measure-zero band where rounding could flip the verdict
        prop_assume!((d - tol).abs() > 1e-9);
        prop_assert_eq!(contains(&v, &set, tol).unwrap(), contains(&v, &shuffled, tol).unwrap());
    }

    #[test]
    fn support_is_positively_homogeneous(set in minkowski(3), d in nonzero(3), alpha in 0.01..100.0f64) {
        let s = support_value(&set, &d).unwrap();
        let t = support_value(&set, &d.scale(alpha)).unwrap();
        if s.is_finite() {
            prop_assert!((t - alpha * s).abs() <= 1e-9 * (1.0 + (alpha * s).abs()), "{s} {t}");
        } else {
            prop_assert!(t.is_infinite());
        }
    }

    #[test]
    fn active_set_matches_projected_gradient(set in minkowski(2), v in vector(2, 5.0)) {
        let a = distance_to_minkowski(&v, &set).unwrap();
        let (d, _) = distance_pg(&v, set.hull().vertices(), set.cone().generators(), 10_000);
        prop_assert!((a.distance - d).abs() <= 1e-6, "{} vs {d}", a.distance);
    }
}
