use clarke_kit::convex::{direction_grid, support_value, FiniteCone};
use clarke_kit::function::{catalog, lookup};
use clarke_kit::parallel::with_threads;
use clarke_kit::sampler::{
    assemble_estimate, build_cloud, estimate_distance, lifted_slice, test_stationarity, SamplingConfig,
    SubdifferentialEstimate,
};
use clarke_kit::Vector;

fn estimate(name: &str, radius: f64, k: usize, seed: u64) -> SubdifferentialEstimate {
    let e = lookup(name).unwrap();
    let cloud = build_cloud(&e.function, &SamplingConfig::new(radius, k, seed), &e.default_center).unwrap();
    assemble_estimate(&cloud, &e.function.normals_at(&e.default_center)).unwrap()
}

#[test]
fn clouds_do_not_depend_on_worker_count() {
    for name in ["quartic_root", "halfplane_smooth", "parabola_fraction", "cantor"] {
        let e = lookup(name).unwrap();
        let cfg = SamplingConfig::new(0.05, 2000, 17);
        let one = with_threads(Some(1), || build_cloud(&e.function, &cfg, &e.default_center).unwrap());
        let many = with_threads(Some(4), || build_cloud(&e.function, &cfg, &e.default_center).unwrap());
        assert_eq!(one, many, "{name}");
    }
}

#[test]
fn more_samples_never_increase_distance() {
    let probes: Vec<Vector> = direction_grid(2, 16).into_iter().map(|d| d.scale(1.5)).collect();
    for name in ["quartic_root", "halfplane_smooth", "parabola_fraction"] {
        for seed in 0..3 {
            let small = estimate(name, 0.01, 300, seed);
            let large = estimate(name, 0.01, 3000, seed);
            for v in &probes {
                let a = estimate_distance(&small, v).unwrap();
                let b = estimate_distance(&large, v).unwrap();
                assert!(a >= b - 1e-9, "{name} seed {seed} v {v}: {a} < {b}");
            }
        }
    }
}

#[test]
fn lifted_slice_equals_plain_set_without_horizon() {
    for name in ["abs", "linear", "halfplane_smooth", "step_jump"] {
        let est = estimate(name, 0.01, 1000, 4);
        assert!(est.cloud.horizon_directions.is_empty());
        let slice = lifted_slice(&est).unwrap();
        for d in direction_grid(est.dim(), 64) {
            let a = support_value(&est.set, &d).unwrap();
            let b = support_value(&slice, &d).unwrap();
            assert!(
                (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= 1e-7,
                "{name} {d}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn reference_vertices_are_approximated_from_outside() {
    for entry in catalog() {
        let Some(reference) = entry.reference_at(&entry.default_center) else { continue };
        let Some(set) = reference.polyhedral() else { continue };
        for seed in 0..10 {
            let est = estimate(entry.name, 0.01, 4000, seed);
            for v in set.hull().vertices() {
                let d = estimate_distance(&est, v).unwrap();
                assert!(d <= 0.05, "{} seed {seed}: dist({v}, D_k) = {d}", entry.name);
            }
        }
    }
}

#[test]
fn linear_function_is_never_stationary() {
    for radius in [0.1, 0.03, 0.001] {
        for k in [10, 100, 1000] {
            let min = (0..10)
                .map(|seed| test_stationarity(&estimate("linear", radius, k, seed), 0.05).unwrap().distance_to_zero)
                .fold(f64::INFINITY, f64::min);
            assert!(min >= 0.9, "δ={radius} k={k}: {min}");
        }
    }
}

#[test]
fn assembly_ignores_gradient_order() {
    for name in ["parabola_fraction", "quartic_root", "halfplane_smooth"] {
        let est = estimate(name, 0.01, 2000, 6);
        let mut cloud = est.cloud.clone();
        cloud.kept_gradients.reverse();
        cloud.kept_gradients.rotate_left(7);
        cloud.horizon_directions.reverse();
        let again = assemble_estimate(&cloud, &est.normals).unwrap();
        for d in direction_grid(2, 64) {
            assert_eq!(est.support(&d).unwrap(), again.support(&d).unwrap(), "{name} {d}");
            assert_eq!(support_value(&est.set, &d).unwrap(), support_value(&again.set, &d).unwrap());
        }
    }
}

#[test]
fn suppressed_normals_change_the_verdict() {
    let e = lookup("halfplane_smooth").unwrap();
    let cloud = build_cloud(&e.function, &SamplingConfig::new(0.01, 1000, 0), &e.default_center).unwrap();
    let with = assemble_estimate(&cloud, &e.function.normals_at(&e.default_center)).unwrap();
    let without = assemble_estimate(&cloud, &FiniteCone::trivial(2)).unwrap();
    assert!(test_stationarity(&with, 0.05).unwrap().is_stationary);
    let r = test_stationarity(&without, 0.05).unwrap();
    assert!(!r.is_stationary && r.distance_to_zero >= 0.9);
}
