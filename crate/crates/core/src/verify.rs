//! The fixed-seed acceptance suite.
//!
//! Each criterion returns measured values next to the expected ones so a
//! failure can be read off the report. Runtime budgets are checked but
//! elapsed times are left out of the payload, which must be identical
//! across runs and worker counts.

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::convex::{
    boundary_generates_cone_check_with_tol, cone_is_pointed, min_norm_point, FiniteCone,
};
use crate::density::{density_curve, density_scenario};
use crate::epigraph::{run_scenario, scenarios};
use crate::error::Result;
use crate::function::lookup;
use crate::oracles::{min_norm_brute_force, zero_in_hull_lp};
use crate::parallel::with_threads;
use crate::report::{num, to_json_string};
use crate::rng::stream_rng;
use crate::sampler::{
    assemble_estimate, build_cloud, estimate_distance, hausdorff_vs_reference, test_stationarity,
    SamplingConfig, SubdifferentialEstimate,
};
use crate::vector::Vector;

/// Seeds used by every sampling criterion.
pub const SEEDS: std::ops::Range<u64> = 0..10;

/// Every tolerance and budget of the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub quartic_support: f64,
    pub quartic_horizon: f64,
    pub quartic_budget_secs: f64,
    pub abs_hausdorff: f64,
    pub abs_budget_secs: f64,
    pub linear_low: f64,
    pub linear_high: f64,
    pub stationarity: f64,
    pub suppressed_min_distance: f64,
    pub convex_membership: f64,
    pub convex_agreement: f64,
    pub convex_band: f64,
    pub cantor_hull: f64,
    pub step_jump: f64,
    pub min_norm_deviation: f64,
    pub cone_support: f64,
    pub access_final_residual: f64,
    pub halfspace_residual: f64,
    pub halfplane_ratio: f64,
    pub cusp_slope: f64,
    pub cusp_slope_tol: f64,
    pub epi_min_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quartic_support: 0.05,
            quartic_horizon: 0.05,
            quartic_budget_secs: 5.0,
            abs_hausdorff: 0.01,
            abs_budget_secs: 1.0,
            linear_low: 0.95,
            linear_high: 1.05,
            stationarity: 0.05,
            suppressed_min_distance: 0.9,
            convex_membership: 0.05,
            convex_agreement: 0.95,
            convex_band: 0.1,
            cantor_hull: 1e-6,
            step_jump: 1e-9,
            min_norm_deviation: 1e-6,
            cone_support: 1e-7,
            access_final_residual: 0.1,
            halfspace_residual: 1e-8,
            halfplane_ratio: 0.02,
            cusp_slope: 1.0,
            cusp_slope_tol: 0.2,
            epi_min_ratio: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub measured: Value,
    pub expected: Value,
}

/// `(id, name, summary)` of every criterion.
pub const CRITERIA: [(u32, &str, &str); 11] = [
    (1, "quartic", "quartic_root at the origin: support ±1 across, infinite vertically"),
    (2, "abs", "abs at 0: Hausdorff distance to [-1,1]"),
    (3, "linear", "f(x)=x at 0 is not reported stationary"),
    (4, "stationarity", "halfplane_smooth: stationary only with the normal cone"),
    (5, "convex_formula", "parabola_fraction: membership against v1 <= -v2^2/2"),
    (6, "negative_cases", "cantor and step_jump estimates miss the Clarke set"),
    (7, "kernel", "min-norm point and pointedness against brute-force oracles"),
    (8, "cone_boundary", "boundary rays regenerate pointed cones"),
    (9, "access", "proximal-normal residual traces"),
    (10, "density", "lower-density curves"),
    (11, "determinism", "identical payloads across runs and worker counts"),
];

/// Whether criterion `(id, name)` is selected by `only` (ids or names;
/// empty selects everything).
pub fn selected(only: &[String], id: u32, name: &str) -> bool {
    only.is_empty() || only.iter().any(|s| s == name || s.parse::<u32>().ok() == Some(id))
}

/// Runs the selected criteria in id order.
pub fn run(only: &[String], tol: &Tolerances) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(id, name, _)| selected(only, *id, name))
        .map(|&(id, _, _)| run_criterion(id, tol))
        .collect()
}

/// Runs one criterion. Errors inside a criterion are reported as a failure.
pub fn run_criterion(id: u32, tol: &Tolerances) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let outcome = match id {
        1 => quartic(tol),
        2 => abs(tol),
        3 => linear(tol),
        4 => stationarity(tol),
        5 => convex_formula(tol),
        6 => negative_cases(tol),
        7 => kernel(tol),
        8 => cone_boundary(tol),
        9 => access(tol),
        10 => density(tol),
        11 => determinism(tol),
        _ => Err(crate::Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let (passed, measured, expected) = match outcome {
        Ok(t) => t,
        Err(e) => (false, json!({ "error": e.to_string() }), Value::Null),
    };
    CriterionResult { id, name: name.to_string(), passed, measured, expected }
}

type Outcome = Result<(bool, Value, Value)>;

fn estimate(name: &str, center: &Vector, radius: f64, k: usize, seed: u64, normals: bool) -> Result<SubdifferentialEstimate> {
    let entry = lookup(name)?;
    let cloud = build_cloud(&entry.function, &SamplingConfig::new(radius, k, seed), center)?;
    let cone = if normals {
        entry.function.normals_at(center)
    } else {
        FiniteCone::trivial(center.dim())
    };
    assemble_estimate(&cloud, &cone)
}

fn default_estimate(name: &str, radius: f64, k: usize, seed: u64, normals: bool) -> Result<SubdifferentialEstimate> {
    let center = lookup(name)?.default_center;
    estimate(name, &center, radius, k, seed, normals)
}

fn quartic(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let mut per_seed = Vec::new();
    let mut ok = true;
    for seed in SEEDS {
        let est = default_estimate("quartic_root", 0.01, 4000, seed, true)?;
        let right = est.support(&Vector::from([1.0, 0.0]))?;
        let left = est.support(&Vector::from([-1.0, 0.0]))?;
        let up = est.support(&Vector::from([0.0, 1.0]))?;
        let down = est.support(&Vector::from([0.0, -1.0]))?;
        let near = |target: [f64; 2]| {
            let t = Vector::from(target);
            est.cloud.horizon_directions.iter().any(|u| u.distance(&t) <= tol.quartic_horizon)
        };
        let (h_up, h_down) = (near([0.0, 1.0]), near([0.0, -1.0]));
        let pass = (right - 1.0).abs() <= tol.quartic_support
            && (left - 1.0).abs() <= tol.quartic_support
            && up.is_infinite()
            && down.is_infinite()
            && h_up
            && h_down;
        ok &= pass;
        per_seed.push(json!({
            "seed": seed,
            "support_right": num(right),
            "support_left": num(left),
            "support_up": num(up),
            "support_down": num(down),
            "horizon_up": h_up,
            "horizon_down": h_down,
            "passed": pass,
        }));
    }
    let in_budget = start.elapsed().as_secs_f64() < tol.quartic_budget_secs;
    Ok((
        ok && in_budget,
        json!({ "seeds": per_seed, "within_runtime_budget": in_budget }),
        json!({
            "support_right_left": 1.0,
            "tolerance": tol.quartic_support,
            "support_up_down": "inf",
            "horizon_tolerance": tol.quartic_horizon,
            "runtime_budget_secs": tol.quartic_budget_secs,
        }),
    ))
}

fn abs(tol: &Tolerances) -> Outcome {
    let start = Instant::now();
    let entry = lookup("abs")?;
    let reference = &entry.references[0];
    let mut gaps = Vec::new();
    for seed in SEEDS {
        let est = default_estimate("abs", 0.01, 500, seed, true)?;
        gaps.push(hausdorff_vs_reference(&est, reference, 64)?);
    }
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    let in_budget = start.elapsed().as_secs_f64() < tol.abs_budget_secs;
    Ok((
        worst <= tol.abs_hausdorff && in_budget,
        json!({ "hausdorff": gaps.iter().map(|&g| num(g)).collect::<Vec<_>>(), "within_runtime_budget": in_budget }),
        json!({ "max_hausdorff": tol.abs_hausdorff, "runtime_budget_secs": tol.abs_budget_secs }),
    ))
}

fn linear(tol: &Tolerances) -> Outcome {
    let mut runs = Vec::new();
    let mut ok = true;
    for radius in [0.1, 0.01] {
        for k in [100, 1000] {
            let dists: Vec<f64> = SEEDS
                .map(|seed| Ok(test_stationarity(&default_estimate("linear", radius, k, seed, true)?, tol.stationarity)?.distance_to_zero))
                .collect::<Result<_>>()?;
            ok &= dists.iter().all(|d| (tol.linear_low..=tol.linear_high).contains(d));
            runs.push(json!({ "radius": radius, "samples": k, "distance_to_zero": dists }));
        }
    }
    Ok((ok, json!(runs), json!({ "distance_range": [tol.linear_low, tol.linear_high] })))
}

fn stationarity(tol: &Tolerances) -> Outcome {
    let mut with = Vec::new();
    let mut without = Vec::new();
    let mut ok = true;
    for seed in SEEDS {
        let a = test_stationarity(&default_estimate("halfplane_smooth", 0.01, 1000, seed, true)?, tol.stationarity)?;
        let b = test_stationarity(&default_estimate("halfplane_smooth", 0.01, 1000, seed, false)?, tol.stationarity)?;
        ok &= a.is_stationary && !b.is_stationary && b.distance_to_zero >= tol.suppressed_min_distance;
        with.push(json!({ "is_stationary": a.is_stationary, "distance_to_zero": a.distance_to_zero }));
        without.push(json!({ "is_stationary": b.is_stationary, "distance_to_zero": b.distance_to_zero }));
    }
    Ok((
        ok,
        json!({ "radius": 0.01, "samples": 1000, "with_normals": with, "normals_suppressed": without }),
        json!({ "with_normals": "stationary", "normals_suppressed": "not stationary", "min_distance": tol.suppressed_min_distance, "tol": tol.stationarity }),
    ))
}

/// Euclidean distance from `v` to the curve `{(-s²/2, s)}`.
fn distance_to_parabola(v: &Vector) -> f64 {
    let d = |s: f64| ((v[0] + 0.5 * s * s).powi(2) + (v[1] - s).powi(2)).sqrt();
    let mut best = (f64::INFINITY, 0.0);
    for i in -20_000..=20_000 {
        let s = i as f64 * 5e-4;
        let dist = d(s);
        if dist < best.0 {
            best = (dist, s);
        }
    }
    let (mut lo, mut hi) = (best.1 - 5e-4, best.1 + 5e-4);
    for _ in 0..100 {
        let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if d(a) < d(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    d(0.5 * (lo + hi)).min(best.0)
}

fn convex_formula(tol: &Tolerances) -> Outcome {
    let entry = lookup("parabola_fraction")?;
    let reference = &entry.references[0];
    let est = default_estimate("parabola_fraction", 0.01, 8000, 0, true)?;
    let (mut agree, mut total) = (0usize, 0usize);
    let mut worst_band: f64 = 0.0;
    let mut discrepancies = Vec::new();
    for i in 0..21 {
        for j in 0..21 {
            let v = Vector::from([-3.0 + 0.3 * i as f64, -3.0 + 0.3 * j as f64]);
            let estimated = estimate_distance(&est, &v)? <= tol.convex_membership;
            let exact = reference.contains(&v, 0.0)?;
            total += 1;
            if estimated == exact {
                agree += 1;
            } else {
                let band = distance_to_parabola(&v);
                worst_band = worst_band.max(band);
                discrepancies.push(json!({ "v": [v[0], v[1]], "estimated_member": estimated, "boundary_distance": band }));
            }
        }
    }
    let rate = agree as f64 / total as f64;
    Ok((
        rate >= tol.convex_agreement && worst_band <= tol.convex_band,
        json!({ "agreement": rate, "max_boundary_distance": worst_band, "discrepancies": discrepancies }),
        json!({ "min_agreement": tol.convex_agreement, "max_boundary_distance": tol.convex_band, "membership_tol": tol.convex_membership }),
    ))
}

/// A point of the Cantor set from 30 random ternary digits in `{0, 2}`.
fn cantor_point(seed: u64) -> f64 {
    let mut rng = stream_rng(seed, 0x6361_6e74);
    let mut x = 0.0;
    let mut scale = 1.0;
    for _ in 0..30 {
        scale /= 3.0;
        if rng.random::<bool>() {
            x += 2.0 * scale;
        }
    }
    x
}

fn negative_cases(tol: &Tolerances) -> Outcome {
    let base = cantor_point(0);
    let cantor = estimate("cantor", &Vector::from([base]), 0.01, 1000, 0, true)?;
    let cantor_max = cantor.set.hull().vertices().iter().map(|g| g[0].abs()).fold(0.0, f64::max);
    let cantor_ok = cantor_max <= tol.cantor_hull && cantor.cloud.horizon_directions.is_empty();
    let step = default_estimate("step_jump", 0.01, 1000, 0, true)?;
    let step_dev = step.set.hull().vertices().iter().map(|g| (g[0] - 1.0).abs()).fold(0.0, f64::max);
    let step_ok = step_dev <= tol.step_jump && step.set.cone().is_trivial();
    Ok((
        cantor_ok && step_ok,
        json!({
            "cantor_base_point": base,
            "cantor_max_abs_gradient": cantor_max,
            "cantor_kept": cantor.cloud.kept_gradients.len(),
            "step_jump_max_deviation_from_1": step_dev,
            "step_jump_kept": step.cloud.kept_gradients.len(),
        }),
        json!({ "cantor_hull_within": tol.cantor_hull, "step_jump_within": tol.step_jump }),
    ))
}

fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).expect("finite normals")
}

fn kernel(tol: &Tolerances) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = stream_rng(0x6b65_726e, i);
        let dim = 2 + (i % 2) as usize;
        let m = rng.random_range(2..=6);
        let shift = gaussian_vector(&mut rng, dim);
        let pts: Vec<Vector> = (0..m).map(|_| &gaussian_vector(&mut rng, dim) + &shift.scale(0.5)).collect();
        let a = min_norm_point(&pts)?;
        let b = min_norm_brute_force(&pts);
        worst = worst.max(a.distance(&b));
    }
    let mut agree = 0;
    let mut pointed_count = 0;
    for i in 0..200u64 {
        let mut rng = stream_rng(0x706f_696e, i);
        let dim = 2 + (i % 3) as usize;
        let m = rng.random_range(1..=2 * dim);
        let gens: Vec<Vector> = (0..m).map(|_| gaussian_vector(&mut rng, dim)).collect();
        let cone = FiniteCone::new(dim, gens)?;
        let pointed = cone_is_pointed(&cone);
        let lp_pointed = !zero_in_hull_lp(&cone.normalized_generators(), 1e-9);
        pointed_count += pointed as usize;
        agree += (pointed == lp_pointed) as usize;
    }
    Ok((
        worst <= tol.min_norm_deviation && agree == 200,
        json!({ "min_norm_max_deviation": worst, "pointedness_agreement": agree, "pointed_instances": pointed_count }),
        json!({ "min_norm_max_deviation": tol.min_norm_deviation, "pointedness_agreement": 200 }),
    ))
}

fn cone_boundary(tol: &Tolerances) -> Outcome {
    let mut passed = 0;
    for i in 0..50u64 {
        let mut rng = stream_rng(0x636f_6e65, i);
        let dim = 2 + (i % 2) as usize;
        let axis = gaussian_vector(&mut rng, dim).normalized().expect("nonzero");
        let m = rng.random_range(3..=8);
        let gens: Vec<Vector> = (0..m)
            .map(|_| {
                let z = gaussian_vector(&mut rng, dim);
                let transverse = z.axpy(-z.dot(&axis), &axis);
                axis.axpy(0.8, &transverse)
            })
            .collect();
        let cone = FiniteCone::new(dim, gens)?;
        if boundary_generates_cone_check_with_tol(&cone, 16, i, tol.cone_support)? {
            passed += 1;
        }
    }
    Ok((passed == 50, json!({ "cones_passing": passed }), json!({ "cones_passing": 50, "support_tol": tol.cone_support })))
}

fn access(tol: &Tolerances) -> Outcome {
    let mut ok = true;
    let mut out = Vec::new();
    for sc in scenarios() {
        let trace = run_scenario(&sc)?;
        let res = trace.residuals();
        let max = res.iter().copied().fold(0.0, f64::max);
        let last = *res.last().unwrap_or(&f64::INFINITY);
        let slope = trace.log_log_slope(0.0);
        // identically vanishing residuals have no slope and count as a trend
        let trend = slope.is_some_and(|s| s > 0.0) || max <= tol.halfspace_residual;
        let mut pass = trend && last <= tol.access_final_residual;
        if sc.name == "halfspace" {
            pass &= max <= tol.halfspace_residual;
        }
        ok &= pass;
        out.push(json!({
            "scenario": sc.name,
            "residuals": res,
            "slope": slope.map_or(Value::Null, num),
            "passed": pass,
        }));
    }
    Ok((
        ok,
        Value::Array(out),
        json!({ "slope": "> 0", "final_residual_max": tol.access_final_residual, "halfspace_residual_max": tol.halfspace_residual }),
    ))
}

fn density(tol: &Tolerances) -> Outcome {
    let center = Vector::zeros(2);
    let radii = [0.1, 0.05, 0.01];
    let half = density_scenario("halfplane")?;
    let half_curve = density_curve(half.oracle.as_ref(), &center, &radii, 100_000, 0)?;
    let half_ok = half_curve.ratios.iter().all(|r| (r - 0.5).abs() <= tol.halfplane_ratio);

    let cusp = density_scenario("cusp")?;
    let cusp_curve = density_curve(cusp.oracle.as_ref(), &center, &[0.2, 0.1, 0.05, 0.025], 400_000, 0)?;
    let decreasing = cusp_curve.ratios.windows(2).all(|w| w[0] > w[1]);
    let slope = cusp_curve.log_log_slope();
    let slope_ok = slope.is_some_and(|s| (s - tol.cusp_slope).abs() <= tol.cusp_slope_tol);

    let mut epi = Vec::new();
    let mut epi_ok = true;
    for name in ["halfplane", "quadrant", "epi_abs"] {
        let s = density_scenario(name)?;
        let c = density_curve(s.oracle.as_ref(), &center, &radii, 100_000, 1)?;
        epi_ok &= c.min_ratio() >= tol.epi_min_ratio;
        epi.push(json!({ "scenario": name, "min_ratio": c.min_ratio() }));
    }
    Ok((
        half_ok && decreasing && slope_ok && epi_ok,
        json!({
            "halfplane_ratios": half_curve.ratios,
            "cusp_ratios": cusp_curve.ratios,
            "cusp_strictly_decreasing": decreasing,
            "cusp_slope": slope.map_or(Value::Null, num),
            "epi_lipschitz": epi,
        }),
        json!({
            "halfplane_ratio": [0.5, tol.halfplane_ratio],
            "cusp_slope": [tol.cusp_slope, tol.cusp_slope_tol],
            "epi_min_ratio": tol.epi_min_ratio,
        }),
    ))
}

/// Serialized results of criteria 1–10, minus the runtime-budget flags,
/// which depend on the machine rather than on the computation.
fn payload(tol: &Tolerances, threads: usize) -> String {
    let results: Vec<CriterionResult> = with_threads(Some(threads), || (1..=10).map(|id| run_criterion(id, tol)).collect());
    let mut v = serde_json::to_value(results).expect("serializable");
    strip_key(&mut v, "within_runtime_budget");
    to_json_string(&v)
}

fn strip_key(v: &mut Value, key: &str) {
    match v {
        Value::Object(map) => {
            map.shift_remove(key);
            map.values_mut().for_each(|x| strip_key(x, key));
        }
        Value::Array(xs) => xs.iter_mut().for_each(|x| strip_key(x, key)),
        _ => {}
    }
}

fn determinism(tol: &Tolerances) -> Outcome {
    // budgets are relaxed here: three sequential reruns, one on one worker
    let relaxed = Tolerances { quartic_budget_secs: f64::INFINITY, abs_budget_secs: f64::INFINITY, ..tol.clone() };
    let one = payload(&relaxed, 1);
    let four = payload(&relaxed, 4);
    let again = payload(&relaxed, 4);
    let across_threads = one == four;
    let across_runs = four == again;
    Ok((
        across_threads && across_runs,
        json!({ "identical_across_worker_counts": across_threads, "identical_across_runs": across_runs, "payload_bytes": one.len() }),
        json!({ "identical_across_worker_counts": true, "identical_across_runs": true }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert!(selected(&[], 3, "linear"));
        assert!(selected(&["density".into()], 10, "density"));
        assert!(selected(&["10".into()], 10, "density"));
        assert!(!selected(&["density".into()], 1, "quartic"));
    }

    #[test]
    fn cantor_points_lie_in_the_set() {
        for seed in 0..20 {
            let mut x = cantor_point(seed);
            for _ in 0..25 {
                x *= 3.0;
                let d = x.floor();
                assert!(d != 1.0 || x - d < 1e-6, "seed {seed}");
                x -= d;
            }
        }
    }

    #[test]
    fn parabola_distance() {
        assert!(distance_to_parabola(&Vector::from([0.0, 0.0])) < 1e-9);
        assert!((distance_to_parabola(&Vector::from([1.0, 0.0])) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tampered_tolerance_fails_with_measurements() {
        let tol = Tolerances { linear_low: 1.01, ..Tolerances::default() };
        let r = run_criterion(3, &tol);
        assert!(!r.passed);
        assert_eq!(r.measured.as_array().unwrap().len(), 4);
        assert_eq!(r.expected["distance_range"][0], json!(1.01));
        assert!(run_criterion(3, &Tolerances::default()).passed);
    }
}
