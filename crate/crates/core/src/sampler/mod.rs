//! The gradient-sampling estimator.
//!
//! Points are drawn uniformly from the ball `B_δ(x̄)`; samples outside the
//! domain or at nondifferentiable points are discarded and counted. The
//! surviving gradients form the trial hull `C_k`; gradients whose norm
//! exceeds the horizon threshold `T` are replaced by their directions and
//! join the normal cone of the domain in the recession part of
//! `D_k = C_k + cone(horizon ∪ normals)`.

mod estimate;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{ExtendedFunction, DEFAULT_FD_STEP};
use crate::rng::{stream_rng, unit_ball_point};
use crate::vector::Vector;

pub use estimate::{
    assemble_estimate, estimate_distance, hausdorff_vs_reference, lifted_slice, test_stationarity,
    StationarityReport, SubdifferentialEstimate,
};

/// Default horizon threshold `T`.
pub const DEFAULT_HORIZON_THRESHOLD: f64 = 50.0;
/// Default angular tolerance (cosine) attributed to sampled horizon
/// directions when comparing support values.
pub const DEFAULT_HORIZON_ANGLE_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    /// Sampling radius δ.
    pub radius: f64,
    /// Number of draws k.
    pub max_samples: usize,
    pub seed: u64,
    /// Gradients with norm above this become horizon directions.
    pub horizon_threshold: f64,
    pub fd_step: f64,
    /// Stationarity tolerance.
    pub tol: f64,
    /// Cosine tolerance within which a sampled horizon direction is taken
    /// to be orthogonal to a probe direction in support comparisons.
    pub horizon_angle_tol: f64,
}

impl SamplingConfig {
    pub fn new(radius: f64, max_samples: usize, seed: u64) -> Self {
        Self {
            radius,
            max_samples,
            seed,
            horizon_threshold: DEFAULT_HORIZON_THRESHOLD,
            fd_step: DEFAULT_FD_STEP,
            tol: 0.05,
            horizon_angle_tol: DEFAULT_HORIZON_ANGLE_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return bad("radius must be positive");
        }
        if self.max_samples == 0 {
            return bad("max_samples must be at least 1");
        }
        if !(self.horizon_threshold > 1.0) {
            return bad("horizon_threshold must exceed 1");
        }
        if !(self.fd_step > 0.0) {
            return bad("fd_step must be positive");
        }
        if !(self.tol >= 0.0) || !(self.horizon_angle_tol >= 0.0) {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }
}

/// Sampled gradient information around a base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientCloud {
    pub base_point: Vector,
    pub kept_gradients: Vec<Vector>,
    /// Unit vectors `g/|g|` of gradients with `|g| > T`.
    pub horizon_directions: Vec<Vector>,
    pub rejected_outside_domain: usize,
    pub rejected_nondifferentiable: usize,
    pub config: SamplingConfig,
}

impl GradientCloud {
    pub fn dim(&self) -> usize {
        self.base_point.dim()
    }

    pub fn total_draws(&self) -> usize {
        self.kept_gradients.len()
            + self.horizon_directions.len()
            + self.rejected_outside_domain
            + self.rejected_nondifferentiable
    }
}

/// `count` points uniform in the open ball `B_radius(center)`. Point `i`
/// depends only on `(seed, i)`.
pub fn sample_ball(center: &Vector, radius: f64, count: usize, seed: u64) -> Result<Vec<Vector>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter("radius must be positive".into()));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    Ok((0..count as u64)
        .into_par_iter()
        .map(|i| ball_point(center, radius, seed, i))
        .collect())
}

fn ball_point(center: &Vector, radius: f64, seed: u64, index: u64) -> Vector {
    let mut rng = stream_rng(seed, index);
    let u = unit_ball_point(&mut rng, center.dim());
    Vector::from_finite(center.coords().iter().zip(u).map(|(c, x)| c + radius * x).collect())
}

enum Outcome {
    Outside,
    Nondifferentiable,
    Kept(Vector),
    Horizon(Vector),
}

/// Draws `config.max_samples` points around `center` and classifies their
/// gradients.
pub fn build_cloud(f: &ExtendedFunction, config: &SamplingConfig, center: &Vector) -> Result<GradientCloud> {
    config.validate()?;
    center.check_dim(f.dim())?;
    if !f.in_domain(center) {
        return Err(Error::OutsideDomain);
    }
    let outcomes: Vec<Outcome> = (0..config.max_samples as u64)
        .into_par_iter()
        .map(|i| {
            let x = ball_point(center, config.radius, config.seed, i);
            if !f.in_domain(&x) {
                return Outcome::Outside;
            }
            match f.gradient(&x, config.fd_step) {
                Ok(g) => {
                    let n = g.norm();
                    if !n.is_finite() {
                        Outcome::Nondifferentiable
                    } else if n > config.horizon_threshold {
                        Outcome::Horizon(g.scale(1.0 / n))
                    } else {
                        Outcome::Kept(g)
                    }
                }
                Err(Error::OutsideDomain) => Outcome::Outside,
                Err(_) => Outcome::Nondifferentiable,
            }
        })
        .collect();

    let mut cloud = GradientCloud {
        base_point: center.clone(),
        kept_gradients: Vec::new(),
        horizon_directions: Vec::new(),
        rejected_outside_domain: 0,
        rejected_nondifferentiable: 0,
        config: config.clone(),
    };
    for o in outcomes {
        match o {
            Outcome::Outside => cloud.rejected_outside_domain += 1,
            Outcome::Nondifferentiable => cloud.rejected_nondifferentiable += 1,
            Outcome::Kept(g) => cloud.kept_gradients.push(g),
            Outcome::Horizon(u) => cloud.horizon_directions.push(u),
        }
    }
    if cloud.kept_gradients.is_empty() && cloud.horizon_directions.is_empty() {
        return Err(Error::NoUsableSamples);
    }
    Ok(cloud)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::lookup;
    use crate::parallel::with_threads;

    #[test]
    fn ball_support_and_determinism() {
        let c = Vector::zeros(2);
        let pts = sample_ball(&c, 1.0, 1000, 5).unwrap();
        assert!(pts.iter().all(|p| p.norm() < 1.0));
        assert_eq!(pts, sample_ball(&c, 1.0, 1000, 5).unwrap());
        assert_ne!(pts, sample_ball(&c, 1.0, 1000, 6).unwrap());
    }

    #[test]
    fn ball_mean() {
        // each coordinate of a uniform point in the unit disk has variance 1/4,
        // so the mean of 10⁵ draws has σ ≈ 0.0016 and 0.02 is > 5σ
        let pts = sample_ball(&Vector::zeros(2), 1.0, 100_000, 11).unwrap();
        for j in 0..2 {
            let m = pts.iter().map(|p| p[j]).sum::<f64>() / pts.len() as f64;
            assert!(m.abs() < 0.02, "coordinate {j} mean {m}");
        }
    }

    #[test]
    fn ball_is_independent_of_worker_count() {
        let c = Vector::from([1.0, -2.0, 0.5]);
        let a = with_threads(Some(1), || sample_ball(&c, 0.3, 2000, 9).unwrap());
        let b = with_threads(Some(4), || sample_ball(&c, 0.3, 2000, 9).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_parameters() {
        assert!(sample_ball(&Vector::zeros(1), 0.0, 1, 0).is_err());
        assert!(sample_ball(&Vector::zeros(1), 1.0, 0, 0).is_err());
        let mut cfg = SamplingConfig::new(0.1, 10, 0);
        cfg.horizon_threshold = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn abs_cloud() {
        let e = lookup("abs").unwrap();
        let cloud = build_cloud(&e.function, &SamplingConfig::new(0.1, 500, 0), &Vector::zeros(1)).unwrap();
        assert!(cloud.kept_gradients.iter().all(|g| g[0] == 1.0 || g[0] == -1.0));
        assert!(cloud.kept_gradients.contains(&Vector::from([1.0])));
        assert!(cloud.kept_gradients.contains(&Vector::from([-1.0])));
        assert!(cloud.horizon_directions.is_empty());
        assert_eq!(cloud.total_draws(), 500);
    }

    #[test]
    fn quartic_horizon_directions() {
        let e = lookup("quartic_root").unwrap();
        let cfg = SamplingConfig::new(0.01, 4000, 0);
        let cloud = build_cloud(&e.function, &cfg, &Vector::zeros(2)).unwrap();
        for target in [[0.0, 1.0], [0.0, -1.0]] {
            let t = Vector::from(target);
            assert!(
                cloud.horizon_directions.iter().any(|u| u.distance(&t) < 0.05),
                "no horizon direction near {t}"
            );
        }
        assert!(cloud.horizon_directions.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
        assert!(cloud.kept_gradients.iter().all(|g| g.norm() <= cfg.horizon_threshold));
    }

    #[test]
    fn halfplane_rejections() {
        // half of the disk lies outside {x ≥ 0}; binomial σ at 10⁴ is 0.005
        let e = lookup("halfplane_smooth").unwrap();
        let cfg = SamplingConfig::new(0.1, 10_000, 3);
        let cloud = build_cloud(&e.function, &cfg, &Vector::zeros(2)).unwrap();
        let frac = cloud.rejected_outside_domain as f64 / 10_000.0;
        assert!((frac - 0.5).abs() < 0.03, "{frac}");
    }

    #[test]
    fn center_outside_domain() {
        let e = lookup("halfplane_smooth").unwrap();
        let cfg = SamplingConfig::new(0.1, 10, 0);
        assert_eq!(
            build_cloud(&e.function, &cfg, &Vector::from([-1.0, 0.0])),
            Err(Error::OutsideDomain)
        );
    }

    #[test]
    fn negligible_domain_gives_no_samples() {
        let f = ExtendedFunction::new(2, |x| if x[1] == 0.0 { 0.0 } else { f64::INFINITY });
        let cfg = SamplingConfig::new(0.1, 100, 0);
        assert_eq!(build_cloud(&f, &cfg, &Vector::zeros(2)), Err(Error::NoUsableSamples));
    }

    #[test]
    fn fd_fallback_used_without_analytic_gradient() {
        let f = ExtendedFunction::new(2, |x| x[0] * x[0] + 3.0 * x[1]);
        let cfg = SamplingConfig::new(0.01, 50, 1);
        let cloud = build_cloud(&f, &cfg, &Vector::from([1.0, 0.0])).unwrap();
        assert_eq!(cloud.kept_gradients.len(), 50);
        for g in &cloud.kept_gradients {
            assert!((g[0] - 2.0).abs() < 0.03 && (g[1] - 3.0).abs() < 1e-6, "{g}");
        }
    }
}
