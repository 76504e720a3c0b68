//! Monte-Carlo lower-density curves.
//!
//! For a set `Q` and a center `x̄`, estimates `μ(Q ∩ B_δ(x̄)) / μ(B_δ(x̄))`
//! for a decreasing list of radii. A positive floor on these ratios is what
//! keeps the rejection rate of the sampler bounded as `δ → 0`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epigraph::least_squares_slope;
use crate::error::{Error, Result};
use crate::rng::{mix, stream_rng, unit_ball_point};
use crate::vector::Vector;

pub type SetOracle = Arc<dyn Fn(&Vector) -> bool + Send + Sync>;

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub center: Vector,
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    pub samples_per_radius: usize,
    pub seed: u64,
}

impl DensityCurve {
    /// Binomial standard error of each ratio.
    pub fn standard_errors(&self) -> Vec<f64> {
        let n = self.samples_per_radius as f64;
        self.ratios.iter().map(|p| (p * (1.0 - p) / n).sqrt()).collect()
    }

    /// Least-squares slope of `log ratio` against `log δ`; `None` if a
    /// ratio is zero or fewer than two radii are present.
    pub fn log_log_slope(&self) -> Option<f64> {
        if self.ratios.iter().any(|&r| r <= 0.0) {
            return None;
        }
        let pts: Vec<(f64, f64)> = self.radii.iter().zip(&self.ratios).map(|(d, r)| (d.ln(), r.ln())).collect();
        least_squares_slope(&pts)
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// In-set fraction of `samples` uniform draws from each ball. Sample `i` at
/// radius index `j` is keyed by `(seed, j, i)`, so a run with more samples
/// extends, rather than replaces, the draws of a smaller one.
pub fn density_curve(
    domain: &(dyn Fn(&Vector) -> bool + Send + Sync),
    center: &Vector,
    radii: &[f64],
    samples: usize,
    seed: u64,
) -> Result<DensityCurve> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("samples must be at least {MIN_SAMPLES}")));
    }
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    let dim = center.dim();
    let ratios = radii
        .par_iter()
        .enumerate()
        .map(|(j, &radius)| {
            let key = mix(seed, j as u64);
            let hits = (0..samples as u64)
                .into_par_iter()
                .filter(|&i| {
                    let mut rng = stream_rng(key, i);
                    let u = unit_ball_point(&mut rng, dim);
                    let p = Vector::from_finite(
                        center.coords().iter().zip(u).map(|(c, x)| c + radius * x).collect(),
                    );
                    domain(&p)
                })
                .count();
            hits as f64 / samples as f64
        })
        .collect();
    Ok(DensityCurve { center: center.clone(), radii: radii.to_vec(), ratios, samples_per_radius: samples, seed })
}

/// Named sets for the `density` command.
#[derive(Clone)]
pub struct DensityScenario {
    pub name: &'static str,
    pub summary: &'static str,
    pub dim: usize,
    pub oracle: SetOracle,
    /// Whether the set is epi-Lipschitzian at the origin.
    pub epi_lipschitz: bool,
}

impl std::fmt::Debug for DensityScenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DensityScenario").field("name", &self.name).finish()
    }
}

pub fn density_scenarios() -> Vec<DensityScenario> {
    vec![
        DensityScenario {
            name: "halfplane",
            summary: "{(x,y) : x >= 0}",
            dim: 2,
            oracle: Arc::new(|p: &Vector| p[0] >= 0.0),
            epi_lipschitz: true,
        },
        DensityScenario {
            name: "quadrant",
            summary: "{(x,y) : x >= 0, y >= 0}",
            dim: 2,
            oracle: Arc::new(|p: &Vector| p[0] >= 0.0 && p[1] >= 0.0),
            epi_lipschitz: true,
        },
        DensityScenario {
            name: "epi_abs",
            summary: "{(x,r) : r >= |x|}",
            dim: 2,
            oracle: Arc::new(|p: &Vector| p[1] >= p[0].abs()),
            epi_lipschitz: true,
        },
        DensityScenario {
            name: "plane",
            summary: "R^2",
            dim: 2,
            oracle: Arc::new(|_: &Vector| true),
            epi_lipschitz: true,
        },
        DensityScenario {
            name: "cusp",
            summary: "{(x,y) : |y| <= x^2, x >= 0}",
            dim: 2,
            oracle: Arc::new(crate::function::in_cusp_domain),
            epi_lipschitz: false,
        },
    ]
}

pub fn density_scenario(name: &str) -> Result<DensityScenario> {
    density_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, radii: &[f64], samples: usize, seed: u64) -> DensityCurve {
        let s = density_scenario(name).unwrap();
        density_curve(s.oracle.as_ref(), &Vector::zeros(s.dim), radii, samples, seed).unwrap()
    }

    #[test]
    fn half_plane_is_one_half() {
        let c = run("halfplane", &[1.0, 0.1, 0.001], 10_000, 0);
        for r in &c.ratios {
            assert!((r - 0.5).abs() < 0.02, "{r}");
        }
    }

    #[test]
    fn full_plane_is_one() {
        let c = run("plane", &[0.3, 0.03], 1000, 2);
        assert_eq!(c.ratios, vec![1.0, 1.0]);
    }

    #[test]
    fn cusp_ratio_is_linear_in_radius() {
        // area of the cusp inside the ball ≈ 2∫₀^δ x² dx = 2δ³/3, so the
        // ratio is ≈ 2δ/(3π)
        let c = run("cusp", &[0.1], 200_000, 5);
        let expected = 2.0 * 0.1 / (3.0 * std::f64::consts::PI);
        assert!((c.ratios[0] - expected).abs() < 0.002, "{} vs {expected}", c.ratios[0]);
    }

    #[test]
    fn extending_samples_is_stable() {
        let a = run("quadrant", &[0.1, 0.05], 5000, 9);
        let b = run("quadrant", &[0.1, 0.05], 10_000, 9);
        for ((ra, rb), se) in a.ratios.iter().zip(&b.ratios).zip(a.standard_errors()) {
            assert!((ra - rb).abs() <= 3.0 * se, "{ra} vs {rb}");
        }
        assert_eq!(a, run("quadrant", &[0.1, 0.05], 5000, 9));
    }

    #[test]
    fn too_few_samples() {
        let s = density_scenario("plane").unwrap();
        assert!(density_curve(s.oracle.as_ref(), &Vector::zeros(2), &[0.1], 10, 0).is_err());
        assert!(density_curve(s.oracle.as_ref(), &Vector::zeros(2), &[-0.1], 1000, 0).is_err());
    }
}
