//! Projections onto epigraphs and proximal-normal traces.
//!
//! Given a normal `v̄` to `epi f` at `(x̄, f(x̄))` and an escape direction
//! `w̄`, the points `y(t) = (x̄, f(x̄)) + t(v̄ + t w̄)` are projected onto the
//! epigraph; the proximal normals `(y(t) − x(t))/t` should approach `v̄`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{lookup, ExtendedFunction};
use crate::vector::Vector;

pub const DEFAULT_GRID: usize = 401;
/// Cell-shrinking refinement steps after the grid search.
pub const REFINE_STEPS: usize = 30;

/// A point of ℝⁿ × ℝ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpiPoint {
    pub x: Vector,
    pub r: f64,
}

impl EpiPoint {
    pub fn new(x: Vector, r: f64) -> Self {
        Self { x, r }
    }

    fn lifted(&self) -> Vector {
        self.x.extended(self.r)
    }
}

/// Squared distance from `y` to the nearest epigraph point above `x`:
/// the best height over `x` is `max(f(x), y_r)`.
fn column_dist_sq(f: &ExtendedFunction, x: &Vector, y: &EpiPoint) -> Option<(f64, f64)> {
    let fx = f.value(x);
    if !fx.is_finite() {
        return None;
    }
    let r = fx.max(y.r);
    let d = (x - &y.x).norm_sq() + (r - y.r).powi(2);
    Some((d, r))
}

/// Approximate nearest point of `epi f` to `y`.
///
/// A grid of `grid` points per axis spans `[y.x − box, y.x + box]`; the best
/// grid point is then refined by [`REFINE_STEPS`] rounds of coordinate
/// moves of one cell width, halving the width each round. Any minimizer is
/// an acceptable selection of the projection.
pub fn project_epigraph(f: &ExtendedFunction, y: &EpiPoint, search_box: f64, grid: usize) -> Result<EpiPoint> {
    y.x.check_dim(f.dim())?;
    if !(search_box > 0.0 && search_box.is_finite()) || grid < 2 {
        return Err(Error::InvalidParameter("search box must be positive and grid ≥ 2".into()));
    }
    let n = f.dim();
    let total = grid.checked_pow(n as u32).ok_or_else(|| Error::InvalidParameter("grid too large".into()))?;
    let step = 2.0 * search_box / (grid - 1) as f64;
    let offset = |k: usize| -search_box + step * k as f64;
    let point_at = |mut idx: usize| {
        let mut c = y.x.coords().to_vec();
        for cj in c.iter_mut() {
            *cj += offset(idx % grid);
            idx /= grid;
        }
        Vector::from_finite(c)
    };

    let best = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let x = point_at(idx);
            column_dist_sq(f, &x, y).map(|(d, _)| (d, idx))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (mut best_d, idx) = best.ok_or(Error::NoEpigraphPoints)?;
    let mut x = point_at(idx);

    let mut h = step;
    for _ in 0..REFINE_STEPS {
        for j in 0..n {
            for sign in [-1.0, 1.0] {
                let mut c = x.coords().to_vec();
                c[j] += sign * h;
                let cand = Vector::from_finite(c);
                if let Some((d, _)) = column_dist_sq(f, &cand, y) {
                    if d < best_d {
                        best_d = d;
                        x = cand;
                    }
                }
            }
        }
        h *= 0.5;
    }
    let (_, r) = column_dist_sq(f, &x, y).expect("refined point stays in the domain");
    Ok(EpiPoint::new(x, r))
}

/// Inputs of an accessibility run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessibilitySpec {
    pub base: EpiPoint,
    /// Candidate boundary normal `v̄ ∈ ℝⁿ⁺¹`.
    pub direction_v: Vector,
    /// Escape direction `w̄ ∈ ℝⁿ⁺¹`.
    pub direction_w: Vector,
    /// Strictly decreasing, all ≥ 1e-6.
    pub t_schedule: Vec<f64>,
    pub grid: usize,
    /// Half-width of the projection search box as a multiple of
    /// `t·(|v̄| + |w̄|)`.
    pub box_factor: f64,
}

impl AccessibilitySpec {
    pub fn new(base: EpiPoint, direction_v: Vector, direction_w: Vector) -> Self {
        Self {
            base,
            direction_v,
            direction_w,
            t_schedule: default_schedule(),
            grid: DEFAULT_GRID,
            box_factor: 4.0,
        }
    }
}

/// `t₀ = 0.1`, ratio ½, eight steps.
pub fn default_schedule() -> Vec<f64> {
    (0..8).map(|i| 0.1 * 0.5_f64.powi(i)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub y: Vector,
    pub x: Vector,
    pub proximal_normal: Vector,
    pub residual: f64,
    /// `|x(t) − (x̄, f(x̄))|`, reported without a threshold.
    pub distance_from_base: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessibilityTrace {
    pub spec: AccessibilitySpec,
    pub records: Vec<TraceRecord>,
}

impl AccessibilityTrace {
    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual).collect()
    }

    /// Least-squares slope of `log(residual)` against `log(t)` over records
    /// with residual above `floor`; `None` with fewer than two such records.
    pub fn log_log_slope(&self, floor: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .records
            .iter()
            .filter(|r| r.residual > floor)
            .map(|r| (r.t.ln(), r.residual.ln()))
            .collect();
        least_squares_slope(&pts)
    }
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Projects `y(t)` for every `t` in the schedule and records the proximal
/// normals and their distance to `v̄`.
pub fn run_accessibility(f: &ExtendedFunction, spec: &AccessibilitySpec) -> Result<AccessibilityTrace> {
    let n = f.dim();
    spec.base.x.check_dim(n)?;
    spec.direction_v.check_dim(n + 1)?;
    spec.direction_w.check_dim(n + 1)?;
    let sched = &spec.t_schedule;
    if sched.is_empty()
        || sched.iter().any(|&t| !(t >= 1e-6) || !t.is_finite())
        || sched.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParameter("t schedule must strictly decrease and stay ≥ 1e-6".into()));
    }
    let base = spec.base.lifted();
    let scale = spec.direction_v.norm() + spec.direction_w.norm();
    let records = sched
        .par_iter()
        .map(|&t| {
            let step = spec.direction_v.axpy(t, &spec.direction_w);
            let y_full = base.axpy(t, &step);
            let y = EpiPoint::new(Vector::from_finite(y_full.coords()[..n].to_vec()), y_full[n]);
            let search_box = spec.box_factor * t * scale;
            let x = project_epigraph(f, &y, search_box, spec.grid)?;
            let x_full = x.lifted();
            let normal = (&y_full - &x_full).scale(1.0 / t);
            Ok(TraceRecord {
                t,
                residual: normal.distance(&spec.direction_v),
                distance_from_base: x_full.distance(&base),
                y: y_full,
                x: x_full,
                proximal_normal: normal,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AccessibilityTrace { spec: spec.clone(), records })
}

/// A shipped accessibility scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub function: &'static str,
    pub spec: AccessibilitySpec,
}

/// The three shipped scenarios: the corner of `epi|x|`, the flat half-plane
/// `epi 0`, and the horizontal normal of the quartic-root epigraph.
pub fn scenarios() -> Vec<Scenario> {
    let r = 0.5_f64.sqrt();
    let mut quartic = AccessibilitySpec::new(
        EpiPoint::new(Vector::zeros(2), 0.0),
        Vector::from([0.0, 1.0, 0.0]),
        Vector::from([1.0, 0.0, 0.0]),
    );
    quartic.grid = 801;
    vec![
        Scenario {
            name: "abs_corner",
            function: "abs",
            spec: AccessibilitySpec::new(
                EpiPoint::new(Vector::zeros(1), 0.0),
                Vector::from([r, -r]),
                Vector::from([1.0, 0.0]),
            ),
        },
        Scenario {
            name: "halfspace",
            function: "zero",
            spec: AccessibilitySpec::new(
                EpiPoint::new(Vector::zeros(1), 0.0),
                Vector::from([0.0, -1.0]),
                Vector::from([1.0, 0.0]),
            ),
        },
        Scenario { name: "quartic_horizontal", function: "quartic_root", spec: quartic },
    ]
}

pub fn run_scenario(scenario: &Scenario) -> Result<AccessibilityTrace> {
    let entry = lookup(scenario.function)?;
    run_accessibility(&entry.function, &scenario.spec)
}
