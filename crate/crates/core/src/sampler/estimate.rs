use serde::{Deserialize, Serialize};

use super::GradientCloud;
use crate::convex::{
    cone_is_pointed, direction_grid, distance_to_minkowski, min_norm_point, hull_support, ray_recedes, support_value, FiniteCone,
    MinkowskiSet, Polytope, TOL_OPT,
};
use crate::error::{Error, Result};
use crate::function::ReferenceSubdifferential;
use crate::vector::Vector;

/// The trial set `D_k` with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubdifferentialEstimate {
    /// `conv(kept gradients) + cone(horizon directions ∪ normals)`.
    pub set: MinkowskiSet,
    pub cloud: GradientCloud,
    /// Normal-cone generators supplied at assembly.
    pub normals: FiniteCone,
    /// Generators in ℝⁿ⁺¹: `(g, −1)/√(1+|g|²)` for kept gradients, `(u, 0)`
    /// for horizon directions and unit normals.
    pub lifted_generators: Vec<Vector>,
}

impl SubdifferentialEstimate {
    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// Support value of `D_k` in `direction`, treating a sampled horizon
    /// direction as receding only when its cosine with `direction` exceeds
    /// the configured angular tolerance. Normals are exact and recede at
    /// [`TOL_OPT`].
    pub fn support(&self, direction: &Vector) -> Result<f64> {
        direction.check_dim(self.dim())?;
        let angle_tol = self.cloud.config.horizon_angle_tol;
        let recedes = self
            .normals
            .generators()
            .iter()
            .any(|g| ray_recedes(g, direction, TOL_OPT))
            || self
                .cloud
                .horizon_directions
                .iter()
                .any(|u| ray_recedes(u, direction, angle_tol));
        if recedes {
            Ok(f64::INFINITY)
        } else {
            Ok(hull_support(self.set.hull(), direction))
        }
    }
}

/// Outcome of the sampled optimality test `0 ∈ D_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub distance_to_zero: f64,
    pub is_stationary: bool,
    pub witness: Vector,
    pub draws_used: usize,
}

/// Forms `D_k = conv(kept) + cone(horizon ∪ normals)` and its lifted
/// generators. Redundant hull vertices and cone generators are pruned in
/// one and two dimensions; the set is unchanged.
pub fn assemble_estimate(cloud: &GradientCloud, normals: &FiniteCone) -> Result<SubdifferentialEstimate> {
    let dim = cloud.dim();
    if normals.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: normals.dim() });
    }
    let mut hull = Polytope::new(dim, cloud.kept_gradients.clone())?;
    if dim <= 2 {
        hull = hull.reduced();
    }
    let generators: Vec<Vector> = cloud
        .horizon_directions
        .iter()
        .chain(normals.generators())
        .cloned()
        .collect();
    let mut cone = FiniteCone::new(dim, generators)?;
    if dim <= 2 {
        cone = planar_extreme_rays(cone);
    }
    let set = MinkowskiSet::new(hull, cone)?;

    let mut lifted = Vec::with_capacity(
        cloud.kept_gradients.len() + cloud.horizon_directions.len() + normals.generators().len(),
    );
    for g in &cloud.kept_gradients {
        let s = (1.0 + g.norm_sq()).sqrt();
        lifted.push(g.extended(-1.0).scale(1.0 / s));
    }
    for u in &cloud.horizon_directions {
        lifted.push(u.extended(0.0));
    }
    for n in normals.normalized_generators() {
        lifted.push(n.extended(0.0));
    }
    Ok(SubdifferentialEstimate { set, cloud: cloud.clone(), normals: normals.clone(), lifted_generators: lifted })
}

/// For a pointed cone in ℝ¹ or ℝ², keeps the generators of extreme angle on
/// each side of the min-norm direction of the unit generators.
fn planar_extreme_rays(cone: FiniteCone) -> FiniteCone {
    let gens = cone.generators();
    if gens.len() <= 2 || !cone_is_pointed(&cone) {
        return cone;
    }
    let unit = cone.normalized_generators();
    let Ok(c) = min_norm_point(&unit) else { return cone };
    if c.dim() == 1 {
        return FiniteCone::new(1, vec![gens[0].clone()]).unwrap_or(cone);
    }
    let slope = |u: &Vector| (c[0] * u[1] - c[1] * u[0]) / c.dot(u);
    let (mut lo, mut hi) = (0, 0);
    for (i, u) in unit.iter().enumerate() {
        if slope(u) < slope(&unit[lo]) {
            lo = i;
        }
        if slope(u) > slope(&unit[hi]) {
            hi = i;
        }
    }
    let mut keep = vec![gens[lo.min(hi)].clone()];
    if lo != hi {
        keep.push(gens[lo.max(hi)].clone());
    }
    FiniteCone::new(2, keep).unwrap_or(cone)
}

/// `{v : (v, −1) ∈ cone(lifted generators)}` as a Minkowski set: generators
/// with negative last coordinate are rescaled to last coordinate `−1` and
/// form the hull; those with last coordinate `0` form the cone.
pub fn lifted_slice(estimate: &SubdifferentialEstimate) -> Result<MinkowskiSet> {
    let gens = &estimate.lifted_generators;
    if gens.is_empty() {
        return Err(Error::EmptySlice);
    }
    let dim = gens[0].dim() - 1;
    if dim == 0 {
        return Err(Error::EmptySlice);
    }
    let mut hull = Vec::new();
    let mut cone = Vec::new();
    for g in gens {
        let last = g[dim];
        let spatial = Vector::from_finite(g.coords()[..dim].to_vec());
        if last < 0.0 {
            hull.push(spatial.scale(-1.0 / last));
        } else if !spatial.is_zero() {
            cone.push(spatial);
        }
    }
    if hull.is_empty() {
        return Err(Error::EmptySlice);
    }
    MinkowskiSet::from_parts(dim, hull, cone)
}

/// Distance from the origin to `D_k`, compared against `tol`.
pub fn test_stationarity(estimate: &SubdifferentialEstimate, tol: f64) -> Result<StationarityReport> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter("tol must be nonnegative".into()));
    }
    let proj = distance_to_minkowski(&Vector::zeros(estimate.dim()), &estimate.set)?;
    Ok(StationarityReport {
        distance_to_zero: proj.distance,
        is_stationary: proj.distance <= tol,
        witness: proj.witness,
        draws_used: estimate.cloud.total_draws(),
    })
}

/// `dist(v, D_k)`.
pub fn estimate_distance(estimate: &SubdifferentialEstimate, v: &Vector) -> Result<f64> {
    Ok(distance_to_minkowski(v, &estimate.set)?.distance)
}

/// Largest support-value gap between the estimate and a polyhedral
/// reference over `probe_dirs` deterministic directions. Two infinite
/// values agree; a finite/infinite mismatch gives `+∞`.
pub fn hausdorff_vs_reference(
    estimate: &SubdifferentialEstimate,
    reference: &ReferenceSubdifferential,
    probe_dirs: usize,
) -> Result<f64> {
    let dim = estimate.dim();
    reference.base_point.check_dim(dim)?;
    if reference.base_point != estimate.cloud.base_point {
        return Err(Error::InvalidParameter("reference and estimate base points differ".into()));
    }
    let ref_set = reference
        .polyhedral()
        .ok_or_else(|| Error::InvalidParameter("reference has no polyhedral form".into()))?;
    let mut worst = 0.0_f64;
    for d in direction_grid(dim, probe_dirs) {
        let a = estimate.support(&d)?;
        let b = support_value(ref_set, &d)?;
        let gap = match (a.is_infinite(), b.is_infinite()) {
            (true, true) => 0.0,
            (false, false) => (a - b).abs(),
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
    }
    Ok(worst)
}
