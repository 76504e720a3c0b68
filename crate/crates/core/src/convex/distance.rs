use super::wolfe::active_set_min_norm;
use super::MinkowskiSet;
use crate::error::{Error, Result};
use crate::vector::Vector;

/// Nearest point of a [`MinkowskiSet`] to a query vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiProjection {
    pub distance: f64,
    pub witness: Vector,
    /// `(hull vertex index, weight)`; the weights sum to one.
    pub hull_weights: Vec<(usize, f64)>,
    /// `(cone generator index, multiplier ≥ 0)`.
    pub cone_weights: Vec<(usize, f64)>,
}

/// Euclidean distance from `v` to `conv(hull) + cone(generators)`.
///
/// The problem is the min-norm problem over `conv(hull − v) + cone(G)`,
/// solved by the active-set iteration in [`super::wolfe`].
pub fn distance_to_minkowski(v: &Vector, set: &MinkowskiSet) -> Result<MinkowskiProjection> {
    if v.dim() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), got: v.dim() });
    }
    let vertices = set.hull().effective_vertices();
    let shifted: Vec<Vector> = vertices.iter().map(|p| p - v).collect();
    let sol = active_set_min_norm(&shifted, set.cone().generators())?;
    let witness = &sol.point + v;
    let hull_weights = if set.hull().vertices().is_empty() { Vec::new() } else { sol.weights };
    Ok(MinkowskiProjection {
        distance: sol.point.norm(),
        witness,
        hull_weights,
        cone_weights: sol.cone_weights,
    })
}

/// Whether `v` lies within `tol` of the set.
pub fn contains(v: &Vector, set: &MinkowskiSet, tol: f64) -> Result<bool> {
    Ok(distance_to_minkowski(v, set)?.distance <= tol)
}
