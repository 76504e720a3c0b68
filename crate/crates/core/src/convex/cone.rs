use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::support::{direction_grid, ray_recedes};
use super::wolfe::min_norm_point;
use super::{FiniteCone, TOL_OPT, TOL_POINTED};
use crate::error::{Error, Result};
use crate::vector::Vector;

/// A cone is pointed iff `0 ∉ conv` of its unit-normalized generators.
pub fn cone_is_pointed(cone: &FiniteCone) -> bool {
    let unit = cone.normalized_generators();
    if unit.is_empty() {
        return true;
    }
    match min_norm_point(&unit) {
        Ok(p) => p.norm() > TOL_POINTED,
        Err(_) => true,
    }
}

fn rank(vectors: &[Vector], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c][r]);
    let sv = m.singular_values();
    let top = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    sv.iter().filter(|&&s| s > 1e-10 * top.max(1e-300)).count()
}

/// Extreme rays of a pointed cone, used as boundary rays.
///
/// The generators are placed on the cross-section `⟨c, x⟩ = 1`, where `c`
/// is the min-norm point of the normalized generators (strictly positive on
/// every generator when the cone is pointed). `n_dirs` seeded linear
/// functionals are maximized over the cross-section; each maximizer is an
/// exposed vertex, hence an extreme ray. Vertices no functional happened to
/// expose are recovered by testing each generator for membership in the
/// hull of the others.
pub fn boundary_rays(cone: &FiniteCone, n_dirs: usize, seed: u64) -> Result<Vec<Vector>> {
    if !cone_is_pointed(cone) {
        return Err(Error::HasLineality);
    }
    let unit = cone.normalized_generators();
    if unit.is_empty() {
        return Ok(Vec::new());
    }
    let dim = cone.dim();
    let c = min_norm_point(&unit)?;
    let section: Vec<Vector> = unit.iter().map(|g| g.scale(1.0 / g.dot(&c))).collect();

    let mut is_boundary = vec![false; section.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_dirs {
        let d: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let d = Vector::from_finite(d);
        let mut best = 0;
        for (i, x) in section.iter().enumerate() {
            if x.dot(&d) > section[best].dot(&d) {
                best = i;
            }
        }
        is_boundary[best] = true;
    }
    for i in 0..section.len() {
        if is_boundary[i] {
            continue;
        }
        let others: Vec<Vector> = section
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x - &section[i])
            .collect();
        let extreme = others.is_empty()
            || min_norm_point(&others).map(|p| p.norm() > TOL_OPT).unwrap_or(true);
        is_boundary[i] = extreme;
    }
    Ok(unit
        .into_iter()
        .zip(is_boundary)
        .filter_map(|(g, b)| b.then_some(g))
        .collect())
}

/// Checks that the boundary rays of a pointed, full-dimensional cone
/// generate the cone: the conical hull of [`boundary_rays`] must have the
/// same support function as the original cone on a 64-direction grid.
/// The support function of a cone is `0` or `+∞`, so agreement means the
/// two generator sets recede along exactly the same grid directions, with
/// cosine tolerance `tol`.
pub fn boundary_generates_cone_check(cone: &FiniteCone, n_dirs: usize, seed: u64) -> Result<bool> {
    boundary_generates_cone_check_with_tol(cone, n_dirs, seed, TOL_OPT)
}

pub fn boundary_generates_cone_check_with_tol(
    cone: &FiniteCone,
    n_dirs: usize,
    seed: u64,
    tol: f64,
) -> Result<bool> {
    if !cone_is_pointed(cone) {
        return Err(Error::HasLineality);
    }
    let dim = cone.dim();
    if rank(cone.generators(), dim) < dim {
        return Err(Error::NotFullDimensional);
    }
    let rays = boundary_rays(cone, n_dirs, seed)?;
    let regenerated = FiniteCone::new(dim, rays)?;
    let recedes = |k: &FiniteCone, d: &Vector| k.generators().iter().any(|g| ray_recedes(g, d, tol));
    Ok(direction_grid(dim, 64)
        .iter()
        .all(|d| recedes(cone, d) == recedes(&regenerated, d)))
}
