use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{MinkowskiSet, Polytope, TOL_OPT};
use crate::error::{Error, Result};
use crate::vector::Vector;

/// `sup { ⟨d, direction⟩ : d ∈ set }`, `f64::INFINITY` when a cone
/// generator makes a positive angle-normalized inner product with
/// `direction` (above [`TOL_OPT`]).
pub fn support_value(set: &MinkowskiSet, direction: &Vector) -> Result<f64> {
    direction.check_dim(set.dim())?;
    if direction.norm() == 0.0 {
        return Err(Error::InvalidParameter("support direction must be nonzero".into()));
    }
    if set.cone().generators().iter().any(|g| ray_recedes(g, direction, TOL_OPT)) {
        return Ok(f64::INFINITY);
    }
    Ok(hull_support(set.hull(), direction))
}

/// Whether moving along `ray` increases `⟨·, direction⟩`, i.e. the cosine of
/// the angle between them exceeds `cos_tol`.
pub fn ray_recedes(ray: &Vector, direction: &Vector, cos_tol: f64) -> bool {
    ray.dot(direction) > cos_tol * ray.norm() * direction.norm()
}

/// Support of the polytope part alone (`conv ∅ = {0}` gives 0).
pub fn hull_support(hull: &Polytope, direction: &Vector) -> f64 {
    if hull.vertices().is_empty() {
        return 0.0;
    }
    hull.vertices()
        .iter()
        .map(|v| v.dot(direction))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Deterministic set of unit directions in ℝ^dim.
///
/// The `2·dim` signed coordinate axes come first. The remainder is an
/// equiangular circle in two dimensions, a Fibonacci lattice on the sphere
/// in three, and fixed-seed Gaussian directions above that. At least
/// `2·dim` directions are returned; in one dimension exactly `±1`.
pub fn direction_grid(dim: usize, count: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(count.max(2 * dim));
    for j in 0..dim {
        out.push(Vector::unit(dim, j));
        out.push(Vector::unit(dim, j).scale(-1.0));
    }
    if dim == 1 {
        return out;
    }
    let extra = count.saturating_sub(out.len());
    match dim {
        2 => {
            let n = count.max(4);
            for k in 0..n {
                let a = 2.0 * PI * k as f64 / n as f64;
                let d = Vector::from_finite(vec![a.cos(), a.sin()]);
                if !out.iter().any(|o| o.distance(&d) < 1e-12) {
                    out.push(d);
                }
            }
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            for k in 0..extra {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / extra as f64;
                let r = (1.0 - z * z).sqrt();
                let a = golden * k as f64;
                out.push(Vector::from_finite(vec![r * a.cos(), r * a.sin(), z]));
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1ec_7104);
            while out.len() < count {
                let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                if let Some(u) = Vector::from_finite(g).normalized() {
                    out.push(u);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, hull: Vec<Vector>, cone: Vec<Vector>) -> MinkowskiSet {
        MinkowskiSet::from_parts(dim, hull, cone).unwrap()
    }

    #[test]
    fn finite_support() {
        let s = set(2, vec![[-1.0, 0.0].into(), [1.0, 0.0].into()], vec![]);
        assert_eq!(support_value(&s, &[1.0, 0.0].into()).unwrap(), 1.0);
    }

    #[test]
    fn recession_direction() {
        let s = set(2, vec![[0.0, 0.0].into()], vec![[0.0, 1.0].into()]);
        assert_eq!(support_value(&s, &[0.0, 1.0].into()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn strip_support() {
        // [−1,1] × ℝ in direction (1,0)
        let s = set(
            2,
            vec![[-1.0, 0.0].into(), [1.0, 0.0].into()],
            vec![[0.0, 1.0].into(), [0.0, -1.0].into()],
        );
        assert_eq!(support_value(&s, &[1.0, 0.0].into()).unwrap(), 1.0);
    }

    #[test]
    fn zero_direction_rejected() {
        let s = set(1, vec![[1.0].into()], vec![]);
        assert!(support_value(&s, &[0.0].into()).is_err());
    }

    #[test]
    fn grids_are_unit_and_deterministic() {
        for dim in 1..=5 {
            let g = direction_grid(dim, 64);
            assert!(g.len() >= 2 * dim);
            assert!(g.iter().all(|d| (d.norm() - 1.0).abs() < 1e-12));
            assert_eq!(g, direction_grid(dim, 64));
        }
        let g2 = direction_grid(2, 64);
        assert_eq!(g2.len(), 64);
        assert!(g2.contains(&Vector::from([0.0, -1.0])));
    }
}
