//! Convex geometry over finitely generated sets.
//!
//! Every set handled here is given in V-representation: a polytope as the
//! convex hull of finitely many vertices, a cone as the conical hull of
//! finitely many nonzero generators, and their Minkowski sum
//! `conv(E) + cone(G)`. The empty vertex list denotes `{0}`.

mod cone;
mod distance;
mod lsq;
mod support;
mod wolfe;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vector;

pub use cone::{boundary_generates_cone_check, boundary_generates_cone_check_with_tol, boundary_rays, cone_is_pointed};
pub use distance::{contains, distance_to_minkowski, MinkowskiProjection};
pub use support::{direction_grid, hull_support, ray_recedes, support_value};
pub use wolfe::{caratheodory_reduce, min_norm_point, min_norm_solution, MinNormSolution};

/// Optimality residual tolerance.
pub const TOL_OPT: f64 = 1e-9;
/// Threshold on the min-norm point of normalized generators below which a
/// cone is declared to contain a line.
pub const TOL_POINTED: f64 = 1e-7;

/// Drops exact duplicates, keeping first occurrences in order.
pub(crate) fn dedup_exact(points: &[Vector]) -> (Vec<Vector>, Vec<usize>) {
    let mut kept: Vec<Vector> = Vec::with_capacity(points.len());
    let mut origin = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !kept.iter().any(|q| q == p) {
            kept.push(p.clone());
            origin.push(i);
        }
    }
    (kept, origin)
}

fn check_shared_dim(points: &[Vector], dim: usize) -> Result<()> {
    points.iter().try_for_each(|p| p.check_dim(dim))
}

/// Convex hull of a finite vertex list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
}

impl Polytope {
    pub fn new(dim: usize, vertices: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        check_shared_dim(&vertices, dim)?;
        let (vertices, _) = dedup_exact(&vertices);
        Ok(Self { dim, vertices })
    }

    /// `conv ∅ = {0}`.
    pub fn origin(dim: usize) -> Self {
        Self { dim, vertices: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Vertices with the empty-list convention resolved to `[0]`.
    pub fn effective_vertices(&self) -> Vec<Vector> {
        if self.vertices.is_empty() {
            vec![Vector::zeros(self.dim)]
        } else {
            self.vertices.clone()
        }
    }

    /// Removes vertices that are convex combinations of the others. Exact
    /// in one and two dimensions; in higher dimensions a vertex is dropped
    /// when its distance to the hull of the rest is at most [`TOL_OPT`].
    pub fn reduced(&self) -> Self {
        let vertices = match self.dim {
            _ if self.vertices.len() <= 1 => self.vertices.clone(),
            1 => reduce_1d(&self.vertices),
            2 => reduce_2d(&self.vertices),
            _ => reduce_by_exclusion(&self.vertices),
        };
        Self { dim: self.dim, vertices }
    }
}

fn reduce_1d(points: &[Vector]) -> Vec<Vector> {
    let lo = points.iter().min_by(|a, b| a[0].total_cmp(&b[0])).unwrap();
    let hi = points.iter().max_by(|a, b| a[0].total_cmp(&b[0])).unwrap();
    if lo == hi {
        vec![lo.clone()]
    } else {
        vec![lo.clone(), hi.clone()]
    }
}

/// Andrew's monotone chain; collinear boundary points are dropped.
fn reduce_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<&Vector> = points.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    if pts.len() < 3 {
        return pts.into_iter().cloned().collect();
    }
    let cross = |o: &Vector, a: &Vector, b: &Vector| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<&Vector> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Vector>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.is_empty() {
        // all points identical
        return vec![pts[0].clone()];
    }
    hull.into_iter().cloned().collect()
}

fn reduce_by_exclusion(points: &[Vector]) -> Vec<Vector> {
    let mut kept: Vec<Vector> = points.to_vec();
    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        let shifted: Vec<Vector> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q - &kept[i])
            .collect();
        let d = min_norm_point(&shifted).map(|p| p.norm()).unwrap_or(f64::INFINITY);
        if d <= TOL_OPT {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Conical hull of finitely many nonzero generators; `cone ∅ = {0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteCone {
    dim: usize,
    generators: Vec<Vector>,
}

impl FiniteCone {
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        check_shared_dim(&generators, dim)?;
        if generators.iter().any(Vector::is_zero) {
            return Err(Error::ZeroGenerator);
        }
        let (generators, _) = dedup_exact(&generators);
        Ok(Self { dim, generators })
    }

    pub fn trivial(dim: usize) -> Self {
        Self { dim, generators: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators rescaled to unit length.
    pub fn normalized_generators(&self) -> Vec<Vector> {
        self.generators.iter().filter_map(Vector::normalized).collect()
    }
}

/// `conv(hull) + cone(cone)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiSet {
    hull: Polytope,
    cone: FiniteCone,
}

impl MinkowskiSet {
    pub fn new(hull: Polytope, cone: FiniteCone) -> Result<Self> {
        if hull.dim() != cone.dim() {
            return Err(Error::DimensionMismatch { expected: hull.dim(), got: cone.dim() });
        }
        Ok(Self { hull, cone })
    }

    /// Convenience constructor from raw vertex and generator lists.
    pub fn from_parts(dim: usize, vertices: Vec<Vector>, generators: Vec<Vector>) -> Result<Self> {
        Self::new(Polytope::new(dim, vertices)?, FiniteCone::new(dim, generators)?)
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn hull(&self) -> &Polytope {
        &self.hull
    }

    pub fn cone(&self) -> &FiniteCone {
        &self.cone
    }
}
