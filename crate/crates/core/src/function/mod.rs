//! Extended-real-valued functions given by oracles.

mod cantor;
mod catalog;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convex::FiniteCone;
use crate::error::{Error, Result};
use crate::vector::Vector;

pub use cantor::{cantor_derivative, cantor_value, DEFAULT_CANTOR_DEPTH};
pub use catalog::{catalog, in_cusp_domain, lookup, CatalogEntry, ReferenceSet, ReferenceSubdifferential};

pub type ValueOracle = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
pub type DomainOracle = Arc<dyn Fn(&Vector) -> bool + Send + Sync>;
pub type GradientOracle = Arc<dyn Fn(&Vector) -> Option<Vector> + Send + Sync>;
pub type NormalConeOracle = Arc<dyn Fn(&Vector) -> FiniteCone + Send + Sync>;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// Relative disagreement above which a finite-difference gradient is
/// rejected as taken at a nondifferentiable point.
pub const FD_CONSISTENCY_TOL: f64 = 1e-3;

/// Documented structural claims about a function. Nothing branches on
/// these; they are reported alongside catalog entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub directionally_lipschitzian: bool,
    pub vertically_continuous: bool,
    pub continuous_on_domain: bool,
    pub stratifiable: bool,
}

impl Metadata {
    pub const REGULAR: Self = Self {
        directionally_lipschitzian: true,
        vertically_continuous: true,
        continuous_on_domain: true,
        stratifiable: true,
    };
}

/// An extended-real-valued function `f: ℝⁿ → ℝ ∪ {+∞}` given by oracles.
///
/// Outside the domain the value is `+∞`. The gradient oracle returns `None`
/// where `f` is not differentiable; when absent, gradients come from
/// [`fd_gradient`]. The normal-cone oracle returns generators of the Clarke
/// normal cone to the domain; it is only consulted at base points.
#[derive(Clone)]
pub struct ExtendedFunction {
    dim: usize,
    value: ValueOracle,
    domain: DomainOracle,
    gradient: Option<GradientOracle>,
    normal_cone: Option<NormalConeOracle>,
    metadata: Metadata,
}

impl fmt::Debug for ExtendedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtendedFunction")
            .field("dim", &self.dim)
            .field("has_gradient", &self.gradient.is_some())
            .field("has_normal_cone", &self.normal_cone.is_some())
            .field("metadata", &self.metadata)
            .finish()
    }
}

impl ExtendedFunction {
    /// A function whose domain is wherever `value` is finite.
    pub fn new(dim: usize, value: impl Fn(&Vector) -> f64 + Send + Sync + 'static) -> Self {
        let value: ValueOracle = Arc::new(value);
        let v = value.clone();
        Self {
            dim,
            value,
            domain: Arc::new(move |x| v(x).is_finite()),
            gradient: None,
            normal_cone: None,
            metadata: Metadata::REGULAR,
        }
    }

    pub fn with_domain(mut self, domain: impl Fn(&Vector) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Arc::new(domain);
        self
    }

    pub fn with_gradient(
        mut self,
        gradient: impl Fn(&Vector) -> Option<Vector> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn with_normal_cone(
        mut self,
        normals: impl Fn(&Vector) -> FiniteCone + Send + Sync + 'static,
    ) -> Self {
        self.normal_cone = Some(Arc::new(normals));
        self
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metadata(&self) -> Metadata {
        self.metadata
    }

    pub fn in_domain(&self, x: &Vector) -> bool {
        x.dim() == self.dim && (self.domain)(x)
    }

    /// `f(x)`, or `+∞` off the domain.
    pub fn value(&self, x: &Vector) -> f64 {
        if self.in_domain(x) {
            (self.value)(x)
        } else {
            f64::INFINITY
        }
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    /// Analytic gradient where available and defined.
    pub fn analytic_gradient(&self, x: &Vector) -> Option<Vector> {
        if !self.in_domain(x) {
            return None;
        }
        self.gradient.as_ref().and_then(|g| g(x))
    }

    /// Gradient from the analytic oracle, falling back to central
    /// differences with step `h` when none is attached.
    pub fn gradient(&self, x: &Vector, h: f64) -> Result<Vector> {
        match &self.gradient {
            Some(g) if self.in_domain(x) => g(x).ok_or(Error::Nondifferentiable),
            Some(_) => Err(Error::OutsideDomain),
            None => fd_gradient(self, x, h),
        }
    }

    /// Generators of the normal cone to the domain at `x` (trivial when no
    /// oracle is attached).
    pub fn normals_at(&self, x: &Vector) -> FiniteCone {
        match &self.normal_cone {
            Some(n) => n(x),
            None => FiniteCone::trivial(self.dim),
        }
    }
}

/// Central-difference gradient with step `h`.
///
/// The point is rejected as nondifferentiable when the estimates at `h` and
/// `h/2` disagree, or when the forward and backward quotients in some
/// coordinate disagree, by more than `FD_CONSISTENCY_TOL · (1 + |g|)`. The
/// second test catches symmetric kinks such as `|x|` at `0`, where central
/// differences at every step agree on `0`.
pub fn fd_gradient(f: &ExtendedFunction, x: &Vector, h: f64) -> Result<Vector> {
    x.check_dim(f.dim())?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("finite-difference step {h}")));
    }
    if !f.in_domain(x) {
        return Err(Error::OutsideDomain);
    }
    let fx = f.value(x);
    let eval = |j: usize, step: f64| -> Result<f64> {
        let mut c = x.coords().to_vec();
        c[j] += step;
        let p = Vector::new(c).map_err(|_| Error::StencilOutsideDomain)?;
        let v = f.value(&p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::StencilOutsideDomain)
        }
    };
    let n = f.dim();
    let mut full = Vec::with_capacity(n);
    let mut half = Vec::with_capacity(n);
    let mut one_sided_gap = 0.0_f64;
    for j in 0..n {
        let (fp, fm) = (eval(j, h)?, eval(j, -h)?);
        let (hp, hm) = (eval(j, h / 2.0)?, eval(j, -h / 2.0)?);
        full.push((fp - fm) / (2.0 * h));
        half.push((hp - hm) / h);
        let forward = (fp - fx) / h;
        let backward = (fx - fm) / h;
        one_sided_gap = one_sided_gap.max((forward - backward).abs());
    }
    let g = Vector::new(full).map_err(|_| Error::Nondifferentiable)?;
    let g_half = Vector::new(half).map_err(|_| Error::Nondifferentiable)?;
    let bound = FD_CONSISTENCY_TOL * (1.0 + g.norm());
    if g.distance(&g_half) > bound || one_sided_gap > bound {
        return Err(Error::Nondifferentiable);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_quadratic() {
        let f = ExtendedFunction::new(1, |x| x[0] * x[0]);
        let g = fd_gradient(&f, &[3.0].into(), 1e-5).unwrap();
        assert!((g[0] - 6.0).abs() < 1e-9, "{g}");
    }

    #[test]
    fn fd_kink() {
        let f = ExtendedFunction::new(1, |x| x[0].abs());
        assert_eq!(fd_gradient(&f, &[0.0].into(), 1e-5), Err(Error::Nondifferentiable));
    }

    #[test]
    fn fd_quartic_root() {
        let f = ExtendedFunction::new(2, |x| (x[0].powi(4) + x[1] * x[1]).powf(0.25));
        let g = fd_gradient(&f, &[1.0, 0.0].into(), 1e-6).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-6 && g[1].abs() < 1e-6, "{g}");
    }

    #[test]
    fn fd_stencil_leaves_domain() {
        let f = ExtendedFunction::new(1, |x| if x[0] >= 0.0 { x[0] } else { f64::INFINITY });
        assert_eq!(fd_gradient(&f, &[0.0].into(), 1e-6), Err(Error::StencilOutsideDomain));
        assert_eq!(fd_gradient(&f, &[-1.0].into(), 1e-6), Err(Error::OutsideDomain));
    }

    #[test]
    fn value_is_infinite_off_domain() {
        let f = ExtendedFunction::new(1, |x| x[0]).with_domain(|x| x[0] > 0.0);
        assert_eq!(f.value(&[-1.0].into()), f64::INFINITY);
        assert_eq!(f.value(&[2.0].into()), 2.0);
        assert_eq!(f.gradient(&[1.0].into(), 1e-6).unwrap().coords().len(), 1);
    }
}
