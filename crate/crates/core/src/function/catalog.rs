//! Worked examples with known Clarke subdifferentials.

use std::fmt;
use std::sync::Arc;

use super::cantor::{cantor_derivative, cantor_value, DEFAULT_CANTOR_DEPTH};
use super::{ExtendedFunction, Metadata};
use crate::convex::{FiniteCone, MinkowskiSet};
use crate::error::{Error, Result};
use crate::vector::Vector;

/// Ground-truth subdifferential, either polyhedral or as a membership test.
#[derive(Clone)]
pub enum ReferenceSet {
    Polyhedral(MinkowskiSet),
    Membership(Arc<dyn Fn(&Vector) -> bool + Send + Sync>),
}

impl fmt::Debug for ReferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Polyhedral(s) => f.debug_tuple("Polyhedral").field(s).finish(),
            Self::Membership(_) => f.write_str("Membership(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceSubdifferential {
    pub base_point: Vector,
    pub set: ReferenceSet,
    pub source: String,
}

impl ReferenceSubdifferential {
    pub fn polyhedral(&self) -> Option<&MinkowskiSet> {
        match &self.set {
            ReferenceSet::Polyhedral(s) => Some(s),
            ReferenceSet::Membership(_) => None,
        }
    }

    pub fn contains(&self, v: &Vector, tol: f64) -> Result<bool> {
        match &self.set {
            ReferenceSet::Polyhedral(s) => crate::convex::contains(v, s, tol),
            ReferenceSet::Membership(m) => Ok(m(v)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub citation: &'static str,
    pub function: ExtendedFunction,
    pub references: Vec<ReferenceSubdifferential>,
    pub default_center: Vector,
}

impl CatalogEntry {
    /// Reference at `point`, if one is stored.
    pub fn reference_at(&self, point: &Vector) -> Option<&ReferenceSubdifferential> {
        self.references.iter().find(|r| &r.base_point == point)
    }
}

fn v<const N: usize>(c: [f64; N]) -> Vector {
    Vector::from(c)
}

fn polyhedral(base: Vector, hull: Vec<Vector>, cone: Vec<Vector>, source: &str) -> ReferenceSubdifferential {
    let dim = base.dim();
    ReferenceSubdifferential {
        base_point: base,
        set: ReferenceSet::Polyhedral(MinkowskiSet::from_parts(dim, hull, cone).expect("valid reference")),
        source: source.to_string(),
    }
}

fn single_cone(dim: usize, g: Vector) -> FiniteCone {
    FiniteCone::new(dim, vec![g]).expect("nonzero generator")
}

fn abs() -> CatalogEntry {
    let f = ExtendedFunction::new(1, |x| x[0].abs())
        .with_gradient(|x| (x[0] != 0.0).then(|| v([x[0].signum()])));
    CatalogEntry {
        name: "abs",
        summary: "f(x) = |x| on R",
        citation: "Lipschitz representation: conv of gradient limits; [-1,1] at 0",
        function: f,
        references: vec![polyhedral(v([0.0]), vec![v([-1.0]), v([1.0])], vec![], "closed form [-1,1]")],
        default_center: v([0.0]),
    }
}

fn linear() -> CatalogEntry {
    let f = ExtendedFunction::new(1, |x| x[0]).with_gradient(|_| Some(v([1.0])));
    CatalogEntry {
        name: "linear",
        summary: "f(x) = x on R",
        citation: "smooth control; no stationary points",
        function: f,
        references: vec![polyhedral(v([0.0]), vec![v([1.0])], vec![], "closed form {1}")],
        default_center: v([0.0]),
    }
}

fn zero() -> CatalogEntry {
    let f = ExtendedFunction::new(1, |_| 0.0).with_gradient(|_| Some(v([0.0])));
    CatalogEntry {
        name: "zero",
        summary: "f(x) = 0 on R; epigraph is a half-plane",
        citation: "smooth control for epigraph projections",
        function: f,
        references: vec![polyhedral(v([0.0]), vec![v([0.0])], vec![], "closed form {0}")],
        default_center: v([0.0]),
    }
}

/// `∇f(x, y) = (x³, y/2) / (x⁴ + y²)^{3/4}` away from the origin.
pub(crate) fn quartic_root_gradient(x: &Vector) -> Option<Vector> {
    let (a, b) = (x[0], x[1]);
    let s = a.powi(4) + b * b;
    if s == 0.0 {
        return None;
    }
    let d = s.powf(0.75);
    Vector::new(vec![a.powi(3) / d, 0.5 * b / d]).ok()
}

fn quartic_root() -> CatalogEntry {
    let f = ExtendedFunction::new(2, |x| (x[0].powi(4) + x[1] * x[1]).powf(0.25))
        .with_gradient(quartic_root_gradient);
    CatalogEntry {
        name: "quartic_root",
        summary: "f(x,y) = (x^4 + y^2)^(1/4) on R^2",
        citation: "isolated singularity at the origin; Clarke set [-1,1] x R \
                   (first gradient coordinate bounded by 1, gradients blow up vertically along the y-axis)",
        function: f,
        references: vec![polyhedral(
            v([0.0, 0.0]),
            vec![v([-1.0, 0.0]), v([1.0, 0.0])],
            vec![v([0.0, 1.0]), v([0.0, -1.0])],
            "[-1,1] x R",
        )],
        default_center: v([0.0, 0.0]),
    }
}

fn parabola_fraction() -> CatalogEntry {
    let f = ExtendedFunction::new(2, |x| {
        if x[0] > 0.0 {
            x[1] * x[1] / (2.0 * x[0])
        } else if x[0] == 0.0 && x[1] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    })
    .with_gradient(|x| {
        (x[0] > 0.0)
            .then(|| {
                let s = x[1] / x[0];
                Vector::new(vec![-0.5 * s * s, s]).ok()
            })
            .flatten()
    })
    .with_normal_cone(|x| {
        if x[0] == 0.0 {
            single_cone(2, v([-1.0, 0.0]))
        } else {
            FiniteCone::trivial(2)
        }
    })
    .with_metadata(Metadata { continuous_on_domain: false, ..Metadata::REGULAR });
    CatalogEntry {
        name: "parabola_fraction",
        summary: "f(x,y) = y^2/(2x) for x > 0, 0 at the origin, +inf otherwise",
        citation: "closed convex function discontinuous at the origin yet vertically continuous there; \
                   subdifferential {v : v1 <= -v2^2/2}",
        function: f,
        references: vec![ReferenceSubdifferential {
            base_point: v([0.0, 0.0]),
            set: ReferenceSet::Membership(Arc::new(|p: &Vector| p[0] <= -0.5 * p[1] * p[1])),
            source: "{v : v1 <= -v2^2/2}".into(),
        }],
        default_center: v([0.0, 0.0]),
    }
}

fn cantor() -> CatalogEntry {
    let f = ExtendedFunction::new(1, |x| {
        if (0.0..=1.0).contains(&x[0]) {
            cantor_value(x[0], DEFAULT_CANTOR_DEPTH)
        } else {
            f64::INFINITY
        }
    })
    .with_gradient(|x| cantor_derivative(x[0], DEFAULT_CANTOR_DEPTH).map(|d| v([d])))
    .with_normal_cone(|x| {
        if x[0] == 0.0 {
            single_cone(1, v([-1.0]))
        } else if x[0] == 1.0 {
            single_cone(1, v([1.0]))
        } else {
            FiniteCone::trivial(1)
        }
    })
    .with_metadata(Metadata { stratifiable: false, ..Metadata::REGULAR });
    CatalogEntry {
        name: "cantor",
        summary: "ternary Cantor function on [0,1], +inf outside",
        citation: "negative case: zero derivative wherever differentiable, yet the Clarke \
                   subdifferential at points of the Cantor set is not {0}",
        function: f,
        references: vec![],
        default_center: v([0.25]),
    }
}

fn step_jump() -> CatalogEntry {
    let f = ExtendedFunction::new(1, |x| if x[0] <= 0.0 { x[0] } else { x[0] + 1.0 })
        .with_gradient(|x| (x[0] != 0.0).then(|| v([1.0])))
        .with_metadata(Metadata {
            vertically_continuous: false,
            continuous_on_domain: false,
            ..Metadata::REGULAR
        });
    CatalogEntry {
        name: "step_jump",
        summary: "f(x) = x for x <= 0, x + 1 for x > 0",
        citation: "negative case for vertical continuity: same gradients as f(x) = x, \
                   different Clarke subdifferential at 0; no reference stored",
        function: f,
        references: vec![],
        default_center: v([0.0]),
    }
}

/// Membership in the cusp `{(x, y) : |y| ≤ x², x ≥ 0}`.
pub fn in_cusp_domain(x: &Vector) -> bool {
    x[0] >= 0.0 && x[1].abs() <= x[0] * x[0]
}

fn cusp_indicator() -> CatalogEntry {
    let f = ExtendedFunction::new(2, |x| if in_cusp_domain(x) { 0.0 } else { f64::INFINITY })
        .with_gradient(|x| (x[0] > 0.0 && x[1].abs() < x[0] * x[0]).then(|| v([0.0, 0.0])))
        .with_metadata(Metadata { directionally_lipschitzian: false, ..Metadata::REGULAR });
    CatalogEntry {
        name: "cusp_indicator",
        summary: "indicator of {(x,y) : |y| <= x^2, x >= 0}",
        citation: "cusp domain whose local volume fraction at the origin vanishes",
        function: f,
        references: vec![],
        default_center: v([0.0, 0.0]),
    }
}

fn halfplane_smooth() -> CatalogEntry {
    let f = ExtendedFunction::new(2, |x| {
        if x[0] >= 0.0 {
            x[0].sin() + x[1] * x[1]
        } else {
            f64::INFINITY
        }
    })
    .with_gradient(|x| (x[0] > 0.0).then(|| v([x[0].cos(), 2.0 * x[1]])))
    .with_normal_cone(|x| {
        if x[0] == 0.0 {
            single_cone(2, v([-1.0, 0.0]))
        } else {
            FiniteCone::trivial(2)
        }
    });
    CatalogEntry {
        name: "halfplane_smooth",
        summary: "f(x,y) = sin(x) + y^2 restricted to x >= 0",
        citation: "smooth function plus domain normal cone; conv{(1,0)} + cone{(-1,0)} at the origin",
        function: f,
        references: vec![polyhedral(v([0.0, 0.0]), vec![v([1.0, 0.0])], vec![v([-1.0, 0.0])], "conv{(1,0)} + cone{(-1,0)}")],
        default_center: v([0.0, 0.0]),
    }
}

/// All catalog entries, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        abs(),
        linear(),
        zero(),
        quartic_root(),
        parabola_fraction(),
        cantor(),
        step_jump(),
        cusp_indicator(),
        halfplane_smooth(),
    ]
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}
