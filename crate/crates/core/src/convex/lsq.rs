use nalgebra::{DMatrix, DVector};

use crate::vector::Vector;

/// Minimizes `|Σ αᵢ qᵢ + Σ βⱼ gⱼ|` subject to `Σ αᵢ = 1`, with no sign
/// constraints. `affine` must be nonempty. Returns `(α, β)`.
///
/// The affine constraint is eliminated by pivoting on the first affine
/// point; the remaining unconstrained least-squares problem is solved by
/// SVD so that numerically dependent columns get the minimum-norm solution.
pub(crate) fn affine_conic_min(affine: &[&Vector], conic: &[&Vector]) -> (Vec<f64>, Vec<f64>) {
    let base = affine[0];
    let dim = base.dim();
    let n_aff = affine.len() - 1;
    let cols = n_aff + conic.len();
    if cols == 0 {
        return (vec![1.0], Vec::new());
    }
    let mut m = DMatrix::<f64>::zeros(dim, cols);
    for (c, q) in affine[1..].iter().enumerate() {
        for r in 0..dim {
            m[(r, c)] = q[r] - base[r];
        }
    }
    for (c, g) in conic.iter().enumerate() {
        for r in 0..dim {
            m[(r, n_aff + c)] = g[r];
        }
    }
    let rhs = DVector::from_iterator(dim, base.coords().iter().map(|x| -x));
    let scale = m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())).max(1.0);
    let svd = m.svd(true, true);
    let eps = 1e-13 * scale * (dim.max(cols) as f64);
    let z = svd
        .solve(&rhs, eps)
        .unwrap_or_else(|_| DVector::zeros(cols));
    let mut alpha = Vec::with_capacity(affine.len());
    alpha.push(1.0 - z.rows(0, n_aff).sum());
    alpha.extend(z.rows(0, n_aff).iter().copied());
    let beta = z.rows(n_aff, conic.len()).iter().copied().collect();
    (alpha, beta)
}

/// `Σ αᵢ qᵢ + Σ βⱼ gⱼ`.
pub(crate) fn combine(affine: &[&Vector], alpha: &[f64], conic: &[&Vector], beta: &[f64]) -> Vector {
    let dim = affine.first().or(conic.first()).map(|v| v.dim()).unwrap_or(1);
    let mut out = vec![0.0; dim];
    for (v, w) in affine.iter().zip(alpha).chain(conic.iter().zip(beta)) {
        for (o, x) in out.iter_mut().zip(v.coords()) {
            *o += w * x;
        }
    }
    Vector::from_finite(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_onto_line_through_two_points() {
        let a = Vector::from([2.0, 0.0]);
        let b = Vector::from([0.0, 1.0]);
        let (alpha, beta) = affine_conic_min(&[&a, &b], &[]);
        assert!(beta.is_empty());
        let p = combine(&[&a, &b], &alpha, &[], &[]);
        assert!((p[0] - 0.4).abs() < 1e-14 && (p[1] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn conic_column_absorbs_residual() {
        let a = Vector::from([1.0, 3.0]);
        let g = Vector::from([0.0, 1.0]);
        let (alpha, beta) = affine_conic_min(&[&a], &[&g]);
        assert_eq!(alpha, vec![1.0]);
        assert!((beta[0] + 3.0).abs() < 1e-14);
    }
}
