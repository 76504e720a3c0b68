//! Wolfe's minimum-norm-point method, extended with conic columns.
//!
//! The solver minimizes `|Σ λᵢ qᵢ + Σ μⱼ gⱼ|` over `λ` in the unit simplex
//! and `μ ≥ 0`. With no conic columns this is exactly Wolfe's method: major
//! cycles add the most violating point to the corral, minor cycles move
//! toward the affine minimizer of the corral and drop points whose weight
//! vanishes. Candidates tie-break on the lowest index.

use nalgebra::DMatrix;

use super::lsq::{affine_conic_min, combine};
use super::{dedup_exact, TOL_OPT};
use crate::error::{Error, Result};
use crate::vector::Vector;

/// Weights below this are treated as zero inside minor cycles.
const WEIGHT_FLOOR: f64 = 1e-15;

/// Result of a min-norm computation.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormSolution {
    pub point: Vector,
    /// `(index into the caller's point list, weight)`; weights sum to one.
    pub weights: Vec<(usize, f64)>,
    /// `(index into the caller's generator list, multiplier)`.
    pub cone_weights: Vec<(usize, f64)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Column {
    Point(usize),
    Ray(usize),
}

pub(crate) fn active_set_min_norm(points: &[Vector], rays: &[Vector]) -> Result<MinNormSolution> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let dim = points[0].dim();
    points.iter().chain(rays).try_for_each(|p| p.check_dim(dim))?;

    let (q, q_origin) = dedup_exact(points);
    let (raw_rays, r_origin) = dedup_exact(rays);
    let ray_norms: Vec<f64> = raw_rays.iter().map(Vector::norm).collect();
    if ray_norms.iter().any(|&n| n == 0.0) {
        return Err(Error::ZeroGenerator);
    }
    let g: Vec<Vector> = raw_rays.iter().zip(&ray_norms).map(|(r, n)| r.scale(1.0 / n)).collect();

    let scale = q.iter().map(Vector::norm_sq).fold(1.0_f64, f64::max);
    let eps = 1e-13 * scale;

    let start = (0..q.len())
        .min_by(|&a, &b| q[a].norm_sq().total_cmp(&q[b].norm_sq()))
        .unwrap();
    let mut active: Vec<Column> = vec![Column::Point(start)];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x = q[start].clone();

    let max_major = 50 * (q.len() + g.len()) + 200;
    for _ in 0..max_major {
        let xx = x.norm_sq();
        let xn = xx.sqrt();
        let mut best: Option<(Column, f64)> = None;
        let candidates = (0..q.len())
            .map(|i| (Column::Point(i), xx - x.dot(&q[i])))
            .chain((0..g.len()).map(|j| (Column::Ray(j), -x.dot(&g[j]) * xn)));
        for (col, violation) in candidates {
            if best.is_none_or(|(_, b)| violation > b) {
                best = Some((col, violation));
            }
        }
        let (entering, violation) = best.unwrap();
        if violation <= eps || active.contains(&entering) {
            break;
        }
        active.push(entering);
        weights.push(0.0);

        // Minor cycles; each either terminates or drops at least one column.
        for _ in 0..=active.len() {
            let (aff, con): (Vec<_>, Vec<_>) = split(&active, &q, &g);
            let (alpha, beta) = affine_conic_min(&aff, &con);
            let trial = merge(&active, &alpha, &beta);
            if trial.iter().all(|&w| w > WEIGHT_FLOOR) {
                weights = trial;
                break;
            }
            let mut theta = 1.0_f64;
            let mut blocking = None;
            for (k, (&w, &t)) in weights.iter().zip(&trial).enumerate() {
                if t <= WEIGHT_FLOOR {
                    let step = if w - t > 0.0 { w / (w - t) } else { 0.0 };
                    if step < theta || blocking.is_none() && step <= theta {
                        theta = step;
                        blocking = Some(k);
                    }
                }
            }
            let theta = theta.clamp(0.0, 1.0);
            for (w, t) in weights.iter_mut().zip(&trial) {
                *w = theta * t + (1.0 - theta) * *w;
            }
            if let Some(k) = blocking {
                weights[k] = 0.0;
            }
            let mut k = 0;
            while k < active.len() {
                if weights[k] <= WEIGHT_FLOOR && active.len() > 1 {
                    active.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            renormalize(&active, &mut weights);
        }
        let (aff, con) = split(&active, &q, &g);
        let (alpha, beta) = unmerge(&active, &weights);
        let next = combine(&aff, &alpha, &con, &beta);
        if next.norm_sq() > xx * (1.0 + 1e-15) + 1e-300 && xx > 0.0 {
            // no progress; keep the previous iterate
            break;
        }
        x = next;
    }

    let (aff, con) = split(&active, &q, &g);
    let (alpha, beta) = unmerge(&active, &weights);
    let point = combine(&aff, &alpha, &con, &beta);
    let mut w_out = Vec::new();
    let mut c_out = Vec::new();
    for (col, &w) in active.iter().zip(&weights) {
        match *col {
            Column::Point(i) => w_out.push((q_origin[i], w)),
            Column::Ray(j) => c_out.push((r_origin[j], w / ray_norms[j])),
        }
    }
    w_out.sort_by_key(|&(i, _)| i);
    c_out.sort_by_key(|&(j, _)| j);
    Ok(MinNormSolution { point, weights: w_out, cone_weights: c_out })
}

fn split<'a>(active: &[Column], q: &'a [Vector], g: &'a [Vector]) -> (Vec<&'a Vector>, Vec<&'a Vector>) {
    let mut aff = Vec::new();
    let mut con = Vec::new();
    for col in active {
        match *col {
            Column::Point(i) => aff.push(&q[i]),
            Column::Ray(j) => con.push(&g[j]),
        }
    }
    (aff, con)
}

fn merge(active: &[Column], alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let (mut a, mut b) = (alpha.iter(), beta.iter());
    active
        .iter()
        .map(|col| match col {
            Column::Point(_) => *a.next().unwrap(),
            Column::Ray(_) => *b.next().unwrap(),
        })
        .collect()
}

fn unmerge(active: &[Column], weights: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for (col, &w) in active.iter().zip(weights) {
        match col {
            Column::Point(_) => alpha.push(w),
            Column::Ray(_) => beta.push(w),
        }
    }
    (alpha, beta)
}

fn renormalize(active: &[Column], weights: &mut [f64]) {
    let total: f64 = active
        .iter()
        .zip(weights.iter())
        .filter(|(c, _)| matches!(c, Column::Point(_)))
        .map(|(_, w)| *w)
        .sum();
    if total > 0.0 {
        for (c, w) in active.iter().zip(weights.iter_mut()) {
            if matches!(c, Column::Point(_)) {
                *w /= total;
            }
        }
    }
}

/// The point of minimum Euclidean norm in `conv(points)`.
pub fn min_norm_point(points: &[Vector]) -> Result<Vector> {
    min_norm_solution(points).map(|s| s.point)
}

/// Like [`min_norm_point`], also returning the final corral and its weights.
pub fn min_norm_solution(points: &[Vector]) -> Result<MinNormSolution> {
    active_set_min_norm(points, &[])
}

/// Expresses `v` as a convex combination of at most `dim + 1` of `points`.
pub fn caratheodory_reduce(v: &Vector, points: &[Vector]) -> Result<Vec<(f64, Vector)>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let dim = v.dim();
    points.iter().try_for_each(|p| p.check_dim(dim))?;
    let shifted: Vec<Vector> = points.iter().map(|p| p - v).collect();
    let sol = min_norm_solution(&shifted)?;
    let dist = sol.point.norm();
    if dist > TOL_OPT {
        return Err(Error::NotInHull(dist));
    }
    let mut support: Vec<(f64, Vector)> =
        sol.weights.iter().map(|&(i, w)| (w, points[i].clone())).collect();
    eliminate_dependent(&mut support, dim);
    Ok(support)
}

/// Classical Carathéodory elimination: while more than `dim + 1` points
/// carry weight, move along an affine dependence until one weight hits zero.
fn eliminate_dependent(support: &mut Vec<(f64, Vector)>, dim: usize) {
    while support.len() > dim + 1 {
        let s = support.len();
        // zero rows pad the system to s × s so the SVD yields a full V
        let m = DMatrix::from_fn(s, s, |r, c| match r {
            _ if r < dim => support[c].1[r],
            _ if r == dim => 1.0,
            _ => 0.0,
        });
        let svd = m.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let sv = &svd.singular_values;
        let smallest = (0..s).min_by(|&a, &b| sv[a].total_cmp(&sv[b])).unwrap();
        // s > dim + 1 ≥ rank, so the smallest singular value is zero
        let null: Vec<f64> = vt.row(smallest).iter().copied().collect();
        let mut ratio = f64::INFINITY;
        let mut hit = 0;
        for (k, (&c, (w, _))) in null.iter().zip(support.iter()).enumerate() {
            if c > 0.0 && w / c < ratio {
                ratio = w / c;
                hit = k;
            }
        }
        if !ratio.is_finite() {
            break;
        }
        for ((w, _), c) in support.iter_mut().zip(&null) {
            *w = (*w - ratio * c).max(0.0);
        }
        support.remove(hit);
        let total: f64 = support.iter().map(|(w, _)| w).sum();
        support.iter_mut().for_each(|(w, _)| *w /= total);
        support.retain(|(w, _)| *w > 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Vector, b: &[f64], tol: f64) -> bool {
        a.coords().iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn symmetric_pair() {
        let p = min_norm_point(&[[1.0, 0.0].into(), [0.0, 1.0].into()]).unwrap();
        assert!(close(&p, &[0.5, 0.5], 1e-12), "{p}");
    }

    #[test]
    fn origin_vertex() {
        let p = min_norm_point(&[[0.0, 0.0].into(), [1.0, 1.0].into()]).unwrap();
        assert!(close(&p, &[0.0, 0.0], 0.0));
    }

    #[test]
    fn segment_projection_closed_form() {
        // minimize |(2 − 2t, t)|² → t = 4/5
        let p = min_norm_point(&[[2.0, 0.0].into(), [0.0, 1.0].into()]).unwrap();
        assert!(close(&p, &[0.4, 0.8], 1e-12), "{p}");
    }

    #[test]
    fn empty_input() {
        assert_eq!(min_norm_point(&[]), Err(Error::EmptyPointSet));
    }

    #[test]
    fn interior_origin_uses_full_corral() {
        let pts: Vec<Vector> = vec![[1.0, 0.0].into(), [-1.0, 1.0].into(), [-1.0, -1.0].into()];
        let sol = min_norm_solution(&pts).unwrap();
        assert!(sol.point.norm() < 1e-14);
        assert_eq!(sol.weights.len(), 3);
        let total: f64 = sol.weights.iter().map(|w| w.1).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn duplicates_map_back_to_first_occurrence() {
        let pts: Vec<Vector> = vec![[3.0].into(), [1.0].into(), [1.0].into()];
        let sol = min_norm_solution(&pts).unwrap();
        assert_eq!(sol.weights, vec![(1, 1.0)]);
    }

    #[test]
    fn caratheodory_examples() {
        let pts: Vec<Vector> =
            vec![[1.0, 0.0].into(), [0.0, 1.0].into(), [1.0, 1.0].into(), [0.0, 0.0].into()];
        let v = Vector::from([0.5, 0.5]);
        let support = caratheodory_reduce(&v, &pts).unwrap();
        assert!(support.len() <= 3);
        let rebuilt = support.iter().fold(Vector::zeros(2), |acc, (w, p)| acc.axpy(*w, p));
        assert!(rebuilt.distance(&v) <= TOL_OPT);

        let vertex = caratheodory_reduce(&[1.0, 0.0].into(), &pts[..2]).unwrap();
        assert_eq!(vertex, vec![(1.0, Vector::from([1.0, 0.0]))]);

        let tri: Vec<Vector> = vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.0, 1.0].into()];
        let support = caratheodory_reduce(&[0.25, 0.25].into(), &tri).unwrap();
        let w: Vec<f64> = support.iter().map(|s| s.0).collect();
        assert_eq!(support.len(), 3);
        for (got, want) in w.iter().zip([0.5, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn caratheodory_outside_hull() {
        let pts: Vec<Vector> = vec![[-1.0, 0.0].into(), [1.0, 0.0].into()];
        assert!(matches!(
            caratheodory_reduce(&[0.0, 1.0].into(), &pts),
            Err(Error::NotInHull(_))
        ));
    }

    #[test]
    fn elimination_reduces_support() {
        let mut support: Vec<(f64, Vector)> = vec![
            (0.25, [0.0, 0.0].into()),
            (0.25, [1.0, 0.0].into()),
            (0.25, [0.0, 1.0].into()),
            (0.25, [1.0, 1.0].into()),
        ];
        eliminate_dependent(&mut support, 2);
        assert!(support.len() <= 3);
        let rebuilt = support.iter().fold(Vector::zeros(2), |acc, (w, p)| acc.axpy(*w, p));
        assert!(rebuilt.distance(&[0.5, 0.5].into()) < 1e-12);
    }
}
