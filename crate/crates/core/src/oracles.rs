//! Independent reference computations.
//!
//! These deliberately share no code path with [`crate::convex`]: the
//! min-norm oracle enumerates a simplex grid and refines by pairwise weight
//! transfers, pointedness is decided by a phase-one simplex method, and
//! distances to Minkowski sets by projected gradient with Armijo steps.

use crate::vector::{dot, Vector};

/// Simplex-grid resolution for `m` points, keeping the grid near 2·10⁵
/// nodes. Two and three points use steps of 1e-3 and 1/600.
pub fn grid_divisions(m: usize) -> usize {
    match m {
        0 | 1 => 1,
        2 => 1000,
        3 => 600,
        4 => 100,
        5 => 40,
        6 => 24,
        _ => 12,
    }
}

fn norm_sq_of_combination(points: &[Vector], weights: &[f64], out: &mut [f64]) -> f64 {
    out.iter_mut().for_each(|o| *o = 0.0);
    for (p, &w) in points.iter().zip(weights) {
        for (o, x) in out.iter_mut().zip(p.coords()) {
            *o += w * x;
        }
    }
    dot(out, out)
}

/// Min-norm point of `conv(points)` by exhaustive simplex-grid search
/// followed by pairwise exact line searches until no transfer improves the
/// squared norm by more than 1e-30.
pub fn min_norm_brute_force(points: &[Vector]) -> Vector {
    assert!(!points.is_empty());
    let m = points.len();
    let dim = points[0].dim();
    let n = grid_divisions(m);
    let mut counts = vec![0usize; m];
    let mut best_w = vec![0.0; m];
    let mut best = f64::INFINITY;
    let mut buf = vec![0.0; dim];
    let mut w = vec![0.0; m];

    fn enumerate(
        k: usize,
        left: usize,
        counts: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if k + 1 == counts.len() {
            counts[k] = left;
            visit(counts);
            return;
        }
        for c in 0..=left {
            counts[k] = c;
            enumerate(k + 1, left - c, counts, visit);
        }
    }
    enumerate(0, n, &mut counts, &mut |c: &[usize]| {
        for (wi, &ci) in w.iter_mut().zip(c) {
            *wi = ci as f64 / n as f64;
        }
        let val = norm_sq_of_combination(points, &w, &mut buf);
        if val < best {
            best = val;
            best_w.copy_from_slice(&w);
        }
    });

    let mut x = vec![0.0; dim];
    norm_sq_of_combination(points, &best_w, &mut x);
    for _ in 0..200_000 {
        let mut improved = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                if i == j || best_w[j] <= 0.0 {
                    continue;
                }
                // move weight t from j to i
                let d: Vec<f64> = points[i].coords().iter().zip(points[j].coords()).map(|(a, b)| a - b).collect();
                let dd = dot(&d, &d);
                if dd == 0.0 {
                    continue;
                }
                let t = (-dot(&x, &d) / dd).clamp(-best_w[i], best_w[j]);
                if t == 0.0 {
                    continue;
                }
                let before = dot(&x, &x);
                for (xk, dk) in x.iter_mut().zip(&d) {
                    *xk += t * dk;
                }
                best_w[i] += t;
                best_w[j] -= t;
                improved = improved.max(before - dot(&x, &x));
            }
        }
        if improved <= 1e-30 {
            break;
        }
    }
    Vector::new(x).expect("finite combination")
}

/// Whether `0 ∈ conv(points)`, decided by a phase-one simplex method with
/// Bland's rule on `Σλᵢpᵢ = 0, Σλᵢ = 1, λ ≥ 0`.
pub fn zero_in_hull_lp(points: &[Vector], tol: f64) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = points[0].dim();
    let m = points.len();
    let rows = dim + 1;
    // columns: λ (m), artificials (rows), rhs
    let cols = m + rows + 1;
    let mut t = vec![vec![0.0; cols]; rows + 1];
    for r in 0..rows {
        for (c, p) in points.iter().enumerate() {
            t[r][c] = if r < dim { p[r] } else { 1.0 };
        }
        t[r][m + r] = 1.0;
        t[r][cols - 1] = if r == dim { 1.0 } else { 0.0 };
    }
    // objective row: minimize Σ artificials, expressed in nonbasic terms
    for c in 0..cols {
        if (m..m + rows).contains(&c) {
            continue;
        }
        t[rows][c] = -(0..rows).map(|r| t[r][c]).sum::<f64>();
    }
    let mut basis: Vec<usize> = (m..m + rows).collect();
    for _ in 0..10_000 {
        // Bland: smallest index with negative reduced cost
        let Some(enter) = (0..m + rows).find(|&c| t[rows][c] < -1e-12) else { break };
        let mut leave = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..rows {
            if t[r][enter] > 1e-12 {
                let ratio = t[r][cols - 1] / t[r][enter];
                if ratio < best_ratio - 1e-15
                    || (ratio <= best_ratio + 1e-15 && leave.is_some_and(|l: usize| basis[r] < basis[l]))
                {
                    best_ratio = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else { break };
        let piv = t[lr][enter];
        for v in t[lr].iter_mut() {
            *v /= piv;
        }
        for r in 0..=rows {
            if r != lr {
                let factor = t[r][enter];
                if factor != 0.0 {
                    for c in 0..cols {
                        t[r][c] -= factor * t[lr][c];
                    }
                }
            }
        }
        basis[lr] = enter;
    }
    let infeasibility = -t[rows][cols - 1];
    infeasibility <= tol
}

/// Distance from `v` to `conv(hull) + cone(rays)` by projected gradient on
/// `(λ ∈ simplex, μ ≥ 0)` with Armijo backtracking from a Barzilai–Borwein
/// trial step. Stops when the projected-gradient step is below 1e-10 or
/// after `max_iter` iterations. Returns `(distance, witness)`.
pub fn distance_pg(v: &Vector, hull: &[Vector], rays: &[Vector], max_iter: usize) -> (f64, Vector) {
    let dim = v.dim();
    let hull: Vec<Vector> = if hull.is_empty() { vec![Vector::zeros(dim)] } else { hull.to_vec() };
    let (m, p) = (hull.len(), rays.len());
    let eval = |lam: &[f64], mu: &[f64]| -> Vec<f64> {
        let mut r: Vec<f64> = v.coords().iter().map(|x| -x).collect();
        for (h, &l) in hull.iter().zip(lam) {
            for (ri, x) in r.iter_mut().zip(h.coords()) {
                *ri += l * x;
            }
        }
        for (g, &u) in rays.iter().zip(mu) {
            for (ri, x) in r.iter_mut().zip(g.coords()) {
                *ri += u * x;
            }
        }
        r
    };
    let project = |lam: &mut Vec<f64>, mu: &mut Vec<f64>| {
        // Euclidean projection onto the simplex by sorting
        let mut s = lam.clone();
        s.sort_by(|a, b| b.total_cmp(a));
        let mut cum = 0.0;
        let mut theta = 0.0;
        for (k, &sk) in s.iter().enumerate() {
            cum += sk;
            let th = (cum - 1.0) / (k + 1) as f64;
            if sk - th > 0.0 {
                theta = th;
            }
        }
        lam.iter_mut().for_each(|l| *l = (*l - theta).max(0.0));
        mu.iter_mut().for_each(|u| *u = u.max(0.0));
    };
    let start = (0..m)
        .min_by(|&a, &b| hull[a].distance(v).total_cmp(&hull[b].distance(v)))
        .unwrap();
    let mut lam = vec![0.0; m];
    lam[start] = 1.0;
    let mut mu = vec![0.0; p];
    let grad = |r: &[f64]| -> (Vec<f64>, Vec<f64>) {
        (
            hull.iter().map(|h| dot(h.coords(), r)).collect(),
            rays.iter().map(|g| dot(g.coords(), r)).collect(),
        )
    };
    let mut r = eval(&lam, &mu);
    let mut f = 0.5 * dot(&r, &r);
    let mut step = 1.0;
    let mut prev: Option<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> = None;
    for _ in 0..max_iter {
        let (gl, gm) = grad(&r);
        if let Some((pl, pm, pgl, pgm)) = &prev {
            let s: Vec<f64> = lam.iter().zip(pl).map(|(a, b)| a - b).chain(mu.iter().zip(pm).map(|(a, b)| a - b)).collect();
            let y: Vec<f64> = gl.iter().zip(pgl).map(|(a, b)| a - b).chain(gm.iter().zip(pgm).map(|(a, b)| a - b)).collect();
            let sy = dot(&s, &y);
            if sy > 0.0 {
                step = (dot(&s, &s) / sy).clamp(1e-12, 1e12);
            }
        }
        // projected-gradient residual at unit step
        let (mut tl, mut tm) = (
            lam.iter().zip(&gl).map(|(a, g)| a - g).collect::<Vec<_>>(),
            mu.iter().zip(&gm).map(|(a, g)| a - g).collect::<Vec<_>>(),
        );
        project(&mut tl, &mut tm);
        let pg = tl.iter().zip(&lam).chain(tm.iter().zip(&mu)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if pg < 1e-10 {
            break;
        }
        let mut alpha = step;
        let (mut nl, mut nm, mut nr, mut nf);
        loop {
            nl = lam.iter().zip(&gl).map(|(a, g)| a - alpha * g).collect::<Vec<_>>();
            nm = mu.iter().zip(&gm).map(|(a, g)| a - alpha * g).collect::<Vec<_>>();
            project(&mut nl, &mut nm);
            nr = eval(&nl, &nm);
            nf = 0.5 * dot(&nr, &nr);
            let decrease: f64 = nl.iter().zip(&lam).zip(&gl).chain(nm.iter().zip(&mu).zip(&gm)).map(|((a, b), g)| g * (a - b)).sum();
            if nf <= f + 1e-4 * decrease || alpha < 1e-20 {
                break;
            }
            alpha *= 0.5;
        }
        prev = Some((lam, mu, gl, gm));
        lam = nl;
        mu = nm;
        r = nr;
        f = nf;
    }
    let witness = Vector::new(v.coords().iter().zip(&r).map(|(a, b)| a + b).collect()).expect("finite");
    (dot(&r, &r).sqrt(), witness)
}
