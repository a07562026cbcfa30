//! Shared 1-D and small-scale optimization helpers.

use crate::quadrature::g15_scaled;
use crate::scalar::Real;

/// Golden-section maximization of a unimodal function on `[a, b]`.
/// Returns `(argmax, max)` with the bracket narrowed to width `tol`.
pub(crate) fn golden_max<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T, tol: T) -> (T, T) {
    let phi = (T::of(5.0).sqrt() - T::one()) * T::half();
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let m = (a + b) * T::half();
    (m, f(m))
}

/// Fixed composite Gauss-Legendre mesh on `[0, 1]`: `panels` equal panels,
/// 15 nodes each. Returns `(nodes, weights)` with weights summing to 1.
pub(crate) fn g15_mesh<T: Real>(panels: usize) -> (Vec<T>, Vec<T>) {
    let m = panels.max(1);
    let (xs, ws) = g15_scaled::<T>();
    let h = T::one() / T::of(m as f64);
    let hh = h * T::half();
    let mut nodes = Vec::with_capacity(15 * m);
    let mut weights = Vec::with_capacity(15 * m);
    for j in 0..m {
        let c = (T::of(j as f64) + T::half()) * h;
        for i in 0..15 {
            nodes.push(c + xs[i] * hh);
            weights.push(ws[i] * hh);
        }
    }
    (nodes, weights)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix; `None` when a pivot falls to `tol` or below.
pub(crate) fn cholesky<T: Real>(g: &[Vec<T>], tol: T) -> Option<Vec<Vec<T>>> {
    let n = g.len();
    let mut l = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= tol {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Solves `L y = b` for a lower-triangular factor.
pub(crate) fn forward_solve<T: Real>(l: &[Vec<T>], b: &[T]) -> Vec<T> {
    let n = l.len();
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    y
}

/// Solves `L^T x = b` for a lower-triangular factor.
#[cfg(test)]
pub(crate) fn back_solve_t<T: Real>(l: &[Vec<T>], b: &[T]) -> Vec<T> {
    let n = l.len();
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

/// Largest singular value of a small dense rows-by-cols matrix by power
/// iteration on the normal matrix. Accurate in value even for clustered
/// spectra, since the Rayleigh quotient is squeezed between the top
/// cluster's members.
pub(crate) fn sigma_max<T: Real>(m: &[Vec<T>]) -> T {
    let rows = m.len();
    if rows == 0 || m[0].is_empty() {
        return T::zero();
    }
    let cols = m[0].len();
    // mildly uneven start so no singular direction is exactly missed
    let mut v: Vec<T> = (0..cols)
        .map(|i| T::one() + T::of(0.01) * T::of(i as f64))
        .collect();
    let mut nrm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    let mut sigma = T::zero();
    for _ in 0..500 {
        let w: Vec<T> = m
            .iter()
            .map(|row| row.iter().zip(&v).map(|(&a, &b)| a * b).sum())
            .collect();
        let s = w.iter().map(|&x| x * x).sum::<T>().sqrt();
        if s == T::zero() {
            return T::zero();
        }
        let mut u = vec![T::zero(); cols];
        for (row, &wi) in m.iter().zip(&w) {
            for (uj, &aj) in u.iter_mut().zip(row) {
                *uj += aj * wi;
            }
        }
        nrm = u.iter().map(|&x| x * x).sum::<T>().sqrt();
        if nrm == T::zero() {
            return s;
        }
        u.iter_mut().for_each(|x| *x /= nrm);
        let done = (s - sigma).abs() <= T::epsilon() * T::of(8.0) * s.max(T::one());
        sigma = s;
        v = u;
        if done {
            break;
        }
    }
    sigma
}

/// Modified Gram-Schmidt: orthonormal basis of the span of `cols`,
/// dropping directions whose residual falls below `tol` times the
/// largest input norm.
pub(crate) fn orthonormal_columns<T: Real>(cols: &[Vec<T>], tol: T) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::new();
    let scale = cols
        .iter()
        .map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt())
        .fold(T::zero(), T::max);
    if scale == T::zero() {
        return basis;
    }
    for c in cols {
        let mut v = c.clone();
        for q in &basis {
            let proj: T = q.iter().zip(&v).map(|(&a, &b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(x, &qx)| *x -= proj * qx);
        }
        let nrm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if nrm > tol * scale {
            v.iter_mut().for_each(|x| *x /= nrm);
            basis.push(v);
        }
    }
    basis
}

pub(crate) struct Descent<T> {
    pub x: Vec<T>,
    #[allow(dead_code)]
    pub value: T,
    pub converged: bool,
    #[allow(dead_code)]
    pub iters: usize,
}

/// Gradient descent with Armijo backtracking. `fg` evaluates the objective
/// and, when a buffer is supplied, fills in the gradient. Stops when the
/// relative decrease per accepted step falls below `rel_tol`, the gradient
/// vanishes, or `max_iters` accepted steps have been taken; `converged` is
/// false only when the iteration budget or the line search ran out first.
pub(crate) fn descend<T: Real, FG: FnMut(&[T], Option<&mut [T]>) -> T>(
    mut fg: FG,
    x0: Vec<T>,
    max_iters: usize,
    rel_tol: T,
) -> Descent<T> {
    let dim = x0.len();
    let mut x = x0;
    let mut grad = vec![T::zero(); dim];
    let mut value = fg(&x, Some(&mut grad));
    let mut step = T::one();
    let c1 = T::of(1e-4);
    let step_floor = T::of(1e-18);
    let mut converged = false;
    let mut iters = 0;
    while iters < max_iters {
        let gnorm2: T = grad.iter().map(|&g| g * g).sum();
        if gnorm2.sqrt() <= T::epsilon() * (T::one() + value.abs()) {
            converged = true;
            break;
        }
        let mut accepted = None;
        while step >= step_floor {
            let trial: Vec<T> = x.iter().zip(&grad).map(|(&xi, &gi)| xi - step * gi).collect();
            let ft = fg(&trial, None);
            if ft.is_finite() && ft <= value - c1 * step * gnorm2 {
                accepted = Some((trial, ft));
                break;
            }
            step = step * T::half();
        }
        let Some((trial, ft)) = accepted else { break };
        let drop = value - ft;
        x = trial;
        value = ft;
        iters += 1;
        if drop <= rel_tol * (T::one() + value.abs()) {
            converged = true;
            break;
        }
        value = fg(&x, Some(&mut grad));
        step = (step * T::two()).min(T::of(1e6));
    }
    Descent { x, value, converged, iters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_parabola_vertex() {
        let (x, v) = golden_max(|t: f64| t * (1.0 - t), 0.0, 1.0, 1e-12);
        assert_abs_diff_eq!(x, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(v, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn handles_boundary_maximum() {
        let (x, v) = golden_max(|t: f64| t, 0.0, 2.0, 1e-12);
        assert_abs_diff_eq!(x, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn mesh_integrates_polynomials_exactly() {
        let (xs, ws) = g15_mesh::<f64>(4);
        assert_eq!(xs.len(), 60);
        let total: f64 = ws.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        let cubic: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * x * x * x).sum();
        assert_abs_diff_eq!(cubic, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn descends_convex_quadratic() {
        // F(x, y) = (x - 3)^2 + 2 (y + 1)^2
        let res = descend(
            |x: &[f64], grad: Option<&mut [f64]>| {
                let (dx, dy) = (x[0] - 3.0, x[1] + 1.0);
                if let Some(g) = grad {
                    g[0] = 2.0 * dx;
                    g[1] = 4.0 * dy;
                }
                dx * dx + 2.0 * dy * dy
            },
            vec![0.0, 0.0],
            500,
            1e-12,
        );
        assert!(res.converged);
        assert_abs_diff_eq!(res.x[0], 3.0, epsilon = 1e-5);
        assert_abs_diff_eq!(res.x[1], -1.0, epsilon = 1e-5);
        assert!(res.value < 1e-10);
    }

    #[test]
    fn cholesky_and_solves_round_trip() {
        let g = vec![vec![4.0, 2.0], vec![2.0, 3.0]];
        let l = cholesky(&g, 1e-14).unwrap();
        assert_abs_diff_eq!(l[0][0], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l[1][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l[1][1], 2.0f64.sqrt(), epsilon = 1e-15);
        let y = forward_solve(&l, &[2.0, 5.0]);
        let x = back_solve_t(&l, &y);
        // check G x = b
        assert_abs_diff_eq!(4.0 * x[0] + 2.0 * x[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(2.0 * x[0] + 3.0 * x[1], 5.0, epsilon = 1e-12);

        let singular = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(cholesky(&singular, 1e-14).is_none());
    }

    #[test]
    fn sigma_max_of_diagonal() {
        let m = vec![vec![3.0, 0.0], vec![0.0, 1.0]];
        assert_abs_diff_eq!(sigma_max(&m), 3.0, epsilon = 1e-12);
        let wide = vec![vec![0.0, 2.0, 0.0]];
        assert_abs_diff_eq!(sigma_max(&wide), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let cols = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let q = orthonormal_columns(&cols, 1e-12);
        assert_eq!(q.len(), 2);
        assert_abs_diff_eq!(q[0][0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q[1][1], 1.0, epsilon = 1e-15);
        let dot: f64 = q[0].iter().zip(&q[1]).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn reports_budget_exhaustion() {
        // Rosenbrock needs far more than 3 iterations.
        let res = descend(
            |x: &[f64], grad: Option<&mut [f64]>| {
                let (a, b) = (1.0 - x[0], x[1] - x[0] * x[0]);
                if let Some(g) = grad {
                    g[0] = -2.0 * a - 400.0 * x[0] * b;
                    g[1] = 200.0 * b;
                }
                a * a + 100.0 * b * b
            },
            vec![-1.2, 1.0],
            3,
            1e-14,
        );
        assert!(!res.converged);
    }
}
