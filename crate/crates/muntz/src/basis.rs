//! Finite-section pipeline: trigonometric candidates built from Müntz
//! difference-basis functions, Gaussian exclusion to a step-form family,
//! and subspace diagnostics (inclination, truncation-projection norms).

use crate::error::{Error, Result};
use crate::exponents::ExponentSet;
use crate::fourier::{
    apply_summation, fourier_coeffs, FourierCoeffs, SummationMatrix, TrigPolynomial,
};
use crate::functions::{compose_sigma, u_basis, z_projection};
use crate::optim::{
    cholesky, descend, forward_solve, g15_mesh, golden_max, orthonormal_columns, sigma_max,
};
use crate::quadrature::{lp_norm_panels, scaled_tol, uniform_breakpoints};
use crate::scalar::Real;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

// rank tolerance relative to the largest coefficient magnitude
const RANK_TOL: f64 = 1e-10;
// unit-norm slack on family rows
const NORM_TOL: f64 = 1e-9;
const QUAD_TOL: f64 = 1e-10;
const INCLINATION_RESTARTS: u64 = 50;
const SAMPLED_TRIALS: usize = 256;
const SAMPLED_SEED: u64 = 0x4642_4353;

/// A step-form family of trigonometric polynomials: rows of the
/// interleaved coefficient matrix `(a_0; a_1, b_1; a_2, b_2; ...)` are
/// upper trapezoidal with strictly increasing pivot columns, and every
/// row has unit `L_p(0,1)` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFamily<T> {
    polys: Vec<TrigPolynomial<T>>,
    pivot_cols: Vec<usize>,
    leading: Vec<usize>,
    trailing: Vec<usize>,
    p: T,
    dropped: usize,
    // ceiling on entries left of a pivot; zero for hand-built rows,
    // the recorded elimination residue for exclusion output (forcing
    // those entries to literal zero would push the rows off the span
    // of the input, so they are kept and bounded instead)
    dust: T,
}

fn col_count<T: Real>(polys: &[TrigPolynomial<T>]) -> usize {
    let deg = polys.iter().map(|r| r.degree()).max().unwrap_or(0);
    2 * deg + 1
}

/// Row of the interleaved coefficient matrix, padded to `width` columns.
fn interleave_row<T: Real>(r: &TrigPolynomial<T>, width: usize) -> Vec<T> {
    let mut row = vec![T::zero(); width];
    let c = r.coeffs();
    row[0] = c.a(0);
    for k in 1..=r.degree() {
        if 2 * k < width + 1 {
            row[2 * k - 1] = c.a(k);
            row[2 * k] = c.b(k);
        }
    }
    row
}

fn poly_from_row<T: Real>(row: &[T]) -> TrigPolynomial<T> {
    let last = row.iter().rposition(|&v| v != T::zero()).unwrap_or(0);
    let deg = (last + 1) / 2;
    let mut a = Vec::with_capacity(deg + 1);
    let mut b = Vec::with_capacity(deg);
    a.push(row[0]);
    for k in 1..=deg {
        a.push(row.get(2 * k - 1).copied().unwrap_or(T::zero()));
        b.push(row.get(2 * k).copied().unwrap_or(T::zero()));
    }
    TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b).expect("interleaved row is consistent"))
}

/// `L_p(0,1)` norm of a trigonometric polynomial; closed form at `p = 2`.
fn trig_lp_norm<T: Real>(r: &TrigPolynomial<T>, p: T) -> Result<T> {
    if p == T::two() {
        return Ok(r.l2_norm());
    }
    let breaks = uniform_breakpoints(T::zero(), T::one(), (4 * (r.degree() + 1)).max(8));
    lp_norm_panels(|x| r.eval(x), p, &breaks, scaled_tol(QUAD_TOL))
}

/// Coordinates in the orthonormal trigonometric system
/// `1, sqrt2 cos, sqrt2 sin, ...`, so Euclidean dot products are `L_2`
/// inner products.
fn ortho_coords<T: Real>(r: &TrigPolynomial<T>, max_freq: usize) -> Vec<T> {
    let mut v = vec![T::zero(); 2 * max_freq + 1];
    let c = r.coeffs();
    let inv_sqrt2 = T::half().sqrt();
    v[0] = c.a(0) * T::half();
    for k in 1..=r.degree().min(max_freq) {
        v[2 * k - 1] = c.a(k) * inv_sqrt2;
        v[2 * k] = c.b(k) * inv_sqrt2;
    }
    v
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

impl<T: Real> StepFamily<T> {
    /// Wraps rows that are already in step form; every row must have unit
    /// `L_p` norm, exact zeros left of its pivot, and a strictly later
    /// pivot column than its predecessor.
    pub fn from_polys(polys: Vec<TrigPolynomial<T>>, p: T) -> Result<Self> {
        Self::from_polys_with_residue(polys, p, T::zero())
    }

    /// Like [`from_polys`](Self::from_polys), but entries of magnitude at
    /// most `residue` count as structural zeros when locating pivots, as
    /// in rows produced by elimination under a finite tolerance.
    pub fn from_polys_with_residue(
        polys: Vec<TrigPolynomial<T>>,
        p: T,
        residue: T,
    ) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::invalid("a step family needs at least one row"));
        }
        if !(residue >= T::zero()) {
            return Err(Error::invalid("residue bound must be nonnegative"));
        }
        let width = col_count(&polys);
        let mut pivot_cols = Vec::with_capacity(polys.len());
        let mut leading = Vec::with_capacity(polys.len());
        let mut trailing = Vec::with_capacity(polys.len());
        for r in &polys {
            let row = interleave_row(r, width);
            let Some(pc) = row.iter().position(|&v| v.abs() > residue) else {
                return Err(Error::invalid(
                    "step family row is zero within the residue bound",
                ));
            };
            pivot_cols.push(pc);
            leading.push(pc + 1);
            trailing.push(r.degree());
        }
        let family = StepFamily {
            polys,
            pivot_cols,
            leading,
            trailing,
            p,
            dropped: 0,
            dust: residue,
        };
        family.check()?;
        Ok(family)
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[TrigPolynomial<T>] {
        &self.polys
    }

    pub fn poly(&self, l: usize) -> Result<&TrigPolynomial<T>> {
        self.polys.get(l).ok_or_else(|| Error::IndexOutOfRange {
            index: l,
            reason: format!("family has {} rows", self.polys.len()),
        })
    }

    /// 0-based pivot column per row in the interleaved matrix.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    /// 1-based position of the first nonzero coefficient in the
    /// trigonometric system enumeration `1, cos, sin, cos 2., sin 2., ...`.
    pub fn leading(&self) -> &[usize] {
        &self.leading
    }

    /// Harmonic degree per row.
    pub fn trailing(&self) -> &[usize] {
        &self.trailing
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// Candidates discarded as linearly dependent during exclusion.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// Largest magnitude tolerated left of a pivot. Zero for families
    /// assembled row by row; exclusion output records its elimination
    /// residue here.
    pub fn dust(&self) -> T {
        self.dust
    }

    /// Re-verifies the step-family conditions: unit row norms, entries
    /// left of each pivot bounded by `dust`, nonzero pivot, strictly
    /// increasing pivot columns, and consistent leading/trailing records.
    pub fn check(&self) -> Result<()> {
        let width = col_count(&self.polys);
        for (l, r) in self.polys.iter().enumerate() {
            let row = interleave_row(r, width);
            let pc = self.pivot_cols[l];
            if row[..pc].iter().any(|&v| v.abs() > self.dust) || row[pc] == T::zero() {
                return Err(Error::invalid(format!(
                    "row {l} is not in step form at column {pc}"
                )));
            }
            if l > 0 && self.pivot_cols[l - 1] >= pc {
                return Err(Error::invalid(format!(
                    "pivot columns not strictly increasing at row {l}"
                )));
            }
            if self.leading[l] != pc + 1 || self.trailing[l] != r.degree() {
                return Err(Error::invalid(format!("row {l} index records are stale")));
            }
            let nrm = trig_lp_norm(r, self.p)?;
            if (nrm - T::one()).abs() > T::of(NORM_TOL) {
                return Err(Error::invalid(format!(
                    "row {l} norm {nrm} is not 1 within {NORM_TOL}"
                )));
            }
        }
        Ok(())
    }
}

/// Trigonometric candidates for the finite-section pipeline: for each of
/// the first `n_funcs` difference-basis functions over `e`, the function
/// is projected by `f - f(t^2)`, composed with the boundary-avoiding
/// reparametrization at `delta`, periodically extended, and run through
/// the summation method `q` at every order in `m_orders`. Output is
/// function-major, order-minor.
pub fn generate_candidates<T: Real>(
    e: &ExponentSet<T>,
    delta: T,
    p: T,
    n_funcs: usize,
    m_orders: &[usize],
    q: &SummationMatrix<T>,
) -> Result<Vec<TrigPolynomial<T>>> {
    if !p.is_finite() || p <= T::one() {
        return Err(Error::Parameter {
            name: "p",
            value: p.lossy(),
            constraint: "p in (1, infinity)",
        });
    }
    if n_funcs == 0 {
        return Err(Error::invalid("candidate generation needs n_funcs >= 1"));
    }
    for (i, &l) in e.lambdas().iter().enumerate() {
        if (l - l.round()).abs() > T::of(1e-9) {
            return Err(Error::invalid(format!(
                "exponent {l} at index {i} is not an integer"
            )));
        }
    }
    if m_orders.is_empty() {
        return Ok(Vec::new());
    }
    let max_m = *m_orders.iter().max().unwrap();
    let mut out = Vec::with_capacity(n_funcs * m_orders.len());
    for k in 1..=n_funcs {
        let u = u_basis(e, k)?;
        let h = z_projection(&u)?;
        let grid = compose_sigma(|t| h.call(t), delta)?;
        let c = fourier_coeffs(|x| grid.eval_periodic(x), max_m)?;
        for &m in m_orders {
            out.push(apply_summation(&c, q, m)?);
        }
    }
    Ok(out)
}

/// Greedy elimination of the candidate rows to step form: each candidate
/// is reduced by the rows already kept, discarded when nothing above the
/// rank tolerance survives, and the kept rows are reordered by pivot
/// column and `L_p`-normalized.
pub fn gaussian_exclusion<T: Real>(
    candidates: &[TrigPolynomial<T>],
    p: T,
) -> Result<StepFamily<T>> {
    if candidates.is_empty() {
        return Err(Error::invalid("exclusion needs at least one candidate"));
    }
    let width = col_count(candidates);
    let rows: Vec<Vec<T>> = candidates
        .iter()
        .map(|r| interleave_row(r, width))
        .collect();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |m, &v| m.max(v.abs()));
    if scale == T::zero() {
        return Err(Error::RankDeficient);
    }
    let tol = T::of(RANK_TOL) * scale;

    // column-by-column elimination with partial pivoting: the largest
    // entry in each column is swapped up to serve as the pivot, keeping
    // every elimination factor at most 1 in magnitude
    let mut work = rows;
    let n = work.len();
    let mut cursor = 0usize;
    let mut pivots: Vec<usize> = Vec::with_capacity(n);
    for col in 0..width {
        if cursor == n {
            break;
        }
        let mut best_i = cursor;
        let mut best_v = T::zero();
        for (i, r) in work.iter().enumerate().skip(cursor) {
            let v = r[col].abs();
            if v > best_v {
                best_i = i;
                best_v = v;
            }
        }
        if best_v <= tol {
            continue;
        }
        work.swap(cursor, best_i);
        let (head, tail) = work.split_at_mut(cursor + 1);
        let base = &head[cursor];
        for r in tail.iter_mut() {
            let factor = r[col] / base[col];
            if factor != T::zero() {
                for (x, &b) in r.iter_mut().zip(base) {
                    *x -= factor * b;
                }
            }
        }
        pivots.push(col);
        cursor += 1;
    }
    if cursor == 0 {
        return Err(Error::RankDeficient);
    }
    let dropped = n - cursor;
    let kept: Vec<(Vec<T>, usize)> = work.into_iter().take(cursor).zip(pivots).collect();

    let mut polys = Vec::with_capacity(kept.len());
    let mut pivot_cols = Vec::with_capacity(kept.len());
    let mut leading = Vec::with_capacity(kept.len());
    let mut trailing = Vec::with_capacity(kept.len());
    let mut dust = T::zero();
    for (mut row, pc) in kept {
        // sub-tolerance residue left of the pivot is kept, not zeroed:
        // the rows must stay inside the span of the input, and for rows
        // whose content is itself near the tolerance the zeroed version
        // would leave that span by a visible relative amount
        let raw = poly_from_row(&row);
        let nrm = trig_lp_norm(&raw, p)?;
        for v in row.iter_mut() {
            *v /= nrm;
        }
        let residue = row[..pc]
            .iter()
            .fold(T::zero(), |m, &v| m.max(v.abs()));
        dust = dust.max(residue);
        let unit = poly_from_row(&row);
        pivot_cols.push(pc);
        leading.push(pc + 1);
        trailing.push(unit.degree());
        polys.push(unit);
    }
    let family = StepFamily {
        polys,
        pivot_cols,
        leading,
        trailing,
        p,
        dropped,
        dust,
    };
    family.check()?;
    Ok(family)
}

/// Largest `L_2` distance from a member of `sub` to the span of `of`.
/// Near zero in both directions certifies that two families span the
/// same subspace.
pub fn span_residual<T: Real>(sub: &[TrigPolynomial<T>], of: &[TrigPolynomial<T>]) -> T {
    let max_freq = sub
        .iter()
        .chain(of)
        .map(|r| r.degree())
        .max()
        .unwrap_or(0);
    let basis: Vec<Vec<T>> = of.iter().map(|r| ortho_coords(r, max_freq)).collect();
    let q = orthonormal_columns(&basis, T::of(1e-12));
    let mut worst = T::zero();
    for f in sub {
        let mut v = ortho_coords(f, max_freq);
        for qc in &q {
            let c = dot(qc, &v);
            v.iter_mut().zip(qc).for_each(|(x, &qx)| *x -= c * qx);
        }
        worst = worst.max(dot(&v, &v).sqrt());
    }
    worst
}

/// Smallest `L_p` distance from a unit-norm member of
/// `span(r_1..r_j)` to `span(r_{j+1}..r_{j+J})`. Exact at `p = 2` via
/// principal angles; otherwise an alternating-minimization upper bound
/// with seeded restarts.
pub fn inclination<T: Real>(family: &StepFamily<T>, j: usize, big_j: usize) -> Result<T> {
    let n = family.len();
    if j < 1 || big_j < 1 || j + big_j > n {
        return Err(Error::IndexOutOfRange {
            index: j + big_j,
            reason: format!("needs 1 <= j and j+J <= {n}"),
        });
    }
    if family.p == T::two() {
        let max_freq = family.polys.iter().map(|r| r.degree()).max().unwrap_or(0);
        let coords: Vec<Vec<T>> = family
            .polys
            .iter()
            .map(|r| ortho_coords(r, max_freq))
            .collect();
        let qa = orthonormal_columns(&coords[..j], T::of(1e-12));
        let qb = orthonormal_columns(&coords[j..j + big_j], T::of(1e-12));
        if qa.len() < j {
            return Err(Error::RankDeficient);
        }
        let cross: Vec<Vec<T>> = qb
            .iter()
            .map(|u| qa.iter().map(|v| dot(u, v)).collect())
            .collect();
        let s = sigma_max(&cross).min(T::one());
        return Ok((T::one() - s * s).max(T::zero()).sqrt());
    }
    inclination_search(family, j, big_j)
}

fn mesh_p_norm<T: Real>(vals: &[T], weights: &[T], p: T) -> T {
    vals.iter()
        .zip(weights)
        .map(|(&v, &w)| w * v.abs().powf(p))
        .sum::<T>()
        .powf(p.recip())
}

fn combo<T: Real>(rows: &[Vec<T>], x: &[T]) -> Vec<T> {
    let nodes = rows[0].len();
    let mut out = vec![T::zero(); nodes];
    for (row, &c) in rows.iter().zip(x) {
        for (o, &v) in out.iter_mut().zip(row) {
            *o += c * v;
        }
    }
    out
}

fn inclination_search<T: Real>(family: &StepFamily<T>, j: usize, big_j: usize) -> Result<T> {
    let p = family.p;
    let deg = family.polys.iter().map(|r| r.degree()).max().unwrap_or(0);
    let (nodes, weights) = g15_mesh::<T>((4 * (deg + 1)).max(8));
    let va: Vec<Vec<T>> = family.polys[..j]
        .iter()
        .map(|r| nodes.iter().map(|&x| r.eval(x)).collect())
        .collect();
    let vb: Vec<Vec<T>> = family.polys[j..j + big_j]
        .iter()
        .map(|r| nodes.iter().map(|&x| r.eval(x)).collect())
        .collect();
    let pm1 = p - T::one();

    let mut best: Option<(Vec<T>, Vec<T>, T)> = None;
    for restart in 0..INCLINATION_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x494e_434c ^ restart);
        let mut x: Vec<T> = (0..j)
            .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let nx = mesh_p_norm(&combo(&va, &x), &weights, p);
        if nx == T::zero() {
            continue;
        }
        x.iter_mut().for_each(|c| *c /= nx);
        let mut y = vec![T::zero(); big_j];
        let mut prev = T::infinity();
        for _round in 0..8 {
            let fx = combo(&va, &x);
            let res_y = descend(
                |yv: &[T], grad: Option<&mut [T]>| {
                    let gy = combo(&vb, yv);
                    let mut value = T::zero();
                    match grad {
                        None => {
                            for i in 0..fx.len() {
                                value += weights[i] * (fx[i] - gy[i]).abs().powf(p);
                            }
                        }
                        Some(gr) => {
                            gr.iter_mut().for_each(|v| *v = T::zero());
                            for i in 0..fx.len() {
                                let r = fx[i] - gy[i];
                                let mag = r.abs();
                                value += weights[i] * mag.powf(p);
                                let s = -p * weights[i] * mag.powf(pm1) * r.signum();
                                for (g, row) in gr.iter_mut().zip(&vb) {
                                    *g += s * row[i];
                                }
                            }
                        }
                    }
                    value
                },
                y.clone(),
                150,
                T::of(1e-9),
            );
            y = res_y.x;
            let gy = combo(&vb, &y);
            let res_x = descend(
                |xv: &[T], grad: Option<&mut [T]>| {
                    let fxv = combo(&va, xv);
                    let mut value = T::zero();
                    match grad {
                        None => {
                            for i in 0..fxv.len() {
                                value += weights[i] * (fxv[i] - gy[i]).abs().powf(p);
                            }
                        }
                        Some(gr) => {
                            gr.iter_mut().for_each(|v| *v = T::zero());
                            for i in 0..fxv.len() {
                                let r = fxv[i] - gy[i];
                                let mag = r.abs();
                                value += weights[i] * mag.powf(p);
                                let s = p * weights[i] * mag.powf(pm1) * r.signum();
                                for (g, row) in gr.iter_mut().zip(&va) {
                                    *g += s * row[i];
                                }
                            }
                        }
                    }
                    value
                },
                x.clone(),
                40,
                T::of(1e-9),
            );
            x = res_x.x;
            let nx = mesh_p_norm(&combo(&va, &x), &weights, p);
            if nx == T::zero() {
                break;
            }
            x.iter_mut().for_each(|c| *c /= nx);
            let cur = mesh_p_norm(
                &combo(&va, &x)
                    .iter()
                    .zip(&combo(&vb, &y))
                    .map(|(&a, &b)| a - b)
                    .collect::<Vec<_>>(),
                &weights,
                p,
            );
            if prev - cur < T::of(1e-10) {
                prev = cur;
                break;
            }
            prev = cur;
        }
        if best.as_ref().map_or(true, |b| prev < b.2) {
            best = Some((x, y, prev));
        }
    }
    let Some((x, y, _)) = best else {
        return Err(Error::RankDeficient);
    };

    let fx = move |t: T| -> T {
        family.polys[..j]
            .iter()
            .zip(&x)
            .map(|(r, &c)| c * r.eval(t))
            .sum()
    };
    let gy = move |t: T| -> T {
        family.polys[j..j + big_j]
            .iter()
            .zip(&y)
            .map(|(r, &c)| c * r.eval(t))
            .sum()
    };
    let breaks = uniform_breakpoints(T::zero(), T::one(), (4 * (deg + 1)).max(8));
    let tol = scaled_tol::<T>(QUAD_TOL);
    let dist = lp_norm_panels(|t| fx(t) - gy(t), p, &breaks, tol)?;
    let nf = lp_norm_panels(&fx, p, &breaks, tol)?;
    Ok((dist / nf).min(T::one()))
}

/// Largest `L_p` operator norm among the coordinate truncations
/// `sum_{l<=m} c_l r_l -> sum_{l<=j} c_l r_l`, `1 <= j < m`. Exact Gram
/// computation at `p = 2`; a seeded sampled lower bound otherwise.
pub fn finite_basis_constant<T: Real>(family: &StepFamily<T>, m: usize) -> Result<T> {
    check_section(family, m)?;
    if family.p != T::two() {
        return finite_basis_constant_sampled(family, m, SAMPLED_TRIALS, SAMPLED_SEED);
    }
    let max_freq = family.polys[..m]
        .iter()
        .map(|r| r.degree())
        .max()
        .unwrap_or(0);
    let coords: Vec<Vec<T>> = family.polys[..m]
        .iter()
        .map(|r| ortho_coords(r, max_freq))
        .collect();
    let gram: Vec<Vec<T>> = coords
        .iter()
        .map(|u| coords.iter().map(|v| dot(u, v)).collect())
        .collect();
    let l = cholesky(&gram, T::of(1e-12)).ok_or(Error::RankDeficient)?;
    let mut worst = T::zero();
    for jj in 1..m {
        let block: Vec<Vec<T>> = (0..jj)
            .map(|r| (0..jj).map(|c| gram[r][c]).collect())
            .collect();
        let lj = cholesky(&block, T::of(1e-12)).ok_or(Error::RankDeficient)?;
        // columns of L^{-1} E_j L_j: the truncation in whitened coordinates
        let mut cols: Vec<Vec<T>> = Vec::with_capacity(jj);
        for c in 0..jj {
            let mut rhs = vec![T::zero(); m];
            for r in 0..jj {
                rhs[r] = lj[r][c];
            }
            cols.push(forward_solve(&l, &rhs));
        }
        let rows: Vec<Vec<T>> = (0..m)
            .map(|r| cols.iter().map(|col| col[r]).collect())
            .collect();
        worst = worst.max(sigma_max(&rows));
    }
    Ok(worst)
}

/// Seeded random-search lower bound for [`finite_basis_constant`]: the
/// best truncation ratio over `trials` coefficient draws, sharpened by
/// cyclic line searches. Works for any `p`; at `p = 2` it cross-checks
/// the exact Gram value.
pub fn finite_basis_constant_sampled<T: Real>(
    family: &StepFamily<T>,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<T> {
    check_section(family, m)?;
    if trials == 0 {
        return Err(Error::invalid("sampled estimate needs at least one trial"));
    }
    let p = family.p;
    let deg = family.polys[..m]
        .iter()
        .map(|r| r.degree())
        .max()
        .unwrap_or(0);
    let (nodes, weights) = g15_mesh::<T>((4 * (deg + 1)).max(8));
    let vals: Vec<Vec<T>> = family.polys[..m]
        .iter()
        .map(|r| nodes.iter().map(|&x| r.eval(x)).collect())
        .collect();
    let ratio = |c: &[T], jj: usize| -> T {
        let den = mesh_p_norm(&combo(&vals, c), &weights, p);
        if den == T::zero() {
            return T::zero();
        }
        mesh_p_norm(&combo(&vals[..jj], &c[..jj]), &weights, p) / den
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_c: Vec<T> = Vec::new();
    let mut best_j = 1usize;
    let mut best = T::zero();
    for _ in 0..trials {
        let c: Vec<T> = (0..m)
            .map(|_| T::of(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        for jj in 1..m {
            let r = ratio(&c, jj);
            if r > best {
                best = r;
                best_j = jj;
                best_c = c.clone();
            }
        }
    }
    if best_c.is_empty() {
        return Err(Error::RankDeficient);
    }
    for _pass in 0..4 {
        for i in 0..m {
            let span = T::of(3.0) * best_c[i].abs().max(T::one());
            let center = best_c[i];
            let (arg, v) = golden_max(
                |t| {
                    let mut c2 = best_c.clone();
                    c2[i] = t;
                    ratio(&c2, best_j)
                },
                center - span,
                center + span,
                T::of(1e-10),
            );
            if v > best {
                best = v;
                best_c[i] = arg;
            }
        }
    }

    // report the refined coefficients' honest quadrature ratio
    let breaks = uniform_breakpoints(T::zero(), T::one(), (4 * (deg + 1)).max(8));
    let tol = scaled_tol::<T>(QUAD_TOL);
    let num = lp_norm_panels(
        |t| {
            family.polys[..best_j]
                .iter()
                .zip(&best_c)
                .map(|(r, &c)| c * r.eval(t))
                .sum()
        },
        p,
        &breaks,
        tol,
    )?;
    let den = lp_norm_panels(
        |t| {
            family.polys[..m]
                .iter()
                .zip(&best_c)
                .map(|(r, &c)| c * r.eval(t))
                .sum()
        },
        p,
        &breaks,
        tol,
    )?;
    if den == T::zero() {
        return Err(Error::RankDeficient);
    }
    Ok(num / den)
}

fn check_section<T: Real>(family: &StepFamily<T>, m: usize) -> Result<()> {
    if m < 2 || m > family.len() {
        return Err(Error::IndexOutOfRange {
            index: m,
            reason: format!("section size must lie in [2, {}]", family.len()),
        });
    }
    Ok(())
}
