//! Function carriers and change-of-variable operators.
//!
//! [`MuntzPolynomial`] holds finite sums of real-power monomials on a
//! subinterval of `[0, 1]`; [`GridFunction`] carries sampled functions that
//! no longer have a closed form after composition. The free functions
//! implement substitution operators, the difference-basis coefficient
//! transform, and two empirical inequality checks.

use crate::error::{Error, Result};
use crate::exponents::ExponentSet;
use crate::optim::golden_max;
use crate::quadrature::lp_norm;
use crate::scalar::Real;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Finite sum of terms `c * t^lambda` with nonnegative real exponents, on a
/// domain `[a, b]` inside `[0, 1]`.
///
/// Exponent zero is admitted so that derivatives of linear terms stay
/// representable. Terms are kept sorted by exponent with duplicates merged
/// and zero coefficients dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct MuntzPolynomial<T> {
    terms: Vec<(T, T)>,
    domain: (T, T),
}

impl<T: Real> MuntzPolynomial<T> {
    pub fn new(terms: Vec<(T, T)>, domain: (T, T)) -> Result<Self> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && T::zero() <= lo && lo < hi && hi <= T::one()) {
            return Err(Error::invalid(format!(
                "domain [{lo}, {hi}] must satisfy 0 <= a < b <= 1"
            )));
        }
        let mut cleaned: Vec<(T, T)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            if !c.is_finite() || !e.is_finite() {
                return Err(Error::invalid(format!("non-finite term ({c}, {e})")));
            }
            if e < T::zero() {
                return Err(Error::invalid(format!("negative exponent {e}")));
            }
            if c != T::zero() {
                cleaned.push((c, e));
            }
        }
        cleaned.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let mut merged: Vec<(T, T)> = Vec::with_capacity(cleaned.len());
        for (c, e) in cleaned {
            match merged.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|&(c, _)| c != T::zero());
        Ok(Self {
            terms: merged,
            domain,
        })
    }

    /// Polynomial on the full interval `[0, 1]`.
    pub fn on_unit(terms: Vec<(T, T)>) -> Result<Self> {
        Self::new(terms, (T::zero(), T::one()))
    }

    pub fn terms(&self) -> &[(T, T)] {
        &self.terms
    }

    pub fn domain(&self) -> (T, T) {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluation without the domain check, for use as a quadrature
    /// integrand where the interval is already validated.
    pub fn call(&self, t: T) -> T {
        let mut acc = T::zero();
        for &(c, e) in &self.terms {
            acc += c * t.powf(e);
        }
        acc
    }

    pub fn eval(&self, t: T) -> Result<T> {
        let (lo, hi) = self.domain;
        if !(t >= lo && t <= hi) {
            return Err(Error::OutsideDomain {
                t: t.lossy(),
                lo: lo.lossy(),
                hi: hi.lossy(),
            });
        }
        Ok(self.call(t))
    }

    /// Term-wise analytic derivative.
    ///
    /// Exponents in `(0, 1)` would differentiate to negative powers, which
    /// this representation excludes, so they are rejected.
    pub fn derivative(&self) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(c, e) in &self.terms {
            if e == T::zero() {
                continue;
            }
            if e < T::one() {
                return Err(Error::invalid(format!(
                    "derivative of exponent {e} would leave the admissible range"
                )));
            }
            terms.push((c * e, e - T::one()));
        }
        Ok(Self {
            terms,
            domain: self.domain,
        })
    }

    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        if factor == T::zero() {
            out.terms.clear();
        } else {
            for term in &mut out.terms {
                term.0 *= factor;
            }
        }
        out
    }
}

/// Substitution `t -> t^alpha`: exponents scale by `alpha`, coefficients are
/// unchanged, and the domain maps to `[a^(1/alpha), b^(1/alpha)]`.
pub fn compose_q_alpha<T: Real>(f: &MuntzPolynomial<T>, alpha: T) -> Result<MuntzPolynomial<T>> {
    if !(alpha.is_finite() && alpha > T::zero()) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha.lossy(),
            constraint: "must be positive and finite",
        });
    }
    let (lo, hi) = f.domain;
    let inv = T::one() / alpha;
    let terms = f.terms.iter().map(|&(c, e)| (c, e * alpha)).collect();
    MuntzPolynomial::new(terms, (lo.powf(inv), hi.powf(inv)))
}

/// `h(t) = f(t) - f(t^2)`, with exactly coinciding exponents cancelled.
/// The domain shrinks to `[sqrt(a), b]` so that both `t` and `t^2` stay
/// inside the domain of `f`.
pub fn z_projection<T: Real>(f: &MuntzPolynomial<T>) -> Result<MuntzPolynomial<T>> {
    let (lo, hi) = f.domain;
    let new_lo = lo.sqrt();
    if new_lo >= hi {
        return Err(Error::invalid(format!(
            "domain [{lo}, {hi}] leaves no room for both t and t^2"
        )));
    }
    let mut terms: Vec<(T, T)> = f.terms.clone();
    terms.extend(f.terms.iter().map(|&(c, e)| (-c, e * T::two())));
    MuntzPolynomial::new(terms, (new_lo, hi))
}

/// Interpolation rule of a [`GridFunction`]: piecewise polynomial of local
/// degree 1 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpDegree {
    Linear,
    Cubic,
}

/// Sampled function with local polynomial interpolation between nodes.
#[derive(Debug, Clone)]
pub struct GridFunction<T> {
    nodes: Vec<T>,
    values: Vec<T>,
    degree: InterpDegree,
}

impl<T: Real> GridFunction<T> {
    pub fn from_data(nodes: Vec<T>, values: Vec<T>, degree: InterpDegree) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        let min = match degree {
            InterpDegree::Linear => 2,
            InterpDegree::Cubic => 4,
        };
        if nodes.len() < min {
            return Err(Error::invalid(format!(
                "need at least {min} nodes, got {}",
                nodes.len()
            )));
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid("nodes must be strictly increasing"));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite sample value"));
        }
        Ok(Self {
            nodes,
            values,
            degree,
        })
    }

    /// Samples `f` on `n` uniform nodes over `[a, b]`.
    pub fn from_fn<F: Fn(T) -> T>(
        f: F,
        a: T,
        b: T,
        n: usize,
        degree: InterpDegree,
    ) -> Result<Self> {
        if !(a < b) {
            return Err(Error::invalid(format!("empty interval [{a}, {b}]")));
        }
        let step = (b - a) / T::of((n.max(2) - 1) as f64);
        let nodes: Vec<T> = (0..n.max(2)).map(|i| a + step * T::of(i as f64)).collect();
        let values = nodes.iter().map(|&t| f(t)).collect();
        Self::from_data(nodes, values, degree)
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn degree(&self) -> InterpDegree {
        self.degree
    }

    pub fn domain(&self) -> (T, T) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    /// Jump a 1-periodic extension would have at the seam.
    pub fn endpoint_mismatch(&self) -> T {
        (self.values[0] - *self.values.last().unwrap()).abs()
    }

    fn lagrange(&self, start: usize, len: usize, t: T) -> T {
        let xs = &self.nodes[start..start + len];
        let ys = &self.values[start..start + len];
        let mut acc = T::zero();
        for i in 0..len {
            let mut w = ys[i];
            for j in 0..len {
                if i != j {
                    w *= (t - xs[j]) / (xs[i] - xs[j]);
                }
            }
            acc += w;
        }
        acc
    }

    fn eval_local(&self, t: T) -> T {
        let n = self.nodes.len();
        // index of the interval containing t
        let i = match self.nodes.iter().position(|&x| x > t) {
            Some(0) => 0,
            Some(k) => k - 1,
            None => n - 2,
        };
        match self.degree {
            InterpDegree::Linear => self.lagrange(i, 2, t),
            InterpDegree::Cubic => {
                let start = i.saturating_sub(1).min(n - 4);
                self.lagrange(start, 4, t)
            }
        }
    }

    pub fn eval(&self, t: T) -> Result<T> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutsideDomain {
                t: t.lossy(),
                lo: lo.lossy(),
                hi: hi.lossy(),
            });
        }
        Ok(self.eval_local(t))
    }

    /// Evaluation of the periodic extension with period `b - a`.
    pub fn eval_periodic(&self, t: T) -> T {
        let (lo, hi) = self.domain();
        let period = hi - lo;
        let mut u = (t - lo) - ((t - lo) / period).floor() * period;
        if u < T::zero() {
            u += period;
        }
        self.eval_local(lo + u)
    }
}

/// Default node count for [`compose_sigma`].
pub const SIGMA_GRID: usize = 4096;

/// Composes `h` with the affine map `sigma(x) = delta^2 + x(1 - delta^2)` and
/// samples the result on a uniform grid over `[0, 1]`. The seam jump of the
/// periodic extension is available as [`GridFunction::endpoint_mismatch`].
pub fn compose_sigma<T: Real, F: Fn(T) -> T>(h: F, delta: T) -> Result<GridFunction<T>> {
    compose_sigma_with(h, delta, SIGMA_GRID, InterpDegree::Cubic)
}

pub fn compose_sigma_with<T: Real, F: Fn(T) -> T>(
    h: F,
    delta: T,
    n: usize,
    degree: InterpDegree,
) -> Result<GridFunction<T>> {
    if !(delta > T::half() && delta < T::one()) {
        return Err(Error::Parameter {
            name: "delta",
            value: delta.lossy(),
            constraint: "must lie in (1/2, 1)",
        });
    }
    let d2 = delta * delta;
    GridFunction::from_fn(
        |x| h(d2 + x * (T::one() - d2)),
        T::zero(),
        T::one(),
        n,
        degree,
    )
}

/// `k`-th difference-basis element over the exponent set (1-based):
/// `u_1 = z^(lambda_1)`, `u_(k+1) = z^(lambda_(k+1)) - z^(lambda_k)`.
pub fn u_basis<T: Real>(set: &ExponentSet<T>, k: usize) -> Result<MuntzPolynomial<T>> {
    let l = set.lambdas();
    if k == 0 || k > l.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            reason: format!("1-based difference-basis index over {} exponents", l.len()),
        });
    }
    if k == 1 {
        MuntzPolynomial::on_unit(vec![(T::one(), l[0])])
    } else {
        MuntzPolynomial::on_unit(vec![(-T::one(), l[k - 2]), (T::one(), l[k - 1])])
    }
}

/// Coefficients of `f` in the difference basis, computed as tail sums
/// `p_k = sum_(j>=k) c_j` over the monomial coefficients. With that
/// convention `sum_k p_k u_k` telescopes back to `f` exactly.
///
/// The exponents of `f` must all occur in the set; missing prefix positions
/// contribute zero coefficients.
pub fn difference_rep<T: Real>(f: &MuntzPolynomial<T>, set: &ExponentSet<T>) -> Result<Vec<T>> {
    let lambdas = set.lambdas();
    let mut c: Vec<T> = Vec::new();
    for &(coeff, e) in f.terms() {
        match lambdas.iter().position(|&l| l == e) {
            Some(i) => {
                if c.len() < i + 1 {
                    c.resize(i + 1, T::zero());
                }
                c[i] = coeff;
            }
            None => {
                return Err(Error::ExponentMismatch {
                    reason: format!("exponent {e} does not occur in the registered set"),
                })
            }
        }
    }
    let mut p = vec![T::zero(); c.len()];
    let mut acc = T::zero();
    for k in (0..c.len()).rev() {
        acc += c[k];
        p[k] = acc;
    }
    Ok(p)
}

/// Maximum of `t^lambda - t^(lambda + 2 delta_shift)` over `[0, 1]` found by
/// golden-section search, together with the bound `2 delta_shift / lambda`.
/// The first component never exceeds the second for `lambda >= 1`.
pub fn monomial_gap_bound_check<T: Real>(lambda: T, delta_shift: T) -> Result<(T, T)> {
    if !(lambda.is_finite() && lambda > T::zero()) {
        return Err(Error::Parameter {
            name: "lambda",
            value: lambda.lossy(),
            constraint: "must be positive and finite",
        });
    }
    if !(delta_shift.is_finite() && delta_shift > T::zero()) {
        return Err(Error::Parameter {
            name: "delta_shift",
            value: delta_shift.lossy(),
            constraint: "must be positive and finite",
        });
    }
    let two_shift = T::two() * delta_shift;
    let g = |t: T| t.powf(lambda) - t.powf(lambda + two_shift);
    let (_, sup) = golden_max(g, T::zero(), T::one(), T::of(1e-12));
    Ok((sup, two_shift / lambda))
}

/// Result of [`remez_ratio`]: the largest observed norm ratio and how many
/// samples were discarded for a vanishing denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemezRatio<T> {
    pub ratio: T,
    pub skipped: usize,
}

/// Empirical lower bound for the constant comparing `L_p[0, delta]` and
/// `L_p[delta, 1]` norms over the span of the exponent set: the maximum of
/// the norm ratio over `samples` random coefficient draws (standard normal,
/// seeded).
pub fn remez_ratio<T: Real>(
    e: &ExponentSet<T>,
    delta: T,
    p: T,
    samples: usize,
    seed: u64,
) -> Result<RemezRatio<T>>
where
    StandardNormal: Distribution<T>,
{
    if !(delta > T::zero() && delta < T::one()) {
        return Err(Error::Parameter {
            name: "delta",
            value: delta.lossy(),
            constraint: "must lie in (0, 1)",
        });
    }
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::Parameter {
            name: "p",
            value: p.lossy(),
            constraint: "must lie in (1, inf)",
        });
    }
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = T::of(1e-10);
    let floor = T::epsilon().sqrt();
    let mut best = T::zero();
    let mut skipped = 0usize;
    for _ in 0..samples {
        let terms: Vec<(T, T)> = e
            .lambdas()
            .iter()
            .map(|&l| (rng.sample(StandardNormal), l))
            .collect();
        let h = MuntzPolynomial::on_unit(terms)?;
        let den = lp_norm(|t| h.call(t), p, delta, T::one(), tol)?;
        if den < floor {
            skipped += 1;
            continue;
        }
        let num = lp_norm(|t| h.call(t), p, T::zero(), delta, tol)?;
        best = best.max(num / den);
    }
    Ok(RemezRatio {
        ratio: best,
        skipped,
    })
}
