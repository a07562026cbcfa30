//! Exponent-perturbation chains: stepwise flips from a base exponent
//! sequence to a lifted one, the induced substitution operators on Müntz
//! polynomials, and their `L_p` norm bounds.

use crate::error::{Error, Result};
use crate::exponents::{perturbation_threshold, ExponentSet};
use crate::functions::MuntzPolynomial;
use crate::quadrature::{lp_norm, scaled_tol};
use crate::scalar::Real;

const QUAD_TOL: f64 = 1e-10;

/// `2^{2 + 1/p}`, the per-step operator-norm constant.
pub fn step_constant<T: Real>(p: T) -> T {
    T::two().powf(T::two() + p.recip())
}

/// A monotone chain of exponent sequences from a base to a lifted set.
/// `steps` holds the K+1 stages; step `k` changes stage `k` into stage
/// `k+1` by raising the coordinates listed in `theta[k]` (0-based), with
/// the shift amounts in `deltas[k]` and `m[k]` the 1-based first changed
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct UpsilonChain<T> {
    steps: Vec<Vec<T>>,
    deltas: Vec<Vec<T>>,
    theta: Vec<Vec<usize>>,
    m: Vec<usize>,
}

impl<T: Real> UpsilonChain<T> {
    /// Assembles a chain from raw stages and runs [`UpsilonChain::check`].
    pub fn from_parts(
        steps: Vec<Vec<T>>,
        deltas: Vec<Vec<T>>,
        theta: Vec<Vec<usize>>,
        m: Vec<usize>,
    ) -> Result<Self> {
        let chain = UpsilonChain {
            steps,
            deltas,
            theta,
            m,
        };
        chain.check()?;
        Ok(chain)
    }

    /// Number of steps K (one less than the number of stages).
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn stages(&self) -> &[Vec<T>] {
        &self.steps
    }

    pub fn stage(&self, k: usize) -> Result<&[T]> {
        self.steps
            .get(k)
            .map(|s| s.as_slice())
            .ok_or_else(|| Error::IndexOutOfRange {
                index: k,
                reason: format!("chain has {} stages", self.steps.len()),
            })
    }

    pub fn deltas(&self) -> &[Vec<T>] {
        &self.deltas
    }

    pub fn theta(&self) -> &[Vec<usize>] {
        &self.theta
    }

    /// 1-based first changed index per step.
    pub fn first_changed(&self) -> &[usize] {
        &self.m
    }

    /// Verifies the chain conditions: every stage coordinate comes from
    /// the base or the target (1); stages are coordinatewise monotone (2);
    /// each step's shift list is nonincreasing (3); the first-changed
    /// indices strictly increase across steps (4). Also checks structural
    /// consistency of `deltas`, `theta`, and `m` against the stages.
    pub fn check(&self) -> Result<()> {
        let stages = &self.steps;
        if stages.is_empty() {
            return Err(Error::invalid("chain needs at least one stage"));
        }
        let width = stages[0].len();
        if stages.iter().any(|s| s.len() != width) {
            return Err(Error::invalid("chain stages differ in length"));
        }
        let k_steps = stages.len() - 1;
        if self.deltas.len() != k_steps || self.theta.len() != k_steps || self.m.len() != k_steps {
            return Err(Error::invalid(
                "chain step metadata does not match the stage count",
            ));
        }
        let base = &stages[0];
        let target = stages.last().unwrap();
        for (k, stage) in stages.iter().enumerate() {
            for i in 1..width {
                if stage[i - 1] >= stage[i] {
                    return Err(Error::invalid(format!(
                        "stage {k} not strictly increasing at index {i}"
                    )));
                }
            }
            for i in 0..width {
                let v = stage[i];
                if v != base[i] && v != target[i] {
                    return Err(Error::invalid(format!(
                        "stage {k} coordinate {i} is neither the base nor the target value"
                    )));
                }
            }
        }
        for k in 0..k_steps {
            let (cur, next) = (&stages[k], &stages[k + 1]);
            let mut changed = Vec::new();
            for i in 0..width {
                if next[i] < cur[i] {
                    return Err(Error::invalid(format!(
                        "step {k} lowers coordinate {i}"
                    )));
                }
                if next[i] > cur[i] {
                    changed.push(i);
                }
            }
            if self.theta[k] != changed {
                return Err(Error::invalid(format!(
                    "step {k} shift positions disagree with the stages"
                )));
            }
            if self.deltas[k].len() != changed.len() {
                return Err(Error::invalid(format!(
                    "step {k} shift list length disagrees with the stages"
                )));
            }
            for (j, &i) in changed.iter().enumerate() {
                let d = next[i] - cur[i];
                if (self.deltas[k][j] - d).abs() > T::epsilon() * T::of(16.0) * d.abs().max(T::one())
                {
                    return Err(Error::invalid(format!(
                        "step {k} shift amount at coordinate {i} disagrees with the stages"
                    )));
                }
            }
            for j in 1..self.deltas[k].len() {
                if self.deltas[k][j] > self.deltas[k][j - 1] {
                    return Err(Error::invalid(format!(
                        "step {k} shift list not nonincreasing"
                    )));
                }
            }
            if let Some(&first) = changed.first() {
                if self.m[k] != first + 1 {
                    return Err(Error::invalid(format!(
                        "step {k} first-changed index disagrees with the stages"
                    )));
                }
            }
            if k > 0 && self.m[k] <= self.m[k - 1] {
                return Err(Error::invalid(format!(
                    "first-changed indices not strictly increasing at step {k}"
                )));
            }
        }
        Ok(())
    }
}

/// Builds the one-flip-per-step chain from `lam` to `ups`: coordinates
/// with a nonzero shift are raised one at a time in increasing index
/// order. Equal sets produce an empty chain.
pub fn build_upsilon_chain<T: Real>(
    lam: &ExponentSet<T>,
    ups: &ExponentSet<T>,
) -> Result<UpsilonChain<T>> {
    let base = lam.lambdas();
    let target = ups.lambdas();
    if base.len() != target.len() {
        return Err(Error::ExponentMismatch {
            reason: format!(
                "base and target lengths differ: {} vs {}",
                base.len(),
                target.len()
            ),
        });
    }
    let mut sup_shift = T::zero();
    for (i, (&l, &u)) in base.iter().zip(target).enumerate() {
        if l > u {
            return Err(Error::invalid(format!(
                "base exponent exceeds target at index {i}"
            )));
        }
        sup_shift = sup_shift.max(u - l);
    }
    let threshold = perturbation_threshold(lam);
    if sup_shift >= threshold {
        return Err(Error::invalid(format!(
            "sup shift {sup_shift} is not below the perturbation threshold {threshold}"
        )));
    }

    let mut steps = vec![base.to_vec()];
    let mut deltas = Vec::new();
    let mut theta = Vec::new();
    let mut m = Vec::new();
    let mut cur = base.to_vec();
    for i in 0..base.len() {
        if target[i] > base[i] {
            cur[i] = target[i];
            if i + 1 < cur.len() && cur[i] >= cur[i + 1] {
                return Err(Error::invalid(format!(
                    "flipping coordinate {i} breaks the increasing order of stage {}",
                    steps.len()
                )));
            }
            steps.push(cur.clone());
            deltas.push(vec![target[i] - base[i]]);
            theta.push(vec![i]);
            m.push(i + 1);
        }
    }
    let chain = UpsilonChain {
        steps,
        deltas,
        theta,
        m,
    };
    chain.check()?;
    Ok(chain)
}

/// Output of [`step_operator`]: the substituted polynomial, the measured
/// `L_p(0,1)` distance, and its analytic bound.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult<T> {
    pub f_next: MuntzPolynomial<T>,
    pub lhs: T,
    pub bound: T,
}

fn map_terms<T: Real>(
    f: &MuntzPolynomial<T>,
    cur: &[T],
    next: &[T],
) -> Result<Vec<(T, T)>> {
    let mut out = Vec::with_capacity(f.terms().len());
    for &(c, e) in f.terms() {
        let slot = cur.iter().position(|&v| {
            (v - e).abs() <= T::epsilon() * T::of(16.0) * v.abs().max(T::one())
        });
        let Some(i) = slot else {
            return Err(Error::ExponentMismatch {
                reason: format!("polynomial exponent {e} is not a coordinate of the stage"),
            });
        };
        out.push((c, next[i]));
    }
    Ok(out)
}

fn apply_step<T: Real>(
    f: &MuntzPolynomial<T>,
    chain: &UpsilonChain<T>,
    k: usize,
) -> Result<MuntzPolynomial<T>> {
    if k >= chain.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            reason: format!("chain has {} steps", chain.len()),
        });
    }
    let terms = map_terms(f, &chain.steps[k], &chain.steps[k + 1])?;
    MuntzPolynomial::new(terms, f.domain())
}

/// Applies step `k` of the chain to `f` and reports the measured
/// substitution distance together with the bound
/// `2^{2+1/p} ||f||_p Delta_k / lambda_{m(k)}`.
pub fn step_operator<T: Real>(
    f: &MuntzPolynomial<T>,
    chain: &UpsilonChain<T>,
    k: usize,
    p: T,
) -> Result<StepResult<T>> {
    let f_next = apply_step(f, chain, k)?;
    if chain.deltas[k].is_empty() {
        return Ok(StepResult {
            f_next,
            lhs: T::zero(),
            bound: T::zero(),
        });
    }
    let tol = scaled_tol::<T>(QUAD_TOL);
    let lhs = lp_norm(
        |t| f.call(t) - f_next.call(t),
        p,
        T::zero(),
        T::one(),
        tol,
    )?;
    let norm_f = lp_norm(|t| f.call(t), p, T::zero(), T::one(), tol)?;
    let idx = chain.m[k] - 1;
    let delta = chain.deltas[k][0];
    let lam_m = chain.steps[k][idx];
    let bound = step_constant(p) * norm_f * delta / lam_m;
    Ok(StepResult { f_next, lhs, bound })
}

/// Pushes `f` through the whole chain from `lam` to `ups` and returns the
/// final polynomial together with the accumulated per-unit-norm bound
/// `sum_k 2^{2+1/p} Delta_k / lambda_{m(k)}`.
pub fn compose_s<T: Real>(
    lam: &ExponentSet<T>,
    ups: &ExponentSet<T>,
    f: &MuntzPolynomial<T>,
    p: T,
) -> Result<(MuntzPolynomial<T>, T)> {
    let chain = build_upsilon_chain(lam, ups)?;
    let mut sup_shift = T::zero();
    for (&l, &u) in lam.lambdas().iter().zip(ups.lambdas()) {
        sup_shift = sup_shift.max(u - l);
    }
    // smallness regime: sup shift times the reciprocal sum stays below 1/8
    let recip_sum = lam.alpha1() + lam.tail_bound().unwrap_or(T::zero());
    if sup_shift * recip_sum >= T::of(0.125) {
        return Err(Error::invalid(format!(
            "shift {sup_shift} times reciprocal sum {recip_sum} reaches 1/8"
        )));
    }
    let c = step_constant(p);
    let mut cur = f.clone();
    let mut total = T::zero();
    for k in 0..chain.len() {
        cur = apply_step(&cur, &chain, k)?;
        let idx = chain.m[k] - 1;
        total += c * chain.deltas[k][0] / chain.steps[k][idx];
    }
    Ok((cur, total))
}
