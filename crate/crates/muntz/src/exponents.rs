//! Exponent sequences for Müntz systems: validation, gap and summability
//! statistics, affine transforms with merges, and the admissible perturbation
//! threshold.
//!
//! A sequence enters the library either as an explicit list or as a formula
//! (`quadratic` in the index, or `lacunary` powers of a ratio). Formula
//! sequences carry an analytic bound on the reciprocal sum of their
//! unmaterialized tail so that threshold computations account for the whole
//! sequence, not just the stored prefix.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A validated, strictly increasing sequence of positive exponents plus its
/// derived statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSet<T> {
    lambdas: Vec<T>,
    alpha0: T,
    alpha1: T,
    tail_bound: Option<T>,
}

impl<T: Real> ExponentSet<T> {
    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Infimum of consecutive gaps; infinity for a single-element sequence.
    pub fn alpha0(&self) -> T {
        self.alpha0
    }

    /// Reciprocal sum over the materialized prefix.
    pub fn alpha1(&self) -> T {
        self.alpha1
    }

    /// Bound on the reciprocal sum of the unmaterialized tail. Zero for
    /// explicit lists, `None` when no analytic continuation is known.
    pub fn tail_bound(&self) -> Option<T> {
        self.tail_bound
    }
}

/// How an exponent sequence is specified before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentSpec<T> {
    /// Explicit finite list.
    List(Vec<T>),
    /// `lambda_n = a n^2 + b n + c` for `n = 1..=count`.
    Quadratic { a: T, b: T, c: T, count: usize },
    /// `lambda_n = ratio^n` for `n = 1..=count`.
    Lacunary { ratio: T, count: usize },
}

impl<T: Real> ExponentSpec<T> {
    /// Expand the description into its concrete exponent prefix.
    pub fn materialize(&self) -> Result<Vec<T>> {
        match self {
            ExponentSpec::List(v) => {
                if v.is_empty() {
                    return Err(Error::spec("empty exponent list"));
                }
                Ok(v.clone())
            }
            ExponentSpec::Quadratic { a, b, c, count } => {
                require_count(*count)?;
                if *a < T::zero() || (*a == T::zero() && *b <= T::zero()) {
                    return Err(Error::spec(
                        "quadratic sequence must grow: need a > 0, or a = 0 with b > 0",
                    ));
                }
                Ok((1..=*count)
                    .map(|n| {
                        let n = T::of(n as f64);
                        (*a * n + *b) * n + *c
                    })
                    .collect())
            }
            ExponentSpec::Lacunary { ratio, count } => {
                require_count(*count)?;
                if !(*ratio > T::one()) {
                    return Err(Error::spec("lacunary ratio must exceed 1"));
                }
                Ok((1..=*count).map(|n| ratio.powi(n as i32)).collect())
            }
        }
    }

    /// Analytic bound on `sum 1/lambda_n` beyond the stored prefix.
    fn tail_bound(&self) -> Result<T> {
        match self {
            ExponentSpec::List(_) => Ok(T::zero()),
            ExponentSpec::Quadratic { a, b, c, count } => {
                quadratic_tail_bound(*a, *b, *c, *count)
            }
            ExponentSpec::Lacunary { ratio, count } => {
                // geometric: sum_{n > count} r^-n = r^-count / (r - 1)
                Ok(ratio.powi(-(*count as i32)) / (*ratio - T::one()))
            }
        }
    }
}

fn require_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::spec("count must be at least 1"));
    }
    Ok(())
}

/// Integral-test bound for `sum_{n > N} 1/(a n^2 + b n + c)`.
fn quadratic_tail_bound<T: Real>(a: T, b: T, c: T, count: usize) -> Result<T> {
    let n = T::of(count as f64);
    if a == T::zero() {
        // linear growth: reciprocal tail diverges
        return Ok(T::infinity());
    }
    let disc = T::of(4.0) * a * c - b * b;
    if disc > T::zero() {
        let root = disc.sqrt();
        let at = ((T::two() * a * n + b) / root).atan();
        Ok(T::two() / root * (T::FRAC_PI_2() - at))
    } else if disc == T::zero() {
        let denom = T::two() * a * n + b;
        if denom <= T::zero() {
            return Err(Error::spec("quadratic decreasing at the prefix end"));
        }
        Ok(T::two() / denom)
    } else {
        let root = (-disc).sqrt();
        let r_hi = (-b + root) / (T::two() * a);
        let r_lo = (-b - root) / (T::two() * a);
        if n <= r_hi {
            return Err(Error::spec(
                "quadratic has a real root beyond the stored prefix; tail bound undefined",
            ));
        }
        Ok(((n - r_lo) / (n - r_hi)).ln() / (a * (r_hi - r_lo)))
    }
}

impl<T: Real> FromStr for ExponentSpec<T> {
    type Err = Error;

    /// Grammar: `list:1,4,9` | `quad:a,b,c,count` | `lac:ratio,count`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::spec(format!("missing ':' in '{s}'")))?;
        let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
        let num = |field: &str| -> Result<T> {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(T::of)
                .ok_or_else(|| Error::spec(format!("invalid number '{field}'")))
        };
        let int = |field: &str| -> Result<usize> {
            field
                .parse::<usize>()
                .map_err(|_| Error::spec(format!("invalid count '{field}'")))
        };
        match kind.trim() {
            "list" => Ok(ExponentSpec::List(
                fields.iter().map(|f| num(f)).collect::<Result<_>>()?,
            )),
            "quad" => {
                if fields.len() != 4 {
                    return Err(Error::spec("quad takes exactly a,b,c,count"));
                }
                Ok(ExponentSpec::Quadratic {
                    a: num(fields[0])?,
                    b: num(fields[1])?,
                    c: num(fields[2])?,
                    count: int(fields[3])?,
                })
            }
            "lac" => {
                if fields.len() != 2 {
                    return Err(Error::spec("lac takes exactly ratio,count"));
                }
                Ok(ExponentSpec::Lacunary {
                    ratio: num(fields[0])?,
                    count: int(fields[1])?,
                })
            }
            other => Err(Error::spec(format!(
                "unknown exponent spec kind '{other}' (expected list, quad or lac)"
            ))),
        }
    }
}

/// Validate a spec into an [`ExponentSet`]: positivity, strict monotonicity,
/// gap infimum, prefix reciprocal sum, tail bound.
pub fn validate_exponents<T: Real>(spec: &ExponentSpec<T>) -> Result<ExponentSet<T>> {
    let lambdas = spec.materialize()?;
    for (i, l) in lambdas.iter().enumerate() {
        if !l.is_finite() {
            return Err(Error::spec(format!("non-finite exponent at index {i}")));
        }
        if !(*l > T::zero()) {
            return Err(Error::NonPositiveExponent { index: i });
        }
    }
    for i in 1..lambdas.len() {
        if !(lambdas[i] > lambdas[i - 1]) {
            return Err(Error::NotIncreasing { index: i });
        }
    }
    let alpha0 = gap_infimum(&lambdas);
    let alpha1 = lambdas.iter().map(|l| l.recip()).sum();
    let tail_bound = Some(spec.tail_bound()?);
    Ok(ExponentSet {
        lambdas,
        alpha0,
        alpha1,
        tail_bound,
    })
}

fn gap_infimum<T: Real>(lambdas: &[T]) -> T {
    lambdas
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(T::infinity(), |m, g| m.min(g))
}

/// Map `lambda -> alpha * lambda + beta` and merge the finite set `xi`,
/// preserving validity. Exact coincidences are collisions and rejected.
pub fn transform_exponents<T: Real>(
    set: &ExponentSet<T>,
    alpha: T,
    beta: T,
    xi: &[T],
) -> Result<ExponentSet<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha.lossy(),
            constraint: "alpha > 0",
        });
    }
    if !(beta >= T::zero()) || !beta.is_finite() {
        return Err(Error::Parameter {
            name: "beta",
            value: beta.lossy(),
            constraint: "beta >= 0",
        });
    }
    for x in xi {
        if !(*x > T::zero()) || !x.is_finite() {
            return Err(Error::invalid("merged exponents must be positive and finite"));
        }
    }
    let mut merged: Vec<T> = set
        .lambdas
        .iter()
        .map(|l| alpha * *l + beta)
        .chain(xi.iter().copied())
        .collect();
    merged.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in merged.windows(2) {
        if w[0] == w[1] {
            return Err(Error::ExponentCollision {
                value: w[0].lossy(),
            });
        }
    }
    let alpha0 = gap_infimum(&merged);
    let alpha1 = merged.iter().map(|l| l.recip()).sum();
    // 1/(alpha*l + beta) <= 1/(alpha*l), so the scaled bound still covers the
    // transformed tail; the finite merge adds nothing beyond the prefix.
    let tail_bound = set.tail_bound.map(|t| t / alpha);
    Ok(ExponentSet {
        lambdas: merged,
        alpha0,
        alpha1,
        tail_bound,
    })
}

/// Largest uniform exponent shift known to keep the perturbed system
/// isomorphic: `1 / (8 (alpha1 + tail))`. A lower bound for the sharp
/// threshold; zero when the reciprocal sum is unbounded.
pub fn perturbation_threshold<T: Real>(set: &ExponentSet<T>) -> T {
    let total = set.alpha1 + set.tail_bound.unwrap_or(T::zero());
    (T::of(8.0) * total).recip()
}
