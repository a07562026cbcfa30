//! Trigonometric series: coefficients, partial sums, matrix summation
//! methods, and the factor-2 convolution.
//!
//! The convolution in use is `(h*g)(x) = 2 int_0^1 h(x-t) g(t) dt`. With the
//! coefficient normalization `a_k = 2 int g cos(2 pi k t) dt` (and likewise
//! for `b_k`) single harmonics reproduce under convolution, and convolving a
//! function with a summation kernel agrees coefficientwise with applying the
//! matrix row to the coefficients.

use crate::error::{Error, Result};
use crate::functions::{GridFunction, InterpDegree};
use crate::quadrature::{integrate, integrate_panels, lp_norm, uniform_breakpoints};
use crate::scalar::Real;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Cosine coefficients `a_0..a_N` and sine coefficients `b_1..b_N` of a
/// trigonometric series.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs<T> {
    a: Vec<T>,
    b: Vec<T>,
}

impl<T: Real> FourierCoeffs<T> {
    /// `a` holds `a_0..a_N`; `b` holds `b_1..b_N` and so is one shorter.
    pub fn new(a: Vec<T>, b: Vec<T>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::invalid("need at least the constant coefficient"));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::invalid(format!(
                "{} cosine coefficients need {} sine coefficients, got {}",
                a.len(),
                a.len() - 1,
                b.len()
            )));
        }
        if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        Ok(Self { a, b })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self, k: usize) -> T {
        self.a.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn b(&self, k: usize) -> T {
        if k == 0 {
            T::zero()
        } else {
            self.b.get(k - 1).copied().unwrap_or_else(T::zero)
        }
    }

    /// `L_2(0,1)` norm via the coefficient identity
    /// `||g||^2 = a_0^2/4 + (1/2) sum (a_k^2 + b_k^2)`.
    pub fn l2_norm(&self) -> T {
        let mut acc = self.a[0] * self.a[0] * T::of(0.25);
        for k in 1..=self.order() {
            acc += (self.a(k) * self.a(k) + self.b(k) * self.b(k)) * T::half();
        }
        acc.sqrt()
    }
}

/// Finite trigonometric sum `a_0/2 + sum_k (a_k cos(2 pi k x) + b_k sin(2 pi k x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial<T> {
    coeffs: FourierCoeffs<T>,
    degree: usize,
}

impl<T: Real> TrigPolynomial<T> {
    pub fn from_coeffs(coeffs: FourierCoeffs<T>) -> Self {
        let mut degree = 0;
        for k in 1..=coeffs.order() {
            if coeffs.a(k) != T::zero() || coeffs.b(k) != T::zero() {
                degree = k;
            }
        }
        Self { coeffs, degree }
    }

    pub fn coeffs(&self) -> &FourierCoeffs<T> {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0 && self.coeffs.a(0) == T::zero()
    }

    /// Evaluation by rotation recurrence over the harmonics.
    pub fn eval(&self, x: T) -> T {
        let (s1, c1) = (T::TAU() * x).sin_cos();
        let mut acc = self.coeffs.a(0) * T::half();
        let mut ck = T::one();
        let mut sk = T::zero();
        for k in 1..=self.degree {
            let c_next = ck * c1 - sk * s1;
            let s_next = sk * c1 + ck * s1;
            ck = c_next;
            sk = s_next;
            acc += self.coeffs.a(k) * ck + self.coeffs.b(k) * sk;
        }
        acc
    }

    pub fn l2_norm(&self) -> T {
        self.coeffs.l2_norm()
    }
}

/// Lower-triangular summation method: row `n` holds weights `q_{n,0..n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummationMatrix<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Real> SummationMatrix<T> {
    /// Cesaro order-1 weights `q_{n,k} = 1 - k/(n+1)`.
    pub fn fejer(n_max: usize) -> Self {
        let rows = (0..=n_max)
            .map(|n| {
                (0..=n)
                    .map(|k| T::of((n + 1 - k) as f64) / T::of((n + 1) as f64))
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// Unit weights; row `n` reproduces the partial sum `S_n`.
    pub fn dirichlet(n_max: usize) -> Self {
        let rows = (0..=n_max).map(|n| vec![T::one(); n + 1]).collect();
        Self { rows }
    }

    /// Validates that row `n` has exactly `n + 1` finite weights.
    pub fn custom(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("need at least one row"));
        }
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::invalid(format!(
                    "row {n} must have {} weights, got {}",
                    n + 1,
                    row.len()
                )));
            }
            if row.iter().any(|q| !q.is_finite()) {
                return Err(Error::invalid(format!("non-finite weight in row {n}")));
            }
        }
        Ok(Self { rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Result<&[T]> {
        self.rows.get(n).map(Vec::as_slice).ok_or(Error::IndexOutOfRange {
            index: n,
            reason: format!("summation matrix has rows 0..={}", self.rows.len() - 1),
        })
    }
}

/// Coefficients of `g` up to order `n`, each computed on at least 8 panels
/// per period of its harmonic.
pub fn fourier_coeffs<T: Real, F: Fn(T) -> T>(g: F, n: usize) -> Result<FourierCoeffs<T>> {
    let tol = crate::quadrature::scaled_tol::<T>(1e-10);
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n);
    for k in 0..=n {
        let kf = T::of(k as f64);
        let panels = uniform_breakpoints(T::zero(), T::one(), 8 * k.max(1));
        let ak = integrate_panels(|t| g(t) * (T::TAU() * kf * t).cos(), &panels, tol)?;
        a.push(ak * T::two());
        if k > 0 {
            let bk = integrate_panels(|t| g(t) * (T::TAU() * kf * t).sin(), &panels, tol)?;
            b.push(bk * T::two());
        }
    }
    FourierCoeffs::new(a, b)
}

/// Partial sum `S_n`: the series truncated at harmonic `n`.
pub fn partial_sum<T: Real>(c: &FourierCoeffs<T>, n: usize) -> Result<TrigPolynomial<T>> {
    if n > c.order() {
        return Err(Error::IndexOutOfRange {
            index: n,
            reason: format!("partial sum order exceeds truncation {}", c.order()),
        });
    }
    let a = (0..=n).map(|k| c.a(k)).collect();
    let b = (1..=n).map(|k| c.b(k)).collect();
    Ok(TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b)?))
}

/// Kernel of row `n`: `q_{n,0}/2 + sum_k q_{n,k} cos(2 pi k x)`.
pub fn kernel<T: Real>(q: &SummationMatrix<T>, n: usize) -> Result<TrigPolynomial<T>> {
    let row = q.row(n)?;
    let b = vec![T::zero(); row.len() - 1];
    Ok(TrigPolynomial::from_coeffs(FourierCoeffs::new(
        row.to_vec(),
        b,
    )?))
}

/// Row `n` applied to the coefficients:
/// `q_{n,0} a_0/2 + sum_k q_{n,k} (a_k cos + b_k sin)`.
pub fn apply_summation<T: Real>(
    c: &FourierCoeffs<T>,
    q: &SummationMatrix<T>,
    n: usize,
) -> Result<TrigPolynomial<T>> {
    let row = q.row(n)?;
    if c.order() < n {
        return Err(Error::IndexOutOfRange {
            index: n,
            reason: format!("summation order exceeds coefficient truncation {}", c.order()),
        });
    }
    let a = (0..=n).map(|k| row[k] * c.a(k)).collect();
    let b = (1..=n).map(|k| row[k] * c.b(k)).collect();
    Ok(TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b)?))
}

/// Exact convolution of trigonometric polynomials by harmonic matching:
/// per-harmonic complex multiplication `(a + ib)(c + id)`, and the constant
/// coefficients multiply directly. Under the factor-2 convolution harmonics
/// of order 1 and up reproduce; the constants alone pick up a factor 2.
pub fn convolve_trig<T: Real>(h: &TrigPolynomial<T>, g: &TrigPolynomial<T>) -> TrigPolynomial<T> {
    let n = h.degree().min(g.degree());
    let hc = h.coeffs();
    let gc = g.coeffs();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n);
    a.push(hc.a(0) * gc.a(0));
    for k in 1..=n {
        a.push(hc.a(k) * gc.a(k) - hc.b(k) * gc.b(k));
        b.push(hc.a(k) * gc.b(k) + hc.b(k) * gc.a(k));
    }
    TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b).expect("finite products"))
}

/// Convolution of arbitrary 1-periodic callables, evaluated by quadrature on
/// a uniform grid of `grid` points.
pub fn convolve_grid<T: Real, H, G>(h: H, g: G, grid: usize) -> Result<GridFunction<T>>
where
    H: Fn(T) -> T,
    G: Fn(T) -> T,
{
    if grid < 4 {
        return Err(Error::invalid("need at least 4 grid points"));
    }
    let tol = T::of(1e-10);
    GridFunction::from_fn(
        |x| {
            integrate(|t| h(x - t) * g(t), T::zero(), T::one(), tol)
                .map(|v| v * T::two())
                .unwrap_or_else(|_| T::nan())
        },
        T::zero(),
        T::one(),
        grid,
        InterpDegree::Cubic,
    )
}

/// Bracket for the `L_p` operator norm of row `n`.
///
/// `upper` is twice the kernel's `L_1` norm (the convolution-operator bound
/// under the factor-2 convolution). `lower` is the largest ratio
/// `||U_n f||_p / ||f||_p` over seeded random trig polynomials of degree `n`.
pub fn summation_norm_bounds<T: Real>(
    q: &SummationMatrix<T>,
    n: usize,
    p: T,
    trials: usize,
    seed: u64,
) -> Result<(T, T)>
where
    StandardNormal: Distribution<T>,
{
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::Parameter {
            name: "p",
            value: p.lossy(),
            constraint: "must lie in (1, inf)",
        });
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let u = kernel(q, n)?;
    let breaks = uniform_breakpoints(T::zero(), T::one(), 8 * n.max(1));
    let upper = integrate_panels(|x| u.eval(x).abs(), &breaks, T::of(1e-10))? * T::two();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower = T::zero();
    for _ in 0..trials {
        let a: Vec<T> = (0..=n).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<T> = (1..=n).map(|_| rng.sample(StandardNormal)).collect();
        let f = TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b)?);
        let norm = lp_norm(|x| f.eval(x), p, T::zero(), T::one(), T::of(1e-10))?;
        if norm < T::epsilon().sqrt() {
            continue;
        }
        let img = apply_summation(f.coeffs(), q, n)?;
        let img_norm = lp_norm(|x| img.eval(x), p, T::zero(), T::one(), T::of(1e-10))?;
        lower = lower.max(img_norm / norm);
    }
    Ok((lower, upper))
}
