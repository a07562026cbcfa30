//! Fractional trigonometric derivatives driven by a weight sequence `psi`
//! and a phase parameter `beta`.
//!
//! The derivative maps the `k`-th harmonic by a phase shift of `beta pi / 2`
//! and division by `psi(k)`; reconstruction convolves with a kernel at the
//! opposite phase carrying the weights `psi(k)`, which restores the original
//! harmonics exactly.

use crate::error::{Error, Result};
use crate::fourier::{FourierCoeffs, TrigPolynomial};
use crate::scalar::Real;

/// Weight sequence: either the power law `psi(k) = k^(-gamma)` or an
/// explicit table of values for `k = 1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub enum Psi<T> {
    PowerLaw { gamma: T },
    Table(Vec<T>),
}

/// A weight sequence paired with the phase parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiBetaSpec<T> {
    psi: Psi<T>,
    beta: T,
}

impl<T: Real> PsiBetaSpec<T> {
    /// `psi(k) = k^(-gamma)` with `gamma > 0` so the weights decrease to 0.
    pub fn power_law(gamma: T, beta: T) -> Result<Self> {
        if !(gamma.is_finite() && gamma > T::zero()) {
            return Err(Error::Parameter {
                name: "gamma",
                value: gamma.lossy(),
                constraint: "must be positive and finite",
            });
        }
        if !beta.is_finite() {
            return Err(Error::Parameter {
                name: "beta",
                value: beta.lossy(),
                constraint: "must be finite",
            });
        }
        Ok(Self {
            psi: Psi::PowerLaw { gamma },
            beta,
        })
    }

    /// Explicit weights for `k = 1..=values.len()`, all positive.
    pub fn table(values: Vec<T>, beta: T) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("weight table must be nonempty"));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::invalid(format!(
                    "weight psi({}) = {v} must be positive and finite",
                    i + 1
                )));
            }
        }
        if !beta.is_finite() {
            return Err(Error::Parameter {
                name: "beta",
                value: beta.lossy(),
                constraint: "must be finite",
            });
        }
        Ok(Self {
            psi: Psi::Table(values),
            beta,
        })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Weight at harmonic `k >= 1`.
    pub fn psi(&self, k: usize) -> Result<T> {
        if k == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                reason: "weights are defined for k >= 1".into(),
            });
        }
        match &self.psi {
            Psi::PowerLaw { gamma } => Ok(T::of(k as f64).powf(-*gamma)),
            Psi::Table(v) => v.get(k - 1).copied().ok_or(Error::IndexOutOfRange {
                index: k,
                reason: format!("weight table covers k <= {}", v.len()),
            }),
        }
    }

    /// The weights for `k = 1..=n`, e.g. as input to [`check_f1`].
    pub fn psi_prefix(&self, n: usize) -> Result<Vec<T>> {
        (1..=n).map(|k| self.psi(k)).collect()
    }

    fn phase(&self) -> (T, T) {
        (self.beta * T::FRAC_PI_2()).sin_cos()
    }
}

/// Admissibility report for a finite weight prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F1Report {
    pub positive: bool,
    pub nonincreasing: bool,
    pub convex: bool,
    pub sum_bounded: bool,
    /// 1-based index and short label of the first failed condition.
    pub first_violation: Option<(usize, &'static str)>,
}

impl F1Report {
    pub fn is_member_prefix(&self) -> bool {
        self.positive && self.nonincreasing && self.convex && self.sum_bounded
    }
}

/// Checks a weight prefix `psi(1..=K)` for admissibility: positivity,
/// monotone decrease, second-difference nonnegativity, and bounded partial
/// sums of `psi(k)/k`. The verdict applies to the prefix only.
///
/// Boundedness is judged by condensation: the sums converge iff
/// `sum_m psi(2^m)` does, so the dyadic ratios `psi(2^(m+1))/psi(2^m)` must
/// fall below 1; slowly diverging weights like `1/ln` hold ratios near 1.
pub fn check_f1<T: Real>(psi: &[T]) -> Result<F1Report> {
    let k_len = psi.len();
    if k_len < 3 {
        return Err(Error::invalid("need at least 3 weights"));
    }
    let mut report = F1Report {
        positive: true,
        nonincreasing: true,
        convex: true,
        sum_bounded: true,
        first_violation: None,
    };
    let note = |report: &mut F1Report, k: usize, label: &'static str| {
        if report.first_violation.is_none() {
            report.first_violation = Some((k, label));
        }
    };
    for (i, &v) in psi.iter().enumerate() {
        if !(v.is_finite() && v > T::zero()) {
            report.positive = false;
            note(&mut report, i + 1, "not positive");
            break;
        }
    }
    for i in 0..k_len - 1 {
        if psi[i + 1] > psi[i] {
            report.nonincreasing = false;
            note(&mut report, i + 1, "not nonincreasing");
            break;
        }
    }
    let scale = psi.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let tol = T::epsilon() * scale * T::of(64.0);
    for k in 1..k_len - 1 {
        let d2 = psi[k - 1] - T::two() * psi[k] + psi[k + 1];
        if d2 < -tol {
            report.convex = false;
            note(&mut report, k + 1, "second difference negative");
            break;
        }
    }
    let mut ratios = Vec::new();
    let mut m = 1usize;
    while 2 * m <= k_len {
        ratios.push(psi[2 * m - 1] / psi[m - 1]);
        m *= 2;
    }
    if ratios.len() >= 2 {
        let start = ratios.len() - (ratios.len() / 3).max(1);
        let worst = ratios[start..]
            .iter()
            .fold(T::zero(), |acc, &r| acc.max(r));
        if worst >= T::of(0.9) {
            report.sum_bounded = false;
            note(&mut report, k_len, "partial sums of psi(k)/k diverging");
        }
    }
    Ok(report)
}

/// Derivative coefficients: harmonic `k` is phase-shifted by `beta pi / 2`
/// and divided by `psi(k)`; the constant maps to 0.
pub fn weil_derivative<T: Real>(
    c: &FourierCoeffs<T>,
    spec: &PsiBetaSpec<T>,
) -> Result<FourierCoeffs<T>> {
    let n = c.order();
    let (st, ct) = spec.phase();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n);
    a.push(T::zero());
    for k in 1..=n {
        let w = spec.psi(k)?;
        a.push((c.a(k) * ct + c.b(k) * st) / w);
        b.push((c.b(k) * ct - c.a(k) * st) / w);
    }
    FourierCoeffs::new(a, b)
}

/// Kernel truncation `sum_(k=1..n) psi(k) cos(2 pi k x + beta pi / 2)` in
/// coefficient form.
pub fn dpsi_kernel<T: Real>(spec: &PsiBetaSpec<T>, n: usize) -> Result<TrigPolynomial<T>> {
    if n == 0 {
        return Err(Error::invalid("kernel truncation must be at least 1"));
    }
    let (st, ct) = spec.phase();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n);
    a.push(T::zero());
    for k in 1..=n {
        let w = spec.psi(k)?;
        a.push(w * ct);
        b.push(-w * st);
    }
    Ok(TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b)?))
}

/// Inverse of [`weil_derivative`]: multiplies harmonic `k` by `psi(k)` and
/// shifts the phase back (the kernel at phase `-beta`), then reinstates the
/// prescribed constant `a0`. Exact on trigonometric polynomials.
pub fn reconstruct<T: Real>(
    phi: &FourierCoeffs<T>,
    spec: &PsiBetaSpec<T>,
    a0: T,
) -> Result<FourierCoeffs<T>> {
    let n = phi.order();
    let (st, ct) = spec.phase();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n);
    a.push(a0);
    for k in 1..=n {
        let w = spec.psi(k)?;
        a.push(w * (phi.a(k) * ct - phi.b(k) * st));
        b.push(w * (phi.a(k) * st + phi.b(k) * ct));
    }
    FourierCoeffs::new(a, b)
}

/// Which kernel series an asymptotic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSeries {
    Sin,
    Cos,
}

/// Leading asymptotic term of the kernel series `sum k^(alpha-1=..) ...` near
/// 0: `(2 pi x)^(alpha - 1) * Gamma(1 - alpha)` times `cos(pi alpha / 2)`
/// for the sine series or `sin(pi alpha / 2)` for the cosine series.
pub fn kernel_asymptotic<T: Real>(alpha: T, x: T, which: KernelSeries) -> Result<T> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::Parameter {
            name: "alpha",
            value: alpha.lossy(),
            constraint: "must lie in (0, 1)",
        });
    }
    if !(x > T::zero() && x < T::of(0.25)) {
        return Err(Error::Parameter {
            name: "x",
            value: x.lossy(),
            constraint: "must lie in (0, 1/4)",
        });
    }
    let halfpi_alpha = alpha * T::FRAC_PI_2();
    let trig = match which {
        KernelSeries::Sin => halfpi_alpha.cos(),
        KernelSeries::Cos => halfpi_alpha.sin(),
    };
    Ok((T::TAU() * x).powf(alpha - T::one()) * gamma_fn(T::one() - alpha) * trig)
}

/// Gamma function via the Lanczos approximation (g = 7, 9 terms) with the
/// reflection formula for arguments below 1/2.
fn gamma_fn<T: Real>(x: T) -> T {
    const LANCZOS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < T::half() {
        return T::PI() / ((T::PI() * x).sin() * gamma_fn(T::one() - x));
    }
    let z = x - T::one();
    let mut acc = T::of(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += T::of(c) / (z + T::of(i as f64));
    }
    let base = z + T::of(7.5);
    (T::TAU()).sqrt() * base.powf(z + T::half()) * (-base).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::lp_norm;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    fn coeffs(a: &[f64], b: &[f64]) -> FourierCoeffs<f64> {
        FourierCoeffs::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn gamma_reference_values() {
        assert_abs_diff_eq!(gamma_fn(0.5), PI.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(gamma_fn(1.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma_fn(5.0), 24.0, epsilon = 1e-10);
        // reflection: Gamma(1/4) Gamma(3/4) = pi / sin(pi/4)
        assert_abs_diff_eq!(
            gamma_fn(0.25) * gamma_fn(0.75),
            PI / (PI / 4.0).sin(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn derivative_rotates_first_harmonic() {
        let spec = PsiBetaSpec::table(vec![1.0], 1.0).unwrap();
        let d = weil_derivative(&coeffs(&[0.0, 1.0], &[0.0]), &spec).unwrap();
        // cos picks up phase pi/2, giving -sin
        assert_abs_diff_eq!(d.a(1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.b(1), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn beta_zero_scales_by_inverse_weights() {
        let spec = PsiBetaSpec::power_law(1.0, 0.0).unwrap();
        let d = weil_derivative(&coeffs(&[0.4, 0.5, 0.25], &[0.1, -0.2]), &spec).unwrap();
        assert_abs_diff_eq!(d.a(1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.a(2), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.b(2), -0.4, epsilon = 1e-15);
        assert_eq!(d.a(0), 0.0);
    }

    #[test]
    fn derivative_kills_constants() {
        let spec = PsiBetaSpec::power_law(0.5, 0.7).unwrap();
        let d = weil_derivative(&coeffs(&[3.0], &[]), &spec).unwrap();
        assert_eq!(d.a(0), 0.0);
        assert_eq!(d.order(), 0);
    }

    #[test]
    fn identity_weights_fix_harmonics() {
        let spec = PsiBetaSpec::table(vec![1.0, 1.0, 1.0], 0.0).unwrap();
        let c = coeffs(&[0.9, 0.3, -0.5, 0.2], &[0.7, 0.1, -0.4]);
        let d = weil_derivative(&c, &spec).unwrap();
        for k in 1..=3 {
            assert_abs_diff_eq!(d.a(k), c.a(k), epsilon = 1e-15);
            assert_abs_diff_eq!(d.b(k), c.b(k), epsilon = 1e-15);
        }
    }

    #[test]
    fn kernel_truncations() {
        let spec = PsiBetaSpec::power_law(0.5, 0.0).unwrap();
        let k = dpsi_kernel(&spec, 2).unwrap();
        assert_abs_diff_eq!(k.coeffs().a(1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.coeffs().a(2), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(k.coeffs().b(1), 0.0, epsilon = 1e-15);

        let spec = PsiBetaSpec::table(vec![1.0], 1.0).unwrap();
        let k = dpsi_kernel(&spec, 1).unwrap();
        // phase beta = 1 turns the cosine into -sine
        assert_abs_diff_eq!(k.coeffs().a(1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.coeffs().b(1), -1.0, epsilon = 1e-15);
        assert!(dpsi_kernel(&spec, 0).is_err());
        assert!(dpsi_kernel(&spec, 2).is_err());
    }

    #[test]
    fn kernel_truncations_are_cauchy_in_l2() {
        let spec = PsiBetaSpec::power_law(0.75, 0.3).unwrap();
        let n = 8usize;
        let kn = dpsi_kernel(&spec, n).unwrap();
        let k2n = dpsi_kernel(&spec, 2 * n).unwrap();
        let quad = lp_norm(
            |x| k2n.eval(x) - kn.eval(x),
            2.0,
            0.0,
            1.0,
            1e-12,
        )
        .unwrap();
        let mut sum = 0.0f64;
        for k in n + 1..=2 * n {
            let w = (k as f64).powf(-0.75);
            sum += w * w / 2.0;
        }
        assert_abs_diff_eq!(quad, sum.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn reconstruction_round_trips() {
        let c = coeffs(&[1.2, 0.8, -0.3, 0.45], &[0.25, 0.6, -0.15]);
        for gamma in [0.25, 0.5, 0.75] {
            for beta in [0.0, 0.5, 1.0, 1.0 - gamma] {
                let spec = PsiBetaSpec::power_law(gamma, beta).unwrap();
                let d = weil_derivative(&c, &spec).unwrap();
                let back = reconstruct(&d, &spec, c.a(0)).unwrap();
                for k in 0..=3 {
                    assert_abs_diff_eq!(back.a(k), c.a(k), epsilon = 1e-12);
                    assert_abs_diff_eq!(back.b(k), c.b(k), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn reconstruct_zero_gives_constant() {
        let spec = PsiBetaSpec::power_law(0.5, 0.5).unwrap();
        let r = reconstruct(&coeffs(&[0.0, 0.0], &[0.0]), &spec, 3.0).unwrap();
        assert_eq!(r.a(0), 3.0);
        assert_eq!(r.a(1), 0.0);
        assert_eq!(r.b(1), 0.0);
    }

    #[test]
    fn composition_of_derivatives() {
        let n = 3usize;
        let c = coeffs(&[0.5, 1.0, -0.7, 0.2], &[0.3, 0.9, -0.1]);
        let p1: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-0.3)).collect();
        let p2: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-0.8)).collect();
        let ratio: Vec<f64> = p1.iter().zip(&p2).map(|(&x, &y)| y / x).collect();
        let (b1, b2) = (0.4, 1.1);
        let first = PsiBetaSpec::table(p1, b1).unwrap();
        let second = PsiBetaSpec::table(ratio, b2 - b1).unwrap();
        let direct = PsiBetaSpec::table(p2, b2).unwrap();
        let chained = weil_derivative(&weil_derivative(&c, &first).unwrap(), &second).unwrap();
        let target = weil_derivative(&c, &direct).unwrap();
        for k in 0..=n {
            assert_abs_diff_eq!(chained.a(k), target.a(k), epsilon = 1e-12);
            assert_abs_diff_eq!(chained.b(k), target.b(k), epsilon = 1e-12);
        }
    }

    #[test]
    fn f1_accepts_inverse_square_root() {
        let spec = PsiBetaSpec::power_law(0.5, 0.0).unwrap();
        let report = check_f1(&spec.psi_prefix(100).unwrap()).unwrap();
        assert!(report.is_member_prefix(), "{report:?}");
    }

    #[test]
    fn f1_flags_log_weights_as_diverging() {
        let psi: Vec<f64> = (1..=10_000).map(|k| 1.0 / ((k as f64) + 1.0).ln()).collect();
        let report = check_f1(&psi).unwrap();
        assert!(!report.sum_bounded);
        assert!(!report.is_member_prefix());
        assert!(report.positive && report.nonincreasing && report.convex);
    }

    #[test]
    fn f1_rejects_increasing_weights() {
        let psi: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let report = check_f1(&psi).unwrap();
        assert!(!report.nonincreasing);
        assert_eq!(report.first_violation, Some((1, "not nonincreasing")));
    }

    #[test]
    fn f1_detects_concavity() {
        let psi: Vec<f64> = (1..=5).map(|k| (10.0 - k as f64).sqrt()).collect();
        let report = check_f1(&psi).unwrap();
        assert!(!report.convex);
        assert!(report.nonincreasing);
    }

    #[test]
    fn f1_needs_three_points() {
        assert!(check_f1(&[1.0f64, 0.5]).is_err());
    }

    #[test]
    fn asymptotic_leading_term() {
        let v = kernel_asymptotic(0.5, 0.01, KernelSeries::Sin).unwrap();
        assert_abs_diff_eq!(v, 5.0, epsilon = 1e-4);
        // partial-sum comparison: sum n^(-1/2) sin(2 pi n x) over a long prefix
        let x = 0.01f64;
        let direct: f64 = (1..=1_000_000)
            .map(|n| (n as f64).powf(-0.5) * (TAU * n as f64 * x).sin())
            .sum();
        assert!((v - direct).abs() / direct.abs() < 0.05, "{v} vs {direct}");
    }

    #[test]
    fn asymptotic_symmetry_at_half() {
        let s = kernel_asymptotic(0.5, 0.02, KernelSeries::Sin).unwrap();
        let c = kernel_asymptotic(0.5, 0.02, KernelSeries::Cos).unwrap();
        assert_abs_diff_eq!(s, c, epsilon = 1e-12);
    }

    #[test]
    fn asymptotic_blows_up_toward_zero() {
        let far = kernel_asymptotic(0.3, 0.1, KernelSeries::Sin).unwrap();
        let near = kernel_asymptotic(0.3, 1e-6, KernelSeries::Sin).unwrap();
        assert!(near > far * 100.0);
        assert!(kernel_asymptotic(1.0, 0.1, KernelSeries::Sin).is_err());
        assert!(kernel_asymptotic(0.5, 0.3, KernelSeries::Sin).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(PsiBetaSpec::power_law(0.0, 0.0).is_err());
        assert!(PsiBetaSpec::table(vec![1.0, -0.5], 0.0).is_err());
        assert!(PsiBetaSpec::table(vec![], 0.0).is_err());
        let spec = PsiBetaSpec::power_law(0.5, 0.25).unwrap();
        assert!(spec.psi(0).is_err());
        assert_abs_diff_eq!(spec.psi(4).unwrap(), 0.5, epsilon = 1e-15);
    }
}
