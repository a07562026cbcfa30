//! Numerics for Müntz spaces `M_{Λ,p}` on the unit interval.
//!
//! The crate materializes exponent sequences `Λ = (λ_k)` together with their
//! gap and summability statistics, evaluates Müntz polynomials `Σ c_k t^{λ_k}`
//! and their change-of-variable images, measures `L_p` and weak-`L_s` norms by
//! adaptive quadrature, applies matrix summation methods to Fourier series,
//! takes fractional trigonometric derivatives, estimates trigonometric
//! approximation rates, drives small-perturbation exponent chains with their
//! per-step norm bounds, and runs a finite-section pipeline that turns Müntz
//! data into a step-form family of trigonometric polynomials.
//!
//! All numerics are generic over the scalar via [`Real`] (implemented by
//! `f32` and `f64`); the `*64` aliases at the crate root pin the default
//! double-precision instantiations. Every randomized routine takes an explicit
//! seed and is deterministic given it.

pub mod basis;
pub mod error;
pub mod exponents;
pub mod fourier;
pub mod functions;
pub(crate) mod optim;
pub mod perturb;
pub mod quadrature;
pub mod rates;
pub mod scalar;
pub mod weil;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default scalar for call sites that do not need genericity.
pub type Scalar = f64;

pub type ExponentSet64 = exponents::ExponentSet<f64>;
pub type ExponentSpec64 = exponents::ExponentSpec<f64>;
pub type MuntzPolynomial64 = functions::MuntzPolynomial<f64>;
pub type GridFunction64 = functions::GridFunction<f64>;
pub type FourierCoeffs64 = fourier::FourierCoeffs<f64>;
pub type TrigPolynomial64 = fourier::TrigPolynomial<f64>;
pub type SummationMatrix64 = fourier::SummationMatrix<f64>;
pub type PsiBetaSpec64 = weil::PsiBetaSpec<f64>;
pub type RateTable64 = rates::RateTable<f64>;
pub type UpsilonChain64 = perturb::UpsilonChain<f64>;
pub type StepFamily64 = basis::StepFamily<f64>;
