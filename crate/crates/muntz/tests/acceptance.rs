//! End-to-end acceptance checks. Each test exercises one numbered
//! criterion, prints a single PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`), and fails the build
//! when its pinned tolerance is exceeded.

use muntz::exponents::{validate_exponents, ExponentSpec};
use muntz::fourier::{
    apply_summation, kernel, summation_norm_bounds, FourierCoeffs, SummationMatrix,
    TrigPolynomial,
};
use muntz::functions::{compose_q_alpha, MuntzPolynomial};
use muntz::perturb::{build_upsilon_chain, compose_s, step_operator};
use muntz::quadrature::{
    integrate, lp_norm, lp_norm_panels, monomial_lp_norm, uniform_breakpoints, weak_ls_norm,
};
use muntz::rates::{build_rate_table, fit_decay};
use muntz::weil::{kernel_asymptotic, reconstruct, weil_derivative, KernelSeries, PsiBetaSpec};
use muntz::basis::{
    finite_basis_constant, gaussian_exclusion, generate_candidates, inclination, span_residual,
    StepFamily,
};
use muntz::exponents::perturbation_threshold;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::time::Instant;

const QUAD_TOL: f64 = 1e-12;

fn verdict(id: u32, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("criterion {id:02}: {tag} ({detail})");
    assert!(ok, "criterion {id:02} failed: {detail}");
}

fn seeded_muntz(rng: &mut ChaCha8Rng, lambdas: &[f64]) -> MuntzPolynomial<f64> {
    let terms = lambdas
        .iter()
        .map(|&l| (rng.random_range(-1.0..1.0), l))
        .collect();
    MuntzPolynomial::on_unit(terms).unwrap()
}

fn seeded_trig(rng: &mut ChaCha8Rng, degree: usize) -> TrigPolynomial<f64> {
    let a = (0..=degree).map(|_| rng.sample(StandardNormal)).collect();
    let b = (1..=degree).map(|_| rng.sample(StandardNormal)).collect();
    TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b).unwrap())
}

fn squares(count: usize) -> muntz::ExponentSet64 {
    validate_exponents(&ExponentSpec::Quadratic {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        count,
    })
    .unwrap()
}

#[test]
fn criterion_01_monomial_norm_closed_forms() {
    const TOL: f64 = 1e-10;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (lambda, p) in [(1.0f64, 2.0f64), (3.0, 2.0), (2.0, 3.0)] {
        let closed = (lambda * p + 1.0).powf(-1.0 / p);
        let by_formula = monomial_lp_norm(lambda, p);
        let by_quadrature = lp_norm(|t: f64| t.powf(lambda), p, 0.0, 1.0, QUAD_TOL).unwrap();
        worst = worst
            .max((by_formula - closed).abs())
            .max((by_quadrature - closed).abs());
    }
    let elapsed = start.elapsed();
    let ok = worst <= TOL && elapsed.as_secs_f64() < 1.0;
    verdict(
        1,
        ok,
        &format!("max deviation {worst:.2e}, elapsed {:.3}s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_02_change_of_variables_identity() {
    const REL_TOL: f64 = 1e-8;
    let lambdas = [1.0, 4.0, 9.0, 16.0];
    let p = 2.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0002);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = seeded_muntz(&mut rng, &lambdas);
        for alpha in [2.0f64, 0.5] {
            for delta in [0.25f64, 0.64] {
                let lhs = integrate(|t| f.call(t).abs().powf(p), delta, 1.0, QUAD_TOL).unwrap();
                let g = compose_q_alpha(&f, alpha).unwrap();
                let rhs = alpha
                    * integrate(
                        |x: f64| g.call(x).abs().powf(p) * x.powf(alpha - 1.0),
                        delta.powf(1.0 / alpha),
                        1.0,
                        QUAD_TOL,
                    )
                    .unwrap();
                let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
                worst = worst.max(rel);
            }
        }
    }
    verdict(2, worst < REL_TOL, &format!("max relative mismatch {worst:.2e}"));
}

#[test]
fn criterion_03_substitution_contraction_ratio() {
    const SLACK: f64 = 1e-8;
    let bound = (0.5f64 / 0.8).sqrt();
    let (delta, p) = (0.8f64, 2.0f64);
    let lambdas = [1.0, 4.0, 9.0, 16.0];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0003);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let f = seeded_muntz(&mut rng, &lambdas);
        if f.is_zero() {
            continue;
        }
        let qf = compose_q_alpha(&f, 2.0).unwrap();
        let num = lp_norm(|t| qf.call(t), p, delta, 1.0, QUAD_TOL).unwrap();
        let den = lp_norm(|t| f.call(t), p, delta * delta, 1.0, QUAD_TOL).unwrap();
        worst = worst.max(num / den);
    }
    verdict(
        3,
        worst <= bound + SLACK,
        &format!("max ratio {worst:.12} vs bound {bound:.12}"),
    );
}

#[test]
fn criterion_04_fejer_exactness_and_unit_bound() {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0004);
    let mut worst_err = 0.0f64;
    let mut worst_upper = 0.0f64;
    let mut min_kernel = f64::INFINITY;
    for n in [8usize, 16, 32] {
        let q = SummationMatrix::fejer(n);
        for _ in 0..5 {
            let f = seeded_trig(&mut rng, 8);
            let c = f.coeffs();
            let a: Vec<f64> = (0..=n).map(|k| c.a(k)).collect();
            let b: Vec<f64> = (1..=n).map(|k| c.b(k)).collect();
            let padded = FourierCoeffs::new(a, b).unwrap();
            let u = apply_summation(&padded, &q, n).unwrap();
            let breaks = uniform_breakpoints(0.0, 1.0, 4 * (n + 1));
            let measured =
                lp_norm_panels(|x| u.eval(x) - f.eval(x), 2.0, &breaks, QUAD_TOL).unwrap();
            let closed: f64 = (1..=8)
                .map(|k| {
                    let w = k as f64 / (n as f64 + 1.0);
                    w * w * (c.a(k) * c.a(k) + c.b(k) * c.b(k)) / 2.0
                })
                .sum::<f64>()
                .sqrt();
            worst_err = worst_err.max((measured - closed).abs());
        }
        let (_, upper) = summation_norm_bounds(&q, n, 2.0, 1, 7).unwrap();
        worst_upper = worst_upper.max((upper - 1.0).abs());
        let kn = kernel(&q, n).unwrap();
        for i in 0..10_000 {
            let x = (i as f64 + 0.5) / 10_000.0;
            min_kernel = min_kernel.min(kn.eval(x));
        }
    }
    let ok = worst_err <= TOL && worst_upper <= TOL && min_kernel >= -1e-12;
    verdict(
        4,
        ok,
        &format!(
            "tail mismatch {worst_err:.2e}, upper bound off by {worst_upper:.2e}, kernel min {min_kernel:.2e}"
        ),
    );
}

#[test]
fn criterion_05_perturbation_chain_step_bounds() {
    const SLACK: f64 = 1e-8;
    let start = Instant::now();
    let lam = squares(12);
    let shifted: Vec<f64> = lam.lambdas().iter().map(|&l| l + 0.05).collect();
    let ups = validate_exponents(&ExponentSpec::List(shifted)).unwrap();
    assert!(0.05 < perturbation_threshold(&lam), "premise: shift below threshold");
    let chain = build_upsilon_chain(&lam, &ups).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0005);
    let mut worst_gap = f64::NEG_INFINITY;
    let mut max_accumulated = 0.0f64;
    for &p in &[1.5f64, 2.0, 3.0] {
        for _ in 0..200 {
            let mut f = seeded_muntz(&mut rng, lam.lambdas());
            if f.is_zero() {
                continue;
            }
            for k in 0..chain.len() {
                let step = step_operator(&f, &chain, k, p).unwrap();
                worst_gap = worst_gap.max(step.lhs - step.bound);
                f = step.f_next;
            }
        }
        let probe = seeded_muntz(&mut rng, lam.lambdas());
        let (_, accumulated) = compose_s(&lam, &ups, &probe, p).unwrap();
        max_accumulated = max_accumulated.max(accumulated);
    }
    let elapsed = start.elapsed();
    let ok = worst_gap <= SLACK && max_accumulated < 1.0 && elapsed.as_secs_f64() < 120.0;
    verdict(
        5,
        ok,
        &format!(
            "max (lhs - bound) {worst_gap:.2e}, accumulated bound {max_accumulated:.4}, elapsed {:.1}s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_06_fractional_derivative_round_trip() {
    const TOL: f64 = 1e-12;
    let gammas = [0.25f64, 0.5, 0.75];
    let betas = [0.0f64, 0.5, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0006);
    let polys: Vec<TrigPolynomial<f64>> = (0..3).map(|_| seeded_trig(&mut rng, 16)).collect();

    let coeff_gap = |x: &FourierCoeffs<f64>, y: &FourierCoeffs<f64>| -> f64 {
        let mut d: f64 = (x.a(0) - y.a(0)).abs();
        for k in 1..=x.order().max(y.order()) {
            d = d.max((x.a(k) - y.a(k)).abs()).max((x.b(k) - y.b(k)).abs());
        }
        d
    };

    let mut worst_rt = 0.0f64;
    let mut worst_comp = 0.0f64;
    for f in &polys {
        let c = f.coeffs();
        for &g in &gammas {
            for &b in &betas {
                let spec = PsiBetaSpec::power_law(g, b).unwrap();
                let d = weil_derivative(c, &spec).unwrap();
                let back = reconstruct(&d, &spec, c.a(0)).unwrap();
                worst_rt = worst_rt.max(coeff_gap(&back, c));
            }
        }
        // applying the weight ratio at the phase difference composes
        for &(g1, b1) in &[(0.25f64, 0.0f64), (0.5, 0.5), (0.75, 1.0), (0.25, 1.0)] {
            for &(g2, b2) in &[(0.5f64, 0.0f64), (0.75, 0.5), (0.25, 0.5), (0.75, 0.0)] {
                let s1 = PsiBetaSpec::power_law(g1, b1).unwrap();
                let s2 = PsiBetaSpec::power_law(g2, b2).unwrap();
                let ratio: Vec<f64> = (1..=16).map(|k| (k as f64).powf(g1 - g2)).collect();
                let srel = PsiBetaSpec::table(ratio, b2 - b1).unwrap();
                let two_step = weil_derivative(&weil_derivative(c, &s1).unwrap(), &srel).unwrap();
                let direct = weil_derivative(c, &s2).unwrap();
                worst_comp = worst_comp.max(coeff_gap(&two_step, &direct));
            }
        }
    }
    let ok = worst_rt <= TOL && worst_comp <= TOL;
    verdict(
        6,
        ok,
        &format!("round-trip gap {worst_rt:.2e}, composition gap {worst_comp:.2e}"),
    );
}

#[test]
fn criterion_07_kernel_sum_asymptotics() {
    const REL_TOL: f64 = 0.05;
    const N: u64 = 1_000_000;
    let mut detail = String::new();
    let mut ok = true;
    for &x in &[0.01f64, 0.005] {
        let mut sin_sum = 0.0f64;
        let mut cos_sum = 0.0f64;
        // ascending magnitudes: sum from the smallest terms up
        for n in (1..=N).rev() {
            let w = (n as f64).powf(-0.5);
            let phase = std::f64::consts::TAU * ((n as f64 * x).fract());
            sin_sum += w * phase.sin();
            cos_sum += w * phase.cos();
        }
        for (name, sum, which) in [
            ("sin", sin_sum, KernelSeries::Sin),
            ("cos", cos_sum, KernelSeries::Cos),
        ] {
            let lead = kernel_asymptotic(0.5, x, which).unwrap();
            let rel = (sum - lead).abs() / lead.abs();
            ok &= rel <= REL_TOL;
            detail.push_str(&format!("{name}@{x}: rel {rel:.3}; "));
        }
    }
    verdict(7, ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_08_difference_function_decay_rates() {
    const ROW_SLACK: f64 = 1e-8;
    let lambdas = [1.0f64, 4.0, 9.0, 16.0, 25.0, 36.0];
    let ns = [8usize, 16, 32, 64, 128];
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0008);
    let raw = seeded_muntz(&mut rng, &lambdas);
    let mut detail = String::new();
    let mut ok = true;
    for &p in &[2.0f64, 3.0] {
        let norm = lp_norm(|t| raw.call(t), p, 0.0, 1.0, QUAD_TOL).unwrap();
        let f = raw.scaled(1.0 / norm);
        // h(t) = f(t) - f(t^2) vanishes at both endpoints, so its periodic
        // extension is continuous
        let mut terms: Vec<(f64, f64)> = f.terms().to_vec();
        terms.extend(f.terms().iter().map(|&(c, e)| (-c, 2.0 * e)));
        let h = MuntzPolynomial::on_unit(terms).unwrap();
        let g = move |x: f64| h.call(x - x.floor());
        let table = build_rate_table(g, &ns, p, 128, true, format!("p={p}")).unwrap();
        for row in table.entries() {
            let e_best = row.e_best.unwrap();
            ok &= e_best <= row.rho + ROW_SLACK;
        }
        let (gamma_hat, _) = fit_decay(&table, 8, 128).unwrap();
        ok &= gamma_hat >= 0.5;
        detail.push_str(&format!("p={p}: slope {:.3}; ", -gamma_hat));
    }
    verdict(8, ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_09_weak_norm_profile() {
    const REL_TOL: f64 = 0.05;
    const SAMPLES: usize = 20_000;
    let mut detail = String::new();
    let mut ok = true;
    for &p in &[2.0f64, 3.0] {
        let s = p / (p + 1.0);
        let est = weak_ls_norm(
            |t: f64| (1.0 - t).powf(-(p + 1.0) / p),
            s,
            0.0,
            1.0,
            SAMPLES,
        )
        .unwrap();
        ok &= (est - 1.0).abs() <= REL_TOL;
        detail.push_str(&format!("p={p}: profile {est:.4}; "));

        // term-wise derivative of the decay-rate corpus function
        let lambdas = [1.0f64, 4.0, 9.0, 16.0, 25.0, 36.0];
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE_0008);
        let f = seeded_muntz(&mut rng, &lambdas);
        let mut terms: Vec<(f64, f64)> = f.terms().to_vec();
        terms.extend(f.terms().iter().map(|&(c, e)| (-c, 2.0 * e)));
        let h = MuntzPolynomial::on_unit(terms).unwrap();
        let dh = h.derivative().unwrap();
        let wn = weak_ls_norm(|t| dh.call(t), s, 0.0, 1.0, SAMPLES).unwrap();
        ok &= wn.is_finite() && wn > 0.0;
        detail.push_str(&format!("|h'| weak {wn:.3}; "));
    }
    verdict(9, ok, detail.trim_end_matches("; "));
}

/// Orthonormal coordinates of a trigonometric polynomial: Euclidean dot
/// products equal `L_2(0,1)` inner products.
fn l2_coords(r: &TrigPolynomial<f64>, max_freq: usize) -> Vec<f64> {
    let mut v = vec![0.0; 2 * max_freq + 1];
    let c = r.coeffs();
    v[0] = c.a(0) / 2.0;
    for k in 1..=r.degree() {
        v[2 * k - 1] = c.a(k) / std::f64::consts::SQRT_2;
        v[2 * k] = c.b(k) / std::f64::consts::SQRT_2;
    }
    v
}

fn coords_to_trig(v: &[f64], max_freq: usize) -> TrigPolynomial<f64> {
    let mut a = vec![2.0 * v[0]];
    let mut b = Vec::with_capacity(max_freq);
    for k in 1..=max_freq {
        a.push(v[2 * k - 1] * std::f64::consts::SQRT_2);
        b.push(v[2 * k] * std::f64::consts::SQRT_2);
    }
    TrigPolynomial::from_coeffs(FourierCoeffs::new(a, b).unwrap())
}

#[test]
fn criterion_10_finite_section_pipeline() {
    let e = validate_exponents(&ExponentSpec::List(vec![1.0, 4.0, 9.0])).unwrap();
    let orders = [8usize, 16, 24, 32, 40, 48, 56, 64];
    let q = SummationMatrix::fejer(64);
    let cands = generate_candidates(&e, 0.8, 2.0, 3, &orders, &q).unwrap();
    let mut ok = cands.len() == 24;

    let fam = gaussian_exclusion(&cands, 2.0).unwrap();
    fam.check().unwrap();
    let span_fwd = span_residual(&cands, fam.polys());
    let span_back = span_residual(fam.polys(), &cands);
    ok &= span_fwd < 1e-8 && span_back < 1e-8;

    let j = 2usize.min(fam.len() - 1);
    let mut incl_prev = f64::INFINITY;
    let max_big_j = (fam.len() - j).min(6);
    let mut incl_detail = String::new();
    for big_j in 1..=max_big_j {
        let v = inclination(&fam, j, big_j).unwrap();
        ok &= (0.0..=1.0).contains(&v) && v <= incl_prev + 1e-9;
        incl_prev = v;
        incl_detail.push_str(&format!("{v:.3} "));
    }

    let mut fbc_prev = 0.0f64;
    for m in 2..=fam.len().min(8) {
        let c = finite_basis_constant(&fam, m).unwrap();
        ok &= c >= fbc_prev - 1e-9;
        fbc_prev = c;
    }

    // orthonormalized control: Gram-Schmidt from the last row upward only
    // touches columns at or after each row's pivot, so the step structure
    // survives and the constant pins at 1
    let max_freq = fam.polys().iter().map(|r| r.degree()).max().unwrap();
    let mut coords: Vec<Vec<f64>> = fam.polys().iter().map(|r| l2_coords(r, max_freq)).collect();
    for i in (0..coords.len()).rev() {
        for jj in i + 1..coords.len() {
            let d: f64 = coords[i].iter().zip(&coords[jj]).map(|(x, y)| x * y).sum();
            for idx in 0..coords[i].len() {
                coords[i][idx] -= d * coords[jj][idx];
            }
        }
        let nrm = coords[i].iter().map(|x| x * x).sum::<f64>().sqrt();
        coords[i].iter_mut().for_each(|x| *x /= nrm);
    }
    let ctrl_rows: Vec<TrigPolynomial<f64>> = coords
        .iter()
        .map(|v| coords_to_trig(v, max_freq))
        .collect();
    let ctrl = StepFamily::from_polys_with_residue(ctrl_rows, 2.0, 10.0 * fam.dust()).unwrap();
    let mut worst_ctrl = 0.0f64;
    for m in 2..=ctrl.len().min(6) {
        let c = finite_basis_constant(&ctrl, m).unwrap();
        worst_ctrl = worst_ctrl.max((c - 1.0).abs());
    }
    ok &= worst_ctrl <= 1e-6;

    verdict(
        10,
        ok,
        &format!(
            "family size {} (dropped {}), span residuals {span_fwd:.1e}/{span_back:.1e}, inclination {}, control constant off by {worst_ctrl:.1e}",
            fam.len(),
            fam.dropped(),
            incl_detail.trim_end()
        ),
    );
}
