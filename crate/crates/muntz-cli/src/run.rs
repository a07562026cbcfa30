//! Subcommand pipelines. Every command reads the shared config, builds
//! one table, and hands it to the renderer; randomized commands draw all
//! samples up front so worker-pool size never changes the bytes.

use std::fmt;

use muntz::basis::{
    finite_basis_constant, gaussian_exclusion, generate_candidates, inclination, span_residual,
};
use muntz::exponents::{
    perturbation_threshold, validate_exponents, ExponentSet, ExponentSpec,
};
use muntz::fourier::{fourier_coeffs, FourierCoeffs, SummationMatrix};
use muntz::functions::{compose_q_alpha, MuntzPolynomial};
use muntz::perturb::{build_upsilon_chain, step_constant, step_operator};
use muntz::quadrature::{lp_norm, monomial_lp_norm};
use muntz::rates::{best_approx_with, fit_decay, rho_n_with, RateEntry, RateTable};
use muntz::weil::{reconstruct, weil_derivative, PsiBetaSpec};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{config_hash, num, render, write_output, Cell, Document};
use crate::{Cli, Cmd};

const QUAD_TOL: f64 = 1e-12;
const ISO_SAMPLES: usize = 200;

pub enum CliError {
    Config(ConfigError),
    Input(String),
    Lib(muntz::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Input(msg) => f.write_str(msg),
            CliError::Lib(e) => e.fmt(f),
        }
    }
}

impl From<muntz::Error> for CliError {
    fn from(e: muntz::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

type CmdResult = Result<Document, CliError>;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Input("missing --config <path>".into()))?;
    let path_str = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{path_str}: {e}")))?;
    let mut cfg = crate::config::parse(&path_str, &text)?;
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(out) = &cli.out {
        cfg.output_path = Some(out.display().to_string());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Input(format!("worker pool: {e}")))?;
    let doc = match cli.command {
        Cmd::Validate => cmd_validate(&cfg)?,
        Cmd::Norms => cmd_norms(&cfg, &pool)?,
        Cmd::Rates => cmd_rates(&cfg, &pool)?,
        Cmd::Weil => cmd_weil(&cfg)?,
        Cmd::Perturb => cmd_perturb(&cfg)?,
        Cmd::Basis => cmd_basis(&cfg)?,
        Cmd::Isocheck => cmd_isocheck(&cfg, &pool)?,
    };
    let hash = config_hash(doc.command, &cfg);
    let content = render(&doc, &hash);
    let out_path = cfg.output_path.as_deref().ok_or_else(|| {
        CliError::Input("missing output path: set output_path in the config or pass --out".into())
    })?;
    write_output(out_path, &content)
        .map_err(|e| CliError::Input(format!("{out_path}: {e}")))?;
    Ok(())
}

fn need<'a, T>(v: &'a Option<T>, key: &str) -> Result<&'a T, CliError> {
    v.as_ref()
        .ok_or_else(|| CliError::Input(format!("missing config key `{key}`")))
}

fn exponent_set(cfg: &ExperimentConfig) -> Result<ExponentSet<f64>, CliError> {
    let s = need(&cfg.exponent_spec, "exponent_spec")?;
    let spec: ExponentSpec<f64> = s.parse()?;
    Ok(validate_exponents(&spec)?)
}

fn seeded_muntz(rng: &mut ChaCha8Rng, lambdas: &[f64]) -> Result<MuntzPolynomial<f64>, CliError> {
    let terms = lambdas
        .iter()
        .map(|&l| (rng.random_range(-1.0..1.0), l))
        .collect();
    Ok(MuntzPolynomial::on_unit(terms)?)
}

fn join_ints(vals: &[usize]) -> String {
    let v: Vec<String> = vals.iter().map(usize::to_string).collect();
    v.join(",")
}

fn join_nums(vals: &[f64]) -> String {
    let v: Vec<String> = vals.iter().map(|&x| num(x)).collect();
    v.join(" ")
}

fn cmd_validate(cfg: &ExperimentConfig) -> CmdResult {
    let set = exponent_set(cfg)?;
    let rows = set
        .lambdas()
        .iter()
        .enumerate()
        .map(|(i, &l)| vec![Cell::Int(i), Cell::Num(l)])
        .collect();
    let extra = vec![
        ("alpha0".into(), num(set.alpha0())),
        ("alpha1".into(), num(set.alpha1())),
        (
            "tail_bound".into(),
            set.tail_bound().map(num).unwrap_or_else(|| "-".into()),
        ),
    ];
    Ok(Document {
        command: "validate",
        seed: None,
        tolerances: "-".into(),
        truncation: "-".into(),
        extra,
        columns: vec!["index", "lambda"],
        rows,
    })
}

fn cmd_norms(cfg: &ExperimentConfig, pool: &ThreadPool) -> CmdResult {
    let set = exponent_set(cfg)?;
    let p = *need(&cfg.p, "p")?;
    let lambdas = set.lambdas().to_vec();
    let rows = pool.install(|| {
        lambdas
            .par_iter()
            .map(|&l| -> muntz::Result<Vec<Cell>> {
                let closed = monomial_lp_norm(l, p);
                let quad = lp_norm(move |t: f64| t.powf(l), p, 0.0, 1.0, QUAD_TOL)?;
                Ok(vec![
                    Cell::Num(l),
                    Cell::Num(closed),
                    Cell::Num(quad),
                    Cell::Num((closed - quad).abs()),
                ])
            })
            .collect::<muntz::Result<Vec<_>>>()
    })?;
    Ok(Document {
        command: "norms",
        seed: None,
        tolerances: format!("quad={QUAD_TOL:e}"),
        truncation: "-".into(),
        extra: Vec::new(),
        columns: vec!["lambda", "closed_form", "quadrature", "abs_err"],
        rows,
    })
}

fn cmd_rates(cfg: &ExperimentConfig, pool: &ThreadPool) -> CmdResult {
    let set = exponent_set(cfg)?;
    let p = *need(&cfg.p, "p")?;
    let ns = need(&cfg.n_grid, "n_grid")?.clone();
    let seed = *need(&cfg.seed, "seed")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = seeded_muntz(&mut rng, set.lambdas())?;
    if raw.is_zero() {
        return Err(CliError::Input(
            "seeded polynomial came out zero; pick another seed".into(),
        ));
    }
    let norm = lp_norm(|t| raw.call(t), p, 0.0, 1.0, QUAD_TOL)?;
    let f = raw.scaled(1.0 / norm);
    // h(t) = f(t) - f(t^2) vanishes at both endpoints, so the periodic
    // extension is continuous
    let mut terms = f.terms().to_vec();
    terms.extend(f.terms().iter().map(|&(c, e)| (-c, 2.0 * e)));
    let h = MuntzPolynomial::on_unit(terms)?;
    let g = move |x: f64| h.call(x - x.floor());
    let trunc = 128usize.max(*ns.last().unwrap());
    let c = fourier_coeffs(&g, trunc)?;
    let entries = pool.install(|| {
        ns.par_iter()
            .map(|&n| -> muntz::Result<RateEntry<f64>> {
                let rho = rho_n_with(&g, &c, n, p)?;
                let e_best = best_approx_with(&g, &c, n, p)?.error;
                Ok(RateEntry {
                    n,
                    rho,
                    e_best: Some(e_best),
                })
            })
            .collect::<muntz::Result<Vec<_>>>()
    })?;
    let table = RateTable::new(entries, p, format!("seed={seed}"))?;
    let (gamma_hat, omega_hat) = fit_decay(&table, ns[0], *ns.last().unwrap())?;
    let rows = table
        .entries()
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.n),
                Cell::Num(r.rho),
                Cell::Num(r.e_best.unwrap()),
                Cell::Num(p),
            ]
        })
        .collect();
    Ok(Document {
        command: "rates",
        seed: Some(seed),
        tolerances: "library defaults".into(),
        truncation: format!("fourier_terms={trunc}"),
        extra: vec![
            ("decay_gamma_hat".into(), num(gamma_hat)),
            ("decay_omega_hat".into(), num(omega_hat)),
        ],
        columns: vec!["n", "rho_n", "e_n", "p"],
        rows,
    })
}

fn cmd_weil(cfg: &ExperimentConfig) -> CmdResult {
    let gamma = *need(&cfg.gamma, "gamma")?;
    let degree = *need(&cfg.n_grid, "n_grid")?.last().unwrap();
    let seed = *need(&cfg.seed, "seed")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..=degree).map(|_| rng.sample(StandardNormal)).collect();
    let b: Vec<f64> = (1..=degree).map(|_| rng.sample(StandardNormal)).collect();
    let c = FourierCoeffs::new(a, b)?;
    let spec = PsiBetaSpec::power_law(gamma, 0.0)?;
    let d = weil_derivative(&c, &spec)?;
    let r = reconstruct(&d, &spec, c.a(0))?;
    let mut roundtrip = 0.0f64;
    let mut rows = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        let (b_k, db_k) = if k == 0 { (0.0, 0.0) } else { (c.b(k), d.b(k)) };
        rows.push(vec![
            Cell::Int(k),
            Cell::Num(c.a(k)),
            Cell::Num(b_k),
            Cell::Num(d.a(k)),
            Cell::Num(db_k),
        ]);
        roundtrip = roundtrip.max((c.a(k) - r.a(k)).abs());
        if k > 0 {
            roundtrip = roundtrip.max((c.b(k) - r.b(k)).abs());
        }
    }
    Ok(Document {
        command: "weil",
        seed: Some(seed),
        tolerances: "-".into(),
        truncation: format!("degree={degree}"),
        extra: vec![
            ("gamma".into(), num(gamma)),
            ("beta".into(), num(0.0)),
            ("roundtrip_max_err".into(), num(roundtrip)),
        ],
        columns: vec!["k", "a", "b", "wa", "wb"],
        rows,
    })
}

fn cmd_perturb(cfg: &ExperimentConfig) -> CmdResult {
    let set = exponent_set(cfg)?;
    let p = *need(&cfg.p, "p")?;
    let shift = *need(&cfg.gamma, "gamma")?;
    if shift < 0.0 {
        return Err(CliError::Input(
            "gamma is the uniform exponent shift here and must be nonnegative".into(),
        ));
    }
    let seed = *need(&cfg.seed, "seed")?;
    let shifted: Vec<f64> = set.lambdas().iter().map(|&l| l + shift).collect();
    let target = validate_exponents(&ExponentSpec::List(shifted))?;
    let chain = build_upsilon_chain(&set, &target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = seeded_muntz(&mut rng, set.lambdas())?;
    if raw.is_zero() {
        return Err(CliError::Input(
            "seeded polynomial came out zero; pick another seed".into(),
        ));
    }
    let norm = lp_norm(|t| raw.call(t), p, 0.0, 1.0, QUAD_TOL)?;
    let mut cur = raw.scaled(1.0 / norm);
    let mut rows = Vec::with_capacity(chain.len());
    let mut accumulated = 0.0f64;
    for k in 0..chain.len() {
        let step = step_operator(&cur, &chain, k, p)?;
        let ratio = if step.bound > 0.0 {
            step.lhs / step.bound
        } else {
            0.0
        };
        rows.push(vec![
            Cell::Int(k),
            Cell::Num(step.lhs),
            Cell::Num(step.bound),
            Cell::Num(ratio),
        ]);
        if !chain.deltas()[k].is_empty() {
            let idx = chain.first_changed()[k] - 1;
            accumulated += step_constant(p) * chain.deltas()[k][0] / chain.stages()[k][idx];
        }
        cur = step.f_next;
    }
    Ok(Document {
        command: "perturb",
        seed: Some(seed),
        tolerances: "library defaults".into(),
        truncation: "-".into(),
        extra: vec![
            ("sup_shift".into(), num(shift)),
            ("threshold".into(), num(perturbation_threshold(&set))),
            ("accumulated_bound".into(), num(accumulated)),
        ],
        columns: vec!["step", "lhs", "bound", "ratio"],
        rows,
    })
}

fn cmd_basis(cfg: &ExperimentConfig) -> CmdResult {
    let set = exponent_set(cfg)?;
    let delta = *need(&cfg.delta, "delta")?;
    let p = *need(&cfg.p, "p")?;
    let orders = need(&cfg.n_grid, "n_grid")?.clone();
    let q = SummationMatrix::fejer(*orders.last().unwrap());
    let cands = generate_candidates(&set, delta, p, set.len(), &orders, &q)?;
    let fam = gaussian_exclusion(&cands, p)?;
    let span_fwd = span_residual(&cands, fam.polys());
    let span_back = span_residual(fam.polys(), &cands);
    let rows = (0..fam.len())
        .map(|l| {
            vec![
                Cell::Int(l),
                Cell::Int(fam.leading()[l]),
                Cell::Int(fam.trailing()[l]),
                Cell::Int(fam.pivot_cols()[l]),
            ]
        })
        .collect();
    let mut extra = vec![
        ("candidates".into(), cands.len().to_string()),
        ("dropped".into(), fam.dropped().to_string()),
        ("dust".into(), num(fam.dust())),
        ("span_residual_fwd".into(), num(span_fwd)),
        ("span_residual_back".into(), num(span_back)),
    ];
    if fam.len() >= 3 {
        let j = 2;
        let mut vals = Vec::new();
        for big_j in 1..=(fam.len() - j).min(6) {
            vals.push(inclination(&fam, j, big_j)?);
        }
        extra.push(("inclination_j2".into(), join_nums(&vals)));
    } else {
        extra.push(("inclination_j2".into(), "-".into()));
    }
    if fam.len() >= 2 {
        let mut vals = Vec::new();
        for m in 2..=fam.len().min(8) {
            vals.push(finite_basis_constant(&fam, m)?);
        }
        extra.push(("fbc".into(), join_nums(&vals)));
    } else {
        extra.push(("fbc".into(), "-".into()));
    }
    Ok(Document {
        command: "basis",
        seed: None,
        tolerances: "rank=1e-10, norm=1e-9".into(),
        truncation: format!("orders={}", join_ints(&orders)),
        extra,
        columns: vec!["l", "leading", "trailing", "pivot_col"],
        rows,
    })
}

fn cmd_isocheck(cfg: &ExperimentConfig, pool: &ThreadPool) -> CmdResult {
    let set = exponent_set(cfg)?;
    let delta = *need(&cfg.delta, "delta")?;
    let p = *need(&cfg.p, "p")?;
    let seed = *need(&cfg.seed, "seed")?;
    let alpha = cfg.gamma.unwrap_or(2.0);
    if !(alpha > 1.0) {
        return Err(CliError::Input(
            "alpha (config key gamma) must exceed 1 for the contraction check".into(),
        ));
    }
    let bound = (delta.powf(1.0 - alpha) / alpha).powf(1.0 / p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = Vec::with_capacity(ISO_SAMPLES);
    for _ in 0..ISO_SAMPLES {
        polys.push(seeded_muntz(&mut rng, set.lambdas())?);
    }
    let lo = delta.powf(alpha);
    let ratios = pool.install(|| {
        polys
            .par_iter()
            .map(|f| -> muntz::Result<Option<f64>> {
                if f.is_zero() {
                    return Ok(None);
                }
                let qf = compose_q_alpha(f, alpha)?;
                let nio = lp_norm(|t| qf.call(t), p, delta, 1.0, QUAD_TOL)?;
                let den = lp_norm(|t| f.call(t), p, lo, 1.0, QUAD_TOL)?;
                Ok(if den > 0.0 { Some(nio / den) } else { None })
            })
            .collect::<muntz::Result<Vec<_>>>()
    })?;
    let used = ratios.iter().flatten().count();
    let max_ratio = ratios.iter().flatten().fold(0.0f64, |m, &v| m.max(v));
    Ok(Document {
        command: "isocheck",
        seed: Some(seed),
        tolerances: format!("quad={QUAD_TOL:e}"),
        truncation: format!("samples={ISO_SAMPLES}"),
        extra: Vec::new(),
        columns: vec!["alpha", "delta", "p", "bound", "max_ratio", "samples"],
        rows: vec![vec![
            Cell::Num(alpha),
            Cell::Num(delta),
            Cell::Num(p),
            Cell::Num(bound),
            Cell::Num(max_ratio),
            Cell::Int(used),
        ]],
    })
}
