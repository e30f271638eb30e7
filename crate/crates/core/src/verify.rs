//! Named verification suites with deterministic JSON output.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, domain};
use crate::gabor::{self, LatticeParams};
use crate::numeric_core::{FourierRule, Grid, SampledSignal, fourier_coeff};
use crate::partner::{self, Correction, GaussBoxOverlaps, OnbExpansion, PartnerConfig, Xi0Table};
use crate::quad;
use crate::report::{Check, Report, num, nums};
use crate::theta_kernel::{self, KernelPoly};
use crate::windows::{self, WindowSpec};
use crate::zak::{self, ZakGrid};

/// Every numeric default used by the suites; echoed into each report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub zak_grid: usize,
    pub zak_terms: usize,
    pub norm_tol: f64,
    pub blowup_grid: usize,
    pub blowup_radii: Vec<f64>,
    pub blowup_spread: f64,
    pub zero_tol: f64,
    pub theta_grid: usize,
    pub theta_radius: usize,
    pub fd_step: f64,
    pub kernel_radius: usize,
    pub kernel_span: i64,
    pub kernel_tol: f64,
    pub theta_origin: f64,
    pub example4_grid: usize,
    pub example4_tol: f64,
    pub example4_g0: f64,
    pub recon_grid: (f64, f64, usize),
    pub bastiaans_grid: usize,
    pub bastiaans_exclusion: f64,
    pub bastiaans_tol: f64,
    pub energy_cutoffs: Vec<f64>,
    pub xi0_span: i64,
    pub xi0_tol: f64,
    pub envelope_span: i64,
    pub xi0_origin_unit: f64,
    pub xi0_origin_tol: f64,
    pub g0: f64,
    pub h1: f64,
    pub hg_tol: f64,
    pub hk_tol: f64,
    pub hk_span: i64,
    pub mu_tol: f64,
    pub column_radii: Vec<usize>,
    pub column_points: Vec<(i64, i64)>,
    pub column_tail_tol: f64,
    pub log_fit_residual: f64,
    pub weak_radii: Vec<usize>,
    pub weak_pairs: usize,
    pub weak_tol: f64,
    pub beta_points: Vec<(i64, i64)>,
    pub beta_truncation: i64,
    pub beta_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 20_151_013,
            zak_grid: 512,
            zak_terms: 8,
            norm_tol: 1e-8,
            blowup_grid: 1024,
            blowup_radii: vec![0.2, 0.1, 0.05, 0.025],
            blowup_spread: 0.2,
            zero_tol: 1e-12,
            theta_grid: 1024,
            theta_radius: 12,
            fd_step: 1e-3,
            kernel_radius: 10,
            kernel_span: 4,
            kernel_tol: 1e-10,
            theta_origin: 1.66926,
            example4_grid: 64,
            example4_tol: 1e-6,
            example4_g0: 0.61802,
            recon_grid: (-6.0, 6.0, 1200),
            bastiaans_grid: 256,
            bastiaans_exclusion: 0.05,
            bastiaans_tol: 1e-6,
            energy_cutoffs: vec![2.0, 4.0, 6.0, 8.0],
            xi0_span: 8,
            xi0_tol: 1e-8,
            envelope_span: 40,
            xi0_origin_unit: 0.608477,
            xi0_origin_tol: 1e-6,
            g0: 0.455087,
            h1: 0.455085,
            hg_tol: 1e-6,
            hk_tol: 1e-5,
            hk_span: 20,
            mu_tol: 1e-14,
            column_radii: vec![16, 32, 64, 128, 256],
            column_points: vec![(0, 0), (1, 1)],
            column_tail_tol: 1e-3,
            log_fit_residual: 0.2,
            weak_radii: vec![8, 16, 32, 64],
            weak_pairs: 5,
            weak_tol: 0.02,
            beta_points: vec![(1, 0), (1, 3), (-2, 1)],
            beta_truncation: 20_000,
            beta_tol: 1e-8,
        }
    }
}

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Zak,
    Zero,
    Theta,
    Kernel,
    Example4,
    Bastiaans,
    Xi0,
    Hg,
    Columns,
    Weak,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Zak,
        Suite::Zero,
        Suite::Theta,
        Suite::Kernel,
        Suite::Example4,
        Suite::Bastiaans,
        Suite::Xi0,
        Suite::Hg,
        Suite::Columns,
        Suite::Weak,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Zak => "zak",
            Suite::Zero => "zero",
            Suite::Theta => "theta",
            Suite::Kernel => "kernel",
            Suite::Example4 => "example4",
            Suite::Bastiaans => "bastiaans",
            Suite::Xi0 => "xi0",
            Suite::Hg => "hg",
            Suite::Columns => "columns",
            Suite::Weak => "weak",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| domain(format!("unknown suite `{s}`; expected one of {}", suite_names().join(", "))))
    }
}

pub fn suite_names() -> Vec<&'static str> {
    Suite::ALL.iter().map(|s| s.name()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub checks: Report,
}

/// Output of one `verify` invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOutput {
    pub pass: bool,
    pub config: VerifyConfig,
    pub suites: Vec<SuiteReport>,
}

impl VerifyOutput {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verify output serializes")
    }

    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.suite == s)
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Zak => zak_suite(cfg)?,
        Suite::Zero => zero_suite(cfg)?,
        Suite::Theta => theta_suite(cfg)?,
        Suite::Kernel => kernel_suite(cfg)?,
        Suite::Example4 => example4_suite(cfg)?,
        Suite::Bastiaans => bastiaans_suite(cfg)?,
        Suite::Xi0 => xi0_suite(cfg)?,
        Suite::Hg => hg_suite(cfg)?,
        Suite::Columns => columns_suite(cfg)?,
        Suite::Weak => weak_suite(cfg)?,
    };
    Ok(SuiteReport { suite, pass: checks.passed(), checks })
}

pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Result<VerifyOutput> {
    let reports = suites.iter().map(|&s| run_suite(s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyOutput { pass: reports.iter().all(|r| r.pass), config: cfg.clone(), suites: reports })
}

pub fn run_all(cfg: &VerifyConfig) -> Result<VerifyOutput> {
    run(&Suite::ALL, cfg)
}

fn unit_gaussian() -> WindowSpec {
    WindowSpec::Gaussian { sigma: 1.0 }
}

fn zak_suite(cfg: &VerifyConfig) -> Result<Report> {
    let phi = unit_gaussian();
    let z = zak::zak_forward(&phi, ZakGrid::new(1.0, cfg.zak_grid, cfg.zak_grid)?, cfg.zak_terms)?;
    let mut rep = Report::new();
    rep.push(
        Check::near("unitarity_norm", z.norm(), 1.0, cfg.norm_tol)
            .with("grid", cfg.zak_grid)
            .with("terms", cfg.zak_terms),
    );
    let nodes: Vec<(f64, f64)> = (0..16).map(|i| (0.0625 * i as f64 + 0.01, 0.37 - 0.05 * i as f64)).collect();
    rep.extend(zak::check_quasiperiodicity(&phi, 1.0, cfg.zak_terms, &nodes, 1e-12)?);
    Ok(rep)
}

fn zero_suite(cfg: &VerifyConfig) -> Result<Report> {
    let phi = unit_gaussian();
    let mut rep = Report::new();
    let at_zero = zak::zak_point(&phi, 1.0, 0.5, 0.5, cfg.zak_terms)?.norm();
    rep.push(Check::at_most("zak_zero_abs", at_zero, cfg.zero_tol));
    let z = zak::zak_forward(&phi, ZakGrid::new(1.0, cfg.blowup_grid, cfg.blowup_grid)?, cfg.zak_terms)?;
    let scan = zak::blowup_scan(&z, (0.5, 0.5), &cfg.blowup_radii);
    rep.extend(scan.report(cfg.blowup_spread));
    let zeros = zak::find_zeros(&z, 1e-6);
    rep.push(Check::new("single_grid_zero", zeros.len() as f64, 1.0, zeros.len() == 1));
    Ok(rep)
}

fn theta_suite(cfg: &VerifyConfig) -> Result<Report> {
    let n = cfg.theta_grid;
    let vals = theta_kernel::theta_grid(n, cfg.theta_radius);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let zeros: Vec<(usize, usize)> =
        vals.iter().enumerate().filter(|(_, v)| **v <= 1e-10).map(|(i, _)| (i / n, i % n)).collect();
    let center = theta_kernel::theta_eval((0.5, 0.5), cfg.theta_radius)?;
    let mut rep = Report::new();
    rep.push(Check::at_least("nonnegative", min, -1e-12).with("grid", n));
    rep.push(
        Check::new("unique_grid_zero", zeros.len() as f64, 1.0, zeros == [(n / 2, n / 2)])
            .with("nodes", zeros.iter().map(|&(i, j)| format!("({i},{j})")).collect::<Vec<_>>()),
    );
    rep.push(Check::at_most("value_at_zero", center.abs(), 1e-10));
    rep.extend(theta_kernel::theta_hessian_check(cfg.theta_radius, cfg.fd_step)?);
    let mut gap: f64 = 0.0;
    for i in 0..32 {
        for j in 0..32 {
            let w = (i as f64 / 32.0 + 0.0071, j as f64 / 32.0 + 0.0113);
            gap = gap.max((theta_kernel::theta_eval(w, cfg.theta_radius)? - theta_kernel::theta_product(w)).abs());
        }
    }
    rep.push(Check::at_most("product_form_gap", gap, 1e-12).with("points", 1024));
    Ok(rep)
}

fn kernel_suite(cfg: &VerifyConfig) -> Result<Report> {
    let one = Complex64::new(1.0, 0.0);
    let polys = [("alternating", KernelPoly::constant(one)), ("alternating_n", KernelPoly::new(vec![((1, 0), one)]))];
    let mut rep = Report::new();
    let s = cfg.kernel_span;
    for (name, p) in &polys {
        let mut worst: f64 = 0.0;
        for n in -s..=s {
            for m in -s..=s {
                worst = worst.max(theta_kernel::kernel_convolution_check(p, n, m, cfg.kernel_radius)?.norm());
            }
        }
        rep.push(Check::at_most(format!("kernel_{name}"), worst, cfg.kernel_tol).with("radius", cfg.kernel_radius));
    }
    let ones = theta_kernel::kernel_convolution_check(&KernelPoly::ones(), 0, 0, cfg.kernel_radius)?;
    let theta0 = theta_kernel::theta_eval((0.0, 0.0), cfg.theta_radius)?;
    rep.push(Check::near("ones_matches_theta_origin", ones.re, theta0, cfg.kernel_tol));
    rep.push(Check::new("ones_not_annihilated", ones.norm(), cfg.kernel_tol, ones.norm() > cfg.kernel_tol));
    // The stated value carries five decimals.
    rep.push(Check::near("theta_origin_value", theta0, cfg.theta_origin, 1e-5));
    Ok(rep)
}

fn example4_suite(cfg: &VerifyConfig) -> Result<Report> {
    let tol = cfg.example4_tol;
    let mut rep = Report::new();
    rep.push(Check::near("g1_norm_sqr", windows::example4_norm_sqr(1.0, 1.0)?, PI / 8.0, tol));
    rep.push(Check::near("gamma1_norm_sqr", windows::example4_norm_sqr(-1.0, 1.0)?, PI, tol));
    let g = WindowSpec::example4_g(1.0)?;
    let gamma = WindowSpec::example4_gamma(1.0)?;
    let grid = ZakGrid::new(1.0, cfg.example4_grid, cfg.example4_grid)?.staggered();
    let b = gabor::reppair_zak_bounds(&g, &gamma, grid, None)?;
    rep.push(Check::near("m_hat", b.m_hat, 1.0, tol));
    rep.push(Check::near("big_m_hat", b.big_m_hat, 1.0, tol));
    rep.push(Check::at_most("symbol_identity_gap", b.identity_gap, tol));
    let (lo, hi, n) = cfg.recon_grid;
    let f = SampledSignal::from_window(&unit_gaussian(), Grid::new(lo, hi, n)?)?;
    let out = gabor::frame_operator_zak(&g, &gamma, LatticeParams::critical(1.0)?, &f)?;
    let err = out.values.iter().zip(&f.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    rep.push(Check::at_most("frame_operator_reconstruction", err, tol).with("samples", n));
    rep.push(Check::near("g1_at_zero", g.eval(0.0)?.re, cfg.example4_g0, 1e-4));
    Ok(rep)
}

/// ∫_{-T}^{T} |ψ|² by Gauss-Legendre on the half-integer pieces where ψ is smooth.
pub fn bastiaans_energy(c_psi: f64, cutoff: f64) -> Result<f64> {
    let rule = quad::gauss_legendre(32);
    let mut edges = vec![-cutoff];
    let mut e = (-cutoff - 0.5).floor() + 1.5;
    while e < cutoff {
        if e > -cutoff {
            edges.push(e);
        }
        e += 1.0;
    }
    edges.push(cutoff);
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (xs, ws) = rule.on(w[0], w[1]);
        for (x, wt) in xs.into_iter().zip(ws) {
            total += wt * windows::bastiaans_eval(c_psi, x, windows::BASTIAANS_TERMS)?.powi(2);
        }
    }
    Ok(total)
}

fn bastiaans_suite(cfg: &VerifyConfig) -> Result<Report> {
    let c_psi = windows::calibrate_bastiaans_constant();
    let psi = WindowSpec::Bastiaans { c_psi };
    let grid = ZakGrid::new(1.0, cfg.bastiaans_grid, cfg.bastiaans_grid)?;
    let b = gabor::reppair_zak_bounds(&psi, &unit_gaussian(), grid, Some(((0.5, 0.5), cfg.bastiaans_exclusion)))?;
    let mut rep = Report::new();
    rep.push(
        Check::at_most("symbol_identity_gap", b.identity_gap, cfg.bastiaans_tol)
            .with("exclusion_radius", cfg.bastiaans_exclusion)
            .with("c_psi", c_psi),
    );
    let sup = (0..=1200)
        .map(|i| -6.0 + 0.01 * i as f64)
        .try_fold(0.0f64, |m, t| Ok::<_, crate::Error>(m.max(psi.eval(t)?.norm())))?;
    rep.push(Check::at_most("bounded_on_6", sup, c_psi));
    let energies = cfg.energy_cutoffs.iter().map(|&t| bastiaans_energy(c_psi, t)).collect::<Result<Vec<_>>>()?;
    let inc: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    // ψ is not square integrable and the energy grows like ln T; "no
    // plateau" means the growth per unit of ln T never falls below half its
    // largest value.
    let rates: Vec<f64> = inc.iter().zip(cfg.energy_cutoffs.windows(2)).map(|(d, w)| d / (w[1] / w[0]).ln()).collect();
    let max_rate = rates.iter().copied().fold(0.0, f64::max);
    let min_rate = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let floor = 0.5 * max_rate;
    rep.push(
        Check::new("energy_growth", min_rate, floor, min_rate >= floor && inc.iter().all(|&d| d > 0.0))
            .with("log_rates", nums(&rates))
            .with("cutoffs", nums(&cfg.energy_cutoffs))
            .with("energies", nums(&energies)),
    );
    Ok(rep)
}

/// G₀ ∫_{-1/2}^{1/2} e^{πt²} dt from the two power series.
pub fn xi0_origin_series() -> f64 {
    let g0: f64 =
        (0..8).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } * (-PI * (n * n + n) as f64 - 0.25 * PI).exp()).sum();
    let mut term = 1.0;
    let mut integral = 0.0;
    for j in 0..40 {
        if j > 0 {
            term *= PI / (4.0 * j as f64);
        }
        integral += term / (2 * j + 1) as f64;
    }
    g0 * integral
}

fn xi0_suite(cfg: &VerifyConfig) -> Result<Report> {
    let pc = PartnerConfig::default();
    let s = cfg.xi0_span;
    let mut gap: f64 = 0.0;
    for k in -s..=s {
        for l in -s..=s {
            let a = partner::xi0_eval(k, l, &pc);
            let b = partner::xi0_by_window(k, l, pc.c_psi)?;
            gap = gap.max((a - b).norm());
        }
    }
    let mut rep = Report::new();
    rep.push(Check::at_most("two_oracle_gap", gap, cfg.xi0_tol).with("span", s));
    let c = partner::decay_envelope_constant(&pc);
    let e = cfg.envelope_span;
    let mut ratio: f64 = 0.0;
    for k in -e..=e {
        for l in -e..=e {
            ratio = ratio.max(partner::xi0_eval(k, l, &pc).norm() * 2.0 * PI * (1.0 + k.abs() as f64) / c);
        }
    }
    rep.push(Check::at_most("decay_envelope_ratio", ratio, 1.0).with("constant", c).with("span", e));
    let unit = partner::xi0_eval(0, 0, &pc.with_c_psi(1.0)).re;
    rep.push(Check::near("origin_unit_constant_series", unit, xi0_origin_series(), 1e-12));
    rep.push(Check::near("origin_unit_constant_stated", unit, cfg.xi0_origin_unit, cfg.xi0_origin_tol));
    Ok(rep)
}

fn hg_suite(cfg: &VerifyConfig) -> Result<Report> {
    let mut rep = Report::new();
    rep.push(Check::near("g0", partner::g_series(0, 8), cfg.g0, cfg.hg_tol));
    rep.push(Check::near("h1", partner::h_factor(1)?, cfg.h1, cfg.hg_tol));
    let lim = (-0.25 * PI).exp();
    let mut worst: f64 = 0.0;
    for k in 2..=cfg.hk_span {
        for kk in [k, -k] {
            worst = worst.max((partner::h_factor(kk)? - kk.signum() as f64 * lim).abs());
        }
    }
    rep.push(Check::at_most("h_limit", worst, cfg.hk_tol).with("span", cfg.hk_span));
    // Transform of μ_k by quadrature against the closed-form modulus.
    let rule = FourierRule::GaussLegendre { nodes: 64, panels: 4 };
    let mut mu_gap: f64 = 0.0;
    for k in [-3i64, -2, -1, 1, 2, 3] {
        let h = partner::h_factor(k)?.abs();
        for l in -6i64..=6 {
            let f = fourier_coeff(|t| Complex64::new(partner::mu_profile(k, t), 0.0), l, rule)?;
            let closed = partner::mu_fourier(k, l);
            let scaled = f.norm() * 2.0 * PI * ((k * k + l * l) as f64).sqrt();
            mu_gap = mu_gap.max((scaled - h).abs()).max((f - closed).norm());
        }
    }
    rep.push(Check::at_most("mu_transform_modulus", mu_gap, cfg.mu_tol));
    Ok(rep)
}

fn columns_suite(cfg: &VerifyConfig) -> Result<Report> {
    let pc = PartnerConfig::default();
    let r_max = *cfg.column_radii.iter().max().ok_or_else(|| domain("no column radii"))?;
    let reach = cfg.column_points.iter().map(|(n, m)| n.abs().max(m.abs())).max().unwrap_or(0) as usize;
    let table = Xi0Table::build(&pc, r_max + reach)?;
    let mut rep = Report::new();
    let last2 = cfg.column_radii.len() - 2;
    for &(n, m) in &cfg.column_points {
        let cor = partner::column_sums(&table, n, m, &cfg.column_radii, Correction::Convergent)?;
        let tail = cor[last2 + 1] - cor[last2];
        rep.push(
            Check::at_most(format!("corrected_tail_{n}_{m}"), tail, cfg.column_tail_tol)
                .with("radii", cfg.column_radii.iter().map(|&r| r as u64).collect::<Vec<_>>())
                .with("sums", nums(&cor)),
        );
        let unc = partner::column_sums(&table, n, m, &cfg.column_radii, Correction::None)?;
        let fit = partner::log_fit(&cfg.column_radii, &unc);
        rep.push(
            Check::new(
                format!("uncorrected_log_fit_{n}_{m}"),
                fit.slope,
                cfg.log_fit_residual,
                fit.slope > 0.0 && fit.relative_residual < cfg.log_fit_residual,
            )
            .with("alpha", num(fit.alpha))
            .with("relative_residual", num(fit.relative_residual))
            .with("sums", nums(&unc)),
        );
    }
    Ok(rep)
}

/// Seeded test vectors: two or three box-basis terms with indices in [-2, 2]².
pub fn weak_test_pairs(seed: u64, count: usize) -> Vec<(OnbExpansion, OnbExpansion)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let terms = rng.random_range(2..=3usize);
        let mut out: Vec<((i64, i64), Complex64)> = Vec::new();
        while out.len() < terms {
            let idx = (rng.random_range(-2..=2i64), rng.random_range(-2..=2i64));
            if out.iter().any(|(i, _)| *i == idx) {
                continue;
            }
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            out.push((idx, c));
        }
        let e = OnbExpansion::new(out);
        let norm = e.norm_sqr().sqrt();
        OnbExpansion::new(e.terms.into_iter().map(|(i, c)| (i, c / norm)).collect())
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

fn weak_suite(cfg: &VerifyConfig) -> Result<Report> {
    let pc = PartnerConfig::default();
    let r_max = *cfg.weak_radii.iter().max().ok_or_else(|| domain("no weak radii"))?;
    let table = Xi0Table::build(&pc, r_max + 4)?;
    let overlaps = GaussBoxOverlaps::new(r_max as i64 + 4);
    let mut rep = Report::new();
    for (i, (f, h)) in weak_test_pairs(cfg.seed, cfg.weak_pairs).iter().enumerate() {
        let r = partner::weak_identity_check(f, h, &cfg.weak_radii, &table, &overlaps, cfg.weak_tol)?;
        rep.extend(r.prefixed(&format!("pair{i}")));
    }
    let lim = (-0.25 * PI).exp();
    for &(k, l) in &cfg.beta_points {
        let beta = partner::beta_round_trip(k, l, cfg.beta_truncation, &pc);
        let target = Complex64::new(-(k.signum() as f64) * lim, 0.0);
        rep.push(
            Check::at_most(format!("beta_round_trip_{k}_{l}"), (beta - target).norm(), cfg.beta_tol)
                .with("truncation", cfg.beta_truncation),
        );
    }
    Ok(rep)
}
