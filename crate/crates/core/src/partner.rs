//! Reproducing partner for the integer Gaussian Gabor system.
//!
//! The coefficient sequence ξ₀[k,l] = ⟨γ, T_k M_l ψ⟩ of the box window in the
//! Bastiaans system is a weak solution of D_G ξ = γ. Shifting it gives
//! solutions for every γ_{k,l}; adding the alternating kernel element
//! (-1)^{n+m} c[k,l] makes the columns square-summable.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result, domain};
use crate::gabor::LatticeSeq;
use crate::numeric_core::{Grid, SampledSignal};
use crate::quad;
use crate::report::{Check, Report, num, nums};
use crate::windows::{self, WindowSpec, calibrate_bastiaans_constant};
use crate::zak::{self, ZakGrid};

/// Above this |β| the moment recurrence replaces Gauss-Legendre.
const MOMENT_SWITCH: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartnerConfig {
    /// Truncation radius for (k, l) sums.
    pub r_lattice: usize,
    /// Gauss-Legendre nodes on the unit interval for ξ₀.
    pub quad_nodes: usize,
    /// Bastiaans constant.
    pub c_psi: f64,
    /// Terms kept in the G_k series.
    pub series_n: usize,
}

impl Default for PartnerConfig {
    fn default() -> Self {
        Self { r_lattice: 64, quad_nodes: 256, c_psi: calibrate_bastiaans_constant(), series_n: 8 }
    }
}

impl PartnerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_lattice == 0 || self.quad_nodes < 16 || !self.c_psi.is_finite() || self.c_psi <= 0.0 {
            return Err(domain(format!("invalid partner configuration {self:?}")));
        }
        if self.series_n < 6 {
            return Err(domain(format!("series_n must be at least 6, got {}", self.series_n)));
        }
        Ok(())
    }

    pub fn with_c_psi(self, c_psi: f64) -> Self {
        Self { c_psi, ..self }
    }
}

fn sign_of(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 }
}

/// G_k = Σ_{n>=0} (-1)^n e^{-π(n² + 2|k|n + n + 1/4)}.
pub fn g_series(k: i64, n_terms: usize) -> f64 {
    let k = k.unsigned_abs() as f64;
    (0..n_terms as i64)
        .map(|n| {
            let nf = n as f64;
            sign_of(n) * (-PI * (nf * nf + 2.0 * k * nf + nf + 0.25)).exp()
        })
        .sum()
}

/// H_k = sgn(k)(1 - e^{-2π|k|}) G_k, k ≠ 0.
pub fn h_factor(k: i64) -> Result<f64> {
    if k == 0 {
        return Err(domain("H_k is defined for k != 0 only"));
    }
    let s = if k > 0 { 1.0 } else { -1.0 };
    Ok(s * (1.0 - (-2.0 * PI * k.unsigned_abs() as f64).exp()) * g_series(k, 8))
}

/// F(μ_k)[l]: G₀ δ₀[l] for k = 0, otherwise (-1)^{l+k} H_k / (2π(k+il)).
pub fn mu_fourier(k: i64, l: i64) -> Complex64 {
    if k == 0 {
        return if l == 0 { Complex64::new(g_series(0, 8), 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let h = h_factor(k).expect("k != 0");
    sign_of(k + l) * h / (2.0 * PI * Complex64::new(k as f64, l as f64))
}

/// μ_k(t) = (-1)^k e^{-π|k|} G_k e^{-2πkt} on [-1/2, 1/2].
pub fn mu_profile(k: i64, t: f64) -> f64 {
    sign_of(k) * (-PI * k.unsigned_abs() as f64 - 2.0 * PI * k as f64 * t).exp() * g_series(k, 8)
}

/// ∫₀¹ e^{πs²} e^{-βs} ds by Gauss-Legendre.
fn unit_integral_gl(beta: Complex64, nodes: usize) -> Complex64 {
    let rule = quad::gauss_legendre(nodes);
    rule.integrate_c(0.0, 1.0, |s| (PI * s * s - beta * s).exp())
}

/// Same integral from the moments M_n = ∫₀¹ sⁿ e^{-βs} ds, expanding e^{πs²}.
/// The forward recurrence is stable while n < |β|.
fn unit_integral_moments(beta: Complex64) -> Complex64 {
    let e = (-beta).exp();
    let mut m = (1.0 - e) / beta;
    let mut total = m;
    let mut coef = 1.0;
    for j in 1..=40usize {
        // Advance M by two orders.
        m = ((2 * j - 1) as f64 * m - e) / beta;
        m = ((2 * j) as f64 * m - e) / beta;
        coef *= PI / j as f64;
        let term = coef * m;
        total += term;
        if term.norm() < 1e-18 * total.norm() {
            break;
        }
    }
    total
}

/// e^{-π|k|} ∫_{-1/2}^{1/2} e^{πt²} e^{-2π(k+il)t} dt, for k >= 0.
///
/// With s = t + 1/2 the integral is e^{π/4}(-1)^l ∫₀¹ e^{πs²} e^{-βs} ds with
/// β = 2π(k+il) + π; the large exponentials cancel analytically.
fn damped_integral(k: i64, l: i64, nodes: usize) -> Complex64 {
    debug_assert!(k >= 0);
    let beta = Complex64::new(2.0 * PI * k as f64 + PI, 2.0 * PI * l as f64);
    let core = if beta.norm() >= MOMENT_SWITCH { unit_integral_moments(beta) } else { unit_integral_gl(beta, nodes) };
    sign_of(l) * (0.25 * PI).exp() * core
}

/// As [`damped_integral`], forcing one route; for cross-checking.
pub fn damped_integral_route(k: i64, l: i64, moments: bool, nodes: usize) -> Complex64 {
    let beta = Complex64::new(2.0 * PI * k as f64 + PI, 2.0 * PI * l as f64);
    let core = if moments { unit_integral_moments(beta) } else { unit_integral_gl(beta, nodes) };
    sign_of(l) * (0.25 * PI).exp() * core
}

/// ξ₀[k,l] = C_ψ (-1)^k G_k e^{-π|k|} ∫ e^{πt²} e^{-2πkt} e^{-2πilt} dt.
pub fn xi0_eval(k: i64, l: i64, cfg: &PartnerConfig) -> Complex64 {
    // ξ₀[-k,-l] = ξ₀[k,l] (substitute t -> -t).
    let (k, l) = if k < 0 { (-k, -l) } else { (k, l) };
    cfg.c_psi * sign_of(k) * g_series(k, cfg.series_n) * damped_integral(k, l, cfg.quad_nodes)
}

/// A row ξ₀[k, l] for l in `ls`, sharing one set of integrand samples for all
/// entries that stay on the quadrature route.
pub fn xi0_row(k: i64, ls: &[i64], cfg: &PartnerConfig) -> Vec<Complex64> {
    let rule = quad::gauss_legendre(cfg.quad_nodes);
    let (nodes, weights) = rule.on(-0.5, 0.5);
    let ka = k.unsigned_abs() as f64;
    let kf = k as f64;
    let samples: Vec<f64> =
        nodes.iter().zip(&weights).map(|(&t, &w)| w * (PI * t * t - PI * ka - 2.0 * PI * kf * t).exp()).collect();
    let pre = cfg.c_psi * sign_of(k) * g_series(k, cfg.series_n);
    ls.iter()
        .map(|&l| {
            let beta = Complex64::new(2.0 * PI * ka + PI, 2.0 * PI * l as f64);
            if beta.norm() >= MOMENT_SWITCH {
                xi0_eval(k, l, cfg)
            } else {
                let s: Complex64 = nodes
                    .iter()
                    .zip(&samples)
                    .map(|(&t, &f)| f * Complex64::from_polar(1.0, -2.0 * PI * l as f64 * t))
                    .sum();
                pre * s
            }
        })
        .collect()
}

/// ⟨γ, T_k M_l ψ⟩ by direct quadrature of the Bastiaans series; an
/// independent route to ξ₀ for moderate indices.
pub fn xi0_by_window(k: i64, l: i64, c_psi: f64) -> Result<Complex64> {
    let rule = quad::gauss_legendre(48);
    let panels = 4 + l.unsigned_abs() as usize / 2;
    let mut err = None;
    let v = quad::composite_c(&rule, -0.5, 0.5, panels, |t| {
        match windows::bastiaans_eval(c_psi, t - k as f64, windows::BASTIAANS_TERMS) {
            Ok(p) => Complex64::from_polar(p, -2.0 * PI * l as f64 * t),
            Err(e) => {
                err = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// S = Σ_{n>=0} e^{-π(n²+n)}, which dominates e^{π/4} G_k for every k.
pub fn envelope_series() -> f64 {
    (0..10).map(|n| (-PI * (n * n + n) as f64).exp()).sum()
}

/// Constant C in |ξ₀[k,l]| <= C / (2π(1+|k|)).
///
/// For k ≠ 0, |ξ₀| <= C_ψ e^{π/4} G_k sinh(π|k|) e^{-π|k|}/(π|k|) <= C_ψ S/(2π|k|),
/// and 1/|k| <= 2/(1+|k|). For k = 0 the bound C_ψ G₀ ∫e^{πt²} is smaller.
pub fn decay_envelope_constant(cfg: &PartnerConfig) -> f64 {
    2.0 * PI * cfg.c_psi * envelope_series()
}

/// Which correction the assembled columns use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    /// Pure shifts of ξ₀, as forced by shift invariance.
    None,
    /// c[k,l] with the sign that makes β[k,l] cancel the shifted tail.
    Convergent,
    /// c[k,l] with the opposite sign.
    Flipped,
}

impl Correction {
    fn factor(self) -> f64 {
        match self {
            Self::None => 0.0,
            Self::Convergent => 1.0,
            Self::Flipped => -1.0,
        }
    }
}

/// c[k,l] = -e^{-π/4} ξ₀[k,l] / |H_k| for k ≠ 0, c[0,l] = 0.
///
/// This is (2π)⁻¹ sgn(k) e^{-π/4} F(F⁻¹(h_k) g)[l] with the overall sign
/// chosen so that β[k,l] = -sgn(k) e^{-π/4}, the value that cancels the
/// asymptotics of the shifted ξ₀ terms; F⁻¹(h_k) = 2πμ_k / H_k in closed form.
pub fn c_coeff(k: i64, l: i64, cfg: &PartnerConfig) -> Complex64 {
    if k == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let h = h_factor(k).expect("k != 0").abs();
    -(-0.25 * PI).exp() * xi0_eval(k, l, cfg) / h
}

/// c[k,l] by the defining transforms, with F⁻¹(h_k) replaced by the symmetric
/// partial sum of order `big_l`; slow and only O(1/L) accurate.
pub fn c_coeff_partial_sums(k: i64, l: i64, big_l: i64, cfg: &PartnerConfig) -> Result<Complex64> {
    if k == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rule = quad::gauss_legendre(64);
    let panels = 64;
    let inv_h = |t: f64| -> Complex64 {
        (-big_l..=big_l)
            .map(|j| {
                sign_of(k + j) * Complex64::from_polar(1.0, 2.0 * PI * j as f64 * t)
                    / Complex64::new(k as f64, j as f64)
            })
            .sum()
    };
    let coeff = quad::composite_c(&rule, -0.5, 0.5, panels, |t| {
        inv_h(t) * cfg.c_psi * (PI * t * t).exp() * Complex64::from_polar(1.0, -2.0 * PI * l as f64 * t)
    });
    let s = if k > 0 { 1.0 } else { -1.0 };
    Ok(-s * (-0.25 * PI).exp() * coeff / (2.0 * PI))
}

/// F(1/g)[j] with g(t) = C_ψ e^{πt²}; Gauss-Legendre for small j and the
/// endpoint expansion -2(-1)^j Σ_{r odd} w^{(r)}(1/2) / (-2πij)^{r+1} beyond.
pub fn inverse_weight_coeff(j: i64, c_psi: f64) -> f64 {
    let ja = j.unsigned_abs();
    if ja <= 64 {
        let rule = quad::gauss_legendre(64);
        let v = quad::composite_c(&rule, -0.5, 0.5, 8, |t| {
            Complex64::from_polar((-PI * t * t).exp(), -2.0 * PI * ja as f64 * t)
        });
        return v.re / c_psi;
    }
    // Derivatives of e^{-πt²} at 1/2 through Hermite polynomials:
    // d^r e^{-πt²} = (-√π)^r H_r(√π t) e^{-πt²}.
    let x = PI.sqrt() * 0.5;
    let base = (-0.25 * PI).exp();
    let (mut h_prev, mut h) = (1.0, 2.0 * x);
    let lam = 2.0 * PI * ja as f64;
    let mut total = 0.0;
    let mut r = 1usize;
    let mut scale = -PI.sqrt();
    loop {
        // h = H_r, scale = (-√π)^r.
        let deriv = scale * h * base;
        // (-iλ)^{r+1} with r odd is real: (-1)^{(r+1)/2} λ^{r+1}.
        let pow = if (r as u64).div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 } * lam.powi((r + 1) as i32);
        let term = deriv / pow;
        total += term;
        if term.abs() < 1e-22 || r >= 15 {
            break;
        }
        // Advance to H_{r+2}.
        let h_next = 2.0 * x * h - 2.0 * r as f64 * h_prev;
        let h_next2 = 2.0 * x * h_next - 2.0 * (r + 1) as f64 * h;
        h_prev = h_next;
        h = h_next2;
        scale *= PI;
        r += 2;
    }
    -2.0 * sign_of(j) * total / c_psi
}

/// β[k,l] = 2π (-1)^{k+l} F(F⁻¹(c[k,·]) / g)[l] (k + il), evaluated as the
/// discrete convolution of c[k,·] with F(1/g) truncated at |l'| <= `big_l`.
pub fn beta_round_trip(k: i64, l: i64, big_l: i64, cfg: &PartnerConfig) -> Complex64 {
    let span = big_l + l.abs() + 1;
    let w: Vec<f64> = (0..=span).into_par_iter().map(|j| inverse_weight_coeff(j, cfg.c_psi)).collect();
    let terms: Vec<Complex64> =
        (-big_l..=big_l).into_par_iter().map(|lp| c_coeff(k, lp, cfg) * w[(l - lp).unsigned_abs() as usize]).collect();
    let conv: Complex64 = terms.iter().sum();
    2.0 * PI * sign_of(k + l) * conv * Complex64::new(k as f64, l as f64)
}

/// Shift (S_{k,l} c)[n,m] = c[n-k, m-l]; entries shifted in from outside the
/// stored box are zero.
pub fn index_shift(xi: &LatticeSeq, k: i64, l: i64) -> LatticeSeq {
    LatticeSeq::from_fn(xi.radius, |n, m| xi.get(n - k, m - l))
}

/// S_{k,l} ξ₀ on the box of `radius`, every entry recomputed.
pub fn xi0_shifted(k: i64, l: i64, radius: usize, cfg: &PartnerConfig) -> LatticeSeq {
    LatticeSeq::from_fn(radius, |n, m| xi0_eval(n - k, m - l, cfg))
}

/// ξ₀ and c tabulated on a box, built once and read concurrently.
#[derive(Debug, Clone)]
pub struct Xi0Table {
    pub cfg: PartnerConfig,
    pub xi0: LatticeSeq,
    pub c: LatticeSeq,
}

impl Xi0Table {
    pub fn build(cfg: &PartnerConfig, radius: usize) -> Result<Self> {
        cfg.validate()?;
        let r = radius as i64;
        let ls: Vec<i64> = (-r..=r).collect();
        let rows: Vec<Vec<Complex64>> = (-r..=r).into_par_iter().map(|k| xi0_row(k, &ls, cfg)).collect();
        let xi0 = LatticeSeq { radius, values: rows.into_iter().flatten().collect() };
        let inv_h: Vec<f64> =
            (-r..=r).map(|k| if k == 0 { 0.0 } else { 1.0 / h_factor(k).expect("k != 0").abs() }).collect();
        let damp = (-0.25 * PI).exp();
        let c = LatticeSeq::from_fn(radius, |k, l| -damp * inv_h[(k + r) as usize] * xi0.get(k, l));
        Ok(Self { cfg: *cfg, xi0, c })
    }

    pub fn radius(&self) -> usize {
        self.xi0.radius
    }

    /// ξ_{k,l}[n,m] = ξ₀[n-k, m-l] + (-1)^{n+m} c[k,l].
    pub fn xi_entry(&self, k: i64, l: i64, n: i64, m: i64, corr: Correction) -> Complex64 {
        self.xi0.get(n - k, m - l) + corr.factor() * sign_of(n + m) * self.c.get(k, l)
    }
}

/// ξ_{k,l}[n,m] computed from scratch.
pub fn xi_entry(k: i64, l: i64, n: i64, m: i64, corr: Correction, cfg: &PartnerConfig) -> Complex64 {
    xi0_eval(n - k, m - l, cfg) + corr.factor() * sign_of(n + m) * c_coeff(k, l, cfg)
}

/// T_R(n,m) = Σ_{|k|,|l|<=R} |ξ_{k,l}[n,m]|² for each R in `radii`.
pub fn column_sums(table: &Xi0Table, n: i64, m: i64, radii: &[usize], corr: Correction) -> Result<Vec<f64>> {
    let r_max = *radii.iter().max().ok_or_else(|| domain("no radii given"))?;
    let need = r_max as i64 + n.abs().max(m.abs());
    if need > table.radius() as i64 {
        return Err(domain(format!("table radius {} too small, need {need}", table.radius())));
    }
    // Ring sums over max(|k|,|l|) = ρ, accumulated in order.
    let rings: Vec<f64> = (0..=r_max as i64)
        .into_par_iter()
        .map(|rho| {
            let mut s = 0.0;
            if rho == 0 {
                return table.xi_entry(0, 0, n, m, corr).norm_sqr();
            }
            for t in -rho..=rho {
                s += table.xi_entry(rho, t, n, m, corr).norm_sqr();
                s += table.xi_entry(-rho, t, n, m, corr).norm_sqr();
            }
            for t in (-rho + 1)..rho {
                s += table.xi_entry(t, rho, n, m, corr).norm_sqr();
                s += table.xi_entry(t, -rho, n, m, corr).norm_sqr();
            }
            s
        })
        .collect();
    let mut cum = Vec::with_capacity(rings.len());
    let mut acc = 0.0;
    for v in rings {
        acc += v;
        cum.push(acc);
    }
    Ok(radii.iter().map(|&r| cum[r]).collect())
}

/// T_R(n,m) for a single radius.
pub fn column_sum(table: &Xi0Table, n: i64, m: i64, radius: usize, corr: Correction) -> Result<f64> {
    if radius < 16 {
        return Err(domain(format!("column sums need R >= 16, got {radius}")));
    }
    Ok(column_sums(table, n, m, &[radius], corr)?[0])
}

/// Least-squares fit T ≈ α + β ln R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFit {
    pub alpha: f64,
    pub slope: f64,
    /// ‖residual‖ / ‖T - mean T‖.
    pub relative_residual: f64,
}

pub fn log_fit(radii: &[usize], sums: &[f64]) -> LogFit {
    let xs: Vec<f64> = radii.iter().map(|&r| (r as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = sums.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(sums).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let alpha = my - slope * mx;
    let res: f64 = xs.iter().zip(sums).map(|(x, y)| (y - alpha - slope * x).powi(2)).sum::<f64>().sqrt();
    let spread: f64 = sums.iter().map(|y| (y - my).powi(2)).sum::<f64>().sqrt();
    LogFit { alpha, slope, relative_residual: res / spread }
}

/// Finite combination Σ a_{k,l} γ_{k,l} of the box orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OnbExpansion {
    pub terms: Vec<((i64, i64), Complex64)>,
}

impl OnbExpansion {
    pub fn new(terms: Vec<((i64, i64), Complex64)>) -> Self {
        Self { terms }
    }

    pub fn basis(k: i64, l: i64) -> Self {
        Self::new(vec![((k, l), Complex64::new(1.0, 0.0))])
    }

    /// ⟨self, other⟩ from orthonormality.
    pub fn inner(&self, other: &OnbExpansion) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if i == j {
                    s += a * b.conj();
                }
            }
        }
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    /// Projection of a signal onto the box basis up to radius R.
    pub fn from_signal(f: &SampledSignal, radius: usize) -> Result<Self> {
        let seq = onb_coefficients(f, radius)?;
        Ok(Self::new(seq.iter().map(|(k, l, v)| ((k, l), v)).collect()))
    }

    pub fn to_signal(&self, grid: Grid) -> Result<SampledSignal> {
        SampledSignal::from_fn(grid, |t| {
            self.terms
                .iter()
                .map(|&((k, l), a)| {
                    a * windows::box_eval(t - k as f64)
                        * Complex64::from_polar(1.0, 2.0 * PI * l as f64 * (t - k as f64))
                })
                .sum()
        })
    }
}

/// ⟨f, γ_{k,l}⟩ for |k|,|l| <= R. Analytic signals are integrated per cell by
/// Gauss-Legendre; tabulated ones by the midpoint rule over their nodes.
pub fn onb_coefficients(f: &SampledSignal, radius: usize) -> Result<LatticeSeq> {
    let r = radius as i64;
    match &f.origin {
        Some(spec) => {
            let rule = quad::gauss_legendre(48);
            let panels = 4 + radius / 4;
            let cells: Result<Vec<Vec<(f64, f64, Complex64)>>> = (-r..=r)
                .into_par_iter()
                .map(|k| {
                    let (mut xs, mut ws) = (Vec::new(), Vec::new());
                    let h = 1.0 / panels as f64;
                    for p in 0..panels {
                        let lo = k as f64 - 0.5 + p as f64 * h;
                        let (x, w) = rule.on(lo, lo + h);
                        xs.extend(x);
                        ws.extend(w);
                    }
                    xs.iter().zip(&ws).map(|(&t, &w)| Ok((t, w, spec.eval(t)?))).collect()
                })
                .collect();
            let cells = cells?;
            Ok(LatticeSeq::from_fn(radius, |k, l| {
                cells[(k + r) as usize]
                    .iter()
                    .map(|&(t, w, v)| w * v * Complex64::from_polar(1.0, -2.0 * PI * l as f64 * (t - k as f64)))
                    .sum()
            }))
        }
        None => {
            let h = f.grid.spacing();
            Ok(LatticeSeq::from_fn(radius, |k, l| {
                f.grid
                    .nodes()
                    .zip(&f.values)
                    .filter(|(t, _)| windows::box_eval(t - k as f64) > 0.0)
                    .map(|(t, v)| v * Complex64::from_polar(h, -2.0 * PI * l as f64 * (t - k as f64)))
                    .sum()
            }))
        }
    }
}

/// ⟨f, ψ_{n,m}⟩ = Σ_{k,l} ξ_{k,l}[n,m] ⟨f, γ_{k,l}⟩.
pub fn partner_coeff(f: &OnbExpansion, n: i64, m: i64, table: &Xi0Table, corr: Correction) -> Complex64 {
    f.terms.iter().map(|&((k, l), a)| table.xi_entry(k, l, n, m, corr) * a).sum()
}

/// ⟨f, ψ_{n,m}⟩ for a sampled signal, projected onto the box basis of radius R.
pub fn partner_coeff_signal(f: &SampledSignal, n: i64, m: i64, radius: usize, table: &Xi0Table) -> Result<Complex64> {
    let coeffs = onb_coefficients(f, radius)?;
    let r = radius as i64;
    if r + n.abs().max(m.abs()) > table.radius() as i64 {
        return Err(domain("table radius too small for the requested projection"));
    }
    Ok(coeffs.iter().map(|(k, l, a)| table.xi_entry(k, l, n, m, Correction::Convergent) * a).sum())
}

/// A(d, q) = ∫_{-1/2}^{1/2} φ(s+d) e^{2πiqs} ds, so that
/// ⟨φ_{n,m}, γ_{k,l}⟩ = A(k-n, m-l).
#[derive(Debug, Clone)]
pub struct GaussBoxOverlaps {
    d_max: i64,
    q_max: i64,
    values: Vec<Complex64>,
}

impl GaussBoxOverlaps {
    pub fn new(q_max: i64) -> Self {
        let d_max = 8;
        let rule = quad::gauss_legendre(32);
        let panels = 4 + q_max.unsigned_abs() as usize / 2;
        let w = 2 * q_max + 1;
        let values = (0..(2 * d_max + 1) * w)
            .into_par_iter()
            .map(|idx| {
                let d = idx / w - d_max;
                let q = idx % w - q_max;
                quad::composite_c(&rule, -0.5, 0.5, panels, |s| {
                    let t = s + d as f64;
                    Complex64::from_polar(2f64.powf(0.25) * (-PI * t * t).exp(), 2.0 * PI * q as f64 * s)
                })
            })
            .collect();
        Self { d_max, q_max, values }
    }

    pub fn get(&self, d: i64, q: i64) -> Complex64 {
        if d.abs() > self.d_max {
            return Complex64::new(0.0, 0.0);
        }
        assert!(q.abs() <= self.q_max, "overlap table too small for q = {q}");
        self.values[((d + self.d_max) * (2 * self.q_max + 1) + q + self.q_max) as usize]
    }

    /// ⟨φ_{n,m}, h⟩ for a box-basis expansion h.
    pub fn analysis(&self, n: i64, m: i64, h: &OnbExpansion) -> Complex64 {
        h.terms.iter().map(|&((k, l), b)| b.conj() * self.get(k - n, m - l)).sum()
    }
}

/// Partial sums Σ_{|n|,|m|<=R} ⟨f, ψ_{n,m}⟩ ⟨φ_{n,m}, h⟩ and their distance
/// to ⟨f, h⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakTrace {
    pub radii: Vec<usize>,
    pub sums: Vec<Complex64>,
    pub target: Complex64,
    pub errors: Vec<f64>,
}

impl WeakTrace {
    pub fn decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn weak_identity_trace(
    f: &OnbExpansion,
    h: &OnbExpansion,
    radii: &[usize],
    table: &Xi0Table,
    overlaps: &GaussBoxOverlaps,
) -> Result<WeakTrace> {
    let r_max = *radii.iter().max().ok_or_else(|| domain("no radii given"))? as i64;
    let reach = f.terms.iter().map(|((k, l), _)| k.abs().max(l.abs())).max().unwrap_or(0);
    if r_max + reach > table.radius() as i64 {
        return Err(domain("table radius too small for the weak identity"));
    }
    let rings: Vec<Complex64> = (0..=r_max)
        .into_par_iter()
        .map(|rho| {
            let term =
                |n: i64, m: i64| partner_coeff(f, n, m, table, Correction::Convergent) * overlaps.analysis(n, m, h);
            if rho == 0 {
                return term(0, 0);
            }
            let mut s = Complex64::new(0.0, 0.0);
            for t in -rho..=rho {
                s += term(rho, t) + term(-rho, t);
            }
            for t in (-rho + 1)..rho {
                s += term(t, rho) + term(t, -rho);
            }
            s
        })
        .collect();
    let mut cum = Vec::with_capacity(rings.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for v in rings {
        acc += v;
        cum.push(acc);
    }
    let target = f.inner(h);
    let sums: Vec<Complex64> = radii.iter().map(|&r| cum[r]).collect();
    let errors = sums.iter().map(|s| (s - target).norm()).collect();
    Ok(WeakTrace { radii: radii.to_vec(), sums, target, errors })
}

/// Weak reconstruction report: errors must decrease in R and end below `tol`.
pub fn weak_identity_check(
    f: &OnbExpansion,
    h: &OnbExpansion,
    radii: &[usize],
    table: &Xi0Table,
    overlaps: &GaussBoxOverlaps,
    tol: f64,
) -> Result<Report> {
    let tr = weak_identity_trace(f, h, radii, table, overlaps)?;
    let last = *tr.errors.last().expect("radii non-empty");
    let mut rep = Report::new();
    rep.push(
        Check::new("weak_identity", last, tol, last <= tol && tr.decreasing())
            .with("radii", tr.radii.iter().map(|&r| r as u64).collect::<Vec<_>>())
            .with("errors", nums(&tr.errors))
            .with("decreasing", tr.decreasing()),
    );
    Ok(rep)
}

/// Shift-invariant columns against corrected ones at (0,0).
pub fn shift_invariance_demo(table: &Xi0Table) -> Result<Report> {
    let radii = [32usize, 64, 128, 256];
    let unc = column_sums(table, 0, 0, &radii, Correction::None)?;
    let fit = log_fit(&radii, &unc);
    let cor = column_sums(table, 0, 0, &[128, 256], Correction::Convergent)?;
    let ring_max = (0..=64i64)
        .flat_map(|k| [(k, 64 - k), (k, k - 64), (-k, 64 - k), (-k, k - 64)])
        .map(|(k, l)| table.xi0.get(k, l).norm())
        .fold(0.0, f64::max);
    let mut rep = Report::new();
    rep.push(
        Check::new("uncorrected_log_slope", fit.slope, 0.0, fit.slope > 0.0 && fit.relative_residual < 0.2)
            .with("relative_residual", num(fit.relative_residual))
            .with("radii", radii.iter().map(|&r| r as u64).collect::<Vec<_>>())
            .with("sums", nums(&unc)),
    );
    rep.push(Check::at_most("corrected_tail_256", cor[1] - cor[0], 1e-3).with("sums", nums(&cor)));
    // Ring maxima behave like C_ψ/(2π·64/√2); reported, judged against that law.
    let predicted = table.cfg.c_psi / (2.0 * PI * 64.0 / 2f64.sqrt());
    rep.push(
        Check::new("xi0_ring_64_max", ring_max, predicted, (ring_max / predicted - 1.0).abs() < 0.1)
            .with("predicted", num(predicted)),
    );
    Ok(rep)
}

/// The frame systems exercised by [`semiframe_duality_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semiframe {
    /// G(γ,1,1) paired with itself.
    BoxOnb,
    /// G(φ,1,1) with the constructed partner.
    GaussianPartner,
}

/// Bessel bound of the analysis system and lower-frame ratios of the partner on
/// a set of box-basis test vectors.
pub fn semiframe_duality_check(
    system: Semiframe,
    tests: &[OnbExpansion],
    radius: usize,
    table: &Xi0Table,
) -> Result<Report> {
    if tests.is_empty() {
        return Err(Error::Domain("semiframe check needs test vectors".into()));
    }
    let mut rep = Report::new();
    match system {
        Semiframe::BoxOnb => {
            // |Z₁γ| ≡ 1, so the sharp Bessel bound is 1 and Ψ = Φ.
            let zg = zak::zak_forward(&WindowSpec::Box, ZakGrid::new(1.0, 64, 64)?.staggered(), 2)?;
            let b_hat = zg.max_abs().powi(2);
            let worst = tests
                .iter()
                .map(|f| {
                    let s: f64 = f.terms.iter().map(|(_, a)| a.norm_sqr()).sum();
                    s / f.norm_sqr()
                })
                .fold(f64::INFINITY, f64::min);
            rep.push(Check::near("bessel_bound", b_hat, 1.0, 1e-12));
            rep.push(Check::near("lower_ratio", worst, 1.0, 1e-12));
        }
        Semiframe::GaussianPartner => {
            let zg = zak::zak_forward(&WindowSpec::Gaussian { sigma: 1.0 }, ZakGrid::new(1.0, 256, 256)?, 8)?;
            let b_hat = zg.max_abs().powi(2);
            let overlaps = GaussBoxOverlaps::new(radius as i64 + 8);
            let r = radius as i64;
            let mut worst_lower = f64::INFINITY;
            let mut worst_bessel: f64 = 0.0;
            for f in tests {
                let nf = f.norm_sqr();
                let (mut lower, mut bessel) = (0.0, 0.0);
                for n in -r..=r {
                    for m in -r..=r {
                        lower += partner_coeff(f, n, m, table, Correction::Convergent).norm_sqr();
                        bessel += overlaps.analysis(n, m, f).norm_sqr();
                    }
                }
                worst_lower = worst_lower.min(lower / nf);
                worst_bessel = worst_bessel.max(bessel / nf);
            }
            rep.push(
                Check::new("bessel_bound_finite", b_hat, f64::INFINITY, b_hat.is_finite()).with("grid", "256x256"),
            );
            rep.push(Check::at_most("bessel_ratio_below_bound", worst_bessel, b_hat));
            rep.push(Check::at_least("lower_ratio", worst_lower, 1.0 / b_hat - 1e-3).with("radius", radius as u64));
        }
    }
    Ok(rep)
}
