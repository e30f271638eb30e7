//! Window functions: Gaussians, the box, the Bastiaans dual and the
//! band-limited quarter-power pair that sits at the edge of Balian-Low.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result, domain};
use crate::numeric_core::SampledSignal;
use crate::quad;

/// Γ(5/4) and Γ(3/4); enough to state the Example-4 envelopes without a
/// special-function dependency.
const GAMMA_5_4: f64 = 0.906_402_477_055_477;
const GAMMA_3_4: f64 = 1.225_416_702_465_177_6;

/// Default |t| domain for [`bastiaans_eval`].
pub const BASTIAANS_DOMAIN: f64 = 16.0;
/// Default number of series terms for [`bastiaans_eval`].
pub const BASTIAANS_TERMS: usize = 8;

/// Quadrature target for the Example-4 Fourier integrals.
pub const EXAMPLE4_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum WindowSpec {
    Gaussian { sigma: f64 },
    Box,
    Bastiaans { c_psi: f64 },
    Example4G { a: f64 },
    Example4Gamma { a: f64 },
    Tabulated(Box<SampledSignal>),
}

impl WindowSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("gaussian sigma must be positive, got {sigma}")));
        }
        Ok(Self::Gaussian { sigma })
    }

    /// The Bastiaans window with the calibrated constant.
    pub fn bastiaans() -> Self {
        Self::Bastiaans { c_psi: calibrate_bastiaans_constant() }
    }

    pub fn bastiaans_with(c_psi: f64) -> Result<Self> {
        if !(c_psi > 0.0 && c_psi.is_finite()) {
            return Err(domain(format!("C_psi must be positive, got {c_psi}")));
        }
        Ok(Self::Bastiaans { c_psi })
    }

    pub fn example4_g(a: f64) -> Result<Self> {
        check_a(a)?;
        Ok(Self::Example4G { a })
    }

    pub fn example4_gamma(a: f64) -> Result<Self> {
        check_a(a)?;
        Ok(Self::Example4Gamma { a })
    }

    pub fn name(&self) -> String {
        match self {
            Self::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
            Self::Box => "box".into(),
            Self::Bastiaans { c_psi } => format!("bastiaans(c_psi={c_psi})"),
            Self::Example4G { a } => format!("example4_g(a={a})"),
            Self::Example4Gamma { a } => format!("example4_gamma(a={a})"),
            Self::Tabulated(s) => format!("tabulated(n={})", s.values.len()),
        }
    }

    /// Pointwise value.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        Ok(match self {
            Self::Gaussian { sigma } => gaussian_eval(*sigma, t)?.into(),
            Self::Box => box_eval(t).into(),
            Self::Bastiaans { c_psi } => bastiaans_eval(*c_psi, t, BASTIAANS_TERMS)?.into(),
            Self::Example4G { a } => example4_g(*a, t)?,
            Self::Example4Gamma { a } => example4_gamma(*a, t)?,
            Self::Tabulated(s) => s.interpolate(t),
        })
    }

    /// Upper bound for |f(s)| over |s| >= t.
    pub fn decay_bound(&self, t: f64) -> f64 {
        let t = t.abs();
        match self {
            Self::Gaussian { sigma } => (2.0 / sigma).powf(0.25) * (-PI * t * t / sigma).exp(),
            Self::Box => {
                if t > 0.5 {
                    0.0
                } else {
                    1.0
                }
            }
            // Bounded by the constant times the zeroth series term.
            Self::Bastiaans { c_psi } => *c_psi,
            Self::Example4G { a } => example4_envelope(1.0, *a, t),
            Self::Example4Gamma { a } => example4_envelope(-1.0, *a, t),
            Self::Tabulated(s) => {
                s.grid.nodes().zip(&s.values).filter(|(x, _)| x.abs() >= t).map(|(_, v)| v.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Radius beyond which [`Self::decay_bound`] drops below `eps`, if any.
    pub fn support_radius(&self, eps: f64) -> Option<f64> {
        match self {
            Self::Gaussian { sigma } => {
                let c = (2.0 / sigma).powf(0.25);
                Some((sigma * (c / eps).ln().max(0.0) / PI).sqrt())
            }
            Self::Box => Some(0.5),
            Self::Tabulated(s) => Some(s.grid.t_min.abs().max(s.grid.t_max.abs())),
            _ => None,
        }
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("lattice parameter a must be positive, got {a}")))
    }
}

/// φ_σ(t) = (2/σ)^{1/4} e^{-π t²/σ}.
pub fn gaussian_eval(sigma: f64, t: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(domain(format!("gaussian sigma must be positive, got {sigma}")));
    }
    Ok((2.0 / sigma).powf(0.25) * (-PI * t * t / sigma).exp())
}

/// Indicator of [-1/2, 1/2). The right endpoint is dropped so that integer
/// translates tile the line; this changes nothing in L².
pub fn box_eval(t: f64) -> f64 {
    if (-0.5..0.5).contains(&t) { 1.0 } else { 0.0 }
}

/// Bastiaans dual window, series truncated after `n_terms` terms.
pub fn bastiaans_eval(c_psi: f64, t: f64, n_terms: usize) -> Result<f64> {
    bastiaans_eval_in(c_psi, t, n_terms, BASTIAANS_DOMAIN)
}

/// As [`bastiaans_eval`] with an explicit |t| domain.
pub fn bastiaans_eval_in(c_psi: f64, t: f64, n_terms: usize, max_abs_t: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > max_abs_t {
        return Err(domain(format!("|t| = {} outside the configured domain {max_abs_t}", t.abs())));
    }
    if n_terms == 0 {
        return Err(domain("bastiaans series needs at least one term"));
    }
    let at = t.abs();
    let n0 = (at - 0.5).floor() + 1.0;
    let mut sum = 0.0;
    let mut sign = if (n0 as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    for j in 0..n_terms {
        let e = n0 + j as f64 + 0.5;
        // πt² - πe² as a product keeps the cancellation exact for large |t|.
        sum += sign * (PI * (at - e) * (at + e)).exp();
        sign = -sign;
    }
    let e = n0 + n_terms as f64 + 0.5;
    let dropped = (PI * (at - e) * (at + e)).exp();
    if dropped > 1e-14 * sum.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::Truncation { target: 1e-14, attained: dropped / sum.abs() });
    }
    Ok(c_psi * sum)
}

/// Zak transform (a = 1) of the Bastiaans window with unit constant.
///
/// Each series index contributes a geometric series in the lattice shift, so
/// the transform is summed in closed form instead of term by term; the
/// direct lattice sum converges only like e^{-2π dist(x,1/2) |k|}.
pub fn bastiaans_zak_unit(x: f64, omega: f64, n_terms: usize) -> Complex64 {
    let shift = x.floor();
    let x = x - shift;
    let two_pi_w = 2.0 * PI * omega;
    let cis = Complex64::from_polar(1.0, two_pi_w);
    let alt = |n: f64| if (n as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    // k <= 0: t = x + q >= 0.
    let d_plus = (x - 0.5).floor() + 1.0;
    // k >= 1: t = x - q < 0. Both thresholds are taken as limits from the
    // right in x, so the line x = 1/2 where ψ jumps gets the continuous value.
    let d_minus = (-x - 0.5).ceil();
    let mut z = Complex64::new(0.0, 0.0);
    for j in 0..n_terms {
        let jf = j as f64;
        let e = d_plus + jf + 0.5;
        let s = x - e;
        let r = -(2.0 * PI * s).exp() * cis.conj();
        z += alt(d_plus + jf) * (PI * s * (x + e)).exp() / (1.0 - r);

        let e2 = d_minus + jf + 0.5;
        let s2 = -x - e2;
        let r2 = -(2.0 * PI * s2).exp() * cis;
        z += alt(d_minus + jf) * (PI * s2 * (e2 - x)).exp() * r2 / (1.0 - r2);
    }
    // Quasiperiodic lift back to the requested x.
    z * Complex64::from_polar(1.0, two_pi_w * shift)
}

/// Zak transform (a = 1) of the unit Gaussian at (x, ω), summed over
/// |x - k| <= 8 where the dropped terms are below 1e-80.
pub(crate) fn gaussian_zak_unit(x: f64, omega: f64) -> Complex64 {
    let k_lo = (x - 8.0).ceil() as i64;
    let k_hi = (x + 8.0).floor() as i64;
    let c = 2f64.powf(0.25);
    (k_lo..=k_hi)
        .map(|k| {
            let t = x - k as f64;
            Complex64::from_polar(c * (-PI * t * t).exp(), 2.0 * PI * omega * k as f64)
        })
        .sum()
}

/// Constant making Z₁ψ·conj(Z₁φ) = 1 at the node (1/4, 0).
pub fn calibrate_bastiaans_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let p = bastiaans_zak_unit(0.25, 0.0, BASTIAANS_TERMS) * gaussian_zak_unit(0.25, 0.0).conj();
        1.0 / p.re
    })
}

/// ϑ(u) = u^{1/4}(1-u)^{1/4}, given both u and 1-u for accuracy near 1.
fn quarter_bump(u: f64, one_minus_u: f64) -> f64 {
    (u * one_minus_u).sqrt().sqrt()
}

/// Crude-but-safe envelope for the Example-4 windows.
fn example4_envelope(p: f64, a: f64, t: f64) -> f64 {
    let (gamma, beta) = if p > 0.0 {
        (GAMMA_5_4, GAMMA_5_4 * GAMMA_5_4 / (0.75 * PI.sqrt()))
    } else {
        (GAMMA_3_4, GAMMA_3_4 * GAMMA_3_4 / (0.5 * PI.sqrt()))
    };
    let s = t / a;
    let near = beta / a;
    if s < 1.0 {
        return near;
    }
    // Two endpoint contributions of size Γ(1+p/4)(2πs)^{-(1+p/4)}, plus slack
    // for the first correction.
    let far = 2.5 * gamma * (2.0 * PI * s).powf(-(1.0 + p / 4.0)) / a;
    far.min(near)
}

/// ∫₀¹ ϑ(u)^p e^{iλu} du by the graded rule with `n` nodes per panel.
fn example4_integral(p: f64, lambda: f64, n: usize) -> Complex64 {
    let rule = quad::gauss_legendre(n);
    let panels = 2 + (lambda.abs() / 4.0).ceil() as usize;
    quad::graded_unit(&rule, panels, |u, um, jac| {
        let w = if p > 0.0 { quarter_bump(u, um) } else { 1.0 / quarter_bump(u, um) };
        Complex64::from_polar(w * jac, lambda * u)
    })
}

fn example4_eval(p: f64, a: f64, t: f64) -> Result<Complex64> {
    check_a(a)?;
    if !t.is_finite() {
        return Err(Error::NonFinite { location: "example4 t".into() });
    }
    let lambda = 2.0 * PI * t / a;
    let coarse = example4_integral(p, lambda, 20);
    let fine = example4_integral(p, lambda, 28);
    let err = (fine - coarse).norm();
    if err > EXAMPLE4_TOL {
        return Err(Error::Quadrature { target: EXAMPLE4_TOL, attained: err });
    }
    Ok(fine / a)
}

/// g_a(t) = ∫₀^{1/a} ϑ(aω) e^{2πiωt} dω.
pub fn example4_g(a: f64, t: f64) -> Result<Complex64> {
    example4_eval(1.0, a, t)
}

/// γ_a(t) = ∫₀^{1/a} e^{2πiωt} / ϑ(aω) dω.
pub fn example4_gamma(a: f64, t: f64) -> Result<Complex64> {
    example4_eval(-1.0, a, t)
}

/// ‖g_a‖² (`p = 1`) or ‖γ_a‖² (`p = -1`) by Plancherel: a⁻¹ ∫₀¹ ϑ(u)^{2p} du,
/// integrated on the graded mesh that absorbs the endpoint powers.
pub fn example4_norm_sqr(p: f64, a: f64) -> Result<f64> {
    check_a(a)?;
    let rule = quad::gauss_legendre(28);
    let v = quad::graded_unit(&rule, 4, |u, um, jac| {
        let th = quarter_bump(u, um);
        Complex64::new(th.powf(2.0 * p.signum()) * jac, 0.0)
    });
    Ok(v.re / a)
}

/// Zak transform Z_a of the Example-4 window with parameter `b` (power
/// `p = 1` for g_b, `p = -1` for γ_b), from the Poisson form
/// Z_a f(x,ω) = a⁻¹ Σ_j f̂(ω - j/a) e^{2πi(ω - j/a)x}. The Fourier transform
/// lives on [0, 1/b], so only finitely many j contribute.
pub(crate) fn example4_zak(p: f64, b: f64, a: f64, x: f64, omega: f64) -> Complex64 {
    let j_lo = (a * (omega - 1.0 / b)).ceil() as i64;
    let j_hi = (a * omega).floor() as i64;
    let mut z = Complex64::new(0.0, 0.0);
    for j in j_lo..=j_hi {
        let xi = omega - j as f64 / a;
        let u = b * xi;
        if !(0.0..=1.0).contains(&u) {
            continue;
        }
        let th = quarter_bump(u, 1.0 - u);
        let amp = if p > 0.0 { th } else { 1.0 / th };
        z += Complex64::from_polar(amp, 2.0 * PI * xi * x);
    }
    z / a
}
