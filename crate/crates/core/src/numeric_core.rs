//! Grids, sampled signals, quadrature inner products, the Fourier maps on the
//! unit interval, and time-frequency shifts.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result, domain};
use crate::gabor::LatticeSeq;
use crate::quad;
use crate::windows::WindowSpec;

/// Uniform grid of `n_samples` cells on [t_min, t_max]; samples sit at cell
/// midpoints so the composite midpoint rule is the natural quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub n_samples: usize,
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, n_samples: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(domain(format!("grid needs t_min < t_max, got [{t_min}, {t_max}]")));
        }
        if n_samples < 2 {
            return Err(domain(format!("grid needs at least 2 samples, got {n_samples}")));
        }
        Ok(Self { t_min, t_max, n_samples })
    }

    /// Desk-scale default for Gaussian-type signals.
    pub fn desk() -> Self {
        Self { t_min: -6.0, t_max: 6.0, n_samples: 4096 }
    }

    pub fn spacing(&self) -> f64 {
        (self.t_max - self.t_min) / self.n_samples as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.t_min + (j as f64 + 0.5) * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_samples).map(|j| self.node(j))
    }

    fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other { Ok(()) } else { Err(Error::GridMismatch(format!("{self:?} vs {other:?}"))) }
    }
}

/// Samples of a complex function at the nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    /// Analytic source, used to re-evaluate shifted copies exactly.
    pub origin: Option<WindowSpec>,
}

impl SampledSignal {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_samples {
            return Err(domain(format!("{} values for a grid of {} samples", values.len(), grid.n_samples)));
        }
        if let Some(j) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { location: format!("sample {j} (t = {})", grid.node(j)) });
        }
        Ok(Self { grid, values, origin: None })
    }

    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync,
    {
        let values: Vec<Complex64> = (0..grid.n_samples).into_par_iter().map(|j| f(grid.node(j))).collect();
        Self::new(grid, values)
    }

    pub fn from_window(spec: &WindowSpec, grid: Grid) -> Result<Self> {
        let values: Result<Vec<Complex64>> =
            (0..grid.n_samples).into_par_iter().map(|j| spec.eval(grid.node(j))).collect();
        let mut s = Self::new(grid, values?)?;
        if !matches!(spec, WindowSpec::Tabulated(_)) {
            s.origin = Some(spec.clone());
        }
        Ok(s)
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    /// Linear interpolation between nodes, zero outside the sampled range.
    pub fn interpolate(&self, t: f64) -> Complex64 {
        let h = self.grid.spacing();
        let u = (t - self.grid.t_min) / h - 0.5;
        let n = self.values.len();
        if !(-0.5..=n as f64 - 0.5).contains(&u) {
            return Complex64::new(0.0, 0.0);
        }
        let i = u.floor();
        let frac = u - i;
        let at = |k: f64| {
            if k < 0.0 || k >= n as f64 { Complex64::new(0.0, 0.0) } else { self.values[k as usize] }
        };
        at(i) * (1.0 - frac) + at(i + 1.0) * frac
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * c).collect(), origin: None }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            origin: None,
        })
    }

    /// CSV with header `t,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, v) in self.grid.nodes().zip(&self.values) {
            let _ = writeln!(out, "{t},{},{}", v.re, v.im);
        }
        out
    }
}

/// Truncated Fourier series c[k], |k| <= K.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeq {
    pub order: usize,
    pub coefficients: Vec<Complex64>,
}

impl FourierSeq {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() % 2 == 0 {
            return Err(domain("a Fourier sequence needs 2K+1 coefficients"));
        }
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { location: "Fourier coefficient".into() });
        }
        Ok(Self { order: coefficients.len() / 2, coefficients })
    }

    pub fn delta() -> Self {
        Self { order: 0, coefficients: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let idx = k + self.order as i64;
        if idx < 0 || idx as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }
}

/// Quadrature used by [`fourier_coeff`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FourierRule {
    /// Composite midpoint with n nodes; exact for trigonometric polynomials of
    /// degree below n.
    Midpoint(usize),
    /// Composite Gauss-Legendre for smooth but non-periodic integrands.
    GaussLegendre { nodes: usize, panels: usize },
}

impl Default for FourierRule {
    fn default() -> Self {
        Self::GaussLegendre { nodes: 64, panels: 4 }
    }
}

/// ⟨f, g⟩ = Σ f(t_j) conj(g(t_j)) h.
pub fn inner_product(f: &SampledSignal, g: &SampledSignal) -> Result<Complex64> {
    f.grid.ensure_same(&g.grid)?;
    let s: Complex64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b.conj()).sum();
    Ok(s * f.grid.spacing())
}

/// How a shifted signal was re-sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resampling {
    /// Re-evaluated from the analytic window.
    Analytic,
    /// Interpolated from the samples, zero outside their range.
    ZeroExtended,
}

/// T_x M_ω f (t) = e^{2πiω(t-x)} f(t-x), on the grid of `f`.
pub fn tf_shift(f: &SampledSignal, x: f64, omega: f64) -> Result<SampledSignal> {
    tf_shift_traced(f, x, omega).map(|(s, _)| s)
}

/// As [`tf_shift`], also reporting how values were obtained.
pub fn tf_shift_traced(f: &SampledSignal, x: f64, omega: f64) -> Result<(SampledSignal, Resampling)> {
    let grid = f.grid;
    let phase = |t: f64| Complex64::from_polar(1.0, 2.0 * PI * omega * (t - x));
    match &f.origin {
        Some(spec) => {
            let values: Result<Vec<Complex64>> = (0..grid.n_samples)
                .into_par_iter()
                .map(|j| {
                    let t = grid.node(j);
                    Ok(phase(t) * spec.eval(t - x)?)
                })
                .collect();
            Ok((SampledSignal::new(grid, values?)?, Resampling::Analytic))
        }
        None => {
            let values = (0..grid.n_samples)
                .map(|j| {
                    let t = grid.node(j);
                    phase(t) * f.interpolate(t - x)
                })
                .collect();
            Ok((SampledSignal::new(grid, values)?, Resampling::ZeroExtended))
        }
    }
}

/// T_x M_ω g sampled from an analytic window.
pub fn tf_shift_window(g: &WindowSpec, grid: Grid, x: f64, omega: f64) -> Result<SampledSignal> {
    let base = SampledSignal { grid, values: vec![Complex64::new(0.0, 0.0); grid.n_samples], origin: Some(g.clone()) };
    tf_shift(&base, x, omega)
}

/// F(f)[k] = ∫_{-1/2}^{1/2} f(ω) e^{-2πikω} dω.
pub fn fourier_coeff<F>(f: F, k: i64, rule: FourierRule) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let kern = |w: f64| -> Result<Complex64> {
        let v = f(w);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { location: format!("integrand node omega = {w}") });
        }
        Ok(v * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * w))
    };
    match rule {
        FourierRule::Midpoint(n) => {
            if n == 0 {
                return Err(domain("midpoint rule needs at least one node"));
            }
            let h = 1.0 / n as f64;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                s += kern(-0.5 + (j as f64 + 0.5) * h)?;
            }
            Ok(s * h)
        }
        FourierRule::GaussLegendre { nodes, panels } => {
            let rule = quad::gauss_legendre(nodes);
            let panels = panels.max(1);
            let width = 1.0 / panels as f64;
            let mut s = Complex64::new(0.0, 0.0);
            for p in 0..panels {
                let (xs, ws) = rule.on(-0.5 + p as f64 * width, -0.5 + (p + 1) as f64 * width);
                for (x, w) in xs.into_iter().zip(ws) {
                    s += w * kern(x)?;
                }
            }
            Ok(s)
        }
    }
}

/// F_d(c)(ω) = Σ_{|k|<=K} c[k] e^{-2πikω}.
pub fn dtft(c: &FourierSeq, omega: f64) -> Complex64 {
    let k0 = c.order as i64;
    c.coefficients
        .iter()
        .enumerate()
        .map(|(i, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (i as i64 - k0) as f64 * omega))
        .sum()
}

/// Two-dimensional F_d over a box-truncated lattice sequence.
pub fn dtft_2d(c: &LatticeSeq, omega: (f64, f64)) -> Complex64 {
    let r = c.radius as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for n in -r..=r {
        let mut row = Complex64::new(0.0, 0.0);
        for m in -r..=r {
            row += c.get(n, m) * Complex64::from_polar(1.0, -2.0 * PI * m as f64 * omega.1);
        }
        total += row * Complex64::from_polar(1.0, -2.0 * PI * n as f64 * omega.0);
    }
    total
}
