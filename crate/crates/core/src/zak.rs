//! The Zak transform Z_a on the fundamental domain Q_a = [0,a) x [0,1/a).

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result, domain};
use crate::numeric_core::{Grid, SampledSignal};
use crate::report::{Check, Report, nums};
use crate::windows::{self, BASTIAANS_TERMS, WindowSpec};

/// Default tail target for truncated lattice sums.
pub const TAIL_EPS: f64 = 1e-14;

/// Node layout of a sampled Zak field: x_i = x0 + i a / n_x and
/// ω_j = ω0 + j / (a n_ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZakGrid {
    pub a: f64,
    pub n_x: usize,
    pub n_omega: usize,
    pub x0: f64,
    pub omega0: f64,
}

impl ZakGrid {
    pub fn new(a: f64, n_x: usize, n_omega: usize) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(domain(format!("a must be positive, got {a}")));
        }
        if n_x < 8 || n_omega < 8 {
            return Err(domain(format!("Zak grid needs at least 8x8 nodes, got {n_x}x{n_omega}")));
        }
        Ok(Self { a, n_x, n_omega, x0: 0.0, omega0: 0.0 })
    }

    /// Same grid shifted by half a cell in both directions, so no node sits on
    /// the lines x = 0 or ω = 0.
    pub fn staggered(self) -> Self {
        Self { x0: 0.5 * self.hx(), omega0: 0.5 * self.homega(), ..self }
    }

    pub fn hx(&self) -> f64 {
        self.a / self.n_x as f64
    }

    pub fn homega(&self) -> f64 {
        1.0 / (self.a * self.n_omega as f64)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx()
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.omega0 + j as f64 * self.homega()
    }
}

/// Samples of Z_a f, row-major in x.
#[derive(Debug, Clone, PartialEq)]
pub struct ZakField {
    pub grid: ZakGrid,
    pub values: Vec<Complex64>,
}

impl ZakField {
    pub fn from_fn<F>(grid: ZakGrid, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let values: Vec<Complex64> = (0..grid.n_x * grid.n_omega)
            .into_par_iter()
            .map(|idx| f(grid.x(idx / grid.n_omega), grid.omega(idx % grid.n_omega)))
            .collect();
        Self::new(grid, values)
    }

    pub fn new(grid: ZakGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_x * grid.n_omega {
            return Err(domain("Zak field size does not match its grid"));
        }
        if let Some(idx) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            let (i, j) = (idx / grid.n_omega, idx % grid.n_omega);
            return Err(Error::NonFinite {
                location: format!("Zak node (x = {}, omega = {})", grid.x(i), grid.omega(j)),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.n_omega + j]
    }

    /// Periodic access to |Z|; the modulus is periodic in both variables.
    pub fn abs_wrapped(&self, i: i64, j: i64) -> f64 {
        let i = i.rem_euclid(self.grid.n_x as i64) as usize;
        let j = j.rem_euclid(self.grid.n_omega as i64) as usize;
        self.get(i, j).norm()
    }

    /// (a ∫∫_{Q_a} |Z|²)^{1/2}, which equals ‖f‖₂ for Z = Z_a f.
    pub fn norm(&self) -> f64 {
        let g = &self.grid;
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (g.a * s * g.hx() * g.homega()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Pointwise product with another field on the same grid.
    pub fn zip_with<F>(&self, other: &ZakField, f: F) -> Result<ZakField>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("Zak fields on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        ZakField::new(self.grid, values)
    }

    /// CSV with header `x,omega,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,omega,re,im\n");
        for i in 0..self.grid.n_x {
            for j in 0..self.grid.n_omega {
                let v = self.get(i, j);
                let _ = writeln!(out, "{},{},{},{}", self.grid.x(i), self.grid.omega(j), v.re, v.im);
            }
        }
        out
    }
}

/// Gaussian truncation order from the analytic tail bound.
pub fn gaussian_truncation(a: f64, eps: f64) -> usize {
    (((1.0 / eps).ln() / PI).sqrt() / a).ceil() as usize + 2
}

/// Bound on Σ_{|k|>K} |f(x - ak)| for x in [x_lo, x_hi].
fn direct_tail(spec: &WindowSpec, a: f64, k: usize, x_reach: f64) -> f64 {
    (0..64)
        .map(|j| {
            let dist = (a * (k + 1 + j) as f64 - x_reach).max(0.0);
            2.0 * spec.decay_bound(dist)
        })
        .sum()
}

/// Z_a f(x, ω) at a single point. Gaussian and box windows use the truncated
/// lattice sum |k| <= `k`; the Bastiaans and Example-4 windows use their
/// closed forms.
pub fn zak_point(spec: &WindowSpec, a: f64, x: f64, omega: f64, k: usize) -> Result<Complex64> {
    match spec {
        WindowSpec::Bastiaans { c_psi } => {
            if (a - 1.0).abs() > 1e-15 {
                return Err(domain("the Bastiaans window is only transformed at a = 1"));
            }
            Ok(*c_psi * windows::bastiaans_zak_unit(x, omega, BASTIAANS_TERMS))
        }
        WindowSpec::Example4G { a: b } => Ok(windows::example4_zak(1.0, *b, a, x, omega)),
        WindowSpec::Example4Gamma { a: b } => Ok(windows::example4_zak(-1.0, *b, a, x, omega)),
        _ => {
            let k = k as i64;
            let mut z = Complex64::new(0.0, 0.0);
            for kk in -k..=k {
                let v = spec.eval(x - a * kk as f64)?;
                z += v * Complex64::from_polar(1.0, 2.0 * PI * a * omega * kk as f64);
            }
            Ok(z)
        }
    }
}

/// Samples Z_a f on `grid`, with lattice truncation `k` where it applies.
pub fn zak_forward(spec: &WindowSpec, grid: ZakGrid, k: usize) -> Result<ZakField> {
    if let WindowSpec::Tabulated(s) = spec {
        return zak_forward_sampled(s, grid, k);
    }
    let direct = matches!(spec, WindowSpec::Gaussian { .. } | WindowSpec::Box);
    if direct {
        let reach = grid.x0.abs().max((grid.x0 + grid.a).abs());
        let tail = direct_tail(spec, grid.a, k, reach);
        if tail > TAIL_EPS {
            return Err(Error::Truncation { target: TAIL_EPS, attained: tail });
        }
    }
    let values: Result<Vec<Complex64>> = (0..grid.n_x * grid.n_omega)
        .into_par_iter()
        .map(|idx| zak_point(spec, grid.a, grid.x(idx / grid.n_omega), grid.omega(idx % grid.n_omega), k))
        .collect();
    ZakField::new(grid, values?)
}

/// Zak transform of samples. Every x_i - ak must be a sample node.
pub fn zak_forward_sampled(f: &SampledSignal, grid: ZakGrid, k: usize) -> Result<ZakField> {
    let h = f.grid.spacing();
    let index = |t: f64| -> Result<i64> {
        let u = (t - f.grid.t_min) / h - 0.5;
        let r = u.round();
        if (u - r).abs() > 1e-6 {
            return Err(domain(format!("Zak node t = {t} is not a sample node of the input grid")));
        }
        Ok(r as i64)
    };
    let n = f.values.len() as i64;
    let k = k as i64;
    let mut missed_edge = false;
    let mut values = Vec::with_capacity(grid.n_x * grid.n_omega);
    let mut rows = Vec::with_capacity(grid.n_x);
    for i in 0..grid.n_x {
        let x = grid.x(i);
        let mut row = Vec::with_capacity(2 * k as usize + 1);
        for kk in -k..=k {
            let idx = index(x - grid.a * kk as f64)?;
            if idx < 0 || idx >= n {
                missed_edge = true;
                row.push(Complex64::new(0.0, 0.0));
            } else {
                row.push(f.values[idx as usize]);
            }
        }
        rows.push(row);
    }
    if missed_edge {
        let edge = f.values[0].norm().max(f.values[f.values.len() - 1].norm());
        if edge > TAIL_EPS {
            return Err(Error::Truncation { target: TAIL_EPS, attained: edge });
        }
    }
    for row in &rows {
        for j in 0..grid.n_omega {
            let w = grid.omega(j);
            let z: Complex64 = row
                .iter()
                .enumerate()
                .map(|(p, v)| v * Complex64::from_polar(1.0, 2.0 * PI * grid.a * w * (p as i64 - k) as f64))
                .sum();
            values.push(z);
        }
    }
    ZakField::new(grid, values)
}

/// Number of cell copies reconstructed by default on each side.
pub fn default_cells(z: &ZakField) -> usize {
    ((z.grid.n_omega - 1) / 2).min(8)
}

/// Inverts a Zak field onto the cells k in [-cells, cells]:
/// f(x_i + ak) = n_ω⁻¹ Σ_j Z(x_i, ω_j) e^{2πi a ω_j k}.
///
/// The output grid is aligned so its nodes are exactly x_i + ak.
pub fn zak_inverse(z: &ZakField, cells: usize) -> Result<SampledSignal> {
    let g = z.grid;
    let h = g.hx();
    let n_cells = 2 * cells + 1;
    let t_min = g.x0 - g.a * cells as f64 - 0.5 * h;
    let grid = Grid::new(t_min, t_min + (g.n_x * n_cells) as f64 * h, g.n_x * n_cells)?;
    let values: Vec<Complex64> = (0..grid.n_samples)
        .into_par_iter()
        .map(|idx| {
            let kk = (idx / g.n_x) as i64 - cells as i64;
            let i = idx % g.n_x;
            let s: Complex64 = (0..g.n_omega)
                .map(|j| z.get(i, j) * Complex64::from_polar(1.0, 2.0 * PI * g.a * g.omega(j) * kk as f64))
                .sum();
            s / g.n_omega as f64
        })
        .collect();
    SampledSignal::new(grid, values)
}

/// Residuals of the two quasiperiodicity relations at the given nodes:
/// |Z(x+a, ω) - e^{2πiaω} Z(x, ω)| and |Z(x, ω+1/a) - Z(x, ω)|.
pub fn check_quasiperiodicity(spec: &WindowSpec, a: f64, k: usize, nodes: &[(f64, f64)], tol: f64) -> Result<Report> {
    let res: Result<Vec<(f64, f64)>> = nodes
        .par_iter()
        .map(|&(x, w)| {
            let z = zak_point(spec, a, x, w, k)?;
            let zx = zak_point(spec, a, x + a, w, k)?;
            let zw = zak_point(spec, a, x, w + 1.0 / a, k)?;
            let r1 = (zx - Complex64::from_polar(1.0, 2.0 * PI * a * w) * z).norm();
            let r2 = (zw - z).norm();
            Ok((r1, r2))
        })
        .collect();
    let res = res?;
    let r1 = res.iter().map(|r| r.0).fold(0.0, f64::max);
    let r2 = res.iter().map(|r| r.1).fold(0.0, f64::max);
    let mut rep = Report::new();
    rep.push(Check::at_most("quasiperiodic_x", r1, tol).with("window", spec.name()).with("nodes", nodes.len()));
    rep.push(Check::at_most("periodic_omega", r2, tol).with("window", spec.name()).with("nodes", nodes.len()));
    Ok(rep)
}

/// Torus distance on Q_a.
fn torus_dist(g: &ZakGrid, x: f64, w: f64, p: (f64, f64)) -> f64 {
    let wrap = |d: f64, period: f64| {
        let d = d.rem_euclid(period);
        d.min(period - d)
    };
    let dx = wrap(x - p.0, g.a);
    let dw = wrap(w - p.1, 1.0 / g.a);
    dx.hypot(dw)
}

/// Grid-resolved zeros: nodes with |Z| < `rel`·max|Z| whose four neighbours
/// are all larger, refined by a parabola through |Z|² in each direction.
pub fn find_zeros(z: &ZakField, rel: f64) -> Vec<(f64, f64)> {
    let g = z.grid;
    let thresh = rel * z.max_abs();
    let mut out = Vec::new();
    for i in 0..g.n_x as i64 {
        for j in 0..g.n_omega as i64 {
            let c = z.abs_wrapped(i, j);
            if c >= thresh {
                continue;
            }
            let nb =
                [z.abs_wrapped(i - 1, j), z.abs_wrapped(i + 1, j), z.abs_wrapped(i, j - 1), z.abs_wrapped(i, j + 1)];
            if nb.iter().all(|&v| v > c) {
                let vertex = |m: f64, c0: f64, p: f64| {
                    let (m, c0, p) = (m * m, c0 * c0, p * p);
                    let den = m - 2.0 * c0 + p;
                    if den > 0.0 { 0.5 * (m - p) / den } else { 0.0 }
                };
                let di = vertex(nb[0], c, nb[1]);
                let dj = vertex(nb[2], c, nb[3]);
                out.push((g.x(i as usize) + di * g.hx(), g.omega(j as usize) + dj * g.homega()));
            }
        }
    }
    out
}

/// Tabulated ∫_{Q_a \ B_r(z*)} |Z|^{-2} for a list of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupScan {
    pub z_star: (f64, f64),
    pub radii: Vec<f64>,
    pub integrals: Vec<f64>,
    /// Whether a grid-resolved zero lies within two cells of z*.
    pub zero_resolved: bool,
}

impl BlowupScan {
    /// Differences between consecutive integrals.
    pub fn increments(&self) -> Vec<f64> {
        self.integrals.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Largest relative deviation of the increments from their mean; near 0
    /// for logarithmic growth under radius halving.
    pub fn increment_spread(&self) -> f64 {
        let inc = self.increments();
        let mean = inc.iter().sum::<f64>() / inc.len() as f64;
        inc.iter().map(|d| (d - mean).abs() / mean.abs()).fold(0.0, f64::max)
    }

    pub fn report(&self, spread_tol: f64) -> Report {
        let mut rep = Report::new();
        let inc = self.increments();
        let positive = inc.iter().all(|&d| d > 0.0);
        let spread = self.increment_spread();
        rep.push(
            Check::new("log_divergence", spread, spread_tol, positive && spread <= spread_tol)
                .with("radii", nums(&self.radii))
                .with("integrals", nums(&self.integrals))
                .with("increments", nums(&inc))
                .with("zero_resolved", self.zero_resolved),
        );
        rep
    }
}

/// Integrates |Z|^{-2} outside discs around `z_star`, weighting boundary
/// cells by their sub-sampled area fraction.
pub fn blowup_scan(z: &ZakField, z_star: (f64, f64), radii: &[f64]) -> BlowupScan {
    let g = z.grid;
    let (hx, hw) = (g.hx(), g.homega());
    let half_diag = 0.5 * hx.hypot(hw);
    const SUB: usize = 8;
    let integrals = radii
        .iter()
        .map(|&r| {
            let parts: Vec<f64> = (0..g.n_x)
                .into_par_iter()
                .map(|i| {
                    let mut acc = 0.0;
                    for j in 0..g.n_omega {
                        let (x, w) = (g.x(i), g.omega(j));
                        let d = torus_dist(&g, x, w, z_star);
                        let frac = if d > r + half_diag {
                            1.0
                        } else if d < r - half_diag {
                            0.0
                        } else {
                            let mut outside = 0usize;
                            for a in 0..SUB {
                                for b in 0..SUB {
                                    let sx = x + ((a as f64 + 0.5) / SUB as f64 - 0.5) * hx;
                                    let sw = w + ((b as f64 + 0.5) / SUB as f64 - 0.5) * hw;
                                    if torus_dist(&g, sx, sw, z_star) > r {
                                        outside += 1;
                                    }
                                }
                            }
                            outside as f64 / (SUB * SUB) as f64
                        };
                        if frac > 0.0 {
                            acc += frac / z.get(i, j).norm_sqr();
                        }
                    }
                    acc
                })
                .collect();
            parts.iter().sum::<f64>() * hx * hw
        })
        .collect();
    let zero_resolved = find_zeros(z, 1e-6).iter().any(|&p| torus_dist(&g, p.0, p.1, z_star) <= 2.0 * hx.max(hw));
    BlowupScan { z_star, radii: radii.to_vec(), integrals, zero_resolved }
}
