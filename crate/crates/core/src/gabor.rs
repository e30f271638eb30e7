//! Gabor analysis and synthesis on rectangular lattices, the Zak-diagonalized
//! frame operator at critical density, and the Zak-side criteria.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result, domain};
use crate::numeric_core::{Grid, SampledSignal, inner_product, tf_shift_window};
use crate::report::{Check, Report};
use crate::windows::WindowSpec;
use crate::zak::{self, ZakField, ZakGrid};

/// Lattice aℤ x bℤ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub a: f64,
    pub b: f64,
}

impl LatticeParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(domain(format!("lattice parameters must be positive, got a = {a}, b = {b}")));
        }
        Ok(Self { a, b })
    }

    /// The critical lattice aℤ x (1/a)ℤ.
    pub fn critical(a: f64) -> Result<Self> {
        Self::new(a, 1.0 / a)
    }

    pub fn require_critical(&self) -> Result<()> {
        if (self.a * self.b - 1.0).abs() > 1e-12 {
            return Err(domain(format!("critical density needs ab = 1, got ab = {}", self.a * self.b)));
        }
        Ok(())
    }
}

/// Complex sequence on the box |k|,|l| <= R.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSeq {
    pub radius: usize,
    pub values: Vec<Complex64>,
}

impl LatticeSeq {
    pub fn zeros(radius: usize) -> Self {
        let w = 2 * radius + 1;
        Self { radius, values: vec![Complex64::new(0.0, 0.0); w * w] }
    }

    pub fn from_fn<F>(radius: usize, f: F) -> Self
    where
        F: Fn(i64, i64) -> Complex64 + Sync,
    {
        let r = radius as i64;
        let w = 2 * radius + 1;
        let values = (0..w * w).into_par_iter().map(|idx| f((idx / w) as i64 - r, (idx % w) as i64 - r)).collect();
        Self { radius, values }
    }

    /// Unit sequence at (k, l).
    pub fn delta(radius: usize, k: i64, l: i64) -> Self {
        let mut s = Self::zeros(radius);
        s.set(k, l, Complex64::new(1.0, 0.0));
        s
    }

    fn index(&self, k: i64, l: i64) -> Option<usize> {
        let r = self.radius as i64;
        if k.abs() > r || l.abs() > r {
            return None;
        }
        Some(((k + r) * (2 * r + 1) + (l + r)) as usize)
    }

    /// Entry at (k, l); zero outside the stored box.
    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        self.index(k, l).map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    /// Sets an entry; indices outside the box are ignored.
    pub fn set(&mut self, k: i64, l: i64, v: Complex64) {
        if let Some(i) = self.index(k, l) {
            self.values[i] = v;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let r = self.radius as i64;
        let w = 2 * r + 1;
        self.values.iter().enumerate().map(move |(i, v)| (i as i64 / w - r, i as i64 % w - r, *v))
    }
}

/// V_g f(x, ω) = ⟨f, T_x M_ω g⟩.
pub fn stft_sample(f: &SampledSignal, g: &WindowSpec, x: f64, omega: f64) -> Result<Complex64> {
    let shifted = tf_shift_window(g, f.grid, x, omega)?;
    inner_product(f, &shifted)
}

/// Σ ξ[n,m] T_{an} M_{bm} g sampled on `target`.
pub fn gabor_synthesis(xi: &LatticeSeq, g: &WindowSpec, lattice: LatticeParams, target: Grid) -> Result<SampledSignal> {
    let r = xi.radius as i64;
    // Sample each translate once; modulations are cheap.
    let translates: Result<Vec<Vec<Complex64>>> =
        (-r..=r).into_par_iter().map(|n| target.nodes().map(|t| g.eval(t - lattice.a * n as f64)).collect()).collect();
    let translates = translates?;
    let values: Vec<Complex64> = (0..target.n_samples)
        .into_par_iter()
        .map(|j| {
            let t = target.node(j);
            let mut acc = Complex64::new(0.0, 0.0);
            for n in -r..=r {
                let gv = translates[(n + r) as usize][j];
                if gv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let tau = t - lattice.a * n as f64;
                let mut inner = Complex64::new(0.0, 0.0);
                for m in -r..=r {
                    let c = xi.get(n, m);
                    if c != Complex64::new(0.0, 0.0) {
                        inner += c * Complex64::from_polar(1.0, 2.0 * PI * lattice.b * m as f64 * tau);
                    }
                }
                acc += inner * gv;
            }
            acc
        })
        .collect();
    SampledSignal::new(target, values)
}

/// Lattice truncation for Zak sums of `spec` at parameter `a`.
pub fn default_truncation(spec: &WindowSpec, a: f64) -> usize {
    match spec.support_radius(1e-17) {
        Some(r) => (r / a).ceil() as usize + 2,
        None => 0,
    }
}

/// Number of ω nodes used by [`frame_operator_zak`] for the inverse transform.
pub const FRAME_OMEGA_NODES: usize = 64;

/// S_{g,γ} f via Z_a(S f) = a conj(Z_a g) Z_a γ Z_a f, inverted pointwise on
/// the grid of `f`.
///
/// The inverse uses ω nodes offset by half a cell so closed-form symbols with
/// singularities on ω = 0 are never evaluated there.
pub fn frame_operator_zak(
    g: &WindowSpec,
    gamma: &WindowSpec,
    lattice: LatticeParams,
    f: &SampledSignal,
) -> Result<SampledSignal> {
    lattice.require_critical()?;
    let a = lattice.a;
    let n_w = FRAME_OMEGA_NODES;
    let kg = default_truncation(g, a);
    let kgam = default_truncation(gamma, a);
    let omegas: Vec<f64> = (0..n_w).map(|j| (j as f64 + 0.5) / (a * n_w as f64)).collect();

    let h = f.grid.spacing();
    let zf_sampled = |x: f64, w: f64| -> Result<Complex64> {
        // x - ak must land on sample nodes.
        let ratio = a / h;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(domain("tabulated input needs a lattice step that is a multiple of the sample spacing"));
        }
        let step = ratio.round() as i64;
        let base = ((x - f.grid.t_min) / h - 0.5).round() as i64;
        let n = f.values.len() as i64;
        let k_lo = (base - n + 1).div_euclid(step) + 1;
        let k_hi = base.div_euclid(step);
        let mut z = Complex64::new(0.0, 0.0);
        for kk in (k_lo - 1)..=k_hi {
            let idx = base - kk * step;
            if (0..n).contains(&idx) {
                z += f.values[idx as usize] * Complex64::from_polar(1.0, 2.0 * PI * a * w * kk as f64);
            }
        }
        Ok(z)
    };
    let zf = |x: f64, w: f64| -> Result<Complex64> {
        match &f.origin {
            Some(spec) => zak::zak_point(spec, a, x, w, default_truncation(spec, a)),
            None => zf_sampled(x, w),
        }
    };

    let values: Result<Vec<Complex64>> = (0..f.grid.n_samples)
        .into_par_iter()
        .map(|j| {
            let t = f.grid.node(j);
            let cell = (t / a).floor();
            let x = t - cell * a;
            let mut s = Complex64::new(0.0, 0.0);
            for &w in &omegas {
                let sym = a * zak::zak_point(g, a, x, w, kg)?.conj() * zak::zak_point(gamma, a, x, w, kgam)?;
                s += sym * zf(x, w)? * Complex64::from_polar(1.0, 2.0 * PI * a * w * cell);
            }
            Ok(s / n_w as f64)
        })
        .collect();
    SampledSignal::new(f.grid, values?)
}

/// Σ_{|n|,|m|<=R} ⟨f, g_{n,m}⟩ γ_{n,m} with inner products by grid quadrature.
pub fn frame_operator_direct(
    g: &WindowSpec,
    gamma: &WindowSpec,
    lattice: LatticeParams,
    f: &SampledSignal,
    radius: usize,
) -> Result<SampledSignal> {
    let r = radius as i64;
    let coeffs: Result<Vec<Complex64>> = (0..(2 * r + 1) * (2 * r + 1))
        .into_par_iter()
        .map(|idx| {
            let n = idx / (2 * r + 1) - r;
            let m = idx % (2 * r + 1) - r;
            stft_sample(f, g, lattice.a * n as f64, lattice.b * m as f64)
        })
        .collect();
    let xi = LatticeSeq { radius, values: coeffs? };
    gabor_synthesis(&xi, gamma, lattice, f.grid)
}

/// Samples of the frame-operator symbol a conj(Z_a g) Z_a γ.
pub fn zak_symbol(g: &WindowSpec, gamma: &WindowSpec, grid: ZakGrid) -> Result<ZakField> {
    let zg = zak::zak_forward(g, grid, default_truncation(g, grid.a))?;
    let zgam = zak::zak_forward(gamma, grid, default_truncation(gamma, grid.a))?;
    zg.zip_with(&zgam, |u, v| grid.a * u.conj() * v)
}

/// Essential-range proxies for the reproducing-pair criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct ReppairBounds {
    /// min |Z_a g · Z_a γ| over the grid.
    pub m_hat: f64,
    /// max |Z_a g · Z_a γ| over the grid.
    pub big_m_hat: f64,
    /// sup |a conj(Z_a g) Z_a γ - 1|.
    pub identity_gap: f64,
    pub resolution: (usize, usize),
    pub excluded: Option<((f64, f64), f64)>,
}

impl ReppairBounds {
    pub fn report(&self, tol: f64) -> Report {
        let res = format!("{}x{}", self.resolution.0, self.resolution.1);
        let mut rep = Report::new();
        rep.push(Check::new("lower_bound_positive", self.m_hat, tol, self.m_hat > tol).with("resolution", res.clone()));
        rep.push(
            Check::new("upper_bound_finite", self.big_m_hat, f64::INFINITY, self.big_m_hat.is_finite())
                .with("resolution", res.clone()),
        );
        rep.push(Check::at_most("s_equals_identity", self.identity_gap, tol).with("resolution", res));
        rep
    }
}

/// Grid extrema of |Z_a g Z_a γ|, optionally ignoring a disc (torus metric).
pub fn reppair_zak_bounds(
    g: &WindowSpec,
    gamma: &WindowSpec,
    grid: ZakGrid,
    exclude: Option<((f64, f64), f64)>,
) -> Result<ReppairBounds> {
    let k_g = default_truncation(g, grid.a);
    let k_gam = default_truncation(gamma, grid.a);
    let zg = zak::zak_forward(g, grid, k_g)?;
    let zgam = zak::zak_forward(gamma, grid, k_gam)?;
    let (mut lo, mut hi, mut gap) = (f64::INFINITY, 0.0f64, 0.0f64);
    for i in 0..grid.n_x {
        for j in 0..grid.n_omega {
            let (x, w) = (grid.x(i), grid.omega(j));
            if let Some((c, r)) = exclude {
                let dx = (x - c.0).rem_euclid(grid.a);
                let dw = (w - c.1).rem_euclid(1.0 / grid.a);
                if dx.min(grid.a - dx).hypot(dw.min(1.0 / grid.a - dw)) <= r {
                    continue;
                }
            }
            let (u, v) = (zg.get(i, j), zgam.get(i, j));
            let p = (u * v).norm();
            lo = lo.min(p);
            hi = hi.max(p);
            gap = gap.max((grid.a * u.conj() * v - 1.0).norm());
        }
    }
    Ok(ReppairBounds {
        m_hat: lo,
        big_m_hat: hi,
        identity_gap: gap,
        resolution: (grid.n_x, grid.n_omega),
        excluded: exclude,
    })
}

/// Heil-Powell ratio mean(|Z|²) · mean(|Z|⁻²) over the field nodes inside
/// I x J, after periodization. Always >= 1 by Cauchy-Schwarz.
pub fn schauder_ratio(zg: &ZakField, i_int: (f64, f64), j_int: (f64, f64)) -> Result<f64> {
    let g = zg.grid;
    let (px, pw) = (g.a, 1.0 / g.a);
    if !(i_int.0 < i_int.1 && j_int.0 < j_int.1) || i_int.1 - i_int.0 > px + 1e-12 || j_int.1 - j_int.0 > pw + 1e-12 {
        return Err(domain("rectangle must be non-empty and fit in one period"));
    }
    let inside = |v: f64, lo: f64, hi: f64, p: f64| {
        let shifted = v + ((lo - v) / p).ceil() * p;
        shifted < hi
    };
    let (mut s2, mut sm2, mut count, mut zeros) = (0.0, 0.0, 0usize, 0usize);
    for i in 0..g.n_x {
        if !inside(g.x(i), i_int.0, i_int.1, px) {
            continue;
        }
        for j in 0..g.n_omega {
            if !inside(g.omega(j), j_int.0, j_int.1, pw) {
                continue;
            }
            let v = zg.get(i, j).norm_sqr();
            count += 1;
            if v == 0.0 {
                zeros += 1;
            }
            s2 += v;
            sm2 += 1.0 / v;
        }
    }
    if count == 0 {
        return Err(domain("no field nodes inside the rectangle"));
    }
    if zeros == count {
        return Err(Error::NonFinite { location: "Zak field vanishes on the whole rectangle".into() });
    }
    Ok((s2 / count as f64) * (sm2 / count as f64))
}
