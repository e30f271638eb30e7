//! Gram sequence of the integer Gaussian Gabor system, its symbol Θ, and the
//! alternating kernel sequences of the synthesis operator.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result, domain};
use crate::report::{Check, Report};

/// ϑ[n,m] = (-1)^{nm} e^{-π(n²+m²)/2}.
pub fn vartheta(n: i64, m: i64) -> f64 {
    let sign = if (n * m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * (-0.5 * PI * (n * n + m * m) as f64).exp()
}

/// ϑ tabulated on |n|,|m| <= R.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSeq {
    pub radius: usize,
    pub values: Vec<f64>,
}

impl GramSeq {
    pub fn new(radius: usize) -> Self {
        let r = radius as i64;
        let values = (-r..=r).flat_map(|n| (-r..=r).map(move |m| vartheta(n, m))).collect();
        Self { radius, values }
    }

    pub fn get(&self, n: i64, m: i64) -> f64 {
        let r = self.radius as i64;
        if n.abs() > r || m.abs() > r {
            return 0.0;
        }
        let w = 2 * r + 1;
        self.values[((n + r) * w + (m + r)) as usize]
    }
}

/// Θ(ω) by the raw double sum over |n|,|m| <= R.
pub fn theta_eval(omega: (f64, f64), radius: usize) -> Result<f64> {
    if radius < 5 {
        return Err(domain(format!("theta truncation needs R >= 5, got {radius}")));
    }
    let r = radius as i64;
    let mut z = Complex64::new(0.0, 0.0);
    for n in -r..=r {
        for m in -r..=r {
            let ph = -2.0 * PI * (n as f64 * omega.0 + m as f64 * omega.1);
            z += vartheta(n, m) * Complex64::from_polar(1.0, ph);
        }
    }
    if z.im.abs() > 1e-13 {
        return Err(Error::NonFinite { location: format!("Theta imaginary part {} at {omega:?}", z.im) });
    }
    Ok(z.re)
}

/// θ₂(z, q) = 2 Σ_{n>=0} q^{(n+1/2)²} cos((2n+1)z).
pub fn jacobi_theta2(z: f64, q: f64) -> f64 {
    (0..12).map(|n| 2.0 * q.powf((n as f64 + 0.5).powi(2)) * ((2 * n + 1) as f64 * z).cos()).sum()
}

/// θ₃(z, q) = 1 + 2 Σ_{n>=1} q^{n²} cos(2nz).
pub fn jacobi_theta3(z: f64, q: f64) -> f64 {
    1.0 + (1..12).map(|n| 2.0 * q.powi(n * n) * (2.0 * n as f64 * z).cos()).sum::<f64>()
}

/// θ₄(z, q) = 1 + 2 Σ_{n>=1} (-1)^n q^{n²} cos(2nz).
pub fn jacobi_theta4(z: f64, q: f64) -> f64 {
    1.0 + (1..12)
        .map(|n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            2.0 * s * q.powi(n * n) * (2.0 * n as f64 * z).cos()
        })
        .sum::<f64>()
}

/// Θ(ω) = θ₃(πω₁, e^{-π/2}) θ₃(2πω₂, e^{-2π}) + θ₄(πω₁, e^{-π/2}) θ₂(2πω₂, e^{-2π}).
pub fn theta_product(omega: (f64, f64)) -> f64 {
    let q1 = (-0.5 * PI).exp();
    let q2 = (-2.0 * PI).exp();
    jacobi_theta3(PI * omega.0, q1) * jacobi_theta3(2.0 * PI * omega.1, q2)
        + jacobi_theta4(PI * omega.0, q1) * jacobi_theta2(2.0 * PI * omega.1, q2)
}

/// Θ on the uniform n x n grid ω = (i/n, j/n), row-major in ω₁.
///
/// Splitting the n-sum by parity of n makes the double sum separable:
/// Θ = S_even(ω₁) E(ω₂) + S_odd(ω₁) O(ω₂).
pub fn theta_grid(n: usize, radius: usize) -> Vec<f64> {
    let r = radius as i64;
    let w = |k: i64| (-0.5 * PI * (k * k) as f64).exp();
    let axis: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let split = |x: f64| {
        let (mut even, mut odd) = (0.0, 0.0);
        for k in -r..=r {
            let c = w(k) * (2.0 * PI * k as f64 * x).cos();
            if k.rem_euclid(2) == 0 {
                even += c;
            } else {
                odd += c;
            }
        }
        (even, odd)
    };
    // E = all m; O = alternating in m.
    let sums: Vec<(f64, f64)> = axis.iter().map(|&x| split(x)).collect();
    let e_o: Vec<(f64, f64)> = sums.iter().map(|&(ev, od)| (ev + od, ev - od)).collect();
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (s_even, s_odd) = sums[idx / n];
            let (e, o) = e_o[idx % n];
            s_even * e + s_odd * o
        })
        .collect()
}

/// Finite-difference derivatives of Θ at ω₀ = (1/2, 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianFd {
    pub d10: f64,
    pub d01: f64,
    pub d20: f64,
    pub d02: f64,
    pub d11: f64,
    pub offset_value: f64,
}

pub fn theta_hessian(radius: usize, h: f64) -> Result<HessianFd> {
    if !(1e-4..=1e-2).contains(&h) {
        return Err(domain(format!("finite-difference step {h} outside [1e-4, 1e-2]")));
    }
    let th = |a: f64, b: f64| theta_eval((0.5 + a, 0.5 + b), radius);
    let c = th(0.0, 0.0)?;
    let (xp, xm, yp, ym) = (th(h, 0.0)?, th(-h, 0.0)?, th(0.0, h)?, th(0.0, -h)?);
    let (pp, pm, mp, mm) = (th(h, h)?, th(h, -h)?, th(-h, h)?, th(-h, -h)?);
    Ok(HessianFd {
        d10: (xp - xm) / (2.0 * h),
        d01: (yp - ym) / (2.0 * h),
        d20: (xp - 2.0 * c + xm) / (h * h),
        d02: (yp - 2.0 * c + ym) / (h * h),
        d11: (pp - pm - mp + mm) / (4.0 * h * h),
        offset_value: th(1e-3, 0.0)?,
    })
}

/// Second-order structure of Θ at its zero.
pub fn theta_hessian_check(radius: usize, h: f64) -> Result<Report> {
    let d = theta_hessian(radius, h)?;
    let rel = (d.d20 - d.d02).abs() / d.d20.abs().max(d.d02.abs());
    let mut rep = Report::new();
    rep.push(Check::at_least("d20_positive", d.d20, 0.0).with("h", h));
    rep.push(Check::at_least("d02_positive", d.d02, 0.0).with("h", h));
    rep.push(Check::at_most("d20_d02_relative_gap", rel, 1e-6).with("d20", d.d20).with("d02", d.d02));
    rep.push(Check::at_most("d11_abs", d.d11.abs(), 1e-8));
    rep.push(Check::at_most("gradient_abs", d.d10.abs().max(d.d01.abs()), 1e-10));
    rep.push(Check::new("positive_off_zero", d.offset_value, 0.0, d.offset_value > 0.0).with("step", 1e-3));
    Ok(rep)
}

/// p[n,m] = (-1)^{n+m} Σ_α c_α n^{α₁} m^{α₂}.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPoly {
    pub terms: Vec<((u32, u32), Complex64)>,
    /// When false the alternating sign is dropped; used for non-kernel
    /// comparison sequences such as p ≡ 1.
    pub alternating: bool,
}

impl KernelPoly {
    pub fn new(terms: Vec<((u32, u32), Complex64)>) -> Self {
        Self { terms, alternating: true }
    }

    /// Constant kernel element c·(-1)^{n+m}.
    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![((0, 0), c)])
    }

    /// Degree bound N.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|((a, b), _)| a + b).max().unwrap_or(0)
    }

    /// The constant sequence p ≡ 1, which is not in the kernel.
    pub fn ones() -> Self {
        Self { terms: vec![((0, 0), Complex64::new(1.0, 0.0))], alternating: false }
    }
}

pub fn kernel_poly_eval(p: &KernelPoly, n: i64, m: i64) -> Complex64 {
    let sign = if !p.alternating || (n + m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let poly: Complex64 =
        p.terms.iter().map(|((a, b), c)| c * (n as f64).powi(*a as i32) * (m as f64).powi(*b as i32)).sum();
    sign * poly
}

/// (p * ϑ)[n,m] = Σ_{|k|,|l|<=R} p[k,l] ϑ[n-k, m-l].
pub fn kernel_convolution_check(p: &KernelPoly, n: i64, m: i64, radius: usize) -> Result<Complex64> {
    if radius < 8 {
        return Err(domain(format!("kernel convolution needs R >= 8, got {radius}")));
    }
    let r = radius as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for k in -r..=r {
        for l in -r..=r {
            s += kernel_poly_eval(p, k, l) * vartheta(n - k, m - l);
        }
    }
    Ok(s)
}
