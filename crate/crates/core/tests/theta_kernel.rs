use std::f64::consts::PI;

use critgabor::Error;
use critgabor::gabor::LatticeSeq;
use critgabor::numeric_core::dtft_2d;
use critgabor::theta_kernel::{self, GramSeq, KernelPoly};
use num_complex::Complex64;

/// Θ(0,0) split by the parity of n: Σ_n e^{-πn²/2} Σ_m (±1)^m e^{-πm²/2}.
fn theta_origin_oracle() -> f64 {
    let w = |k: i64| (-0.5 * PI * (k * k) as f64).exp();
    let (mut all, mut alt, mut even, mut odd) = (0.0, 0.0, 0.0, 0.0);
    for k in -30i64..=30 {
        all += w(k);
        alt += if k % 2 == 0 { w(k) } else { -w(k) };
        if k % 2 == 0 {
            even += w(k);
        } else {
            odd += w(k);
        }
    }
    even * all + odd * alt
}

#[test]
fn theta_origin_matches_parity_split() {
    let t = theta_kernel::theta_eval((0.0, 0.0), 12).unwrap();
    assert!((t - theta_origin_oracle()).abs() < 1e-14);
    assert!((t - 1.66926).abs() < 1e-5);
}

#[test]
fn gram_sequence_values() {
    assert_eq!(theta_kernel::vartheta(0, 0), 1.0);
    assert!((theta_kernel::vartheta(1, 1) + (-PI).exp()).abs() < 1e-16);
    assert!((theta_kernel::vartheta(2, 1) - (-2.5 * PI).exp()).abs() < 1e-16);
    let g = GramSeq::new(4);
    assert_eq!(g.get(1, -3), theta_kernel::vartheta(1, -3));
    assert_eq!(g.get(5, 0), 0.0);
}

#[test]
fn gram_sequence_is_gaussian_inner_product() {
    // ⟨T_{-n}M_{-m}φ, φ⟩ by quadrature on [-8, 8].
    let rule = critgabor::quad::gauss_legendre(64);
    for &(n, m) in &[(0i64, 1i64), (1, 1), (2, -1), (-1, 3)] {
        let v = critgabor::quad::composite_c(&rule, -8.0, 8.0, 32, |t| {
            let shifted = 2f64.sqrt() * (-PI * ((t + n as f64).powi(2) + t * t)).exp();
            shifted * Complex64::from_polar(1.0, -2.0 * PI * m as f64 * (t + n as f64))
        });
        assert!((v - theta_kernel::vartheta(n, m)).norm() < 1e-13, "({n},{m}): {v}");
    }
}

#[test]
fn grid_matches_raw_double_sum() {
    let n = 16;
    let g = theta_kernel::theta_grid(n, 12);
    for i in 0..n {
        for j in 0..n {
            let w = (i as f64 / n as f64, j as f64 / n as f64);
            let v = theta_kernel::theta_eval(w, 12).unwrap();
            assert!((g[i * n + j] - v).abs() < 1e-13, "{w:?}");
        }
    }
}

#[test]
fn dtft_of_gram_sequence_is_theta() {
    let r = 10usize;
    let seq = LatticeSeq::from_fn(r, |n, m| Complex64::new(theta_kernel::vartheta(n, m), 0.0));
    for &w in &[(0.1, 0.3), (0.5, 0.5), (0.77, 0.2)] {
        let a = dtft_2d(&seq, w);
        assert!((a.re - theta_kernel::theta_product(w)).abs() < 1e-13);
        assert!(a.im.abs() < 1e-13);
    }
}

#[test]
fn nonnegative_with_single_zero() {
    let n = 256;
    let g = theta_kernel::theta_grid(n, 12);
    let min = g.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-12);
    let zeros: Vec<usize> = (0..g.len()).filter(|&i| g[i] <= 1e-10).collect();
    assert_eq!(zeros, vec![(n / 2) * n + n / 2]);
}

#[test]
fn hessian_at_zero() {
    let rep = theta_kernel::theta_hessian_check(12, 1e-3).unwrap();
    assert!(rep.passed(), "{}", rep.to_json());
    let d = theta_kernel::theta_hessian(12, 1e-3).unwrap();
    // Separable product form: Θ ≈ (π²/2)·θ-constants·|ω-ω₀|²; both partials agree.
    assert!((d.d20 / d.d02 - 1.0).abs() < 1e-6);
    assert!(matches!(theta_kernel::theta_hessian(12, 0.1), Err(Error::Domain(_))));
}

#[test]
fn truncation_guards() {
    assert!(matches!(theta_kernel::theta_eval((0.1, 0.1), 3), Err(Error::Domain(_))));
    let one = Complex64::new(1.0, 0.0);
    assert!(matches!(
        theta_kernel::kernel_convolution_check(&KernelPoly::constant(one), 0, 0, 4),
        Err(Error::Domain(_))
    ));
}

#[test]
fn kernel_polynomials_are_annihilated() {
    let one = Complex64::new(1.0, 0.0);
    let polys = [
        KernelPoly::constant(one),
        KernelPoly::new(vec![((1, 0), one)]),
        KernelPoly::new(vec![((0, 1), Complex64::new(0.3, -2.0)), ((0, 0), one)]),
    ];
    for p in &polys {
        for n in -4..=4 {
            for m in -4..=4 {
                let v = theta_kernel::kernel_convolution_check(p, n, m, 10).unwrap();
                assert!(v.norm() < 1e-10, "{p:?} at ({n},{m}): {v}");
            }
        }
    }
}

#[test]
fn non_kernel_sequences_are_not_annihilated() {
    let ones = theta_kernel::kernel_convolution_check(&KernelPoly::ones(), 0, 0, 10).unwrap();
    assert!((ones.re - theta_origin_oracle()).abs() < 1e-10);
    // Second-order alternating polynomials are outside the kernel: Θ vanishes
    // only to second order at ω₀.
    let p = KernelPoly::new(vec![((2, 0), Complex64::new(1.0, 0.0))]);
    let v = theta_kernel::kernel_convolution_check(&p, 0, 0, 12).unwrap();
    assert!(v.norm() > 1e-3, "{v}");
    assert_eq!(p.degree(), 2);
}
