use std::f64::consts::PI;

use critgabor::Error;
use critgabor::numeric_core::{
    self, FourierRule, FourierSeq, Grid, Resampling, SampledSignal, dtft, fourier_coeff, inner_product, tf_shift,
    tf_shift_traced,
};
use critgabor::windows::{self, WindowSpec};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn grid_validation_and_nodes() {
    assert!(matches!(Grid::new(1.0, 1.0, 10), Err(Error::Domain(_))));
    assert!(matches!(Grid::new(0.0, f64::INFINITY, 10), Err(Error::Domain(_))));
    assert!(matches!(Grid::new(0.0, 1.0, 1), Err(Error::Domain(_))));
    let g = Grid::new(-1.0, 1.0, 4).unwrap();
    let nodes: Vec<f64> = g.nodes().collect();
    assert_eq!(nodes, vec![-0.75, -0.25, 0.25, 0.75]);
    assert_eq!(g.spacing(), 0.5);
}

#[test]
fn signal_rejects_bad_values() {
    let g = Grid::new(0.0, 1.0, 3).unwrap();
    assert!(matches!(SampledSignal::new(g, vec![c(1.0, 0.0); 2]), Err(Error::Domain(_))));
    let bad = vec![c(1.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0)];
    assert!(matches!(SampledSignal::new(g, bad), Err(Error::NonFinite { .. })));
}

#[test]
fn inner_product_is_hermitian_and_checks_grids() {
    let g = Grid::new(-5.0, 5.0, 2000).unwrap();
    let f = SampledSignal::from_fn(g, |t| c((-t * t).exp(), t * (-t * t).exp())).unwrap();
    let h = SampledSignal::from_fn(g, |t| c(0.0, 1.0) * (-(t - 0.4).powi(2)).exp()).unwrap();
    let a = inner_product(&f, &h).unwrap();
    let b = inner_product(&h, &f).unwrap();
    assert!((a - b.conj()).norm() < 1e-15);
    assert!((inner_product(&f, &f).unwrap().re - f.norm().powi(2)).abs() < 1e-14);
    let other = SampledSignal::from_fn(Grid::new(-5.0, 5.0, 2001).unwrap(), |_| c(1.0, 0.0)).unwrap();
    assert!(matches!(inner_product(&f, &other), Err(Error::GridMismatch(_))));
    assert!(matches!(f.add(&other), Err(Error::GridMismatch(_))));
}

#[test]
fn gaussian_overlap_closed_form() {
    // ⟨φ, T_x φ⟩ = e^{-πx²/2}.
    let g = Grid::desk();
    let phi = WindowSpec::gaussian(1.0).unwrap();
    let f = SampledSignal::from_window(&phi, g).unwrap();
    for &x in &[0.3, 1.0, 2.5] {
        let s = tf_shift(&f, x, 0.0).unwrap();
        let v = inner_product(&f, &s).unwrap();
        assert!((v.re - (-PI * x * x / 2.0).exp()).abs() < 1e-12 && v.im.abs() < 1e-14, "x = {x}: {v}");
    }
}

#[test]
fn tf_shift_analytic_and_interpolated() {
    let g = Grid::new(-6.0, 6.0, 6000).unwrap();
    let phi = WindowSpec::gaussian(1.0).unwrap();
    let f = SampledSignal::from_window(&phi, g).unwrap();
    let (a, how) = tf_shift_traced(&f, 0.7, -1.2).unwrap();
    assert_eq!(how, Resampling::Analytic);
    for (t, v) in g.nodes().zip(&a.values) {
        let exact = Complex64::from_polar(windows::gaussian_eval(1.0, t - 0.7).unwrap(), 2.0 * PI * -1.2 * (t - 0.7));
        assert!((v - exact).norm() < 1e-14);
    }
    let tab = SampledSignal::new(g, f.values.clone()).unwrap();
    let (b, how) = tf_shift_traced(&tab, 0.7, -1.2).unwrap();
    assert_eq!(how, Resampling::ZeroExtended);
    let err = a.values.iter().zip(&b.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    // Linear interpolation error h²/8·max|φ''|.
    assert!(err < 1e-5, "{err}");
    // Shifting by a whole number of cells is exact.
    let (d, _) = tf_shift_traced(&tab, 10.0 * g.spacing(), 0.0).unwrap();
    assert!((d.values[510] - tab.values[500]).norm() < 1e-14);
}

#[test]
fn tf_shift_window_matches_eval() {
    let g = Grid::new(-3.0, 3.0, 300).unwrap();
    let s = numeric_core::tf_shift_window(&WindowSpec::Box, g, 1.0, 2.0).unwrap();
    for (t, v) in g.nodes().zip(&s.values) {
        let want = windows::box_eval(t - 1.0) * Complex64::from_polar(1.0, 4.0 * PI * (t - 1.0));
        assert!((v - want).norm() < 1e-14);
    }
}

#[test]
fn fourier_coeff_of_trig_polynomial_is_exact() {
    let p = |w: f64| {
        c(2.0, 0.0) + Complex64::from_polar(0.5, 2.0 * PI * 3.0 * w) - Complex64::from_polar(1.0, -2.0 * PI * w)
    };
    for k in -5..=5 {
        let want = match k {
            0 => c(2.0, 0.0),
            3 => c(0.5, 0.0),
            -1 => c(-1.0, 0.0),
            _ => c(0.0, 0.0),
        };
        let m = fourier_coeff(p, k, FourierRule::Midpoint(16)).unwrap();
        let g = fourier_coeff(p, k, FourierRule::default()).unwrap();
        assert!((m - want).norm() < 1e-14 && (g - want).norm() < 1e-13, "k = {k}");
    }
}

#[test]
fn fourier_coeff_of_nonperiodic_integrand() {
    // ∫ e^{aω} e^{-2πikω} dω = 2 sinh((a - 2πik)/2) / (a - 2πik).
    let a = 1.3;
    for k in [-4i64, 0, 2, 9] {
        let z = c(a, -2.0 * PI * k as f64);
        let want = 2.0 * (z / 2.0).sinh() / z;
        let v = fourier_coeff(|w| c((a * w).exp(), 0.0), k, FourierRule::default()).unwrap();
        assert!((v - want).norm() < 1e-14, "k = {k}: {v} vs {want}");
    }
}

#[test]
fn fourier_coeff_reports_nonfinite_and_bad_rule() {
    let r = fourier_coeff(|w| c(1.0 / w, 0.0), 0, FourierRule::Midpoint(1));
    assert!(matches!(r, Err(Error::NonFinite { .. })));
    assert!(matches!(fourier_coeff(|_| c(1.0, 0.0), 0, FourierRule::Midpoint(0)), Err(Error::Domain(_))));
}

#[test]
fn dtft_then_fourier_coeff_reflects() {
    let seq = FourierSeq::new(vec![c(0.1, 0.2), c(-1.0, 0.0), c(3.0, 0.0), c(0.0, 0.5), c(0.25, -0.25)]).unwrap();
    // Both maps use e^{-2πikω}, so the round trip reflects the index.
    for k in -3..=3 {
        let back = fourier_coeff(|w| dtft(&seq, w), k, FourierRule::Midpoint(32)).unwrap();
        assert!((back - seq.get(-k)).norm() < 1e-14, "k = {k}");
    }
    assert_eq!(dtft(&FourierSeq::delta(), 0.37), c(1.0, 0.0));
    assert!(matches!(FourierSeq::new(vec![c(1.0, 0.0); 2]), Err(Error::Domain(_))));
}

#[test]
fn interpolate_is_zero_outside() {
    let g = Grid::new(0.0, 1.0, 10).unwrap();
    let s = SampledSignal::from_fn(g, |t| c(t, 0.0)).unwrap();
    assert_eq!(s.interpolate(-0.2), c(0.0, 0.0));
    assert_eq!(s.interpolate(1.2), c(0.0, 0.0));
    assert!((s.interpolate(0.5) - c(0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn csv_output() {
    let g = Grid::new(0.0, 1.0, 2).unwrap();
    let s = SampledSignal::from_fn(g, |t| c(t, -t)).unwrap();
    assert_eq!(s.to_csv(), "t,re,im\n0.25,0.25,-0.25\n0.75,0.75,-0.75\n");
    assert_eq!(s.scale(c(0.0, 1.0)).values[0], c(0.25, 0.25));
}
