use std::f64::consts::PI;

use critgabor::Error;
use critgabor::gabor::{self, LatticeParams, LatticeSeq};
use critgabor::numeric_core::{Grid, SampledSignal};
use critgabor::windows::WindowSpec;
use critgabor::zak::{self, ZakGrid};
use num_complex::Complex64;

fn phi() -> WindowSpec {
    WindowSpec::gaussian(1.0).unwrap()
}

#[test]
fn lattice_validation() {
    assert!(LatticeParams::new(1.0, 1.0).unwrap().require_critical().is_ok());
    assert!(matches!(LatticeParams::new(0.5, 1.0).unwrap().require_critical(), Err(Error::Domain(_))));
    assert!(matches!(LatticeParams::new(0.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn stft_of_gaussian_closed_form() {
    // V_φφ(x, ω) = e^{πiωx} e^{-π(x²+ω²)/2} with T_x M_ω as defined here.
    let grid = Grid::new(-8.0, 8.0, 4096).unwrap();
    let f = SampledSignal::from_window(&phi(), grid).unwrap();
    for &(x, w) in &[(0.0, 0.0), (1.0, 0.5), (-0.7, 1.3)] {
        let v = gabor::stft_sample(&f, &phi(), x, w).unwrap();
        let exact = Complex64::from_polar((-PI * (x * x + w * w) / 2.0).exp(), PI * x * w);
        assert!((v - exact).norm() < 1e-10, "({x},{w}): {v} vs {exact}");
    }
}

#[test]
fn synthesis_of_delta_is_shifted_window() {
    let grid = Grid::new(-6.0, 6.0, 600).unwrap();
    let lat = LatticeParams::critical(1.0).unwrap();
    let xi = LatticeSeq::delta(3, 1, -2);
    let s = gabor::gabor_synthesis(&xi, &phi(), lat, grid).unwrap();
    for (t, v) in grid.nodes().zip(&s.values) {
        let exact = critgabor::windows::gaussian_eval(1.0, t - 1.0).unwrap()
            * Complex64::from_polar(1.0, -2.0 * PI * 2.0 * (t - 1.0));
        assert!((v - exact).norm() < 1e-14);
    }
}

#[test]
fn box_basis_frame_operator_is_identity() {
    let lat = LatticeParams::critical(1.0).unwrap();
    let grid = Grid::new(-4.0, 4.0, 800).unwrap();
    let f = SampledSignal::from_window(&phi(), grid).unwrap();
    let out = gabor::frame_operator_zak(&WindowSpec::Box, &WindowSpec::Box, lat, &f).unwrap();
    let err = out.values.iter().zip(&f.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    assert!(err < 1e-12, "{err}");
}

#[test]
fn frame_operator_direct_agrees_with_zak_for_gaussian_pair() {
    // S_{φ,φ} f for f = φ shifted; both routes are spectrally accurate here.
    let lat = LatticeParams::critical(1.0).unwrap();
    let grid = Grid::new(-7.0, 7.0, 1400).unwrap();
    let f = SampledSignal::from_fn(grid, |t| critgabor::windows::gaussian_eval(1.0, t - 0.3).unwrap().into()).unwrap();
    let z = gabor::frame_operator_zak(&phi(), &phi(), lat, &f).unwrap();
    let d = gabor::frame_operator_direct(&phi(), &phi(), lat, &f, 8).unwrap();
    let err = z.values.iter().zip(&d.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
}

#[test]
fn example4_pair_reconstructs_gaussian() {
    let lat = LatticeParams::critical(1.0).unwrap();
    let g = WindowSpec::example4_g(1.0).unwrap();
    let gm = WindowSpec::example4_gamma(1.0).unwrap();
    let grid = Grid::new(-6.0, 6.0, 1200).unwrap();
    let f = SampledSignal::from_window(&phi(), grid).unwrap();
    let out = gabor::frame_operator_zak(&g, &gm, lat, &f).unwrap();
    let err = out.values.iter().zip(&f.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
    // Same input as a tabulated signal.
    let tab = SampledSignal::new(grid, f.values.clone()).unwrap();
    let out = gabor::frame_operator_zak(&g, &gm, lat, &tab).unwrap();
    let err = out.values.iter().zip(&f.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
}

#[test]
fn example4_reppair_for_several_a() {
    for &a in &[0.5, 1.0, 2.0] {
        let g = WindowSpec::example4_g(a).unwrap();
        let gm = WindowSpec::example4_gamma(a).unwrap();
        let b = gabor::reppair_zak_bounds(&g, &gm, ZakGrid::new(a, 64, 64).unwrap().staggered(), None).unwrap();
        // |Z g · Z γ| = 1/a² pointwise and a·conj(Zg)Zγ = 1/a.
        assert!((b.m_hat - 1.0 / (a * a)).abs() < 1e-12, "a = {a}: {b:?}");
        assert!((b.big_m_hat - 1.0 / (a * a)).abs() < 1e-12);
        if a == 1.0 {
            assert!(b.report(1e-6).passed());
        }
    }
}

#[test]
fn gaussian_pair_has_no_lower_bound() {
    let b = gabor::reppair_zak_bounds(&phi(), &phi(), ZakGrid::new(1.0, 64, 64).unwrap(), None).unwrap();
    assert!(b.m_hat < 1e-20);
    assert!(!b.report(1e-6).passed());
    let excl =
        gabor::reppair_zak_bounds(&phi(), &phi(), ZakGrid::new(1.0, 64, 64).unwrap(), Some(((0.5, 0.5), 0.1))).unwrap();
    assert!(excl.m_hat > 1e-3);
}

#[test]
fn zak_symbol_of_box_is_one() {
    let s =
        gabor::zak_symbol(&WindowSpec::Box, &WindowSpec::Box, ZakGrid::new(1.0, 16, 16).unwrap().staggered()).unwrap();
    assert!(s.values.iter().all(|v| (v - 1.0).norm() < 1e-14));
}

#[test]
fn schauder_ratio_box_and_gaussian() {
    let zb = zak::zak_forward(&WindowSpec::Box, ZakGrid::new(1.0, 64, 64).unwrap().staggered(), 2).unwrap();
    let r = gabor::schauder_ratio(&zb, (0.0, 1.0), (0.0, 1.0)).unwrap();
    assert!((r - 1.0).abs() < 1e-12);
    // For the Gaussian, |Z|^{-2} is not integrable near the zero; the ratio
    // on rectangles containing it grows under grid refinement.
    let ratios: Vec<f64> = [64usize, 128, 256, 512]
        .iter()
        .map(|&n| {
            let z = zak::zak_forward(&phi(), ZakGrid::new(1.0, n, n).unwrap().staggered(), 8).unwrap();
            gabor::schauder_ratio(&z, (0.25, 0.75), (0.25, 0.75)).unwrap()
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > w[0] + 0.1), "{ratios:?}");
    // Away from the zero the ratio is grid independent.
    let away: Vec<f64> = [64usize, 256]
        .iter()
        .map(|&n| {
            let z = zak::zak_forward(&phi(), ZakGrid::new(1.0, n, n).unwrap().staggered(), 8).unwrap();
            gabor::schauder_ratio(&z, (0.0, 0.25), (0.0, 0.25)).unwrap()
        })
        .collect();
    assert!((away[0] - away[1]).abs() < 1e-3, "{away:?}");
}

#[test]
fn schauder_ratio_rejects_bad_rectangles() {
    let z = zak::zak_forward(&phi(), ZakGrid::new(1.0, 16, 16).unwrap(), 8).unwrap();
    assert!(matches!(gabor::schauder_ratio(&z, (0.5, 0.4), (0.0, 1.0)), Err(Error::Domain(_))));
    assert!(matches!(gabor::schauder_ratio(&z, (0.0, 2.0), (0.0, 1.0)), Err(Error::Domain(_))));
}

#[test]
fn lattice_seq_indexing() {
    let mut s = LatticeSeq::zeros(2);
    s.set(-2, 1, Complex64::new(3.0, 0.0));
    assert_eq!(s.get(-2, 1), Complex64::new(3.0, 0.0));
    assert_eq!(s.get(5, 0), Complex64::new(0.0, 0.0));
    assert_eq!(s.iter().count(), 25);
}
