use std::f64::consts::PI;
use std::sync::OnceLock;

use critgabor::Error;
use critgabor::numeric_core::{Grid, SampledSignal};
use critgabor::partner::{self, Correction, GaussBoxOverlaps, OnbExpansion, PartnerConfig, Semiframe, Xi0Table};
use critgabor::windows::WindowSpec;
use num_complex::Complex64;

fn cfg() -> PartnerConfig {
    PartnerConfig::default()
}

fn table() -> &'static Xi0Table {
    static T: OnceLock<Xi0Table> = OnceLock::new();
    T.get_or_init(|| Xi0Table::build(&cfg(), 260).unwrap())
}

/// Composite Simpson on [-1/2, 1/2].
fn simpson_c(f: impl Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let h = 1.0 / n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..=n {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        s += w * f(-0.5 + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn g_and_h_values() {
    // G₀ = e^{-π/4}(1 - e^{-2π} + e^{-6π} - ...).
    let g0 = (-PI / 4.0).exp() * (1.0 - (-2.0 * PI).exp() + (-6.0 * PI).exp() - (-12.0 * PI).exp());
    assert!((partner::g_series(0, 8) - g0).abs() < 1e-16);
    assert!((partner::g_series(0, 8) - 0.455087).abs() < 1e-6);
    assert!((partner::h_factor(1).unwrap() - 0.455085).abs() < 1e-6);
    assert!(matches!(partner::h_factor(0), Err(Error::Domain(_))));
    for k in 2..30 {
        let lim = (-PI / 4.0).exp();
        assert!((partner::h_factor(k).unwrap() - lim).abs() < 1e-5);
        assert!((partner::h_factor(-k).unwrap() + lim).abs() < 1e-5);
    }
}

#[test]
fn mu_fourier_matches_quadrature() {
    for k in [-2i64, -1, 1, 3] {
        for l in -5i64..=5 {
            let q = simpson_c(|t| Complex64::from_polar(partner::mu_profile(k, t), -2.0 * PI * l as f64 * t), 4000);
            let c = partner::mu_fourier(k, l);
            assert!((q - c).norm() < 1e-10, "({k},{l}): {q} vs {c}");
        }
    }
    assert_eq!(partner::mu_fourier(0, 3), Complex64::new(0.0, 0.0));
}

#[test]
fn xi0_matches_simpson_oracle() {
    let c = cfg();
    for &(k, l) in &[(0i64, 0i64), (1, 0), (2, -3), (-3, 4), (5, 5), (-1, -7)] {
        let ka = k.unsigned_abs() as f64;
        let pre = c.c_psi * if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 } * partner::g_series(k, 8);
        let q = simpson_c(
            |t| Complex64::from_polar((PI * t * t - PI * ka - 2.0 * PI * k as f64 * t).exp(), -2.0 * PI * l as f64 * t),
            20_000,
        );
        let v = partner::xi0_eval(k, l, &c);
        assert!((v - pre * q).norm() < 1e-10, "({k},{l})");
    }
}

#[test]
fn xi0_two_oracles_agree() {
    let c = cfg();
    for k in -8i64..=8 {
        for l in -8i64..=8 {
            let a = partner::xi0_eval(k, l, &c);
            let b = partner::xi0_by_window(k, l, c.c_psi).unwrap();
            assert!((a - b).norm() < 1e-8, "({k},{l}): {a} vs {b}");
        }
    }
}

#[test]
fn quadrature_and_moment_routes_agree_in_overlap() {
    for &(k, l) in &[(3i64, 8i64), (5, 10), (10, 15), (18, 2), (2, 19), (0, 19)] {
        let a = partner::damped_integral_route(k, l, false, 256);
        let b = partner::damped_integral_route(k, l, true, 256);
        assert!((a - b).norm() < 1e-12 * a.norm().max(1e-3), "({k},{l}): {a} {b}");
    }
}

#[test]
fn xi0_row_matches_pointwise() {
    let c = cfg();
    let ls: Vec<i64> = (-40..=40).collect();
    for k in [-30i64, -1, 0, 2, 17] {
        let row = partner::xi0_row(k, &ls, &c);
        for (l, v) in ls.iter().zip(&row) {
            assert!((v - partner::xi0_eval(k, *l, &c)).norm() < 1e-13, "({k},{l})");
        }
    }
}

#[test]
fn xi0_origin_with_unit_constant() {
    // G₀ Σ_j π^j / (j! (2j+1) 4^j).
    let mut term = 1.0;
    let mut s = 0.0;
    for j in 0..30 {
        if j > 0 {
            term *= PI / (4.0 * j as f64);
        }
        s += term / (2 * j + 1) as f64;
    }
    let exact = partner::g_series(0, 8) * s;
    let v = partner::xi0_eval(0, 0, &cfg().with_c_psi(1.0));
    assert!((v.re - exact).abs() < 1e-14);
    assert!((v.re - 0.6084669).abs() < 1e-7);
}

#[test]
fn decay_envelope_holds() {
    let c = cfg();
    let big_c = partner::decay_envelope_constant(&c);
    for k in -60i64..=60 {
        for l in (-60i64..=60).step_by(3) {
            let v = partner::xi0_eval(k, l, &c).norm();
            assert!(v <= big_c / (2.0 * PI * (1.0 + k.abs() as f64)), "({k},{l})");
        }
    }
}

#[test]
fn xi0_ring_decays_like_inverse_distance() {
    // |ξ₀[k,l]| ≈ C_ψ / (2π|k + il|) far out, except on the k = 0 column
    // whose integrand is periodic and decays like 1/l².
    let c = cfg();
    for &(k, l) in &[(40i64, 30i64), (1, 64), (64, 1), (-50, 20), (32, -32)] {
        let v = partner::xi0_eval(k, l, &c).norm();
        let pred = c.c_psi / (2.0 * PI * ((k * k + l * l) as f64).sqrt());
        assert!((v / pred - 1.0).abs() < 0.05, "({k},{l}): {v} vs {pred}");
    }
    let a = partner::xi0_eval(0, 32, &c).norm();
    let b = partner::xi0_eval(0, 64, &c).norm();
    assert!((a / b - 4.0).abs() < 0.1, "{a} {b}");
}

#[test]
fn correction_coefficients_two_routes() {
    let c = cfg();
    for &(k, l) in &[(1i64, 0i64), (1, 3), (-2, 1), (3, -2)] {
        let closed = partner::c_coeff(k, l, &c);
        let sums = partner::c_coeff_partial_sums(k, l, 400, &c).unwrap();
        assert!((closed - sums).norm() < 1e-6, "({k},{l}): {closed} vs {sums}");
    }
    assert_eq!(partner::c_coeff(0, 4, &c), Complex64::new(0.0, 0.0));
}

#[test]
fn beta_round_trip() {
    let c = cfg();
    let lim = (-PI / 4.0).exp();
    for &(k, l) in &[(1i64, 0i64), (1, 3), (-2, 1)] {
        let b = partner::beta_round_trip(k, l, 20_000, &c);
        let target = -(k.signum() as f64) * lim;
        assert!((b - target).norm() < 1e-8, "({k},{l}): {b}");
    }
}

#[test]
fn inverse_weight_coefficients_switch_smoothly() {
    // The endpoint expansion and quadrature meet at |j| = 64.
    let c = cfg();
    let rule = critgabor::quad::gauss_legendre(64);
    for j in [65i64, 80, -90, 200] {
        let q = critgabor::quad::composite_c(&rule, -0.5, 0.5, 64, |t| {
            Complex64::from_polar((-PI * t * t).exp() / c.c_psi, -2.0 * PI * j as f64 * t)
        });
        let a = partner::inverse_weight_coeff(j, c.c_psi);
        assert!((q.re - a).abs() < 1e-14, "j = {j}: {} vs {a}", q.re);
    }
}

#[test]
fn index_shift_moves_entries() {
    let c = cfg();
    let base = critgabor::gabor::LatticeSeq::from_fn(6, |k, l| partner::xi0_eval(k, l, &c));
    let s = partner::index_shift(&base, 2, -1);
    assert_eq!(s.get(3, 0), base.get(1, 1));
    assert_eq!(s.get(-6, 0), Complex64::new(0.0, 0.0));
    let full = partner::xi0_shifted(2, -1, 6, &c);
    assert_eq!(full.get(3, 0), base.get(1, 1));
    assert!(full.get(-6, 0).norm() > 0.0);
}

#[test]
fn table_entries_match_direct_evaluation() {
    let t = table();
    for &(k, l, n, m) in &[(1i64, 2i64, 0i64, 0i64), (-3, 1, 1, 1), (0, 0, 2, -1)] {
        for corr in [Correction::None, Correction::Convergent, Correction::Flipped] {
            let a = t.xi_entry(k, l, n, m, corr);
            let b = partner::xi_entry(k, l, n, m, corr, &cfg());
            assert!((a - b).norm() < 1e-13);
        }
    }
}

#[test]
fn corrected_columns_converge_at_origin() {
    let s = partner::column_sums(table(), 0, 0, &[128, 256], Correction::Convergent).unwrap();
    assert!(s[1] - s[0] < 1e-6, "{s:?}");
}

#[test]
fn corrected_column_one_one_has_slow_tail() {
    // The k = 0 column carries no correction, so ξ₀[1, 1-l] leaves a 1/l tail:
    // the doubling increments shrink like 1/R rather than vanishing.
    let radii = [32usize, 64, 128, 256];
    let s = partner::column_sums(table(), 1, 1, &radii, Correction::Convergent).unwrap();
    let inc: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    for w in inc.windows(2) {
        assert!((w[0] / w[1] - 2.0).abs() < 0.3, "{inc:?}");
    }
}

#[test]
fn uncorrected_and_flipped_columns_diverge_logarithmically() {
    let radii = [16usize, 32, 64, 128, 256];
    for corr in [Correction::None, Correction::Flipped] {
        let s = partner::column_sums(table(), 0, 0, &radii, corr).unwrap();
        let fit = partner::log_fit(&radii, &s);
        assert!(fit.slope > 0.3 && fit.relative_residual < 0.2, "{corr:?}: {fit:?}");
    }
}

#[test]
fn column_sums_need_a_large_enough_table() {
    let small = Xi0Table::build(&cfg(), 20).unwrap();
    assert!(matches!(partner::column_sums(&small, 0, 0, &[32], Correction::None), Err(Error::Domain(_))));
    assert!(matches!(partner::column_sum(&small, 0, 0, 8, Correction::None), Err(Error::Domain(_))));
}

#[test]
fn log_fit_recovers_exact_law() {
    let radii = [10usize, 20, 40, 80];
    let sums: Vec<f64> = radii.iter().map(|&r| 1.5 + 0.25 * (r as f64).ln()).collect();
    let f = partner::log_fit(&radii, &sums);
    assert!((f.alpha - 1.5).abs() < 1e-12 && (f.slope - 0.25).abs() < 1e-12);
    assert!(f.relative_residual < 1e-12);
}

#[test]
fn onb_coefficients_of_basis_elements() {
    // γ_{1,-2} sampled analytically, projected back.
    let grid = Grid::new(-4.0, 4.0, 8000).unwrap();
    let f = OnbExpansion::basis(1, -2).to_signal(grid).unwrap();
    let c = partner::onb_coefficients(&f, 3).unwrap();
    for (k, l, v) in c.iter() {
        let want = if (k, l) == (1, -2) { 1.0 } else { 0.0 };
        assert!((v - want).norm() < 1e-9, "({k},{l}): {v}");
    }
    // Analytic windows go through Gauss-Legendre on each cell.
    let g = SampledSignal::from_window(&WindowSpec::gaussian(1.0).unwrap(), grid).unwrap();
    let a = partner::onb_coefficients(&g, 2).unwrap();
    let overlaps = GaussBoxOverlaps::new(4);
    for (k, l, v) in a.iter() {
        // ⟨φ, γ_{k,l}⟩ = ∫ φ(s + k) e^{-2πils} ds.
        let o = overlaps.get(k, -l);
        assert!((v - o).norm() < 1e-12, "({k},{l}): {v} vs {o}");
    }
}

#[test]
fn partner_coefficients_reproduce_weakly() {
    let f = OnbExpansion::new(vec![((0, 0), Complex64::new(0.6, 0.0)), ((1, -1), Complex64::new(0.0, 0.8))]);
    let h = OnbExpansion::basis(0, 0);
    let overlaps = GaussBoxOverlaps::new(70);
    let tr = partner::weak_identity_trace(&f, &h, &[8, 16, 32, 64], table(), &overlaps).unwrap();
    assert!(tr.decreasing(), "{:?}", tr.errors);
    assert!(tr.errors[3] < 0.02);
    assert!((tr.target - Complex64::new(0.6, 0.0)).norm() < 1e-15);
}

#[test]
fn partner_coeff_signal_matches_expansion() {
    let grid = Grid::new(-6.0, 6.0, 12_000).unwrap();
    let e = OnbExpansion::new(vec![((0, 1), Complex64::new(1.0, 0.0)), ((-1, 0), Complex64::new(0.5, 0.5))]);
    let s = e.to_signal(grid).unwrap();
    let a = partner::partner_coeff(&e, 1, 0, table(), Correction::Convergent);
    let b = partner::partner_coeff_signal(&s, 1, 0, 4, table()).unwrap();
    assert!((a - b).norm() < 1e-9, "{a} vs {b}");
}

#[test]
fn shift_invariance_demo_reports() {
    let rep = partner::shift_invariance_demo(table()).unwrap();
    assert!(rep.passed(), "{}", rep.to_json());
}

#[test]
fn semiframe_checks() {
    let tests = vec![
        OnbExpansion::basis(0, 0),
        OnbExpansion::new(vec![((1, 0), Complex64::new(1.0, 0.0)), ((0, 1), Complex64::new(0.0, -1.0))]),
    ];
    let rep = partner::semiframe_duality_check(Semiframe::BoxOnb, &tests, 8, table()).unwrap();
    assert!(rep.passed(), "{}", rep.to_json());
    let rep = partner::semiframe_duality_check(Semiframe::GaussianPartner, &tests, 24, table()).unwrap();
    assert!(rep.passed(), "{}", rep.to_json());
    assert!(matches!(partner::semiframe_duality_check(Semiframe::BoxOnb, &[], 8, table()), Err(Error::Domain(_))));
}

#[test]
fn config_validation() {
    assert!(cfg().validate().is_ok());
    assert!(PartnerConfig { series_n: 3, ..cfg() }.validate().is_err());
    assert!(PartnerConfig { c_psi: -1.0, ..cfg() }.validate().is_err());
    assert!(Xi0Table::build(&PartnerConfig { quad_nodes: 4, ..cfg() }, 4).is_err());
}
