use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use critgabor::gabor;
use critgabor::numeric_core::{Grid, SampledSignal};
use critgabor::partner::{self, Correction, PartnerConfig, Xi0Table};
use critgabor::report::{Check, Report, nums};
use critgabor::theta_kernel;
use critgabor::verify::{self, Suite, VerifyConfig};
use critgabor::windows::{self, WindowSpec};
use critgabor::zak::{self, ZakGrid};

use crate::output::{CliError, Envelope, emit_json, print_stdout, write_atomic};
use crate::svg;
use crate::{WindowArgs, WindowKind};

fn window_spec(w: &WindowArgs) -> Result<WindowSpec, CliError> {
    Ok(match w.window {
        WindowKind::Gaussian => WindowSpec::gaussian(w.sigma)?,
        WindowKind::Box => WindowSpec::Box,
        WindowKind::Bastiaans => {
            if w.a != 1.0 {
                return Err(CliError::Usage(format!("the bastiaans window is defined for --a 1 only, got {}", w.a)));
            }
            WindowSpec::bastiaans()
        }
        WindowKind::Example4G => WindowSpec::example4_g(w.a)?,
        WindowKind::Example4Gamma => WindowSpec::example4_gamma(w.a)?,
    })
}

/// L² norm from its closed form, and whether the grid norm is expected to
/// reach it to the requested tolerance. The Example-4 fields have endpoint
/// power singularities, so their grid norms converge only algebraically.
fn expected_norm(w: &WindowArgs) -> Result<Option<(f64, bool)>, CliError> {
    Ok(match w.window {
        WindowKind::Gaussian | WindowKind::Box => Some((1.0, true)),
        WindowKind::Bastiaans => None,
        WindowKind::Example4G => Some((windows::example4_norm_sqr(1.0, w.a)?.sqrt(), false)),
        WindowKind::Example4Gamma => Some((windows::example4_norm_sqr(-1.0, w.a)?.sqrt(), false)),
    })
}

pub struct ZakOpts {
    pub grid: usize,
    pub terms: Option<usize>,
    pub staggered: bool,
    pub tol: f64,
}

pub fn zak(w: &WindowArgs, o: ZakOpts, out: Option<PathBuf>, json_path: Option<PathBuf>) -> Result<bool, CliError> {
    let spec = window_spec(w)?;
    let (n, tol) = (o.grid, o.tol);
    let k = o.terms.unwrap_or_else(|| gabor::default_truncation(&spec, w.a));
    // Z γ_a is unbounded on the lines ω ∈ Z/a, which the plain grid hits.
    let staggered = o.staggered || w.window == WindowKind::Example4Gamma;
    let grid = if staggered { ZakGrid::new(w.a, n, n)?.staggered() } else { ZakGrid::new(w.a, n, n)? };
    let z = zak::zak_forward(&spec, grid, k)?;
    let mut checks = Report::new();
    let expected = expected_norm(w)?;
    if let Some((norm, true)) = expected {
        checks.push(Check::near("zak_norm", z.norm(), norm, tol));
    }
    let nodes: Vec<(f64, f64)> =
        (0..8).map(|i| (w.a * (0.11 * i as f64 + 0.03), (0.07 * i as f64 + 0.02) / w.a)).collect();
    checks.extend(zak::check_quasiperiodicity(&spec, w.a, k, &nodes, tol.max(1e-12))?);
    if let Some(p) = out {
        write_atomic(&p, &z.to_csv())?;
    }
    let config = json!({ "window": w, "grid": n, "terms": k, "staggered": staggered, "tol": tol });
    let env = Envelope::new("zak", config, checks).with_data(json!({
        "norm": z.norm(),
        "norm_closed_form": expected.map(|e| e.0),
        "max_abs": z.max_abs(),
        "min_abs": z.min_abs(),
    }));
    emit_json(json_path.as_deref(), &env.to_json())?;
    Ok(env.pass)
}

pub fn theta_grid(n: usize, radius: usize, out: Option<PathBuf>, json_path: Option<PathBuf>) -> Result<bool, CliError> {
    if n < 2 || n % 2 != 0 {
        return Err(CliError::Usage(format!("--grid must be even and at least 2, got {n}")));
    }
    if radius < 5 {
        return Err(CliError::Usage(format!("--radius must be at least 5, got {radius}")));
    }
    let vals = theta_kernel::theta_grid(n, radius);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let centre = vals[(n / 2) * n + n / 2];
    let mut checks = Report::new();
    checks.push(Check::at_least("nonnegative", min, -1e-12));
    checks.push(Check::at_most("value_at_zero", centre.abs(), 1e-12));
    checks.extend(theta_kernel::theta_hessian_check(radius, 1e-3)?);
    if let Some(p) = out {
        let mut csv = String::from("omega1,omega2,theta\n");
        for (idx, v) in vals.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{v:e}", (idx / n) as f64 / n as f64, (idx % n) as f64 / n as f64);
        }
        write_atomic(&p, &csv)?;
    }
    let env = Envelope::new("theta grid", json!({ "grid": n, "radius": radius }), checks);
    emit_json(json_path.as_deref(), &env.to_json())?;
    Ok(env.pass)
}

fn sample(spec: &WindowSpec, n: usize, half: f64) -> Result<SampledSignal, CliError> {
    let grid = Grid::new(-half, half, n)?;
    Ok(SampledSignal::from_window(spec, grid)?)
}

pub fn windows_dump(w: &WindowArgs, n: usize, half: f64, out: Option<PathBuf>) -> Result<bool, CliError> {
    let spec = window_spec(w)?;
    let s = sample(&spec, n, half)?;
    match out {
        Some(p) => write_atomic(&p, &s.to_csv())?,
        None => print_stdout(&s.to_csv())?,
    }
    Ok(true)
}

pub fn example4(a: f64, dir: &Path, n: usize, half: f64, svg_path: Option<PathBuf>) -> Result<bool, CliError> {
    let g = WindowSpec::example4_g(a)?;
    let gamma = WindowSpec::example4_gamma(a)?;
    let gs = sample(&g, n, half)?;
    let gms = sample(&gamma, n, half)?;
    let (gname, gmname) =
        if a == 1.0 { ("g1".to_string(), "gamma1".to_string()) } else { (format!("g_a{a}"), format!("gamma_a{a}")) };
    write_atomic(&dir.join(format!("{gname}.csv")), &gs.to_csv())?;
    write_atomic(&dir.join(format!("{gmname}.csv")), &gms.to_csv())?;

    let t: Vec<f64> = gs.grid.nodes().collect();
    let split = |s: &SampledSignal| -> (Vec<f64>, Vec<f64>) {
        (s.values.iter().map(|v| v.re).collect(), s.values.iter().map(|v| v.im).collect())
    };
    let (g_re, g_im) = split(&gs);
    let (gm_re, gm_im) = split(&gms);
    let figure = svg::render(&[
        svg::Panel { title: &gname, t: &t, re: &g_re, im: &g_im },
        svg::Panel { title: &gmname, t: &t, re: &gm_re, im: &gm_im },
    ]);
    let svg_path = svg_path.unwrap_or_else(|| dir.join("fig1.svg"));
    write_atomic(&svg_path, &figure)?;

    let mut checks = Report::new();
    let zgrid = ZakGrid::new(a, 64, 64)?.staggered();
    checks.extend(gabor::reppair_zak_bounds(&g, &gamma, zgrid, None)?.report(1e-6));
    let g0 = g.eval(0.0)?;
    if a == 1.0 {
        checks.push(Check::near("g1_at_zero", g0.re, 0.61802, 1e-4));
    }
    let config = json!({
        "a": a,
        "grid": n,
        "range": [-half, half],
        "spacing": gs.grid.spacing(),
        "files": [format!("{gname}.csv"), format!("{gmname}.csv"), svg_path.file_name().map(|f| f.to_string_lossy().into_owned())],
        "line_styles": { "real": "solid", "imaginary": "dashed" },
    });
    let env = Envelope::new("example4", config, checks).with_data(json!({ "g_at_zero": [g0.re, g0.im] }));
    let stem = svg_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "fig1".into());
    write_atomic(&svg_path.with_file_name(format!("{stem}.json")), &format!("{}\n", env.to_json()))?;
    Ok(env.pass)
}

pub fn bastiaans(
    n: usize,
    exclusion: f64,
    tol: f64,
    out: Option<PathBuf>,
    json_path: Option<PathBuf>,
) -> Result<bool, CliError> {
    if !(exclusion > 0.0 && exclusion < 0.5) {
        return Err(CliError::Usage(format!("--exclusion must lie in (0, 0.5), got {exclusion}")));
    }
    let c_psi = windows::calibrate_bastiaans_constant();
    let psi = WindowSpec::Bastiaans { c_psi };
    let phi = WindowSpec::gaussian(1.0)?;
    let b = gabor::reppair_zak_bounds(&psi, &phi, ZakGrid::new(1.0, n, n)?, Some(((0.5, 0.5), exclusion)))?;
    let mut checks = Report::new();
    checks.push(Check::at_most("symbol_identity_gap", b.identity_gap, tol).with("exclusion_radius", exclusion));
    let cutoffs = [2.0, 4.0, 6.0, 8.0];
    let energies = cutoffs.iter().map(|&t| verify::bastiaans_energy(c_psi, t)).collect::<Result<Vec<_>, _>>()?;
    let increasing = energies.windows(2).all(|w| w[1] > w[0]);
    checks.push(
        Check::new("energy_increasing", energies[3] - energies[0], 0.0, increasing).with("energies", nums(&energies)),
    );
    if let Some(p) = out {
        write_atomic(&p, &sample(&psi, 1201, 6.0)?.to_csv())?;
    }
    let env = Envelope::new("bastiaans", json!({ "grid": n, "exclusion": exclusion, "tol": tol }), checks)
        .with_data(json!({ "c_psi": c_psi, "m_hat": b.m_hat, "big_m_hat": b.big_m_hat }));
    emit_json(json_path.as_deref(), &env.to_json())?;
    Ok(env.pass)
}

pub fn column_sums(
    n: i64,
    m: i64,
    radius: usize,
    corrected: bool,
    tol: f64,
    json_path: Option<PathBuf>,
) -> Result<bool, CliError> {
    if radius < 32 {
        return Err(CliError::Usage(format!("--radius must be at least 32, got {radius}")));
    }
    let mut radii = Vec::new();
    let mut r = 16;
    while r <= radius {
        radii.push(r);
        r *= 2;
    }
    if *radii.last().expect("non-empty") != radius {
        radii.push(radius);
    }
    let cfg = PartnerConfig::default();
    let table = Xi0Table::build(&cfg, radius + n.unsigned_abs().max(m.unsigned_abs()) as usize)?;
    let corr = if corrected { Correction::Convergent } else { Correction::None };
    let sums = partner::column_sums(&table, n, m, &radii, corr)?;
    let fit = partner::log_fit(&radii, &sums);
    let mut checks = Report::new();
    if corrected {
        let k = sums.len();
        checks.push(Check::at_most("tail", sums[k - 1] - sums[k - 2], tol));
    } else {
        checks.push(
            Check::new("log_divergence", fit.slope, 0.2, fit.slope > 0.0 && fit.relative_residual < 0.2)
                .with("relative_residual", fit.relative_residual),
        );
    }
    let config = json!({ "n": n, "m": m, "radius": radius, "corrected": corrected, "tol": tol, "c_psi": cfg.c_psi, "quad_nodes": cfg.quad_nodes });
    let env = Envelope::new("partner column-sums", config, checks).with_data(json!({
        "n": n,
        "m": m,
        "radii": radii,
        "sums": nums(&sums),
        "corrected": corrected,
        "log_slope": fit.slope,
    }));
    emit_json(json_path.as_deref(), &env.to_json())?;
    Ok(env.pass)
}

pub fn xi0_table(radius: usize, out: Option<PathBuf>) -> Result<bool, CliError> {
    let cfg = PartnerConfig::default();
    let t = Xi0Table::build(&cfg, radius)?;
    let mut csv = String::from("k,l,re,im\n");
    for (k, l, v) in t.xi0.iter() {
        let _ = writeln!(csv, "{k},{l},{:e},{:e}", v.re, v.im);
    }
    match out {
        Some(p) => write_atomic(&p, &csv)?,
        None => print_stdout(&csv)?,
    }
    Ok(true)
}

pub fn verify(suite: &str, seed: Option<u64>, out: Option<PathBuf>) -> Result<bool, CliError> {
    let mut cfg = VerifyConfig::default();
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>().map_err(|e| match e {
            critgabor::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Core(other),
        })?]
    };
    let result = verify::run(&suites, &cfg)?;
    emit_json(out.as_deref(), &result.to_json())?;
    Ok(result.pass)
}
