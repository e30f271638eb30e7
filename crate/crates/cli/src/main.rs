use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod svg;

use output::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "critgabor",
    version,
    about = "Gabor systems at critical density: Zak transforms, symbols and reproducing partners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Gaussian,
    Box,
    Bastiaans,
    Example4G,
    Example4Gamma,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct WindowArgs {
    #[arg(long, value_enum, default_value_t = WindowKind::Gaussian)]
    pub window: WindowKind,
    /// Gaussian width parameter.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Lattice parameter (time step); the frequency step is 1/a.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a Zak transform on Q_a and check norm and quasiperiodicity.
    Zak {
        #[command(flatten)]
        window: WindowArgs,
        /// Nodes per axis.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Lattice-sum truncation; derived from the window when omitted.
        #[arg(long)]
        terms: Option<usize>,
        /// Offset the nodes by half a cell in both directions.
        #[arg(long)]
        staggered: bool,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// CSV of the sampled field.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Gram symbol Θ.
    Theta {
        #[command(subcommand)]
        action: ThetaAction,
    },
    /// Window samples.
    Windows {
        #[command(subcommand)]
        action: WindowsAction,
    },
    /// The Example-4 pair g_a, γ_a: CSV samples, SVG figure and JSON sidecar.
    Example4 {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Samples on the plotting range.
        #[arg(long, default_value_t = 1601)]
        grid: usize,
        /// Half-width of the plotting range.
        #[arg(long, default_value_t = 8.005)]
        range: f64,
        /// SVG path; defaults to fig1.svg in the output directory.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The Bastiaans window: calibration and symbol checks.
    Bastiaans {
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Radius of the excluded disc around the zero of Z₁φ.
        #[arg(long, default_value_t = 0.05)]
        exclusion: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// CSV of ψ on [-6, 6].
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reproducing partner of the integer Gaussian system.
    Partner {
        #[command(subcommand)]
        action: PartnerAction,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ThetaAction {
    /// Θ on the uniform grid (i/n, j/n).
    Grid {
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 12)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum WindowsAction {
    /// Sample a window on a uniform midpoint grid.
    Dump {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 1201)]
        grid: usize,
        /// Half-width of the sampled interval.
        #[arg(long, default_value_t = 6.0)]
        range: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum PartnerAction {
    /// Column sums T_R(n,m) for R = 16, 32, ... up to the radius.
    ColumnSums {
        #[arg(long, default_value_t = 0)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        m: i64,
        #[arg(long, default_value_t = 256)]
        radius: usize,
        #[arg(long, conflicts_with = "uncorrected")]
        corrected: bool,
        #[arg(long)]
        uncorrected: bool,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// ξ₀[k,l] on |k|,|l| <= radius as CSV.
    Xi0 {
        #[arg(long, default_value_t = 16)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Zak { window, grid, terms, staggered, tol, out, json } => {
            commands::zak(&window, commands::ZakOpts { grid, terms, staggered, tol }, out, json)
        }
        Command::Theta { action: ThetaAction::Grid { grid, radius, out, json } } => {
            commands::theta_grid(grid, radius, out, json)
        }
        Command::Windows { action: WindowsAction::Dump { window, grid, range, out } } => {
            commands::windows_dump(&window, grid, range, out)
        }
        Command::Example4 { a, out_dir, grid, range, svg } => commands::example4(a, &out_dir, grid, range, svg),
        Command::Bastiaans { grid, exclusion, tol, out, json } => commands::bastiaans(grid, exclusion, tol, out, json),
        Command::Partner { action: PartnerAction::ColumnSums { n, m, radius, corrected, uncorrected, tol, json } } => {
            // Corrected is the default.
            let _ = corrected;
            commands::column_sums(n, m, radius, !uncorrected, tol, json)
        }
        Command::Partner { action: PartnerAction::Xi0 { radius, out } } => commands::xi0_table(radius, out),
        Command::Verify { suite, seed, out } => commands::verify(&suite, seed, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
