//! Command-line front end for the softcore-Coulomb Dirac toolkit.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use softcore_dirac::model::{AngularState, HalfInt, PotentialParams, Power, Tau};
use softcore_dirac::Error;

#[derive(Debug, Parser)]
#[command(
    name = "softcore-dirac",
    version,
    about = "Envelope lower bounds and shooting eigenvalues for the Dirac equation \
             with the softcore Coulomb potential -v/(r^q + b^q)^(1/q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimized envelope lower bound E^L.
    Bound {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Eigenvalue of the radial Dirac system by two-sided shooting.
    Solve {
        #[command(flatten)]
        level: LevelArgs,
        /// Convergence width on the energy.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the normalized radial functions as CSV (r, psi1, psi2).
        #[arg(long, value_name = "PATH")]
        dump_wavefunction: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Compare computed bounds and eigenvalues with the reference table.
    Table {
        /// Comma-separated 1-based row numbers; all rows by default.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        /// Worker threads; output order is unaffected.
        #[arg(long, value_name = "N")]
        parallel: Option<usize>,
    },
    /// Potential and tangent-family data as CSV.
    Tangent {
        #[arg(long)]
        v: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        q: Power,
        /// Comma-separated contact radii; may be empty.
        #[arg(long, default_value = "", value_parser = parse_list)]
        contacts: Contacts,
        #[arg(long, default_value_t = 0.05)]
        rmin: f64,
        #[arg(long, default_value_t = 20.0)]
        rmax: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Write to a file instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<std::path::PathBuf>,
    },
    /// Bound and eigenvalue along one parameter axis, with monotonicity flags.
    Scan {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        axis: softcore_dirac::workbench::Axis,
        /// Comma-separated ascending parameter values.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Run the property suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct Contacts(Vec<f64>);

/// Comma-separated reals; the empty string is the empty list.
fn parse_list(s: &str) -> Result<Contacts, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<f64>().map_err(|e| format!("'{x}': {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Contacts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

/// Potential parameters and quantum numbers of one level.
#[derive(Debug, Args)]
pub struct LevelArgs {
    #[arg(long)]
    v: f64,
    #[arg(long)]
    b: f64,
    /// Power q >= 1, or "inf" for the cutoff limit.
    #[arg(long)]
    q: Power,
    #[arg(long)]
    d: u32,
    /// Total angular momentum, e.g. "1/2" or "0.5".
    #[arg(long)]
    j: HalfInt,
    /// Sign label, -1 or +1.
    #[arg(long, allow_hyphen_values = true)]
    tau: Tau,
    #[arg(long)]
    nu: u32,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
}

impl LevelArgs {
    pub fn state(&self) -> softcore_dirac::Result<AngularState> {
        AngularState::new(self.d, self.j, self.tau, self.nu)
    }

    pub fn params(&self) -> softcore_dirac::Result<PotentialParams> {
        PotentialParams::new(self.v, self.b, self.q, self.m)
    }
}

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NO_BOUND: u8 = 3;
    pub const NO_BRACKET: u8 = 4;
    pub const INTEGRATION: u8 = 5;
}

pub fn exit_code(error: &Error) -> u8 {
    match error.root() {
        Error::InvalidParameter(_) | Error::OutOfDomain { .. } => exit::USAGE,
        Error::DomainExceeded { .. } | Error::NoBoundAvailable => exit::NO_BOUND,
        Error::BracketNotFound { .. } => exit::NO_BRACKET,
        Error::IntegrationFailure { .. } | Error::DegenerateSolution(_) | Error::Row { .. } => {
            exit::INTEGRATION
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound { level, format } => commands::bound(&level, format),
        Command::Solve {
            level,
            tol,
            dump_wavefunction,
            format,
        } => commands::solve(&level, tol, dump_wavefunction.as_deref(), format),
        Command::Table {
            rows,
            format,
            parallel,
        } => commands::table(&rows, format, parallel),
        Command::Tangent {
            v,
            b,
            q,
            contacts,
            rmin,
            rmax,
            points,
            out,
        } => commands::tangent(v, b, q, &contacts.0, rmin, rmax, points, out.as_deref()),
        Command::Scan {
            level,
            axis,
            grid,
            format,
        } => commands::scan(&level, axis, &grid, format),
        Command::Check { suite } => commands::check(&suite),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
