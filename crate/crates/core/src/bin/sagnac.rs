//! `sagnac`: rotation phases, fringe sweeps and closed-form comparisons.
//!
//! Exit status: 0 success, 1 I/O or other failure, 2 usage error,
//! 3 truncation error, 4 tolerance failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sagnac_core::sagnac::{rotation_phase, RotationParameters, SPEED_OF_LIGHT};
use sagnac_core::sources::{entanglement_entropy, DEFAULT_TAIL_TOLERANCE};
use sagnac_core::sweep::{
    compare_report, emit, run_sweep, OutputFormat, RotationSweep, SweepConfig, SweepScheme, DEFAULT_STEPS,
};
use sagnac_core::Error;

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TRUNCATION: u8 = 3;
const EXIT_TOLERANCE: u8 = 4;

#[derive(Parser)]
#[command(name = "sagnac", version, about = "Quantum-optical Sagnac interferometer fringes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation-induced phase in radians.
    Phase(PhaseArgs),
    /// Sweep a detection scheme over the rotation phase and write the fringe.
    Fringe(FringeArgs),
    /// Sweep and compare against the closed form; fails above `--tol`.
    Compare {
        #[command(flatten)]
        fringe: FringeArgs,
        /// Largest acceptable absolute error.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Entropy of entanglement of the squeezed source, in bits.
    Entropy {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
    },
}

#[derive(Args)]
struct PhaseArgs {
    /// Loop radius, m.
    #[arg(long)]
    radius: f64,
    /// Angular velocity, rad/s.
    #[arg(long, allow_negative_numbers = true)]
    omega: f64,
    /// Vacuum wavelength, m.
    #[arg(long)]
    wavelength: f64,
    /// Fiber coil length, m; omit for a single loop.
    #[arg(long, default_value_t = 0.0)]
    fiber_length: f64,
    /// Enclosed area, m² (single loop); defaults to π R².
    #[arg(long)]
    area: Option<f64>,
    #[arg(long, default_value_t = SPEED_OF_LIGHT)]
    light_speed: f64,
}

#[derive(Args, Clone)]
struct FringeArgs {
    /// classical, single_counts, coincidence_12, g2_normalized (g2),
    /// p2_projective (p2), p4_2x2, p4_3x1.
    #[arg(long)]
    scheme: String,
    /// Input state: fock10, fock11 or squeezed; defaults per scheme.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    r: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi_min: f64,
    #[arg(long, default_value_t = std::f64::consts::TAU, allow_negative_numbers = true)]
    phi_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Bound on the discarded tail of the squeezed source.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOLERANCE)]
    tail_eps: f64,
    /// Explicit pair cutoff of the squeezed source.
    #[arg(long)]
    n_cut: Option<usize>,
    /// Power transmittance of a detector splitter; repeat for the second.
    #[arg(long = "splitter-t2")]
    splitter_t2: Vec<f64>,
    /// Divide values and closed form by their maxima.
    #[arg(long)]
    normalize: bool,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sweep the angular velocity (rad/s) instead of the phase; needs
    /// `--radius` and `--wavelength`.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    omega_range: Option<Vec<f64>>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    wavelength: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    fiber_length: f64,
}

impl FringeArgs {
    fn config(&self) -> Result<SweepConfig, Error> {
        let scheme: SweepScheme = self.scheme.parse()?;
        let format: OutputFormat = self.format.parse()?;
        let rotation = match (&self.omega_range, self.radius, self.wavelength) {
            (None, _, _) => None,
            (Some(range), Some(radius), Some(wavelength)) => Some(RotationSweep {
                radius,
                wavelength,
                fiber_length: self.fiber_length,
                area: None,
                omega_min: range[0],
                omega_max: range[1],
            }),
            _ => {
                return Err(Error::InvalidConfig(
                    "--omega-range needs --radius and --wavelength".into(),
                ))
            }
        };
        let config = SweepConfig {
            scheme,
            input: self.input.as_deref().map(str::parse).transpose()?,
            r: self.r,
            theta: self.theta,
            phi_min: self.phi_min,
            phi_max: self.phi_max,
            steps: self.steps,
            tail_eps: self.tail_eps,
            pair_cutoff: self.n_cut,
            splitter_t2: self.splitter_t2.clone(),
            rotation,
            normalize: self.normalize,
            format,
            out: self.out.clone(),
        };
        config.validate()?;
        Ok(config)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Truncation { .. } => EXIT_TRUNCATION,
        Error::InvalidConfig(_) | Error::Domain(_) | Error::NotUnitary { .. } => EXIT_USAGE,
        _ => EXIT_OTHER,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Phase(a) => {
            let mut params = RotationParameters::new(a.radius, a.omega, a.wavelength)
                .with_fiber_length(a.fiber_length)
                .with_light_speed(a.light_speed);
            if let Some(area) = a.area {
                params = params.with_area(area);
            }
            println!("{}", rotation_phase(&params)?);
        }
        Command::Fringe(a) => {
            let config = a.config()?;
            let data = run_sweep(&config)?;
            emit(&data, config.format, config.out.as_deref())?;
        }
        Command::Compare { fringe, tol, json } => {
            let config = fringe.config()?;
            let data = run_sweep(&config)?;
            if config.out.is_some() {
                emit(&data, config.format, config.out.as_deref())?;
            }
            let report = compare_report(&data, Some(tol))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{report}");
            }
            if !report.passed {
                return Ok(EXIT_TOLERANCE);
            }
        }
        Command::Entropy { r } => println!("{}", entanglement_entropy(r)?),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
