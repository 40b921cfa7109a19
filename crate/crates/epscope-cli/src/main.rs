//! `epscope` — sweeps and analyses of the chain-impurity spectrum from the
//! command line. Every subcommand emits one deterministic CSV or JSON table;
//! JSON documents embed the resolved configuration so they can be re-run.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use epscope_cli::{CliError, Grid, OutputFormat, RunConfig, SheetArg, SideArg};

#[derive(Parser)]
#[command(
    name = "epscope",
    about = "Spectra, exceptional points, and scaling observables of a semi-infinite chain with an endpoint impurity",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(fmt: FormatArg) -> OutputFormat {
        match fmt {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideFlag {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SheetFlag {
    First,
    Second,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue pair, wave numbers, and labels over an ε_d grid.
    Spectrum {
        #[arg(long)]
        g: f64,
        /// Grid as min:max:count (inclusive) or a single value.
        #[arg(long = "eps-d", allow_hyphen_values = true)]
        eps_d: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exceptional-point records at fixed g (closed form, optionally Newton).
    Ep {
        #[arg(long)]
        g: f64,
        /// Also run the Newton locator from ±1.5 and report its records.
        #[arg(long)]
        newton: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fractional-power series coefficients around one exceptional point.
    Puiseux {
        #[arg(long)]
        g: f64,
        #[arg(long, value_enum, default_value = "plus")]
        side: SideFlag,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Winding number of the dispersion denominator around a contour.
    Winding {
        #[arg(long)]
        g: f64,
        #[arg(long = "eps-d", allow_hyphen_values = true)]
        eps_d: f64,
        #[arg(long = "center-re", allow_hyphen_values = true)]
        center_re: f64,
        #[arg(long = "center-im", default_value_t = 0.0, allow_hyphen_values = true)]
        center_im: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long, value_enum, default_value = "second")]
        sheet: SheetFlag,
        #[arg(long, default_value_t = 2048)]
        points: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Adiabatic encirclement of the positive exceptional point.
    Encircle {
        #[arg(long)]
        g: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        loops: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solution and exceptional-point counts for an (n_D, n_C) system.
    Count {
        #[arg(long)]
        nd: u32,
        #[arg(long)]
        nc: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Roots of the w = e^{ik} polynomial and their energies.
    Wroots {
        #[arg(long = "eps-d", allow_hyphen_values = true)]
        eps_d: f64,
        #[arg(long)]
        g: f64,
        /// End-site weight F of the reduced eigenproblem (1/2 = chain model).
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        f: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Resonance-state correlation along the chain.
    Correlation {
        #[arg(long)]
        g: f64,
        #[arg(long = "eps-d", allow_hyphen_values = true)]
        eps_d: f64,
        #[arg(long = "x-max", default_value_t = 20)]
        x_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decay width, pseudo-gap, and correlation phase over an ε_d grid.
    Qpt {
        #[arg(long)]
        g: f64,
        #[arg(long = "eps-d", allow_hyphen_values = true)]
        eps_d: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-chain eigensolve against the closed-form bound state.
    Oracle {
        #[arg(long)]
        g: f64,
        #[arg(long = "eps-d", allow_hyphen_values = true)]
        eps_d: f64,
        /// Chain lengths, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000")]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn to_config(command: &Command) -> Result<(RunConfig, Option<PathBuf>), CliError> {
    Ok(match command {
        Command::Spectrum {
            g,
            eps_d,
            format,
            output,
        } => (
            RunConfig::Spectrum {
                g: *g,
                eps_d: Grid::parse(eps_d)?,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Ep {
            g,
            newton,
            format,
            output,
        } => (
            RunConfig::Ep {
                g: *g,
                newton: *newton,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Puiseux {
            g,
            side,
            order,
            format,
            output,
        } => (
            RunConfig::Puiseux {
                g: *g,
                side: match side {
                    SideFlag::Plus => SideArg::Plus,
                    SideFlag::Minus => SideArg::Minus,
                },
                order: *order,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Winding {
            g,
            eps_d,
            center_re,
            center_im,
            radius,
            sheet,
            points,
            format,
            output,
        } => (
            RunConfig::Winding {
                g: *g,
                eps_d: *eps_d,
                center_re: *center_re,
                center_im: *center_im,
                radius: *radius,
                sheet: match sheet {
                    SheetFlag::First => SheetArg::First,
                    SheetFlag::Second => SheetArg::Second,
                },
                points: *points,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Encircle {
            g,
            delta,
            steps,
            loops,
            format,
            output,
        } => (
            RunConfig::Encircle {
                g: *g,
                delta: *delta,
                steps: *steps,
                loops: *loops,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Count {
            nd,
            nc,
            format,
            output,
        } => (
            RunConfig::Count {
                nd: *nd,
                nc: *nc,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Wroots {
            eps_d,
            g,
            f,
            format,
            output,
        } => (
            RunConfig::Wroots {
                eps_d: *eps_d,
                g: *g,
                f: *f,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Correlation {
            g,
            eps_d,
            x_max,
            format,
            output,
        } => (
            RunConfig::Correlation {
                g: *g,
                eps_d: *eps_d,
                x_max: *x_max,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Qpt {
            g,
            eps_d,
            format,
            output,
        } => (
            RunConfig::Qpt {
                g: *g,
                eps_d: Grid::parse(eps_d)?,
                format: (*format).into(),
            },
            output.out.clone(),
        ),
        Command::Oracle {
            g,
            eps_d,
            sizes,
            format,
            output,
        } => (
            RunConfig::Oracle {
                g: *g,
                eps_d: *eps_d,
                sizes: sizes.clone(),
                format: (*format).into(),
            },
            output.out.clone(),
        ),
    })
}

fn execute() -> Result<(), CliError> {
    let cli = Cli::parse();
    let (config, out_path) = to_config(&cli.command)?;
    let text = epscope_cli::run(&config)?;
    match out_path {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(CliError::Io)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.record());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
