//! Command-line front end.
//!
//! Exit codes: 0 on pass, 1 on a check failure, 2 on an input error, 3 when
//! the only blemish is a bounded search that came back inconclusive under
//! `--strict`.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rinehart_cli::{
    cmd_curvature, cmd_derham, cmd_flat, cmd_lr, cmd_presets, cmd_verify, CliError,
    DerhamCheck, Flags, LrCheck, Report,
};

#[derive(Parser)]
#[command(
    name = "rinehart",
    about = "Exact curvature, bracket-layer, and bounded de Rham computations \
             for module presentations over hypersurface rings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Degree bound for every bounded linear solve.
    #[arg(long, global = true, default_value_t = 8)]
    maxdeg: u32,

    /// Seed for the deterministic sample generator (printed in the report).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Treat inconclusive bounded searches as failures (exit code 3).
    #[arg(long, global = true)]
    strict: bool,

    /// Print the full JSON report to standard output instead of the
    /// human-readable summary.
    #[arg(long, global = true)]
    json: bool,

    /// Also write the full JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<std::path::PathBuf>,

    /// Include wall-clock timings in the report (makes output
    /// non-reproducible byte-for-byte).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full reproduction battery against a preset or file.
    Verify {
        /// `sphere`, `russel`, or a presentation JSON path.
        input: String,
    },
    /// Per-pair curvature matrices, flatness verdict, curvature type.
    Curvature {
        input: String,
        /// Restrict to one generator pair (two 1-based indices).
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Flatness verdict relative to the declared generators.
    Flat { input: String },
    /// Bracket-layer spot checks.
    Lr {
        #[command(subcommand)]
        check: LrSub,
    },
    /// Differential-form queries on a 3-variable presentation.
    Derham {
        #[command(subcommand)]
        check: DerhamSub,
    },
    /// List the bundled presets.
    Presets,
}

#[derive(Subcommand)]
enum LrSub {
    /// Jacobi identity and Leibniz rule on sampled elements.
    Jacobi { input: String },
    /// Potential cocycle against the shifted curvature, plus the twist map.
    Gamma { input: String },
    /// Equivalence transforms compose additively and invert.
    Transform { input: String },
    /// Central cochain action and scalar coboundaries.
    Torsor { input: String },
}

#[derive(Subcommand)]
enum DerhamSub {
    /// Bounded closedness of a one-form.
    Closed {
        #[arg(default_value = "sphere")]
        input: String,
        /// Index into the standard closed family.
        #[arg(long)]
        n: Option<u32>,
        /// Explicit one-form components (three polynomials).
        #[arg(long, num_args = 3, value_names = ["P", "Q", "R"])]
        form: Option<Vec<String>>,
    },
    /// Bounded exactness witness search for a one-form.
    Exact {
        #[arg(default_value = "sphere")]
        input: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, num_args = 3, value_names = ["P", "Q", "R"])]
        form: Option<Vec<String>>,
    },
    /// Degree-filtered cohomology dimension counts.
    Hdim {
        #[arg(default_value = "sphere")]
        input: String,
        /// Form degree (1 or 2).
        #[arg(long, default_value_t = 1)]
        i: u8,
    },
    /// Emit a member of the standard closed family.
    Omega {
        #[arg(default_value = "sphere")]
        input: String,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
}

fn run(cli: Cli) -> Result<(Report, Flags), CliError> {
    let flags = Flags {
        maxdeg: cli.common.maxdeg,
        seed: cli.common.seed,
        strict: cli.common.strict,
        timings: cli.common.timings,
    };
    let report = match cli.command {
        Command::Verify { input } => cmd_verify(&input, flags)?,
        Command::Curvature { input, pair } => {
            let pair = pair.map(|p| (p[0], p[1]));
            cmd_curvature(&input, pair, flags)?
        }
        Command::Flat { input } => cmd_flat(&input, flags)?,
        Command::Lr { check } => match check {
            LrSub::Jacobi { input } => cmd_lr(LrCheck::Jacobi, &input, flags)?,
            LrSub::Gamma { input } => cmd_lr(LrCheck::Gamma, &input, flags)?,
            LrSub::Transform { input } => cmd_lr(LrCheck::Transform, &input, flags)?,
            LrSub::Torsor { input } => cmd_lr(LrCheck::Torsor, &input, flags)?,
        },
        Command::Derham { check } => match check {
            DerhamSub::Closed { input, n, form } => {
                cmd_derham(DerhamCheck::Closed, &input, n, form, flags)?
            }
            DerhamSub::Exact { input, n, form } => {
                cmd_derham(DerhamCheck::Exact, &input, n, form, flags)?
            }
            DerhamSub::Hdim { input, i } => {
                cmd_derham(DerhamCheck::Hdim { degree: i }, &input, None, None, flags)?
            }
            DerhamSub::Omega { input, n } => {
                cmd_derham(DerhamCheck::Omega, &input, Some(n), None, flags)?
            }
        },
        Command::Presets => cmd_presets(flags),
    };
    Ok((report, flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.common.json;
    let out = cli.common.out.clone();
    match run(cli) {
        Ok((report, flags)) => {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, report.to_json()) {
                    let err = CliError::new(
                        "E_IO",
                        format!("cannot write report to {path:?}: {e}"),
                    );
                    print_error(&err);
                    return ExitCode::from(2);
                }
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code(flags.strict) as u8)
        }
        Err(e) => {
            print_error(&e);
            ExitCode::from(2)
        }
    }
}

fn print_error(e: &CliError) {
    let payload = serde_json::json!({
        "error": { "code": e.code, "message": e.message }
    });
    let mut stderr = std::io::stderr();
    let _ = writeln!(stderr, "{payload}");
}
