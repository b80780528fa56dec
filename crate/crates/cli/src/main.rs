use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cmc_cli::commands::{self, GenerateParams, Generator};
use cmc_cli::dataset::DatasetFile;
use cmc_cli::verify::Profile;
use serde_json::json;

const EXPR_HELP: &str = "Rational expression in z: + - * / ^ with integer powers, \
complex literals with an i suffix (1.5, 2i, 1+2i), e.g. \"(z^2 - 1)/(z^2 + 1)\"";

/// Generalized Weierstrass data for CMC surfaces: generate, verify, decouple, measure, export.
///
/// Exit codes: 0 success or all checks pass, 1 a verification check failed, 2 input error.
#[derive(Parser)]
#[command(name = "cmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a data set of spinor fields.
    Generate {
        #[arg(value_enum)]
        kind: Generator,
        #[arg(long, help = EXPR_HELP)]
        rho: Option<String>,
        /// Constant mean curvature (from_rho).
        #[arg(long = "H")]
        h: Option<f64>,
        /// Cylinder parameter r > 0.
        #[arg(long)]
        r: Option<f64>,
        /// Holomorphic reparametrization of the cylinder, same syntax as --rho.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["X0", "X1", "Y0", "Y1"],
              default_values_t = [-2.0, 2.0, -2.0, 2.0])]
        domain: Vec<f64>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 129)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every applicable identity; JSON report on stdout (or --out), table on stderr.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Profile::Strict)]
        tolerance: Profile,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add eta, R, sqrtQ and Q fields and the sinh-Gordon summary.
    Decouple {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Base grid index for eta (default: grid center).
        #[arg(long, num_args = 2, value_names = ["IX", "IY"])]
        base: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Profile::Strict)]
        tolerance: Profile,
    },
    /// Topological charge of the normal field and the charge-density identity.
    Charge {
        input: PathBuf,
        /// Restrict to the disk |z| <= radius.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Write an OBJ triangle mesh of the surface.
    ExportMesh {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Check,
    Input(String),
}

impl From<cmc_core::Error> for Failure {
    fn from(e: cmc_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn read(path: &Path) -> Result<DatasetFile, Failure> {
    DatasetFile::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Generate { kind, rho, h, r, map, domain, n, out } => {
            let domain = [domain[0], domain[1], domain[2], domain[3]];
            let file = commands::generate(&GenerateParams { kind, rho, h, r, map, domain, n })?;
            file.write(&out)?;
            let summary = json!({
                "out": out.display().to_string(),
                "generator": file.provenance.generator,
                "parameters": file.provenance.parameters,
            });
            println!("{}", pretty(&summary));
            Ok(())
        }
        Command::Verify { input, tolerance, out } => {
            let report = commands::verify(&read(&input)?, tolerance)?;
            eprint!("{}", report.table());
            let text = report.to_json();
            match out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Decouple { input, out, base, tolerance } => {
            let mut file = read(&input)?;
            let base = base.map(|b| (b[0], b[1]));
            let outcome = commands::decouple_file(&mut file, base, tolerance)?;
            file.write(&out)?;
            println!("{}", pretty(&outcome));
            if outcome.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Charge { input, radius } => {
            let report = commands::charge(&read(&input)?, radius)?;
            println!("{}", pretty(&report));
            Ok(())
        }
        Command::ExportMesh { input, out } => {
            let mesh = commands::export_mesh(&read(&input)?)?;
            std::fs::write(&out, mesh.to_obj())?;
            let summary = json!({
                "out": out.display().to_string(),
                "vertices": mesh.vertices.len(),
                "faces": mesh.faces.len(),
            });
            println!("{}", pretty(&summary));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
