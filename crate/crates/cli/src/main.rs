//! `toricstab`: command-line front end for `toric-stab`.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid fan, failed
//! construction), 2 on a usage or parse error.

mod render;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use toric_stab::classify::iteration_invariants;
use toric_stab::format::{self, ParseError};
use toric_stab::polytope::{delta_j, obstruction, polytope_from_heights};
use toric_stab::stabilize::{bound, stabilize, xj_fan};
use toric_stab::{ClassifyError, ExecMode, Fan2D, LatticePolytope, RayVec, SupportHeights};

#[derive(Parser, Debug)]
#[command(name = "toricstab", version, about = "Smooth toric surfaces: blow-ups, stabilization and obstruction polynomials")]
struct Cli {
    /// Write the result to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Run every computation on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a fan file and print it in canonical form.
    Validate { file: PathBuf },
    /// Blow up the fixed point of cone `cone` (between rays `cone` and `cone + 1`).
    Blowup { file: PathBuf, cone: usize },
    /// Contract ray `index`.
    Blowdown { file: PathBuf, index: usize },
    /// Minimal models and the invariants n, l, l0.
    Classify { file: PathBuf },
    /// Blow-up sequence to a reference fan X_j.
    Stabilize { file: PathBuf },
    /// Print the reference fan X_j.
    Xj { j: u64 },
    /// Print the symmetric moment polygon of X_j.
    Deltaj { j: u64 },
    /// Obstruction polynomial of a polygon file, or of a fan file with heights.
    Obstruction {
        file: PathBuf,
        /// Heights file (`x y h` per ray); FILE is then read as a fan.
        #[arg(long)]
        heights: Option<PathBuf>,
    },
    /// Draw a fan or a polygon.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ascii")]
        format: RenderFormat,
        /// Input kind; defaults to the file extension (.fan or .poly).
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Fan,
    Polytope,
}

enum CliError {
    Usage(String),
    Parse(PathBuf, ParseError),
    Domain(String),
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

type Outcome = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_fan(path: &Path) -> Result<Fan2D, CliError> {
    let pairs = format::parse_fan(&read(path)?).map_err(|e| CliError::Parse(path.into(), e))?;
    Fan2D::validate(&pairs).map_err(CliError::domain)
}

fn load_polytope(path: &Path) -> Result<LatticePolytope, CliError> {
    let vs = format::parse_polytope(&read(path)?).map_err(|e| CliError::Parse(path.into(), e))?;
    LatticePolytope::new(vs).map_err(CliError::domain)
}

fn load_heights(fan: &Fan2D, path: &Path) -> Result<SupportHeights, CliError> {
    let entries = format::parse_heights(&read(path)?).map_err(|e| CliError::Parse(path.into(), e))?;
    let mut pairs = Vec::with_capacity(entries.len());
    for (v, h) in entries {
        let r = RayVec::try_from(v).map_err(CliError::domain)?;
        pairs.push((r, h));
    }
    SupportHeights::new(fan, &pairs).map_err(CliError::domain)
}

fn kind_of(path: &Path, kind: Option<Kind>) -> Result<Kind, CliError> {
    if let Some(k) = kind {
        return Ok(k);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("fan") => Ok(Kind::Fan),
        Some("poly") => Ok(Kind::Polytope),
        _ => Err(CliError::Usage(format!(
            "cannot tell whether {} is a fan or a polytope; pass --kind",
            path.display()
        ))),
    }
}

fn classify(fan: &Fan2D) -> Outcome {
    let mut s = String::new();
    match iteration_invariants(fan) {
        Ok(r) => {
            let tags: Vec<String> = r.model_tags().iter().map(|t| t.to_string()).collect();
            let _ = writeln!(s, "models: {}", tags.join(" "));
            let _ = writeln!(s, "n_min: {}", r.n_min);
            let _ = writeln!(s, "l: {}", r.l);
            let _ = writeln!(s, "l0: {}", r.l0);
            let _ = writeln!(s, "witness: {}", r.witness);
            if r.witnesses_disagree() {
                let _ = writeln!(s, "l_range: {} {}", r.l_range.0, r.l_range.1);
            }
            Ok(s)
        }
        Err(ClassifyError::IsProjectivePlane) => {
            let _ = writeln!(s, "models: P2");
            let _ = writeln!(s, "note: blow up once (F1 = Bl(P2)) to obtain a Hirzebruch description");
            Ok(s)
        }
        Err(e) => Err(CliError::domain(e)),
    }
}

fn stabilize_cmd(fan: &Fan2D) -> Outcome {
    let st = stabilize(fan).map_err(CliError::domain)?;
    let b = bound(fan).map_err(CliError::domain)?;
    if BigInt::from(st.step_count()) > b {
        return Err(CliError::Domain(format!(
            "BoundViolated: {} steps exceed the bound {b}",
            st.step_count()
        )));
    }
    let mut s = String::new();
    for step in &st.sequence.steps {
        let _ = writeln!(s, "{step}");
    }
    let _ = writeln!(s, "landing: X_{}", st.j);
    let _ = writeln!(s, "steps: {}", st.step_count());
    let _ = writeln!(s, "bound: {b}");
    Ok(s)
}

fn run(cli: &Cli) -> Outcome {
    let mode = if cli.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    };
    match &cli.command {
        Command::Validate { file } => Ok(format::serialize_fan(&load_fan(file)?)),
        Command::Blowup { file, cone } => {
            let (g, step) = load_fan(file)?.blow_up(*cone).map_err(CliError::domain)?;
            Ok(format!("# {step}\n{}", format::serialize_fan(&g)))
        }
        Command::Blowdown { file, index } => {
            let (g, step) = load_fan(file)?.blow_down(*index).map_err(CliError::domain)?;
            Ok(format!("# blowdown {}\n{}", step.inserted, format::serialize_fan(&g)))
        }
        Command::Classify { file } => classify(&load_fan(file)?),
        Command::Stabilize { file } => stabilize_cmd(&load_fan(file)?),
        Command::Xj { j } => Ok(format::serialize_fan(&xj_fan(*j).map_err(CliError::domain)?)),
        Command::Deltaj { j } => Ok(format::serialize_polytope(&delta_j(*j).map_err(CliError::domain)?)),
        Command::Obstruction { file, heights } => {
            let p = match heights {
                Some(h) => {
                    let fan = load_fan(file)?;
                    polytope_from_heights(&load_heights(&fan, h)?).map_err(CliError::domain)?
                }
                None => load_polytope(file)?,
            };
            let r = obstruction(&p, mode).map_err(CliError::domain)?;
            Ok(format::serialize_report(&r))
        }
        Command::Render { file, format, kind } => {
            let too_large = |e: render::TooLarge| CliError::Domain(format!("TooLarge: grid radius {} exceeds 60", e.0));
            match (kind_of(file, *kind)?, format) {
                (Kind::Fan, RenderFormat::Ascii) => render::fan_ascii(&load_fan(file)?).map_err(too_large),
                (Kind::Fan, RenderFormat::Svg) => render::fan_svg(&load_fan(file)?).map_err(too_large),
                (Kind::Polytope, RenderFormat::Ascii) => {
                    render::polytope_ascii(&load_polytope(file)?).map_err(too_large)
                }
                (Kind::Polytope, RenderFormat::Svg) => render::polytope_svg(&load_polytope(file)?).map_err(too_large),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Parse(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
