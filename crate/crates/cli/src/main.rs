use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ito_hopf_cli::commands::{self, Command, Inputs};
use ito_hopf_cli::problem::{self, ProblemFile};

const DEFAULT_ORDER: usize = 5;
const DEFAULT_TRIALS: usize = 20;

/// Exact checks for directed double product integrals over a
/// finite-dimensional associative algebra.
#[derive(Parser, Debug)]
#[command(name = "itohopf", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Problem file to load.
    #[arg(long, global = true, conflicts_with = "fixture")]
    problem: Option<PathBuf>,
    /// Built-in problem (`example_sec6`).
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Truncation order in `h`; overrides the file.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Seed for randomized trials; overrides the file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of randomized trials; overrides the file.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write the machine-readable report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Associativity of the structure constants.
    CheckAssoc,
    /// Classical Yang-Baxter equation for `r_1`.
    Cybe,
    /// Toy quantum Yang-Baxter equation for `r[h]`.
    QybeToy,
    /// Double product integral `R` and the shape of `R - 1 - r`.
    Dpi,
    /// Quantum Yang-Baxter equation for `R`.
    Qybe,
    /// `R⁻¹` from the quasi-inverse of `r`, checked both ways.
    Inverse,
    /// Solve for `r_2, r_3, ...` given `r_1`.
    Hierarchy,
    /// Deformed coproduct of a basis element (name or 1-based index).
    Deform { basis: String },
    /// Coassociativity of the deformed coproduct.
    Coassoc,
    /// Cobracket of each basis element.
    Cobracket,
    /// Every invariant, plus seeded randomized trials.
    Selftest,
}

impl From<&Cmd> for Command {
    fn from(c: &Cmd) -> Self {
        match c {
            Cmd::CheckAssoc => Command::CheckAssoc,
            Cmd::Cybe => Command::Cybe,
            Cmd::QybeToy => Command::QybeToy,
            Cmd::Dpi => Command::Dpi,
            Cmd::Qybe => Command::Qybe,
            Cmd::Inverse => Command::Inverse,
            Cmd::Hierarchy => Command::Hierarchy,
            Cmd::Deform { basis } => Command::Deform(basis.clone()),
            Cmd::Coassoc => Command::Coassoc,
            Cmd::Cobracket => Command::Cobracket,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

fn load(g: &Global) -> Result<(ProblemFile, String), String> {
    let (text, source) = match (&g.problem, &g.fixture) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            (text, path.display().to_string())
        }
        (None, Some(name)) => {
            let text = problem::fixture(name).ok_or_else(|| format!("unknown fixture `{name}`"))?;
            (text.to_string(), format!("fixture:{name}"))
        }
        (None, None) => return Err("no input: pass --problem PATH or --fixture NAME".into()),
    };
    let p = ProblemFile::parse(&text).map_err(|e| format!("{source}: {e}"))?;
    Ok((p, source))
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let command = Command::from(&cli.command);
    let (p, source) = load(&cli.global)?;
    let alg = if command == Command::CheckAssoc {
        p.unchecked_algebra()
    } else {
        p.algebra()
    }
    .map_err(|e| format!("{source}: {e}"))?;

    let order = cli.global.order.or(p.options.order).unwrap_or(DEFAULT_ORDER);
    if alg.dim() >= 3 && order > 8 {
        eprintln!("warning: order {order} in dimension {} may take a long time", alg.dim());
    }
    if p.r_degree() > order {
        eprintln!("warning: r entries above h^{order} are ignored");
    }
    let inputs = Inputs {
        r: p.r_series(order),
        alg,
        source,
        order,
        seed: cli.global.seed.or(p.options.seed).unwrap_or(0),
        trials: cli.global.trials.or(p.options.trials).unwrap_or(DEFAULT_TRIALS),
    };

    let report = commands::run(&command, &inputs);
    print!("{}", report.human());
    if let Some(path) = &cli.global.report {
        std::fs::write(path, report.machine()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(match report.first_failure() {
        None => ExitCode::SUCCESS,
        Some(c) => {
            eprintln!("first failing check: {}", c.name);
            ExitCode::from(1)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
